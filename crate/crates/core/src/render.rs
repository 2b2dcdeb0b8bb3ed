//! Top-down SVG schematic of a layout with selected cameras.
//!
//! The cabin front (windshield) is at the top of the drawing. Output is a
//! pure function of its inputs, so identical inputs give identical bytes.

use std::fmt::Write as _;

use thiserror::Error;

use crate::geometry::Vec3;
use crate::report::SolutionReport;
use crate::scene::{BodyArea, Layout, Pose6D, Scene, SceneError};

const SCALE: f64 = 200.0;
const MARGIN: f64 = 30.0;
const ARROW_LEN: f64 = 0.08;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error("solution does not cover layout {0}")]
    LayoutNotInSolution(u32),
    #[error("solution has {found} markers for layout {layout}, scene has {expected}")]
    MarkerMismatch {
        layout: u32,
        found: usize,
        expected: usize,
    },
}

struct Canvas {
    width: f64,
    length: f64,
}

impl Canvas {
    fn x(&self, v: f64) -> f64 {
        MARGIN + v.clamp(0.0, self.width) * SCALE
    }

    fn y(&self, v: f64) -> f64 {
        MARGIN + v.clamp(0.0, self.length) * SCALE
    }

    fn pt(&self, p: Vec3) -> (f64, f64) {
        (self.x(p.x), self.y(p.y))
    }
}

/// Renders `layout_id` with covered flags and cameras taken from `report`.
pub fn render_solution(
    scene: &Scene,
    layout_id: u32,
    report: &SolutionReport,
) -> Result<String, RenderError> {
    let layout = scene.layout(layout_id)?;
    if !report.layouts.contains(&layout_id) {
        return Err(RenderError::LayoutNotInSolution(layout_id));
    }
    let mut covered = vec![false; layout.marker_count()];
    let mut found = 0;
    for r in report
        .rows
        .iter()
        .filter(|r| r.label.layout_id == layout_id)
    {
        let i = r.label.seat_index * 6 + r.label.body_area.index();
        if i < covered.len() {
            covered[i] = r.covered;
        }
        found += 1;
    }
    if found != covered.len() {
        return Err(RenderError::MarkerMismatch {
            layout: layout_id,
            found,
            expected: covered.len(),
        });
    }
    let cameras: Vec<_> = report.cameras.iter().map(|c| c.pose).collect();
    Ok(render_layout(scene, layout, &covered, &cameras))
}

/// `covered` is indexed by `seat_index * 6 + body_area.index()`.
pub fn render_layout(
    scene: &Scene,
    layout: &Layout,
    covered: &[bool],
    cameras: &[Pose6D],
) -> String {
    let cabin = &scene.cabin;
    let c = Canvas {
        width: cabin.width,
        length: cabin.length,
    };
    let w = 2.0 * MARGIN + cabin.width * SCALE;
    let h = 2.0 * MARGIN + cabin.length * SCALE;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.2} {h:.2}">"#
    );
    let _ = writeln!(s, "<title>layout {}</title>", layout.id);
    s.push_str(concat!(
        "<style>\n",
        ".cabin{fill:#f4f4f4;stroke:#333;stroke-width:2}\n",
        ".glass{stroke:#7aa7c7;stroke-width:4}\n",
        ".rail{fill:none;stroke:#2e8b57;stroke-width:2;stroke-dasharray:6 4}\n",
        ".seat{fill:#c9c9c9;stroke:#555;stroke-width:1}\n",
        ".backrest{fill:#8d8d8d}\n",
        ".facing{stroke:#555;stroke-width:2}\n",
        ".marker{stroke-width:2}\n",
        ".covered{fill:#2ca02c;stroke:#1b5e1b}\n",
        ".uncovered{fill:none;stroke:#1f4fd1;stroke-width:3}\n",
        ".camera{fill:#d62728;stroke:#7a0d0d;stroke-width:1}\n",
        ".yaw{stroke:#d62728;stroke-width:2}\n",
        "</style>\n"
    ));
    let _ = writeln!(
        s,
        r#"<rect class="cabin" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}"/>"#,
        c.x(0.0),
        c.y(0.0),
        cabin.width * SCALE,
        cabin.length * SCALE
    );
    for y in [
        cabin.windshield_y(cabin.rail_height()),
        cabin.rear_window_y(cabin.rail_height()),
    ] {
        let _ = writeln!(
            s,
            r#"<line class="glass" x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}"/>"#,
            c.x(0.0),
            c.x(cabin.width),
            y = c.y(y)
        );
    }
    for rail in &scene.rails {
        let pts: Vec<String> = rail
            .vertices
            .iter()
            .map(|&v| {
                let (x, y) = c.pt(v);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(s, r#"<polyline class="rail" points="{}"/>"#, pts.join(" "));
    }
    for seat in &layout.seats {
        footprint(&mut s, &c, "seat", &seat.pan.corners());
        footprint(&mut s, &c, "seat backrest", &seat.backrest.corners());
        let from = seat.reference;
        let to = from + Vec3::new(0.0, seat.facing.forward_sign() * 0.2, 0.0);
        line(&mut s, &c, "facing", from, to);
    }
    for occ in &layout.occupants {
        for area in BodyArea::ALL {
            let seen = covered
                .get(occ.seat_index * 6 + area.index())
                .copied()
                .unwrap_or(false);
            let (x, y) = c.pt(occ.key_point(area));
            let class = if seen {
                "marker covered"
            } else {
                "marker uncovered"
            };
            let r = if area == BodyArea::Nose { 4.0 } else { 5.0 };
            let _ = writeln!(
                s,
                r#"<circle class="{class}" data-seat="{}" data-area="{}" cx="{x:.2}" cy="{y:.2}" r="{r:.1}"/>"#,
                occ.seat_index,
                area.as_str()
            );
        }
    }
    for pose in cameras {
        let p = pose.position;
        let (x, y) = c.pt(p);
        let b = pose.orientation.to_matrix().column(1);
        if let Some(dir) = Vec3::new(b.x, b.y, 0.0).normalized() {
            line(&mut s, &c, "yaw", p, p + dir * ARROW_LEN);
        }
        let _ = writeln!(
            s,
            r#"<circle class="camera" cx="{x:.2}" cy="{y:.2}" r="7.0"/>"#
        );
    }
    s.push_str("</svg>\n");
    s
}

fn footprint(s: &mut String, c: &Canvas, class: &str, corners: &[Vec3; 8]) {
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for &p in corners {
        let (x, y) = c.pt(p);
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    let _ = writeln!(
        s,
        r#"<rect class="{class}" x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}"/>"#,
        x1 - x0,
        y1 - y0
    );
}

fn line(s: &mut String, c: &Canvas, class: &str, a: Vec3, b: Vec3) {
    let (x1, y1) = c.pt(a);
    let (x2, y2) = c.pt(b);
    let _ = writeln!(
        s,
        r#"<line class="{class}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#
    );
}
