//! Solution reports: a JSON document for tools and a plain-text summary.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::covermat::{BinaryCoverageMatrix, RowLabel};
use crate::optimizer::{explain, CoverageReportRow, PlacementSolution};
use crate::scene::Pose6D;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMode {
    Exact,
    Greedy,
    Budget,
}

impl SolveMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveMode::Exact => "exact",
            SolveMode::Greedy => "greedy",
            SolveMode::Budget => "budget",
        }
    }
}

/// One selected camera.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CameraEntry {
    /// Column of the coverage matrix.
    pub column: usize,
    pub position_index: usize,
    #[serde(flatten)]
    pub pose: Pose6D,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionReport {
    pub mode: SolveMode,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub budget: Option<usize>,
    pub layouts: Vec<u32>,
    pub num_cameras: usize,
    pub num_covered: usize,
    pub total: usize,
    pub optimal: bool,
    pub tie_class_size: u64,
    pub cameras: Vec<CameraEntry>,
    pub uncovered: Vec<RowLabel>,
    /// Every marker with the selected columns that see it; uncovered first.
    pub rows: Vec<CoverageReportRow>,
}

impl SolutionReport {
    pub fn new(
        a: &BinaryCoverageMatrix,
        sol: &PlacementSolution,
        mode: SolveMode,
        budget: Option<usize>,
    ) -> Self {
        let mut layouts: Vec<u32> = a.rows().iter().map(|r| r.layout_id).collect();
        layouts.dedup();
        let rows = explain(a, sol);
        Self {
            mode,
            budget,
            layouts,
            num_cameras: sol.num_cameras,
            num_covered: sol.num_covered,
            total: a.row_count(),
            optimal: sol.optimal,
            tie_class_size: sol.tie_class_size,
            cameras: sol
                .selected
                .iter()
                .map(|&j| {
                    let c = a.columns()[j];
                    CameraEntry {
                        column: j,
                        position_index: c.position_index,
                        pose: c.pose,
                    }
                })
                .collect(),
            uncovered: rows
                .iter()
                .filter(|r| !r.covered)
                .map(|r| r.label)
                .collect(),
            rows,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Human-readable summary.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let layouts: Vec<String> = self.layouts.iter().map(u32::to_string).collect();
        let _ = writeln!(s, "layouts:  {}", layouts.join(","));
        let _ = write!(s, "mode:     {}", self.mode.as_str());
        if let Some(k) = self.budget {
            let _ = write!(s, " (k = {k})");
        }
        let _ = writeln!(
            s,
            "{}",
            if self.optimal {
                ", optimal"
            } else {
                ", heuristic"
            }
        );
        let _ = writeln!(s, "cameras:  {}", self.num_cameras);
        let _ = writeln!(s, "covered:  {}/{}", self.num_covered, self.total);
        if self.optimal && self.tie_class_size > 1 {
            let _ = writeln!(
                s,
                "ties:     {} equally good selections",
                self.tie_class_size
            );
        }
        for c in &self.cameras {
            let p = c.pose.position;
            let o = c.pose.orientation;
            let _ = writeln!(
                s,
                "  position {:>6}  x={:.3} y={:.3} z={:.3}  roll={:.1} pitch={:.1} yaw={:.1}",
                c.position_index, p.x, p.y, p.z, o.roll, o.pitch, o.yaw
            );
        }
        if self.uncovered.is_empty() {
            let _ = writeln!(s, "uncovered: none");
        } else {
            let _ = writeln!(s, "uncovered: {}", self.uncovered.len());
            for r in &self.uncovered {
                let _ = writeln!(s, "  {r}");
            }
        }
        s
    }

    /// Per-marker attribution table.
    pub fn attribution_text(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            let by: Vec<String> = r
                .covering
                .iter()
                .map(|&j| {
                    self.cameras
                        .iter()
                        .find(|c| c.column == j)
                        .map_or(j, |c| c.position_index)
                        .to_string()
                })
                .collect();
            let status = if r.covered {
                format!("seen by {}", by.join(","))
            } else {
                "UNCOVERED".to_string()
            };
            let _ = writeln!(
                s,
                "{}/{}/{:<10} {}",
                r.label.layout_id,
                r.label.seat_index,
                r.label.body_area.as_str(),
                status
            );
        }
        s
    }
}
