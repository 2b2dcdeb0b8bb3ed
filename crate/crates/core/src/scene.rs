//! Parametric cabin, seats, occupants, camera rails and the scene file.
//!
//! Coordinates are meters in the vehicle frame with the origin at a front
//! floor corner: X in `[0, width]`, Y in `[0, length]` with Y = 0 at the
//! windshield base, Z in `[0, height]`. Windshield and rear window are
//! planes raked from the horizontal, starting at their base heights.
//!
//! Seat-local offsets are `(lateral, forward, up)` from the seat reference
//! point (top of the seat pan, on the plane of the occupant's chest).
//! Forward-facing seats look toward -Y. A rearward seat is the mirror
//! image of a forward one: lateral offsets are kept and forward offsets
//! are negated.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Occluder, OrientedBox, RotationRPY, Sphere, Vec3, DEFAULT_EPSILON};
use crate::visibility::CameraModel;

/// The shipped default scene (cabin measurements, six layouts, default rails).
pub const DEFAULT_SCENE_JSON: &str = include_str!("../data/default_scene.json");

/// Positions and angles are stored at the precision of the dataset files.
pub(crate) fn quantize(v: f64) -> f64 {
    (v * 1e6).round() / 1e6 + 0.0
}

fn quantize_vec(v: Vec3) -> Vec3 {
    Vec3::new(quantize(v.x), quantize(v.y), quantize(v.z))
}

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("cannot read scene file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("scene parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid scene: {entity}: {message}")]
    Invalid { entity: String, message: String },
    #[error("unknown layout id {0}")]
    UnknownLayout(u32),
    #[error("invalid angle grid: {0}")]
    Grid(String),
}

fn invalid(entity: impl Into<String>, message: impl Into<String>) -> SceneError {
    SceneError::Invalid {
        entity: entity.into(),
        message: message.into(),
    }
}

/// The six upper-body key points, in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BodyArea {
    Nose,
    LShoulder,
    RShoulder,
    Chest,
    RWaist,
    LWaist,
}

impl BodyArea {
    pub const ALL: [BodyArea; 6] = [
        BodyArea::Nose,
        BodyArea::LShoulder,
        BodyArea::RShoulder,
        BodyArea::Chest,
        BodyArea::RWaist,
        BodyArea::LWaist,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BodyArea::Nose => "nose",
            BodyArea::LShoulder => "l_shoulder",
            BodyArea::RShoulder => "r_shoulder",
            BodyArea::Chest => "chest",
            BodyArea::RWaist => "r_waist",
            BodyArea::LWaist => "l_waist",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Left/right counterpart (identity for the midline points).
    pub fn mirrored(self) -> BodyArea {
        match self {
            BodyArea::LShoulder => BodyArea::RShoulder,
            BodyArea::RShoulder => BodyArea::LShoulder,
            BodyArea::RWaist => BodyArea::LWaist,
            BodyArea::LWaist => BodyArea::RWaist,
            other => other,
        }
    }
}

impl fmt::Display for BodyArea {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BodyArea {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BodyArea::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| format!("unknown body area '{s}'"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Facing {
    Forward,
    Rearward,
}

impl Facing {
    /// World direction the occupant looks toward.
    pub fn forward_sign(self) -> f64 {
        match self {
            Facing::Forward => -1.0,
            Facing::Rearward => 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Cabin {
    pub width: f64,
    pub length: f64,
    pub height: f64,
    /// Windshield angle above the horizontal, degrees.
    pub windshield_rake_deg: f64,
    pub windshield_base_z: f64,
    /// Rear window angle above the horizontal, degrees.
    pub rear_window_rake_deg: f64,
    pub rear_window_base_z: f64,
    /// Windshield camera mounting points. Empty in a file means "use defaults".
    #[serde(default = "Vec::new")]
    pub anchors: Vec<Vec3>,
}

impl Default for Cabin {
    fn default() -> Self {
        let mut c = Self {
            width: 1.8,
            length: 3.25,
            height: 1.41,
            windshield_rake_deg: 60.0,
            windshield_base_z: 0.95,
            rear_window_rake_deg: 60.0,
            rear_window_base_z: 0.95,
            anchors: Vec::new(),
        };
        c.anchors = c.default_anchors();
        c
    }
}

impl Cabin {
    /// Height of the default rails and windshield anchors.
    pub fn rail_height(&self) -> f64 {
        quantize(self.height - 0.01)
    }

    /// Y of the windshield surface at height `z`.
    pub fn windshield_y(&self, z: f64) -> f64 {
        ((z - self.windshield_base_z) / self.windshield_rake_deg.to_radians().tan()).max(0.0)
    }

    /// Y of the rear window surface at height `z`.
    pub fn rear_window_y(&self, z: f64) -> f64 {
        self.length
            - ((z - self.rear_window_base_z) / self.rear_window_rake_deg.to_radians().tan())
                .max(0.0)
    }

    /// Signed distance to the windshield plane, positive on the cabin side.
    pub fn windshield_distance(&self, p: Vec3) -> f64 {
        let (s, c) = self.windshield_rake_deg.to_radians().sin_cos();
        p.y * s - (p.z - self.windshield_base_z) * c
    }

    fn rear_window_distance(&self, p: Vec3) -> f64 {
        let (s, c) = self.rear_window_rake_deg.to_radians().sin_cos();
        (self.length - p.y) * s - (p.z - self.rear_window_base_z) * c
    }

    pub fn contains(&self, p: Vec3, tol: f64) -> bool {
        p.x >= -tol
            && p.x <= self.width + tol
            && p.y >= -tol
            && p.y <= self.length + tol
            && p.z >= -tol
            && p.z <= self.height + tol
            && self.windshield_distance(p) >= -tol
            && self.rear_window_distance(p) >= -tol
    }

    pub fn default_anchors(&self) -> Vec<Vec3> {
        let z = self.rail_height();
        let y = self.windshield_y(z);
        [0.25, 0.5, 0.75]
            .iter()
            .map(|f| quantize_vec(Vec3::new(self.width * f, y, z)))
            .collect()
    }

    /// Ceiling perimeter inset 0.1 m plus the longitudinal centerline.
    /// Front and rear rail edges are snapped inward to the 0.1 m grid.
    pub fn default_rails(&self) -> Vec<Rail> {
        let z = self.rail_height();
        let inset = 0.1;
        let snap = |v: f64| (v * 10.0).round() / 10.0;
        let y0 = ((self.windshield_y(z) + inset) * 10.0 - 1e-9).ceil() / 10.0;
        let y1 = ((self.rear_window_y(z) - inset) * 10.0 + 1e-9).floor() / 10.0;
        let (x0, x1) = (snap(inset), snap(self.width - inset));
        let xm = quantize(self.width / 2.0);
        vec![
            Rail::new(
                vec![
                    Vec3::new(x0, y0, z),
                    Vec3::new(x1, y0, z),
                    Vec3::new(x1, y1, z),
                    Vec3::new(x0, y1, z),
                    Vec3::new(x0, y0, z),
                ],
                0.1,
            ),
            Rail::new(vec![Vec3::new(xm, y0, z), Vec3::new(xm, y1, z)], 0.1),
        ]
    }

    /// Thin slabs just outside each cabin wall.
    pub fn shell_occluders(&self) -> Vec<Occluder> {
        let t = 0.02;
        let (w, l, h) = (self.width, self.length, self.height);
        let slab = |a: Vec3, b: Vec3| Occluder::Box(OrientedBox::from_corners(a, b));
        let mut out = vec![
            slab(Vec3::new(-t, -t, -t), Vec3::new(w + t, l + t, 0.0)),
            slab(Vec3::new(-t, -t, h), Vec3::new(w + t, l + t, h + t)),
            slab(Vec3::new(-t, -t, -t), Vec3::new(0.0, l + t, h + t)),
            slab(Vec3::new(w, -t, -t), Vec3::new(w + t, l + t, h + t)),
            slab(Vec3::new(-t, -t, -t), Vec3::new(w + t, 0.0, h + t)),
            slab(Vec3::new(-t, l, -t), Vec3::new(w + t, l + t, h + t)),
        ];
        let glass = |base_y: f64, base_z: f64, top_y: f64, outward: Vec3, pitch: f64| {
            let len = Vec3::new(0.0, top_y - base_y, h - base_z).norm();
            let mid = Vec3::new(w / 2.0, (base_y + top_y) / 2.0, (base_z + h) / 2.0);
            Occluder::Box(OrientedBox::new(
                mid + outward * (t / 2.0),
                Vec3::new(w / 2.0 + t, len / 2.0, t / 2.0),
                RotationRPY::new(0.0, pitch, 0.0),
            ))
        };
        if self.windshield_base_z < h {
            let th = self.windshield_rake_deg;
            let (s, c) = th.to_radians().sin_cos();
            out.push(glass(
                0.0,
                self.windshield_base_z,
                self.windshield_y(h),
                Vec3::new(0.0, -s, c),
                th,
            ));
        }
        if self.rear_window_base_z < h {
            let th = self.rear_window_rake_deg;
            let (s, c) = th.to_radians().sin_cos();
            out.push(glass(
                l,
                self.rear_window_base_z,
                self.rear_window_y(h),
                Vec3::new(0.0, s, c),
                180.0 - th,
            ));
        }
        out
    }

    fn validate(&self) -> Result<(), SceneError> {
        for (name, v) in [
            ("width", self.width),
            ("length", self.length),
            ("height", self.height),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(
                    "cabin",
                    format!("{name} must be positive, got {v}"),
                ));
            }
        }
        for (name, v) in [
            ("windshield_rake_deg", self.windshield_rake_deg),
            ("rear_window_rake_deg", self.rear_window_rake_deg),
        ] {
            if !(v > 0.0 && v <= 90.0) {
                return Err(invalid(
                    "cabin",
                    format!("{name} must be in (0, 90], got {v}"),
                ));
            }
        }
        for (i, a) in self.anchors.iter().enumerate() {
            let entity = format!("windshield anchor {i}");
            if !a.is_finite() || !self.contains(*a, 1e-6) {
                return Err(invalid(entity, format!("{a:?} lies outside the cabin")));
            }
            let d = self.windshield_distance(*a);
            if d.abs() > 1e-5 || a.z < self.windshield_base_z {
                return Err(invalid(
                    entity,
                    format!("{a:?} is not on the windshield (distance {d:.6} m)"),
                ));
            }
        }
        Ok(())
    }
}

/// Seat pan and backrest dimensions in seat-local offsets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeatGeometry {
    pub width: f64,
    pub pan_thickness: f64,
    /// Forward extent of the pan, ahead of the reference point.
    pub pan_front: f64,
    /// Rear face of pan and backrest, behind the reference point.
    pub back: f64,
    pub backrest_depth: f64,
    pub backrest_height: f64,
}

impl Default for SeatGeometry {
    fn default() -> Self {
        Self {
            width: 0.50,
            pan_thickness: 0.12,
            pan_front: 0.40,
            back: 0.32,
            backrest_depth: 0.10,
            backrest_height: 0.65,
        }
    }
}

/// A named seat mounting position shared by the layouts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeatSlot {
    pub name: String,
    pub position: Vec3,
    #[serde(default)]
    pub geometry: SeatGeometry,
}

/// Seated body dimensions relative to the seat reference point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OccupantProfile {
    pub name: String,
    pub nose_height: f64,
    pub nose_forward: f64,
    pub head_radius: f64,
    pub shoulder_height: f64,
    pub shoulder_half_width: f64,
    pub chest_height: f64,
    pub waist_height: f64,
    pub waist_half_width: f64,
    /// Torso box (width, depth, height); its front face carries the body points.
    pub torso_size: [f64; 3],
    pub torso_bottom: f64,
    /// Lap box (width, forward length, height) resting on the seat pan.
    pub pelvis_size: [f64; 3],
}

impl Default for OccupantProfile {
    fn default() -> Self {
        Self {
            name: "default".into(),
            nose_height: 0.70,
            nose_forward: 0.05,
            head_radius: 0.11,
            shoulder_height: 0.55,
            shoulder_half_width: 0.20,
            chest_height: 0.40,
            waist_height: 0.15,
            waist_half_width: 0.15,
            torso_size: [0.40, 0.22, 0.55],
            torso_bottom: 0.10,
            pelvis_size: [0.36, 0.40, 0.12],
        }
    }
}

/// Maps seat-local offsets into the vehicle frame.
#[derive(Clone, Copy, Debug)]
struct SeatFrame {
    origin: Vec3,
    sign: f64,
}

impl SeatFrame {
    fn point(&self, lateral: f64, forward: f64, up: f64) -> Vec3 {
        self.origin + Vec3::new(lateral, self.sign * forward, up)
    }

    fn boxed(&self, lat: (f64, f64), fwd: (f64, f64), up: (f64, f64)) -> OrientedBox {
        OrientedBox::from_corners(
            self.point(lat.0, fwd.0, up.0),
            self.point(lat.1, fwd.1, up.1),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Seat {
    pub slot: String,
    pub reference: Vec3,
    pub facing: Facing,
    pub pan: OrientedBox,
    pub backrest: OrientedBox,
}

impl Seat {
    fn build(slot: &SeatSlot, facing: Facing) -> Self {
        let g = &slot.geometry;
        let f = SeatFrame {
            origin: slot.position,
            sign: facing.forward_sign(),
        };
        let hw = g.width / 2.0;
        Self {
            slot: slot.name.clone(),
            reference: slot.position,
            facing,
            pan: f.boxed((-hw, hw), (-g.back, g.pan_front), (-g.pan_thickness, 0.0)),
            backrest: f.boxed(
                (-hw, hw),
                (-g.back, -g.back + g.backrest_depth),
                (0.0, g.backrest_height),
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Occupant {
    pub seat_index: usize,
    /// Indexed by `BodyArea::index()`.
    pub key_points: [Vec3; 6],
    pub head: Sphere,
    pub torso: OrientedBox,
    pub pelvis: OrientedBox,
}

impl Occupant {
    fn build(seat_index: usize, seat: &Seat, p: &OccupantProfile) -> Self {
        let f = SeatFrame {
            origin: seat.reference,
            sign: seat.facing.forward_sign(),
        };
        let key_points = [
            f.point(0.0, p.nose_forward, p.nose_height),
            f.point(p.shoulder_half_width, 0.0, p.shoulder_height),
            f.point(-p.shoulder_half_width, 0.0, p.shoulder_height),
            f.point(0.0, 0.0, p.chest_height),
            f.point(-p.waist_half_width, 0.0, p.waist_height),
            f.point(p.waist_half_width, 0.0, p.waist_height),
        ];
        let [tw, td, th] = p.torso_size;
        let [pw, pl, ph] = p.pelvis_size;
        Self {
            seat_index,
            key_points,
            head: Sphere::new(
                f.point(0.0, p.nose_forward - p.head_radius, p.nose_height),
                p.head_radius,
            ),
            torso: f.boxed(
                (-tw / 2.0, tw / 2.0),
                (-td, 0.0),
                (p.torso_bottom, p.torso_bottom + th),
            ),
            pelvis: f.boxed((-pw / 2.0, pw / 2.0), (0.0, pl), (0.0, ph)),
        }
    }

    pub fn key_point(&self, area: BodyArea) -> Vec3 {
        self.key_points[area.index()]
    }

    pub fn occluders(&self) -> [Occluder; 3] {
        [self.head.into(), self.torso.into(), self.pelvis.into()]
    }

    /// Distance from the key point to the surface of the primitive that carries it.
    pub fn host_surface_distance(&self, area: BodyArea) -> f64 {
        let p = self.key_point(area);
        match area {
            BodyArea::Nose => (p.distance(self.head.center) - self.head.radius).abs(),
            _ => self.torso.surface_distance(p),
        }
    }
}

/// A seat arrangement with its occupants. Seats are exactly the occupied ones.
#[derive(Clone, Debug, PartialEq)]
pub struct Layout {
    pub id: u32,
    pub seats: Vec<Seat>,
    pub occupants: Vec<Occupant>,
    /// Cabin shell, seat boxes and every occupant primitive.
    pub occluders: Vec<Occluder>,
}

impl Layout {
    pub fn occupant_count(&self) -> usize {
        self.occupants.len()
    }

    pub fn marker_count(&self) -> usize {
        6 * self.occupants.len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rail {
    pub vertices: Vec<Vec3>,
    #[serde(default = "default_step")]
    pub step: f64,
}

fn default_step() -> f64 {
    0.1
}

impl Rail {
    pub fn new(vertices: Vec<Vec3>, step: f64) -> Self {
        Self { vertices, step }
    }

    pub fn length(&self) -> f64 {
        self.vertices.windows(2).map(|w| w[0].distance(w[1])).sum()
    }

    /// Points every `step` meters of arc length from the first vertex; the
    /// last vertex is always included.
    pub fn samples(&self) -> Vec<Vec3> {
        let Some(&first) = self.vertices.first() else {
            return Vec::new();
        };
        let total = self.length();
        let n = (total / self.step + 1e-9).floor() as usize;
        let mut out: Vec<Vec3> = (0..=n)
            .map(|i| self.point_at(i as f64 * self.step))
            .collect();
        if total - n as f64 * self.step > 1e-9 {
            out.push(*self.vertices.last().unwrap_or(&first));
        }
        out.into_iter().map(quantize_vec).collect()
    }

    fn point_at(&self, s: f64) -> Vec3 {
        let mut remaining = s;
        for w in self.vertices.windows(2) {
            let seg = w[0].distance(w[1]);
            if remaining <= seg || seg == 0.0 && remaining <= 0.0 {
                if seg == 0.0 {
                    return w[0];
                }
                return w[0] + (w[1] - w[0]) * (remaining / seg);
            }
            remaining -= seg;
        }
        *self.vertices.last().expect("rail has vertices")
    }
}

/// One axis of the angle grid: an explicit list or an inclusive range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum AxisSpec {
    List(Vec<f64>),
    Range { start: f64, end: f64, step: f64 },
}

impl AxisSpec {
    fn expand(&self, axis: &str) -> Result<Vec<f64>, SceneError> {
        match self {
            AxisSpec::List(v) => Ok(v.iter().map(|&a| quantize(a)).collect()),
            AxisSpec::Range { start, end, step } => expand_range(*start, *end, *step)
                .ok_or_else(|| SceneError::Grid(format!("{axis}: bad range {start}:{end}:{step}"))),
        }
    }
}

fn expand_range(start: f64, end: f64, step: f64) -> Option<Vec<f64>> {
    if !(step > 0.0) || !start.is_finite() || !end.is_finite() || end < start {
        return None;
    }
    let n = ((end - start) / step + 1e-9).floor() as usize;
    Some((0..=n).map(|i| quantize(start + i as f64 * step)).collect())
}

/// Roll, pitch and yaw values (degrees) swept at every camera location.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid")]
pub struct AngleGrid {
    pub roll: Vec<f64>,
    pub pitch: Vec<f64>,
    pub yaw: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    roll: AxisSpec,
    pitch: AxisSpec,
    yaw: AxisSpec,
}

impl TryFrom<RawGrid> for AngleGrid {
    type Error = SceneError;
    fn try_from(r: RawGrid) -> Result<Self, Self::Error> {
        let g = AngleGrid {
            roll: r.roll.expand("roll")?,
            pitch: r.pitch.expand("pitch")?,
            yaw: r.yaw.expand("yaw")?,
        };
        g.validate()?;
        Ok(g)
    }
}

impl Default for AngleGrid {
    fn default() -> Self {
        Self {
            roll: vec![0.0],
            pitch: expand_range(-90.0, 0.0, 10.0).expect("static range"),
            yaw: expand_range(0.0, 350.0, 10.0).expect("static range"),
        }
    }
}

impl AngleGrid {
    pub fn fixed(roll: f64, pitch: f64, yaw: f64) -> Self {
        Self {
            roll: vec![roll],
            pitch: vec![pitch],
            yaw: vec![yaw],
        }
    }

    /// All three axes over a full turn at `step` degrees.
    pub fn full(step: f64) -> Self {
        let axis = expand_range(-180.0, 180.0 - step, step).unwrap_or_default();
        Self {
            roll: axis.clone(),
            pitch: axis.clone(),
            yaw: axis,
        }
    }

    pub fn orientation_count(&self) -> usize {
        self.roll.len() * self.pitch.len() * self.yaw.len()
    }

    pub fn validate(&self) -> Result<(), SceneError> {
        for (name, axis) in [
            ("roll", &self.roll),
            ("pitch", &self.pitch),
            ("yaw", &self.yaw),
        ] {
            if axis.is_empty() {
                return Err(SceneError::Grid(format!("{name} axis is empty")));
            }
            if axis.iter().any(|a| !a.is_finite()) {
                return Err(SceneError::Grid(format!(
                    "{name} axis has a non-finite angle"
                )));
            }
        }
        Ok(())
    }

    /// Applies overrides such as `yaw=0:350:10,pitch=-90:0:10,roll=0`.
    /// Each axis takes `start:end:step`, a single value, or `a;b;c`.
    pub fn with_overrides(&self, spec: &str) -> Result<AngleGrid, SceneError> {
        let mut g = self.clone();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (axis, value) = part
                .split_once('=')
                .ok_or_else(|| SceneError::Grid(format!("expected axis=value, got '{part}'")))?;
            let values = parse_axis_values(value.trim())
                .ok_or_else(|| SceneError::Grid(format!("cannot parse '{part}'")))?;
            match axis.trim() {
                "roll" => g.roll = values,
                "pitch" => g.pitch = values,
                "yaw" => g.yaw = values,
                other => return Err(SceneError::Grid(format!("unknown axis '{other}'"))),
            }
        }
        g.validate()?;
        Ok(g)
    }

    /// Short textual form, e.g. `roll=0 pitch=-90:0:10 yaw=0:350:10`.
    pub fn describe(&self) -> String {
        fn axis(v: &[f64]) -> String {
            if v.len() >= 3 {
                let step = v[1] - v[0];
                let regular = v.windows(2).all(|w| ((w[1] - w[0]) - step).abs() < 1e-6);
                if regular {
                    return format!("{}:{}:{}", v[0], v[v.len() - 1], quantize(step));
                }
            }
            v.iter().map(f64::to_string).collect::<Vec<_>>().join(";")
        }
        format!(
            "roll={} pitch={} yaw={}",
            axis(&self.roll),
            axis(&self.pitch),
            axis(&self.yaw)
        )
    }
}

fn parse_axis_values(s: &str) -> Option<Vec<f64>> {
    let nums: Vec<&str> = s.split(':').collect();
    match nums.as_slice() {
        [a, b, c] => expand_range(a.parse().ok()?, b.parse().ok()?, c.parse().ok()?),
        [single] => single
            .split(';')
            .map(|v| v.trim().parse::<f64>().ok().map(quantize))
            .collect(),
        _ => None,
    }
}

/// Camera position and orientation in the vehicle frame.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "FlatPose", into = "FlatPose")]
pub struct Pose6D {
    pub position: Vec3,
    pub orientation: RotationRPY,
}

#[derive(Serialize, Deserialize)]
struct FlatPose {
    x: f64,
    y: f64,
    z: f64,
    roll: f64,
    pitch: f64,
    yaw: f64,
}

impl From<FlatPose> for Pose6D {
    fn from(f: FlatPose) -> Self {
        Pose6D::new(
            Vec3::new(f.x, f.y, f.z),
            RotationRPY::new(f.roll, f.pitch, f.yaw),
        )
    }
}

impl From<Pose6D> for FlatPose {
    fn from(p: Pose6D) -> Self {
        FlatPose {
            x: p.position.x,
            y: p.position.y,
            z: p.position.z,
            roll: p.orientation.roll,
            pitch: p.orientation.pitch,
            yaw: p.orientation.yaw,
        }
    }
}

impl Pose6D {
    pub fn new(position: Vec3, orientation: RotationRPY) -> Self {
        Self {
            position,
            orientation,
        }
    }

    /// Mirror image about the plane `x = mid_x`.
    pub fn mirrored_x(&self, mid_x: f64) -> Pose6D {
        let o = self.orientation;
        Pose6D::new(
            Vec3::new(
                2.0 * mid_x - self.position.x,
                self.position.y,
                self.position.z,
            ),
            RotationRPY::new(-o.roll, o.pitch, -o.yaw),
        )
    }
}

/// A pose together with its `Position_Index`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CameraPose {
    pub position_index: usize,
    #[serde(flatten)]
    pub pose: Pose6D,
}

/// Deduplicated camera locations: rail samples in rail order, then anchors.
pub fn camera_locations(rails: &[Rail], anchors: &[Vec3]) -> Vec<Vec3> {
    let mut out: Vec<Vec3> = Vec::new();
    let candidates = rails
        .iter()
        .flat_map(Rail::samples)
        .chain(anchors.iter().copied().map(quantize_vec));
    for p in candidates {
        if !out.iter().any(|q| q.distance(p) < 1e-6) {
            out.push(p);
        }
    }
    out
}

/// Every candidate pose in deterministic order: location (rail order, arc
/// length, then anchors), then yaw, pitch, roll in grid order.
pub fn enumerate_poses(rails: &[Rail], anchors: &[Vec3], grid: &AngleGrid) -> Vec<CameraPose> {
    let locations = camera_locations(rails, anchors);
    let mut out = Vec::with_capacity(locations.len() * grid.orientation_count());
    for position in locations {
        for &yaw in &grid.yaw {
            for &pitch in &grid.pitch {
                for &roll in &grid.roll {
                    out.push(CameraPose {
                        position_index: out.len(),
                        pose: Pose6D::new(position, RotationRPY::new(roll, pitch, yaw)),
                    });
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayoutSpec {
    id: u32,
    occupants: Vec<PlacementSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlacementSpec {
    seat: String,
    facing: Facing,
    #[serde(default = "default_profile_name")]
    profile: String,
}

fn default_profile_name() -> String {
    "default".into()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
struct CameraSpec {
    #[serde(flatten)]
    model: CameraModel,
    grid: Option<AngleGrid>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneFile {
    cabin: Option<Cabin>,
    seats: Option<Vec<SeatSlot>>,
    occupants: Option<Vec<OccupantProfile>>,
    rails: Option<Vec<Rail>>,
    camera: Option<CameraSpec>,
    layouts: Option<Vec<LayoutSpec>>,
}

/// Validated cabin, layouts, rails and camera configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    pub cabin: Cabin,
    pub seat_slots: Vec<SeatSlot>,
    pub profiles: Vec<OccupantProfile>,
    pub rails: Vec<Rail>,
    pub camera: CameraModel,
    pub grid: AngleGrid,
    pub layouts: Vec<Layout>,
}

impl Scene {
    pub fn layout(&self, id: u32) -> Result<&Layout, SceneError> {
        self.layouts
            .iter()
            .find(|l| l.id == id)
            .ok_or(SceneError::UnknownLayout(id))
    }

    pub fn poses(&self) -> Vec<CameraPose> {
        enumerate_poses(&self.rails, &self.cabin.anchors, &self.grid)
    }

    pub fn poses_with_grid(&self, grid: &AngleGrid) -> Vec<CameraPose> {
        enumerate_poses(&self.rails, &self.cabin.anchors, grid)
    }
}

/// The shipped default scene.
pub fn default_scene() -> Scene {
    parse_scene(DEFAULT_SCENE_JSON).expect("shipped default scene is valid")
}

/// One of the six built-in layouts of the default scene.
pub fn builtin_layout(id: u32) -> Result<Layout, SceneError> {
    if !(1..=6).contains(&id) {
        return Err(SceneError::UnknownLayout(id));
    }
    Ok(default_scene().layout(id)?.clone())
}

/// Loads a scene file. The name `default` selects the shipped scene.
pub fn load_scene(path: impl AsRef<Path>) -> Result<Scene, SceneError> {
    let path = path.as_ref();
    if path.as_os_str() == "default" {
        return Ok(default_scene());
    }
    let text = std::fs::read_to_string(path).map_err(|source| SceneError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_scene(&text)
}

pub fn parse_scene(text: &str) -> Result<Scene, SceneError> {
    let file: SceneFile = serde_json::from_str(text).map_err(|e| SceneError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    build_scene(file)
}

fn default_seat_slots() -> Vec<SeatSlot> {
    let rows = [("row1", 0.65), ("row2", 1.75), ("row3", 2.75)];
    let mut out = Vec::new();
    for (row, y) in rows {
        for (col, x) in [("a", 0.40), ("b", 1.40)] {
            out.push(SeatSlot {
                name: format!("{row}_{col}"),
                position: Vec3::new(x, y, 0.49),
                geometry: SeatGeometry::default(),
            });
        }
    }
    out
}

fn default_layout_specs() -> Vec<LayoutSpec> {
    use Facing::{Forward as F, Rearward as R};
    let place = |seat: &str, facing| PlacementSpec {
        seat: seat.into(),
        facing,
        profile: default_profile_name(),
    };
    let layout = |id, v: Vec<(&str, Facing)>| LayoutSpec {
        id,
        occupants: v.into_iter().map(|(s, f)| place(s, f)).collect(),
    };
    vec![
        layout(
            1,
            vec![("row1_a", F), ("row1_b", F), ("row2_a", F), ("row2_b", F)],
        ),
        layout(
            2,
            vec![
                ("row1_a", F),
                ("row1_b", F),
                ("row2_a", F),
                ("row2_b", F),
                ("row3_a", F),
                ("row3_b", F),
            ],
        ),
        layout(
            3,
            vec![
                ("row1_a", F),
                ("row1_b", F),
                ("row2_a", R),
                ("row2_b", R),
                ("row3_a", F),
                ("row3_b", F),
            ],
        ),
        layout(4, vec![("row1_a", F), ("row1_b", F)]),
        layout(5, vec![("row1_a", R), ("row3_a", F)]),
        layout(
            6,
            vec![("row1_a", R), ("row1_b", R), ("row3_a", F), ("row3_b", F)],
        ),
    ]
}

fn build_scene(file: SceneFile) -> Result<Scene, SceneError> {
    let mut cabin = file.cabin.unwrap_or_default();
    if cabin.anchors.is_empty() {
        cabin.anchors = cabin.default_anchors();
    }
    cabin.validate()?;

    let seat_slots = file.seats.unwrap_or_else(default_seat_slots);
    let mut names = HashSet::new();
    for s in &seat_slots {
        if !names.insert(s.name.as_str()) {
            return Err(invalid(format!("seat '{}'", s.name), "duplicate seat name"));
        }
        if !cabin.contains(s.position, 1e-9) {
            return Err(invalid(
                format!("seat '{}'", s.name),
                format!("reference point {:?} lies outside the cabin", s.position),
            ));
        }
        let g = &s.geometry;
        if [
            g.width,
            g.pan_thickness,
            g.backrest_depth,
            g.backrest_height,
        ]
        .iter()
        .any(|v| !(*v > 0.0))
            || !(g.pan_front + g.back > 0.0)
        {
            return Err(invalid(
                format!("seat '{}'", s.name),
                "seat dimensions must be positive",
            ));
        }
    }

    let mut profiles = file
        .occupants
        .unwrap_or_else(|| vec![OccupantProfile::default()]);
    if profiles.is_empty() {
        profiles.push(OccupantProfile::default());
    }
    for p in &profiles {
        let dims = [
            p.head_radius,
            p.torso_size[0],
            p.torso_size[1],
            p.torso_size[2],
        ]
        .into_iter()
        .chain(p.pelvis_size);
        if dims.into_iter().any(|v| !(v > 0.0)) {
            return Err(invalid(
                format!("occupant profile '{}'", p.name),
                "dimensions must be positive",
            ));
        }
    }

    let rails = file.rails.unwrap_or_else(|| cabin.default_rails());
    for (i, r) in rails.iter().enumerate() {
        let entity = format!("rail {i}");
        if !(r.step > 0.0) {
            return Err(invalid(
                entity,
                format!("step must be positive, got {}", r.step),
            ));
        }
        if r.vertices.is_empty() {
            return Err(invalid(entity, "rail has no vertices"));
        }
        if let Some(v) = r.vertices.iter().find(|v| !cabin.contains(**v, 1e-9)) {
            return Err(invalid(
                entity,
                format!("vertex {v:?} lies outside the cabin"),
            ));
        }
    }

    let camera_spec = file.camera.unwrap_or_default();
    let camera = camera_spec.model;
    camera.validate().map_err(|m| invalid("camera", m))?;
    let grid = camera_spec.grid.unwrap_or_default();
    grid.validate()?;

    let specs = file.layouts.unwrap_or_else(default_layout_specs);
    let mut ids = HashSet::new();
    let mut layouts = Vec::with_capacity(specs.len());
    for spec in &specs {
        if !ids.insert(spec.id) {
            return Err(invalid(
                format!("layout {}", spec.id),
                "duplicate layout id",
            ));
        }
        layouts.push(build_layout(spec, &cabin, &seat_slots, &profiles)?);
    }

    Ok(Scene {
        cabin,
        seat_slots,
        profiles,
        rails,
        camera,
        grid,
        layouts,
    })
}

fn build_layout(
    spec: &LayoutSpec,
    cabin: &Cabin,
    slots: &[SeatSlot],
    profiles: &[OccupantProfile],
) -> Result<Layout, SceneError> {
    let mut seats = Vec::new();
    let mut occupants = Vec::new();
    let mut used = HashSet::new();
    for place in &spec.occupants {
        let entity = format!("seat '{}' in layout {}", place.seat, spec.id);
        let slot = slots
            .iter()
            .find(|s| s.name == place.seat)
            .ok_or_else(|| invalid(&entity, "no such seat"))?;
        if !used.insert(place.seat.as_str()) {
            return Err(invalid(entity, "seat used twice"));
        }
        let profile = profiles
            .iter()
            .find(|p| p.name == place.profile)
            .ok_or_else(|| {
                invalid(
                    &entity,
                    format!("unknown occupant profile '{}'", place.profile),
                )
            })?;
        let seat = Seat::build(slot, place.facing);
        for (part, b) in [("pan", &seat.pan), ("backrest", &seat.backrest)] {
            if let Some(c) = b.corners().iter().find(|c| !cabin.contains(**c, 1e-9)) {
                return Err(invalid(
                    entity,
                    format!("{part} corner {c:?} lies outside the cabin"),
                ));
            }
        }
        let occupant = Occupant::build(seats.len(), &seat, profile);
        for area in BodyArea::ALL {
            let p = occupant.key_point(area);
            if !cabin.contains(p, 1e-9) {
                return Err(invalid(
                    &entity,
                    format!("occupant {area} at {p:?} lies outside the cabin"),
                ));
            }
            if occupant.host_surface_distance(area) > DEFAULT_EPSILON {
                return Err(invalid(
                    &entity,
                    format!("occupant {area} is not on its host surface"),
                ));
            }
        }
        seats.push(seat);
        occupants.push(occupant);
    }
    let mut occluders = cabin.shell_occluders();
    for s in &seats {
        occluders.push(s.pan.into());
        occluders.push(s.backrest.into());
    }
    for o in &occupants {
        occluders.extend(o.occluders());
    }
    Ok(Layout {
        id: spec.id,
        seats,
        occupants,
        occluders,
    })
}
