//! Camera frustum test, occlusion and the per-marker luminance value.
//!
//! A key point counts as seen by a pose when it lies inside the camera's
//! pyramidal field of view and the straight segment to it is unobstructed.
//! The luminance of a seen point is `1 / d^2` for camera distance `d`, and
//! zero otherwise.

use serde::{Deserialize, Serialize};

use crate::geometry::{segment_occluded, Occluder, Vec3, DEFAULT_EPSILON};
use crate::scene::{quantize, BodyArea, Layout, Pose6D};

/// Pinhole camera with a diagonal field of view.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CameraModel {
    pub diagonal_fov_deg: f64,
    /// Image aspect as `[width, height]`.
    pub aspect: [f64; 2],
    pub near_clip: f64,
    pub max_range: f64,
}

impl Default for CameraModel {
    fn default() -> Self {
        Self {
            diagonal_fov_deg: 94.0,
            aspect: [4.0, 3.0],
            near_clip: 0.05,
            max_range: 10.0,
        }
    }
}

impl CameraModel {
    pub fn validate(&self) -> Result<(), String> {
        let fov = self.diagonal_fov_deg;
        if !(fov > 0.0 && fov < 180.0) {
            return Err(format!("diagonal_fov_deg must be in (0, 180), got {fov}"));
        }
        if !(self.aspect[0] > 0.0 && self.aspect[1] > 0.0) {
            return Err(format!("aspect must be positive, got {:?}", self.aspect));
        }
        if !(self.near_clip >= 0.0 && self.max_range > self.near_clip) {
            return Err(format!(
                "need 0 <= near_clip < max_range, got {} and {}",
                self.near_clip, self.max_range
            ));
        }
        Ok(())
    }

    /// Tangents of the horizontal and vertical half-angles.
    pub fn half_angle_tangents(&self) -> (f64, f64) {
        let diag = (self.diagonal_fov_deg / 2.0).to_radians().tan();
        let [w, h] = self.aspect;
        let d = w.hypot(h);
        (diag * w / d, diag * h / d)
    }

    pub fn horizontal_half_angle_deg(&self) -> f64 {
        self.half_angle_tangents().0.atan().to_degrees()
    }

    pub fn vertical_half_angle_deg(&self) -> f64 {
        self.half_angle_tangents().1.atan().to_degrees()
    }
}

/// One row of the coverage dataset.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageRecord {
    pub position_index: usize,
    pub seat_index: usize,
    pub body_area: BodyArea,
    pub luminance: f64,
    pub pose: Pose6D,
}

impl CoverageRecord {
    pub fn sort_key(&self) -> (usize, usize, BodyArea) {
        (self.position_index, self.seat_index, self.body_area)
    }
}

/// Precomputed camera axes for one pose.
#[derive(Clone, Copy, Debug)]
struct CameraFrame {
    origin: Vec3,
    lateral: Vec3,
    boresight: Vec3,
    up: Vec3,
}

impl CameraFrame {
    fn new(pose: &Pose6D) -> Self {
        let m = pose.orientation.to_matrix();
        Self {
            origin: pose.position,
            lateral: m.column(0),
            boresight: m.column(1),
            up: m.column(2),
        }
    }

    fn sees(&self, cam: &CameraModel, tans: (f64, f64), p: Vec3) -> bool {
        let d = p - self.origin;
        let depth = d.dot(self.boresight);
        if !(depth > cam.near_clip && depth < cam.max_range) {
            return false;
        }
        d.dot(self.lateral).abs() <= tans.0 * depth && d.dot(self.up).abs() <= tans.1 * depth
    }
}

/// True iff `p` lies inside the camera's view pyramid between the near
/// clip and the maximum range.
pub fn in_frustum(pose: &Pose6D, cam: &CameraModel, p: Vec3) -> bool {
    CameraFrame::new(pose).sees(cam, cam.half_angle_tangents(), p)
}

/// `1/d^2` when `p` is in view and unobstructed, otherwise zero.
pub fn luminance_at(pose: &Pose6D, cam: &CameraModel, p: Vec3, occluders: &[Occluder]) -> f64 {
    luminance_in_frame(
        &CameraFrame::new(pose),
        cam,
        cam.half_angle_tangents(),
        p,
        occluders,
    )
}

fn luminance_in_frame(
    frame: &CameraFrame,
    cam: &CameraModel,
    tans: (f64, f64),
    p: Vec3,
    occluders: &[Occluder],
) -> f64 {
    if !frame.sees(cam, tans, p) || segment_occluded(frame.origin, p, occluders, DEFAULT_EPSILON) {
        return 0.0;
    }
    1.0 / (p - frame.origin).norm_squared()
}

/// Records for every (seat, body area) of `layout` seen from `pose`, in
/// seat-major canonical order. Luminance is stored at dataset precision.
pub fn evaluate_pose(
    position_index: usize,
    pose: &Pose6D,
    layout: &Layout,
    cam: &CameraModel,
) -> Vec<CoverageRecord> {
    let frame = CameraFrame::new(pose);
    let tans = cam.half_angle_tangents();
    let mut out = Vec::with_capacity(layout.marker_count());
    for occupant in &layout.occupants {
        for area in BodyArea::ALL {
            let p = occupant.key_point(area);
            let luminance = luminance_in_frame(&frame, cam, tans, p, &layout.occluders);
            out.push(CoverageRecord {
                position_index,
                seat_index: occupant.seat_index,
                body_area: area,
                luminance: quantize(luminance),
                pose: *pose,
            });
        }
    }
    out
}
