//! The two-occupant, three-position worked example used throughout the
//! tests and by `covercab optimize` demos.

use crate::geometry::Vec3;
use crate::scene::{BodyArea, Pose6D};
use crate::sweep::SweepDataset;
use crate::visibility::CoverageRecord;

/// Luminance of 12 markers (2 occupants) seen from 3 camera positions.
pub const WORKED_LUMINANCE: [[f64; 12]; 3] = [
    [1.2, 5.6, 3.4, 9.3, 6.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 6.8, 4.3, 2.2, 8.7, 9.1],
    [0.0, 0.0, 0.0, 0.0, 1.5, 4.9, 11.2, 3.5, 0.0, 0.0, 0.0, 0.0],
];

pub const WORKED_BLUMINANCE: [[u8; 12]; 3] = [
    [1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1],
    [0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0],
];

/// 12 x 3 matrix, rows in seat-major canonical order.
pub const WORKED_BMATRIX: [[u8; 3]; 12] = [
    [1, 0, 0],
    [1, 0, 0],
    [1, 0, 0],
    [1, 0, 0],
    [1, 0, 1],
    [0, 0, 1],
    [0, 0, 1],
    [0, 1, 1],
    [0, 1, 0],
    [0, 1, 0],
    [0, 1, 0],
    [0, 1, 0],
];

/// Coverage with the two-camera selection `{0, 1}`.
pub const WORKED_BUDGET2_COVERED: [u8; 12] = [1, 1, 1, 1, 1, 0, 0, 1, 1, 1, 1, 1];

pub fn worked_example_dataset() -> SweepDataset {
    let mut records = Vec::new();
    for (pi, lum) in WORKED_LUMINANCE.iter().enumerate() {
        let pose = Pose6D::new(
            Vec3::new(0.1 * (pi + 1) as f64, 0.4, 1.4),
            Default::default(),
        );
        for (i, &luminance) in lum.iter().enumerate() {
            records.push(CoverageRecord {
                position_index: pi,
                seat_index: i / 6,
                body_area: BodyArea::ALL[i % 6],
                luminance,
                pose,
            });
        }
    }
    SweepDataset::from_records(records)
}
