//! Pose-grid sweeps and the coverage dataset CSV format.
//!
//! The CSV header is fixed and every float is written with six decimals.
//! Records are written sorted by `(Position_Index, Seat_Index, Body_Area)`
//! so a reader can assemble the coverage matrix while streaming. The
//! `Luminance` column carries the coverage indicator: nonzero means seen.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::exec::{map_slice, Execution};
use crate::geometry::{RotationRPY, Vec3};
use crate::scene::{AngleGrid, BodyArea, CameraPose, Pose6D, Scene, SceneError};
use crate::visibility::{evaluate_pose, CameraModel, CoverageRecord};

pub const CSV_HEADER: &str =
    "Position_Index,Seat_Index,Body_Area,Luminance,Camera_X,Camera_Y,Camera_Z,Camera_Roll,Camera_Pitch,Camera_Yaw";

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("header mismatch: expected `{CSV_HEADER}`, found `{found}`")]
    Header { found: String },
    #[error("line {line}: {message}")]
    Row { line: usize, message: String },
    #[error(transparent)]
    Scene(#[from] SceneError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepMeta {
    pub layout_id: u32,
    pub occupants: usize,
    pub camera: CameraModel,
    pub grid: String,
    pub poses: usize,
}

/// Coverage records sorted by `(position_index, seat_index, body_area)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepDataset {
    pub records: Vec<CoverageRecord>,
    /// Present for datasets produced by a sweep; CSV files carry records only.
    pub meta: Option<SweepMeta>,
}

impl SweepDataset {
    pub fn from_records(mut records: Vec<CoverageRecord>) -> Self {
        records.sort_by_key(CoverageRecord::sort_key);
        Self {
            records,
            meta: None,
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Evaluates every pose of `poses` against layout `layout_id`.
pub fn sweep_poses(
    scene: &Scene,
    layout_id: u32,
    poses: &[CameraPose],
    exec: Execution,
) -> Result<SweepDataset, SceneError> {
    let layout = scene.layout(layout_id)?;
    let cam = scene.camera;
    let chunks = map_slice(exec, poses, |cp| {
        evaluate_pose(cp.position_index, &cp.pose, layout, &cam)
    });
    let records: Vec<CoverageRecord> = chunks.into_iter().flatten().collect();
    let mut ds = SweepDataset::from_records(records);
    ds.meta = Some(SweepMeta {
        layout_id,
        occupants: layout.occupant_count(),
        camera: cam,
        grid: String::new(),
        poses: poses.len(),
    });
    Ok(ds)
}

/// Full sweep of the scene's rails and anchors over `grid`.
pub fn run_sweep(
    scene: &Scene,
    layout_id: u32,
    grid: &AngleGrid,
    exec: Execution,
) -> Result<SweepDataset, SceneError> {
    let poses = scene.poses_with_grid(grid);
    let mut ds = sweep_poses(scene, layout_id, &poses, exec)?;
    if let Some(meta) = ds.meta.as_mut() {
        meta.grid = grid.describe();
    }
    Ok(ds)
}

pub fn write_csv_to<W: Write>(ds: &SweepDataset, out: W) -> io::Result<()> {
    let mut w = BufWriter::new(out);
    writeln!(w, "{CSV_HEADER}")?;
    for r in &ds.records {
        let p = r.pose.position;
        let o = r.pose.orientation;
        writeln!(
            w,
            "{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}",
            r.position_index,
            r.seat_index,
            r.body_area,
            r.luminance,
            p.x,
            p.y,
            p.z,
            o.roll,
            o.pitch,
            o.yaw
        )?;
    }
    w.flush()
}

pub fn write_csv(ds: &SweepDataset, path: impl AsRef<Path>) -> Result<(), DatasetError> {
    let path = path.as_ref();
    let io_err = |source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    };
    let f = File::create(path).map_err(io_err)?;
    write_csv_to(ds, f).map_err(io_err)
}

pub fn read_csv_from<R: Read>(input: R) -> Result<SweepDataset, DatasetError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut rows = rdr.records();
    let header = match rows.next() {
        Some(Ok(h)) => h.iter().collect::<Vec<_>>().join(","),
        Some(Err(e)) => {
            return Err(DatasetError::Row {
                line: 1,
                message: e.to_string(),
            })
        }
        None => String::new(),
    };
    if header != CSV_HEADER {
        return Err(DatasetError::Header { found: header });
    }
    let mut records = Vec::new();
    for (i, row) in rows.enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| DatasetError::Row {
            line,
            message: e.to_string(),
        })?;
        records.push(parse_row(&row, line)?);
    }
    Ok(SweepDataset::from_records(records))
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<SweepDataset, DatasetError> {
    let path = path.as_ref();
    let f = File::open(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_csv_from(f)
}

fn parse_row(row: &csv::StringRecord, line: usize) -> Result<CoverageRecord, DatasetError> {
    let err = |message: String| DatasetError::Row { line, message };
    if row.len() != 10 {
        return Err(err(format!("expected 10 fields, found {}", row.len())));
    }
    let int = |i: usize, name: &str| {
        row[i]
            .trim()
            .parse::<usize>()
            .map_err(|_| err(format!("{name}: not a nonnegative integer: '{}'", &row[i])))
    };
    let float = |i: usize, name: &str| match row[i].trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(err(format!("{name}: not a finite number: '{}'", &row[i]))),
    };
    let luminance = float(3, "Luminance")?;
    if luminance < 0.0 {
        return Err(err(format!(
            "Luminance must be nonnegative, found {luminance}"
        )));
    }
    Ok(CoverageRecord {
        position_index: int(0, "Position_Index")?,
        seat_index: int(1, "Seat_Index")?,
        body_area: row[2].trim().parse::<BodyArea>().map_err(err)?,
        luminance,
        pose: Pose6D::new(
            Vec3::new(
                float(4, "Camera_X")?,
                float(5, "Camera_Y")?,
                float(6, "Camera_Z")?,
            ),
            RotationRPY::new(
                float(7, "Camera_Roll")?,
                float(8, "Camera_Pitch")?,
                float(9, "Camera_Yaw")?,
            ),
        ),
    })
}
