//! Binarized luminance and the binary coverage matrix.
//!
//! Rows are markers `(layout, seat, body area)` in seat-major canonical
//! order, columns are camera positions. Each column is stored as a
//! [`RowSet`] so the optimizers can work with word-wide set operations.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::RowSet;
use crate::scene::{BodyArea, Pose6D};
use crate::sweep::SweepDataset;

#[derive(Debug, Error, PartialEq)]
pub enum MatrixError {
    #[error("luminance at index {index} is negative or not a number ({value})")]
    NegativeLuminance { index: usize, value: f64 },
    #[error("position {position_index}: {message}")]
    RaggedPosition {
        position_index: usize,
        message: String,
    },
    #[error("column labels differ between stacked matrices (matrix {index})")]
    ColumnMismatch { index: usize },
}

/// Algorithm 1: 1 where the value is positive, else 0.
pub fn binarize(luminance: &[f64]) -> Result<Vec<u8>, MatrixError> {
    binarize_with_cutoff(luminance, 0.0)
}

/// Like [`binarize`] but a value must exceed `cutoff` to count as covered.
pub fn binarize_with_cutoff(luminance: &[f64], cutoff: f64) -> Result<Vec<u8>, MatrixError> {
    luminance
        .iter()
        .enumerate()
        .map(|(index, &value)| {
            if value >= 0.0 {
                Ok(u8::from(value > cutoff))
            } else {
                Err(MatrixError::NegativeLuminance { index, value })
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RowLabel {
    pub layout_id: u32,
    pub seat_index: usize,
    pub body_area: BodyArea,
}

impl std::fmt::Display for RowLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "layout {} seat {} {}",
            self.layout_id, self.seat_index, self.body_area
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnLabel {
    pub position_index: usize,
    pub pose: Pose6D,
}

/// Binary markers-by-positions matrix with labels.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryCoverageMatrix {
    rows: Vec<RowLabel>,
    columns: Vec<ColumnLabel>,
    sets: Vec<RowSet>,
}

impl BinaryCoverageMatrix {
    /// Builds a matrix from column row-sets.
    ///
    /// # Panics
    /// If the label and column counts disagree.
    pub fn new(rows: Vec<RowLabel>, columns: Vec<ColumnLabel>, sets: Vec<RowSet>) -> Self {
        assert_eq!(columns.len(), sets.len(), "one row-set per column");
        assert!(
            sets.iter().all(|s| s.len() == rows.len()),
            "row-set length must equal row count"
        );
        Self {
            rows,
            columns,
            sets,
        }
    }

    /// Matrix from dense 0/1 rows; columns are labelled `0..m` with zero
    /// poses and row `i` is seat `i / 6`, area `i % 6`.
    pub fn from_dense(layout_id: u32, dense: &[Vec<u8>]) -> Self {
        let n_rows = dense.len();
        let m = dense.first().map_or(0, Vec::len);
        let rows = (0..n_rows)
            .map(|i| RowLabel {
                layout_id,
                seat_index: i / 6,
                body_area: BodyArea::ALL[i % 6],
            })
            .collect();
        let columns = (0..m)
            .map(|j| ColumnLabel {
                position_index: j,
                pose: Pose6D::default(),
            })
            .collect();
        let sets = (0..m)
            .map(|j| {
                let mut s = RowSet::empty(n_rows);
                for (i, row) in dense.iter().enumerate() {
                    if row[j] != 0 {
                        s.insert(i);
                    }
                }
                s
            })
            .collect();
        Self::new(rows, columns, sets)
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_count(&self) -> usize {
        self.columns.len()
    }

    pub fn rows(&self) -> &[RowLabel] {
        &self.rows
    }

    pub fn columns(&self) -> &[ColumnLabel] {
        &self.columns
    }

    /// Row-set covered by column `j`.
    pub fn column(&self, j: usize) -> &RowSet {
        &self.sets[j]
    }

    pub fn column_sets(&self) -> &[RowSet] {
        &self.sets
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        u8::from(self.sets[col].contains(row))
    }

    /// Number of occupants summed over the stacked layouts.
    pub fn occupant_count(&self) -> usize {
        self.rows.len() / 6
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        (0..self.row_count())
            .map(|i| (0..self.column_count()).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Rows no column covers.
    pub fn uncoverable_rows(&self) -> Vec<usize> {
        let mut any = RowSet::empty(self.row_count());
        for s in &self.sets {
            any.union_with(s);
        }
        (0..self.row_count())
            .filter(|&i| !any.contains(i))
            .collect()
    }

    /// Plain-text dump: a header with p, m and the column labels, then one
    /// line per row with its label and a string of 0/1 characters.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p {}", self.occupant_count());
        let _ = writeln!(out, "m {}", self.column_count());
        let cols: Vec<String> = self
            .columns
            .iter()
            .map(|c| c.position_index.to_string())
            .collect();
        let _ = writeln!(out, "columns {}", cols.join(" "));
        for (i, r) in self.rows.iter().enumerate() {
            let bits: String = (0..self.column_count())
                .map(|j| if self.get(i, j) == 1 { '1' } else { '0' })
                .collect();
            let _ = writeln!(
                out,
                "{}/{}/{} {}",
                r.layout_id, r.seat_index, r.body_area, bits
            );
        }
        out
    }
}

/// Algorithm 2 over a sweep dataset with the strict `> 0` threshold.
pub fn build_bmatrix(
    ds: &SweepDataset,
    layout_id: u32,
) -> Result<BinaryCoverageMatrix, MatrixError> {
    build_bmatrix_with_cutoff(ds, layout_id, 0.0)
}

/// Groups records by position and lays each position's binarized 6p-vector
/// into one column. Input order does not matter.
pub fn build_bmatrix_with_cutoff(
    ds: &SweepDataset,
    layout_id: u32,
    cutoff: f64,
) -> Result<BinaryCoverageMatrix, MatrixError> {
    let mut by_position: BTreeMap<usize, Vec<&crate::visibility::CoverageRecord>> = BTreeMap::new();
    for r in &ds.records {
        by_position.entry(r.position_index).or_default().push(r);
    }
    let Some(first) = by_position.values().next() else {
        return Ok(BinaryCoverageMatrix::new(
            Vec::new(),
            Vec::new(),
            Vec::new(),
        ));
    };
    let mut keys: Vec<(usize, BodyArea)> =
        first.iter().map(|r| (r.seat_index, r.body_area)).collect();
    keys.sort();
    let first_pi = first[0].position_index;
    let seats: Vec<usize> = {
        let mut s: Vec<usize> = keys.iter().map(|k| k.0).collect();
        s.dedup();
        s
    };
    let expected: Vec<(usize, BodyArea)> = seats
        .iter()
        .flat_map(|&s| BodyArea::ALL.into_iter().map(move |a| (s, a)))
        .collect();
    if keys != expected {
        return Err(MatrixError::RaggedPosition {
            position_index: first_pi,
            message: format!(
                "expected 6 markers for each of seats {seats:?}, found {} records",
                keys.len()
            ),
        });
    }
    let rows: Vec<RowLabel> = expected
        .iter()
        .map(|&(seat_index, body_area)| RowLabel {
            layout_id,
            seat_index,
            body_area,
        })
        .collect();

    let mut columns = Vec::with_capacity(by_position.len());
    let mut sets = Vec::with_capacity(by_position.len());
    for (&pi, recs) in &by_position {
        let mut recs = recs.clone();
        recs.sort_by_key(|r| (r.seat_index, r.body_area));
        let these: Vec<(usize, BodyArea)> =
            recs.iter().map(|r| (r.seat_index, r.body_area)).collect();
        if these != expected {
            return Err(MatrixError::RaggedPosition {
                position_index: pi,
                message: format!(
                    "expected {} markers, found {} (or a different seat set)",
                    expected.len(),
                    these.len()
                ),
            });
        }
        let lum: Vec<f64> = recs.iter().map(|r| r.luminance).collect();
        let bits = binarize_with_cutoff(&lum, cutoff)?;
        let mut set = RowSet::empty(rows.len());
        for (i, b) in bits.iter().enumerate() {
            if *b == 1 {
                set.insert(i);
            }
        }
        columns.push(ColumnLabel {
            position_index: pi,
            pose: recs[0].pose,
        });
        sets.push(set);
    }
    Ok(BinaryCoverageMatrix::new(rows, columns, sets))
}

/// Vertical concatenation over a shared pose grid.
pub fn stack_layouts(mats: &[BinaryCoverageMatrix]) -> Result<BinaryCoverageMatrix, MatrixError> {
    let Some(first) = mats.first() else {
        return Ok(BinaryCoverageMatrix::new(
            Vec::new(),
            Vec::new(),
            Vec::new(),
        ));
    };
    for (index, m) in mats.iter().enumerate().skip(1) {
        let same = m.columns.len() == first.columns.len()
            && m.columns
                .iter()
                .zip(&first.columns)
                .all(|(a, b)| a.position_index == b.position_index && a.pose == b.pose);
        if !same {
            return Err(MatrixError::ColumnMismatch { index });
        }
    }
    let rows = mats.iter().flat_map(|m| m.rows.iter().copied()).collect();
    let sets = (0..first.column_count())
        .map(|j| {
            mats.iter()
                .skip(1)
                .fold(first.sets[j].clone(), |acc, m| acc.concat(&m.sets[j]))
        })
        .collect();
    Ok(BinaryCoverageMatrix::new(rows, first.columns.clone(), sets))
}
