//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

pub mod props;

use covercab::geometry::{OrientedBox, Ray};
use covercab::BinaryCoverageMatrix;
use rand::Rng;

/// Row-sets as plain bit masks, one per column.
pub fn masks(a: &BinaryCoverageMatrix) -> Vec<u32> {
    (0..a.column_count())
        .map(|j| (0..a.row_count()).fold(0u32, |m, i| m | (u32::from(a.get(i, j)) << i)))
        .collect()
}

/// Columns surviving duplicate and strict-subset removal, ascending.
pub fn oracle_reps(cols: &[u32]) -> Vec<usize> {
    (0..cols.len())
        .filter(|&j| {
            let c = cols[j];
            c != 0
                && !cols
                    .iter()
                    .enumerate()
                    .any(|(k, &o)| (o == c && k < j) || (o != c && c & o == c))
        })
        .collect()
}

/// Smallest cover size over all columns, plus the lexicographically first
/// cover of that size over `reps` and the number of such covers.
pub fn oracle_min_cover(cols: &[u32], rows: usize) -> Option<(usize, Vec<usize>, u64)> {
    let full = if rows == 32 {
        u32::MAX
    } else {
        (1u32 << rows) - 1
    };
    let m = cols.len();
    let mut best = usize::MAX;
    for s in 0u32..(1 << m) {
        let k = s.count_ones() as usize;
        if k < best
            && (0..m)
                .filter(|j| s >> j & 1 == 1)
                .fold(0, |acc, j| acc | cols[j])
                == full
        {
            best = k;
        }
    }
    if best == usize::MAX {
        return None;
    }
    let reps: Vec<u32> = oracle_reps(cols).iter().map(|&j| cols[j]).collect();
    let idx = oracle_reps(cols);
    let mut lex: Option<Vec<usize>> = None;
    let mut ties = 0;
    for s in 0u32..(1 << reps.len()) {
        if s.count_ones() as usize != best {
            continue;
        }
        let cover = (0..reps.len())
            .filter(|j| s >> j & 1 == 1)
            .fold(0, |acc, j| acc | reps[j]);
        if cover == full {
            ties += 1;
            let sel: Vec<usize> = (0..reps.len())
                .filter(|j| s >> j & 1 == 1)
                .map(|j| idx[j])
                .collect();
            if lex.as_ref().is_none_or(|l| sel < *l) {
                lex = Some(sel);
            }
        }
    }
    Some((best, lex.expect("a representative cover exists"), ties))
}

/// Best coverage with exactly `k` of all columns, and the
/// lexicographically first best `min(k, reps)`-subset of `reps`.
pub fn oracle_budget(cols: &[u32], k: usize) -> (usize, Vec<usize>) {
    let m = cols.len();
    let mut best = 0;
    for s in 0u32..(1 << m) {
        if s.count_ones() as usize == k {
            let c = (0..m)
                .filter(|j| s >> j & 1 == 1)
                .fold(0u32, |acc, j| acc | cols[j]);
            best = best.max(c.count_ones() as usize);
        }
    }
    let idx = oracle_reps(cols);
    let kk = k.min(idx.len());
    let mut lex: Option<Vec<usize>> = None;
    for s in 0u32..(1 << idx.len()) {
        if s.count_ones() as usize != kk {
            continue;
        }
        let sel: Vec<usize> = (0..idx.len())
            .filter(|j| s >> j & 1 == 1)
            .map(|j| idx[j])
            .collect();
        let c = sel.iter().fold(0u32, |acc, &j| acc | cols[j]);
        if c.count_ones() as usize == best && lex.as_ref().is_none_or(|l| sel < *l) {
            lex = Some(sel);
        }
    }
    (best, lex.unwrap_or_default())
}

/// Random dense matrix with every row covered by some column.
pub fn random_feasible<R: Rng>(rng: &mut R, max_rows: usize, max_cols: usize) -> Vec<Vec<u8>> {
    let rows = rng.gen_range(1..=max_rows);
    let cols = rng.gen_range(1..=max_cols);
    let density = rng.gen_range(0.1..0.6);
    let mut d: Vec<Vec<u8>> = (0..rows)
        .map(|_| (0..cols).map(|_| u8::from(rng.gen_bool(density))).collect())
        .collect();
    for row in &mut d {
        if row.iter().all(|&b| b == 0) {
            row[rng.gen_range(0..cols)] = 1;
        }
    }
    d
}

/// Hit classification by sampling the ray every `step` up to `t_max`.
pub fn march_hits(ray: &Ray, b: &OrientedBox, t_max: f64, step: f64) -> bool {
    let n = (t_max / step).ceil() as usize;
    (0..=n).any(|i| b.contains(ray.at(i as f64 * step), 0.0))
}
