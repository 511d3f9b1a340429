//! Atomic and molecular intervals.
//!
//! Slicing the free space of `S` and `P` at every extremal height of every
//! row gives a finite set of boundary points on `[0,1]`. Every proxy coverage
//! is a union of closed intervals between such points, so covering one
//! interior point of each atomic interval covers `[0,1]`. Restricting to the
//! heights of one row gives that row's molecular intervals; each is a
//! contiguous run of atomic intervals.

use crate::approx::{extremal_points, ExtremalSet};
use crate::frechet::{FreeSpace, Row, TAU_GEOM};

/// Sorts and merges values closer than the geometric tolerance.
pub(crate) fn dedup_tol(v: &mut Vec<f64>) {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|b, a| *b - *a <= TAU_GEOM);
}

/// `{l_i(y), r_i(y)}` over the given heights and all cells alive there,
/// plus `0` and `1`; sorted, merged within the geometric tolerance.
pub fn molecular_bounds(row: &Row, heights: &[f64]) -> Vec<f64> {
    let mut v = vec![0.0, 1.0];
    for &y in heights {
        for i in 0..row.n() {
            let (l, r) = row.lr(i, y);
            if l.is_finite() {
                v.push(l);
                v.push(r);
            }
        }
    }
    dedup_tol(&mut v);
    v
}

/// The distinct heights of an extremal set.
pub(crate) fn distinct_heights(ext: &ExtremalSet) -> Vec<f64> {
    let mut h = ext.values();
    h.dedup();
    h
}

/// A molecular interval of one edge of `S`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Molecule {
    pub lo: f64,
    pub hi: f64,
}

impl Molecule {
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

pub fn molecules_of(bounds: &[f64]) -> Vec<Molecule> {
    bounds.windows(2).map(|w| Molecule { lo: w[0], hi: w[1] }).collect()
}

/// The arrangement `𝒜(S,P)`: sorted boundaries including `0` and `1`.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicIntervals {
    pub bounds: Vec<f64>,
}

impl AtomicIntervals {
    pub fn from_bounds(mut bounds: Vec<f64>) -> Self {
        bounds.push(0.0);
        bounds.push(1.0);
        dedup_tol(&mut bounds);
        AtomicIntervals { bounds }
    }

    /// Number of atomic intervals.
    pub fn len(&self) -> usize {
        self.bounds.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn midpoints(&self) -> Vec<f64> {
        self.bounds.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Index of the boundary nearest to `x`.
    pub fn nearest(&self, x: f64) -> usize {
        let k = self.bounds.partition_point(|&b| b < x);
        if k == 0 {
            0
        } else if k == self.bounds.len() || x - self.bounds[k - 1] <= self.bounds[k] - x {
            k - 1
        } else {
            k
        }
    }
}

/// `𝒜(S,P)` of a free space whose rows are the edges of `S`.
pub fn compute_atomic(fs: &FreeSpace) -> AtomicIntervals {
    let mut all = Vec::new();
    for e in 0..fs.ny() {
        let row = fs.row(e);
        let ext = extremal_points(&row, false);
        all.extend(molecular_bounds(&row, &distinct_heights(&ext)));
    }
    AtomicIntervals::from_bounds(all)
}
