//! The covered set `I_R` of the measure greedy: disjoint intervals with
//! prefix lengths, so uncovered measure of any range is two binary searches.

use crate::error::{Error, Result};
use crate::interval::IntervalUnion;

/// Where a point falls relative to `I_R`. Gap bounds are `±∞` past the ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    Covered { idx: usize, lo: f64, hi: f64 },
    Gap { idx: usize, lo: f64, hi: f64 },
}

impl Region {
    /// Monotone in the located point: gap `p` < part `p` < gap `p+1`.
    pub fn code(&self) -> usize {
        match *self {
            Region::Gap { idx, .. } => 2 * idx,
            Region::Covered { idx, .. } => 2 * idx + 1,
        }
    }
}

/// Disjoint closed intervals, maximal (touching ones are merged), no
/// zero-length parts. The representation is canonical, so inserting and then
/// removing a disjoint interval restores it bit for bit.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MeasureSolution {
    parts: Vec<(f64, f64)>,
    /// `prefix[k]` = total length of `parts[..k]`
    prefix: Vec<f64>,
}

impl MeasureSolution {
    pub fn new() -> Self {
        MeasureSolution {
            parts: Vec::new(),
            prefix: vec![0.0],
        }
    }

    pub fn parts(&self) -> &[(f64, f64)] {
        &self.parts
    }

    pub fn to_union(&self) -> IntervalUnion {
        IntervalUnion::from_intervals(self.parts.iter().copied())
    }

    /// `‖⋃ I_R‖`.
    pub fn measure(&self) -> f64 {
        *self.prefix.last().expect("prefix has a sentinel")
    }

    fn rebuild_prefix(&mut self) {
        self.prefix.clear();
        self.prefix.push(0.0);
        let mut acc = 0.0;
        for &(a, b) in &self.parts {
            acc += b - a;
            self.prefix.push(acc);
        }
    }

    /// Covered length inside `[a, b]`.
    pub fn covered_in(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let p0 = self.parts.partition_point(|p| p.1 <= a);
        let p1 = self.parts.partition_point(|p| p.0 < b);
        if p0 >= p1 {
            return 0.0;
        }
        let mut c = self.prefix[p1] - self.prefix[p0];
        c -= (a - self.parts[p0].0).max(0.0);
        c -= (self.parts[p1 - 1].1 - b).max(0.0);
        c.max(0.0)
    }

    /// `‖[a, b] ∖ ⋃ I_R‖`, zero for an empty range.
    pub fn residual_measure(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        ((b - a) - self.covered_in(a, b)).max(0.0)
    }

    pub fn residual_in(&self, u: &IntervalUnion) -> f64 {
        u.parts().iter().map(|&(a, b)| self.residual_measure(a, b)).sum()
    }

    pub fn locate(&self, x: f64) -> Region {
        let p = self.parts.partition_point(|q| q.1 < x);
        if p < self.parts.len() && self.parts[p].0 <= x {
            let (lo, hi) = self.parts[p];
            return Region::Covered { idx: p, lo, hi };
        }
        let lo = if p > 0 { self.parts[p - 1].1 } else { f64::NEG_INFINITY };
        let hi = self.parts.get(p).map_or(f64::INFINITY, |q| q.0);
        Region::Gap { idx: p, lo, hi }
    }

    /// Adds `[a, b]`, which may touch but not overlap the stored parts.
    pub fn insert(&mut self, a: f64, b: f64) -> Result<()> {
        if !(a <= b) {
            return Err(Error::InvertedRange);
        }
        if b == a {
            return Ok(());
        }
        let p0 = self.parts.partition_point(|p| p.1 < a);
        let p1 = self.parts.partition_point(|p| p.0 <= b);
        for &(c, d) in &self.parts[p0..p1] {
            if c < b && a < d {
                return Err(Error::OutOfRange(format!("[{a}, {b}] overlaps stored part [{c}, {d}]")));
            }
        }
        // every part in p0..p1 touches [a, b]
        let lo = self.parts.get(p0).filter(|_| p0 < p1).map_or(a, |p| p.0.min(a));
        let hi = if p1 > p0 { self.parts[p1 - 1].1.max(b) } else { b };
        self.parts.splice(p0..p1, [(lo, hi)]);
        self.rebuild_prefix();
        Ok(())
    }

    /// Adds `u ∖ I_R` and returns the newly covered pieces.
    pub fn insert_union(&mut self, u: &IntervalUnion) -> Vec<(f64, f64)> {
        let mut fresh = Vec::new();
        for &(a, b) in u.parts() {
            let mut x = a;
            let p1 = self.parts.partition_point(|p| p.0 < b);
            let p0 = self.parts.partition_point(|p| p.1 <= a);
            for &(c, d) in &self.parts[p0..p1] {
                if c > x {
                    fresh.push((x, c));
                }
                x = x.max(d);
            }
            if b > x {
                fresh.push((x, b));
            }
        }
        for &(a, b) in &fresh {
            self.insert(a, b).expect("pieces of u ∖ I_R are disjoint from I_R");
        }
        fresh
    }

    /// Removes `[a, b]`, which must lie inside one stored part.
    pub fn remove(&mut self, a: f64, b: f64) -> Result<()> {
        if !(a <= b) {
            return Err(Error::InvertedRange);
        }
        if b == a {
            return Ok(());
        }
        let p = self.parts.partition_point(|q| q.1 < b);
        let Some(&(c, d)) = self.parts.get(p).filter(|q| q.0 <= a) else {
            return Err(Error::OutOfRange(format!("[{a}, {b}] is not covered")));
        };
        let keep: Vec<(f64, f64)> = [(c, a), (b, d)].into_iter().filter(|q| q.1 > q.0).collect();
        self.parts.splice(p..=p, keep);
        self.rebuild_prefix();
        Ok(())
    }
}
