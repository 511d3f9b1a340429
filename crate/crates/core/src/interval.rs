//! Disjoint unions of closed intervals on the real line.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IntervalUnion {
    /// Sorted, pairwise disjoint, non-touching closed intervals.
    parts: Vec<(f64, f64)>,
}

impl IntervalUnion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_intervals<I: IntoIterator<Item = (f64, f64)>>(it: I) -> Self {
        let mut v: Vec<(f64, f64)> = it.into_iter().filter(|(a, b)| a <= b).collect();
        v.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        let mut parts: Vec<(f64, f64)> = Vec::with_capacity(v.len());
        for (a, b) in v {
            match parts.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => parts.push((a, b)),
            }
        }
        IntervalUnion { parts }
    }

    pub fn parts(&self) -> &[(f64, f64)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn insert(&mut self, a: f64, b: f64) {
        if a > b {
            return;
        }
        let mut v = std::mem::take(&mut self.parts);
        v.push((a, b));
        *self = Self::from_intervals(v);
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        Self::from_intervals(self.parts.iter().chain(&other.parts).copied())
    }

    pub fn measure(&self) -> f64 {
        self.parts.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        let i = self.parts.partition_point(|p| p.1 < x);
        i < self.parts.len() && self.parts[i].0 <= x
    }

    /// Measure of `[a,b]` not covered by this union.
    pub fn uncovered_in(&self, a: f64, b: f64) -> f64 {
        if a >= b {
            return 0.0;
        }
        let mut covered = 0.0;
        for &(x, y) in &self.parts {
            let lo = x.max(a);
            let hi = y.min(b);
            if lo < hi {
                covered += hi - lo;
            }
        }
        (b - a - covered).max(0.0)
    }

    /// Pieces of `[a,b]` not covered (open gaps reported as closed intervals).
    pub fn gaps_in(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut cur = a;
        for &(x, y) in &self.parts {
            if y < cur {
                continue;
            }
            if x > b {
                break;
            }
            if x > cur {
                out.push((cur, x.min(b)));
            }
            cur = cur.max(y);
            if cur >= b {
                break;
            }
        }
        if cur < b {
            out.push((cur, b));
        }
        out
    }

    /// Largest uncovered gap length inside `[a,b]`.
    pub fn max_gap(&self, a: f64, b: f64) -> f64 {
        self.gaps_in(a, b)
            .iter()
            .map(|(x, y)| y - x)
            .fold(0.0, f64::max)
    }

    /// Every point of `self` lies within `tol` of `other`.
    pub fn is_subset_of(&self, other: &IntervalUnion, tol: f64) -> bool {
        let widened =
            IntervalUnion::from_intervals(other.parts.iter().map(|&(x, y)| (x - tol, y + tol)));
        self.parts.iter().all(|&(a, b)| {
            widened.gaps_in(a, b).iter().all(|(x, y)| y - x <= tol)
                && (a < b || widened.contains(a))
        })
    }
}
