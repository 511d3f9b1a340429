//! The point set still to be covered, with O(log n) range counts.

use std::collections::BTreeSet;

use crate::interval::IntervalUnion;

/// Fenwick tree over point indices holding 1 for every uncovered point.
#[derive(Clone, Debug)]
struct Fenwick {
    t: Vec<i64>,
}

impl Fenwick {
    fn ones(n: usize) -> Self {
        let mut t = vec![0i64; n + 1];
        for i in 1..=n {
            t[i] += 1;
            let j = i + (i & i.wrapping_neg());
            if j <= n {
                t[j] += t[i];
            }
        }
        Fenwick { t }
    }

    fn add(&mut self, i: usize, d: i64) {
        let mut i = i + 1;
        while i < self.t.len() {
            self.t[i] += d;
            i += i & i.wrapping_neg();
        }
    }

    /// Sum over indices `< i`.
    fn prefix(&self, i: usize) -> i64 {
        let mut i = i;
        let mut s = 0;
        while i > 0 {
            s += self.t[i];
            i -= i & i.wrapping_neg();
        }
        s
    }
}

/// The covered region `I_R` together with the points of `A` it does not
/// contain yet.
#[derive(Clone, Debug)]
pub struct SolutionIntervals {
    pts: Vec<f64>,
    live: Fenwick,
    remaining: BTreeSet<usize>,
    covered: IntervalUnion,
}

impl SolutionIntervals {
    pub fn new(mut points: Vec<f64>) -> Self {
        points.sort_by(f64::total_cmp);
        points.dedup();
        let n = points.len();
        SolutionIntervals {
            pts: points,
            live: Fenwick::ones(n),
            remaining: (0..n).collect(),
            covered: IntervalUnion::new(),
        }
    }

    pub fn total(&self) -> usize {
        self.pts.len()
    }

    pub fn remaining(&self) -> usize {
        self.remaining.len()
    }

    pub fn remaining_points(&self) -> impl Iterator<Item = f64> + '_ {
        self.remaining.iter().map(|&i| self.pts[i])
    }

    pub fn covered(&self) -> &IntervalUnion {
        &self.covered
    }

    fn range(&self, l: f64, r: f64) -> (usize, usize) {
        let a = self.pts.partition_point(|&x| x < l);
        let b = self.pts.partition_point(|&x| x <= r);
        (a, b.max(a))
    }

    /// Uncovered points of `A` in `[l, r]`.
    pub fn residual_count(&self, l: f64, r: f64) -> u64 {
        let (a, b) = self.range(l, r);
        (self.live.prefix(b) - self.live.prefix(a)) as u64
    }

    /// Uncovered points of `A` inside a disjoint union.
    pub fn residual_in(&self, cov: &IntervalUnion) -> u64 {
        cov.parts().iter().map(|&(a, b)| self.residual_count(a, b)).sum()
    }

    /// Adds `cov` to `I_R`; returns the points it newly covers (`A′`).
    pub fn cover(&mut self, cov: &IntervalUnion) -> Vec<f64> {
        let mut out = Vec::new();
        for &(l, r) in cov.parts() {
            let (a, b) = self.range(l, r);
            let hit: Vec<usize> = self.remaining.range(a..b).copied().collect();
            for i in hit {
                self.remaining.remove(&i);
                self.live.add(i, -1);
                out.push(self.pts[i]);
            }
        }
        self.covered = self.covered.union(cov);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_solution_counts_everything() {
        let s = SolutionIntervals::new(vec![0.1, 0.5, 0.9]);
        assert_eq!(s.residual_count(0.0, 1.0), 3);
        assert_eq!(s.residual_count(0.2, 0.5), 1);
    }

    #[test]
    fn full_solution_counts_nothing() {
        let mut s = SolutionIntervals::new(vec![0.1, 0.5, 0.9]);
        let got = s.cover(&IntervalUnion::from_intervals([(0.0, 1.0)]));
        assert_eq!(got.len(), 3);
        assert_eq!(s.residual_count(0.0, 1.0), 0);
        assert_eq!(s.remaining(), 0);
    }

    proptest! {
        #[test]
        fn matches_linear_scan(
            pts in prop::collection::vec(0.0f64..1.0, 0..60),
            covers in prop::collection::vec((0.0f64..1.0, 0.0f64..0.3), 0..6),
            queries in prop::collection::vec((0.0f64..1.0, 0.0f64..0.5), 1..10),
        ) {
            let mut sol = SolutionIntervals::new(pts.clone());
            let mut pts = pts;
            pts.sort_by(f64::total_cmp);
            pts.dedup();
            let mut cov = IntervalUnion::new();
            for (a, w) in covers {
                let c = IntervalUnion::from_intervals([(a, (a + w).min(1.0))]);
                let expect = pts.iter().filter(|&&x| c.contains(x) && !cov.contains(x)).count();
                prop_assert_eq!(sol.cover(&c).len(), expect);
                cov = cov.union(&c);
            }
            for (l, w) in queries {
                let r = l + w;
                let expect = pts.iter().filter(|&&x| l <= x && x <= r && !cov.contains(x)).count() as u64;
                prop_assert_eq!(sol.residual_count(l, r), expect);
            }
        }
    }
}
