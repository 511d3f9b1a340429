//! Greedy cover without enumerating the arrangement.
//!
//! The atomic boundaries are never listed. Each edge contributes two
//! implicitly sorted lists, rank selection cuts their union into about
//! `n^α` buckets, and one atomic midpoint per bucket stands in for the
//! bucket. Greedy on these representatives leaves gaps that hold few
//! atomic intervals, and those are enumerated directly for a second greedy
//! pass. Both passes are capped at `λK` rounds, and `K` doubles whenever
//! a cap is hit.

pub mod lists;
pub mod rank;

use std::time::Instant;

use crate::curve::PolygonalCurve;
use crate::error::Result;
use crate::frechet::TAU_GEOM;
use crate::interval::IntervalUnion;
use crate::sc::atomic::{dedup_tol, distinct_heights};
use crate::sc::{cover_a, finish, Molecule, Prepared, Solution, Stats};
use crate::simplify::Simplifier;

pub use lists::{edge_lists, EdgeList, Key};
pub use rank::{rank_select_coarsen, CoarsePartition, ImplicitSortedList, VecList};

/// The implicit lists of every edge: `lists[2e]` lower, `lists[2e+1]` upper.
pub struct ListIndex<'a> {
    pub lists: Vec<EdgeList<'a>>,
}

impl<'a> ListIndex<'a> {
    pub fn new(prep: &'a Prepared, heights: &'a [Vec<f64>]) -> Self {
        let lists = prep
            .edges
            .iter()
            .zip(heights)
            .enumerate()
            .flat_map(|(e, (o, h))| edge_lists(&o[0].row, h, e))
            .collect();
        ListIndex { lists }
    }

    pub fn heights(prep: &Prepared) -> Vec<Vec<f64>> {
        prep.edges.iter().map(|o| distinct_heights(&o[0].ext)).collect()
    }

    pub fn n_edges(&self) -> usize {
        self.lists.len() / 2
    }

    /// `Σ m`: list elements with multiplicity.
    pub fn total(&self) -> usize {
        self.lists.iter().map(|l| l.len()).sum()
    }

    /// Smallest boundary of any edge strictly right of `x` (beyond the tolerance).
    fn next_bound(&self, x: f64) -> f64 {
        self.lists
            .iter()
            .filter_map(|l| l.succ(x + 2.0 * TAU_GEOM))
            .fold(1.0, f64::min)
    }

    /// The molecule of edge `e` containing `x`.
    pub fn molecule_at(&self, e: usize, x: f64) -> Molecule {
        let pair = &self.lists[2 * e..2 * e + 2];
        let lo = pair.iter().filter_map(|l| l.pred(x)).fold(0.0, f64::max);
        let hi = pair.iter().filter_map(|l| l.succ(x)).fold(1.0, f64::min);
        Molecule { lo, hi }
    }

    /// Per edge, the molecules containing any of `xs`.
    pub fn molecules_at(&self, xs: &[f64]) -> Vec<Vec<Molecule>> {
        (0..self.n_edges())
            .map(|e| normalize(xs.iter().map(|&x| self.molecule_at(e, x)).collect()))
            .collect()
    }
}

fn normalize(mut m: Vec<Molecule>) -> Vec<Molecule> {
    m.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    m.dedup_by(|b, a| (b.lo - a.lo).abs() <= TAU_GEOM);
    m
}

/// Coarse intervals and one atomic midpoint inside each.
#[derive(Clone, Debug)]
pub struct AlphaCoarse {
    pub bounds: Vec<f64>,
    pub reps: Vec<f64>,
    pub partition: CoarsePartition<Key>,
}

/// Cuts the arrangement into at most `8·buckets` coarse intervals.
pub fn alpha_coarse(index: &ListIndex<'_>, buckets: usize) -> AlphaCoarse {
    let partition = rank_select_coarsen(&index.lists, buckets);
    let mut bounds: Vec<f64> = partition.boundaries.iter().map(|k| k.value).collect();
    bounds.push(0.0);
    bounds.push(1.0);
    dedup_tol(&mut bounds);
    let reps = bounds
        .windows(2)
        .map(|w| 0.5 * (w[0] + index.next_bound(w[0]).min(w[1])))
        .collect();
    AlphaCoarse { bounds, reps, partition }
}

/// Midpoints of the atomic intervals outside `covered`, and per edge the
/// molecules meeting those gaps.
pub fn uncovered_extract(index: &ListIndex<'_>, covered: &IntervalUnion) -> (Vec<f64>, Vec<Vec<Molecule>>) {
    let gaps = covered.gaps_in(0.0, 1.0);
    let mut pts = Vec::new();
    let mut mols = vec![Vec::new(); index.n_edges()];
    for &(a, b) in &gaps {
        let mut v = vec![a, b];
        for l in &index.lists {
            v.extend(l.values_in(a, b));
        }
        dedup_tol(&mut v);
        pts.extend(v.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        for (e, out) in mols.iter_mut().enumerate() {
            let pair = &index.lists[2 * e..2 * e + 2];
            let mut v: Vec<f64> = pair.iter().flat_map(|l| l.values_in(a, b)).collect();
            v.push(pair.iter().filter_map(|l| l.pred(a)).fold(0.0, f64::max));
            v.push(pair.iter().filter_map(|l| l.succ(b)).fold(1.0, f64::min));
            dedup_tol(&mut v);
            out.extend(v.windows(2).map(|w| Molecule { lo: w[0], hi: w[1] }));
        }
    }
    (pts, mols.into_iter().map(normalize).collect())
}

/// Round cap multiplier `λ = 48 ln|P| + 64`.
pub fn lambda(n: usize) -> f64 {
    48.0 * (n as f64).ln() + 64.0
}

/// Coarsening exponent for guess `k`, natural logs, clamped to `[0, 3]`.
pub fn alpha(n: usize, k: usize) -> f64 {
    let ln = (n.max(2) as f64).ln();
    (1.5 + (k as f64).ln() / (2.0 * ln) + ln.ln() / ln).clamp(0.0, 3.0)
}

pub fn solve_sc_fast(p: &PolygonalCurve, delta: f64, ell: usize) -> Result<Solution> {
    solve_sc_fast_with(p, delta, ell, Simplifier::Greedy)
}

pub fn solve_sc_fast_with(p: &PolygonalCurve, delta: f64, ell: usize, how: Simplifier) -> Result<Solution> {
    let t0 = Instant::now();
    let prep = Prepared::with_simplifier(p, delta, ell, how)?;
    let t_prep = t0.elapsed().as_secs_f64();
    solve_sc_fast_prepared(&prep, t_prep)
}

/// Doubling search over the size guess `K`, starting from 1.
pub fn solve_sc_fast_prepared(prep: &Prepared, t_prep: f64) -> Result<Solution> {
    let heights = ListIndex::heights(prep);
    let index = ListIndex::new(prep, &heights);
    let n = prep.p.len();
    let lam = lambda(n);
    let total = index.total().max(1);
    let mut k = 1usize;
    let mut mismatches = 0;
    let t1 = Instant::now();
    loop {
        let cap = (lam * k as f64).floor() as usize;
        let buckets = ((n as f64).powf(alpha(n, k)).ceil() as usize).clamp(1, total);
        let coarse = alpha_coarse(&index, buckets);
        let mols = index.molecules_at(&coarse.reps);
        let first = cover_a(prep, coarse.reps.clone(), &mols, Some(cap))?;
        mismatches += first.weight_mismatches;
        if !first.complete {
            log::debug!("K = {k}: coarse pass exceeded {cap} rounds");
            k *= 2;
            continue;
        }
        let (pts, mols) = uncovered_extract(&index, &first.covered);
        let n_pts = pts.len();
        let second = cover_a(prep, pts, &mols, Some(cap))?;
        mismatches += second.weight_mismatches;
        if !second.complete {
            log::debug!("K = {k}: gap pass exceeded {cap} rounds");
            k *= 2;
            continue;
        }
        log::debug!(
            "K = {k}: {} coarse intervals, {} gap points, {} + {} centers",
            coarse.reps.len(),
            n_pts,
            first.chosen.len(),
            second.chosen.len()
        );
        let mut chosen = first.chosen;
        chosen.extend(second.chosen);
        let stats = Stats {
            rounds: first.rounds + second.rounds,
            points: coarse.reps.len() + n_pts,
            final_k: Some(k),
            weight_mismatches: mismatches,
            timings: vec![("prepare".into(), t_prep), ("greedy".into(), t1.elapsed().as_secs_f64())],
            ..Stats::default()
        };
        return finish(prep, chosen, stats);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Point;
    use crate::sc::{compute_atomic, molecular_bounds, molecules_of};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn walk(rng: &mut ChaCha8Rng, n: usize) -> PolygonalCurve {
        let mut at = [0.0, 0.0];
        let mut pts = vec![Point(at.to_vec())];
        for _ in 0..n {
            at[0] += rng.gen_range(-1.0..1.5);
            at[1] += rng.gen_range(-1.0..1.0);
            pts.push(Point(at.to_vec()));
        }
        PolygonalCurve::new(pts).unwrap()
    }

    fn prep(seed: u64, n: usize) -> Prepared {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = walk(&mut rng, n);
        Prepared::with_simplifier(&p, rng.gen_range(0.2..0.8), 3, Simplifier::Greedy).unwrap()
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-9)
    }

    #[test]
    fn full_refinement_gives_every_atomic_interval() {
        for seed in 0..6 {
            let pr = prep(seed, 8);
            let h = ListIndex::heights(&pr);
            let idx = ListIndex::new(&pr, &h);
            let c = alpha_coarse(&idx, idx.total());
            let a = compute_atomic(&pr.fs);
            assert!(close(&c.bounds, &a.bounds));
            assert!(close(&c.reps, &a.midpoints()));
        }
    }

    #[test]
    fn one_bucket_gives_one_interval() {
        let pr = prep(1, 8);
        let h = ListIndex::heights(&pr);
        let idx = ListIndex::new(&pr, &h);
        let c = alpha_coarse(&idx, 1);
        assert!(c.reps.len() <= 2);
        let a = compute_atomic(&pr.fs);
        let mids = a.midpoints();
        for r in &c.reps {
            assert!(mids.iter().any(|m| (m - r).abs() <= 1e-9), "representative {r} is not an atomic midpoint");
        }
    }

    #[test]
    fn coarse_intervals_hold_few_atomic_intervals() {
        for seed in 10..16 {
            let pr = prep(seed, 10);
            let h = ListIndex::heights(&pr);
            let idx = ListIndex::new(&pr, &h);
            let k = (8f64).powf(1.5).ceil() as usize;
            let c = alpha_coarse(&idx, k);
            let a = compute_atomic(&pr.fs);
            let cap = 20.0 * idx.total() as f64 / k.min(idx.total()) as f64;
            assert!(c.bounds.len() <= 8 * k + 2);
            for w in c.bounds.windows(2) {
                let inside = a.bounds.iter().filter(|&&b| w[0] < b - 1e-9 && b + 1e-9 < w[1]).count();
                assert!((inside + 1) as f64 <= cap, "{inside} atomic intervals in one coarse interval");
            }
            let mids = a.midpoints();
            for r in &c.reps {
                assert!(mids.iter().any(|m| (m - r).abs() <= 1e-9));
            }
        }
    }

    #[test]
    fn molecules_at_match_the_explicit_ones() {
        let pr = prep(3, 9);
        let h = ListIndex::heights(&pr);
        let idx = ListIndex::new(&pr, &h);
        let mids = compute_atomic(&pr.fs).midpoints();
        let implicit = idx.molecules_at(&mids);
        for (e, o) in pr.edges.iter().enumerate() {
            let explicit = molecules_of(&molecular_bounds(&o[0].row, &h[e]));
            assert_eq!(implicit[e].len(), explicit.len());
            for (x, y) in implicit[e].iter().zip(&explicit) {
                assert!((x.lo - y.lo).abs() <= 1e-9 && (x.hi - y.hi).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn uncovered_extract_matches_set_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for seed in 20..30 {
            let pr = prep(seed, 9);
            let h = ListIndex::heights(&pr);
            let idx = ListIndex::new(&pr, &h);
            let a = compute_atomic(&pr.fs);
            let (all, _) = uncovered_extract(&idx, &IntervalUnion::new());
            assert!(close(&all, &a.midpoints()));
            let (none, m) = uncovered_extract(&idx, &IntervalUnion::from_intervals([(0.0, 1.0)]));
            assert!(none.is_empty() && m.iter().all(|v| v.is_empty()));
            // a union of random runs of atomic intervals
            let mut cov = IntervalUnion::new();
            for _ in 0..rng.gen_range(1..5) {
                let i = rng.gen_range(0..a.len());
                let j = rng.gen_range(i..a.len().min(i + 6)) + 1;
                cov.insert(a.bounds[i], a.bounds[j]);
            }
            let want: Vec<f64> = a.midpoints().into_iter().filter(|&x| !cov.contains(x)).collect();
            let (got, mols) = uncovered_extract(&idx, &cov);
            assert!(close(&got, &want), "{got:?} vs {want:?}");
            for (e, o) in pr.edges.iter().enumerate() {
                let explicit: Vec<Molecule> = molecules_of(&molecular_bounds(&o[0].row, &h[e]))
                    .into_iter()
                    .filter(|m| want.iter().any(|&x| m.lo < x && x < m.hi))
                    .collect();
                for m in &explicit {
                    assert!(
                        mols[e].iter().any(|g| (g.lo - m.lo).abs() <= 1e-9 && (g.hi - m.hi).abs() <= 1e-9),
                        "molecule {m:?} of edge {e} missing"
                    );
                }
            }
        }
    }

    #[test]
    fn parameters() {
        assert!((lambda(1) - 64.0).abs() < 1e-12);
        assert_eq!(alpha(1000, 1 << 40), 3.0);
        let a = alpha(100, 1);
        assert!(a > 1.5 && a < 2.0);
    }

    #[test]
    fn fast_cover_is_certified() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..12 {
            let n = rng.gen_range(4..14);
            let p = walk(&mut rng, n);
            let d = rng.gen_range(0.2..0.9);
            let fast = solve_sc_fast(&p, d, 3).unwrap();
            assert!(fast.verified);
            assert_eq!(fast.stats.weight_mismatches, 0);
            let k = fast.stats.final_k.unwrap();
            assert!(fast.centers.len() as f64 <= 2.0 * lambda(p.len()) * k as f64);
        }
    }

    #[test]
    fn one_segment_finishes_at_the_first_guess() {
        let p = PolygonalCurve::from_coords(&[&[0.0, 0.0], &[5.0, 1.0]]).unwrap();
        let sol = solve_sc_fast(&p, 0.3, 2).unwrap();
        assert_eq!(sol.stats.final_k, Some(1));
        assert!(sol.verified && sol.centers.len() <= 2);
    }
}
