//! Subtrajectory covering by greedy set cover over the candidate set.

pub mod atomic;
pub mod greedy;
pub mod solution;

use std::time::Instant;

use serde::Serialize;

use crate::approx::{build_ball_polytope, extremal_points, BallPolytope, ExtremalSet};
use crate::candidates::{build_sweep_sequences, enumerate_type1, Candidate, SweepSequence};
use crate::coverage::{compute_bad_windows, maintain, IntervalEvent, RowKeys};
use crate::curve::PolygonalCurve;
use crate::error::{Error, Result};
use crate::frechet::{reach_cover, FreeSpace, Row};
use crate::interval::IntervalUnion;
use crate::simplify::{simplify_with, Simplification, Simplifier};

pub use atomic::{compute_atomic, molecular_bounds, molecules_of, AtomicIntervals, Molecule};
pub use greedy::{cover_a, window_cover, Chosen, CoverOutcome};
pub use solution::SolutionIntervals;

/// Gap tolerance of the coverage certificate, in the global parameter of `P`.
pub const CERT_TOL: f64 = 1e-6;

/// One sweep-sequence with its heights and the `G̃ ∪ (L∖B)` events along it.
#[derive(Clone, Debug)]
pub struct SeqData {
    pub seq: SweepSequence,
    pub heights: Vec<(f64, f64)>,
    pub events: Vec<IntervalEvent>,
}

/// A row of the free space in one orientation with its sweep-sequences.
#[derive(Clone, Debug)]
pub struct Oriented {
    pub row: Row,
    pub ext: ExtremalSet,
    pub seqs: Vec<SeqData>,
}

impl Oriented {
    pub fn new(row: Row, ext: ExtremalSet) -> Result<Self> {
        let keys = RowKeys::new(&row);
        let mut seqs = Vec::new();
        for seq in build_sweep_sequences(&ext, row.is_mirrored())? {
            let heights: Vec<(f64, f64)> = seq.pairs.iter().map(|&(a, b)| (ext.y(a), ext.y(b))).collect();
            let bad = compute_bad_windows(&row, &heights);
            let events = maintain(&keys, &heights, &bad, |_, _| {});
            seqs.push(SeqData { seq, heights, events });
        }
        Ok(Oriented { row, ext, seqs })
    }

    /// The candidate at position `pos` of sequence `q`.
    pub fn candidate(&self, edge: usize, q: usize, pos: usize) -> Candidate {
        let (ya, yb) = self.seqs[q].heights[pos];
        Candidate::from_window(edge, ya, yb, self.row.is_mirrored())
    }

    pub fn cover_at(&self, q: usize, pos: usize) -> IntervalUnion {
        let sd = &self.seqs[q];
        window_cover(&self.row, &sd.heights, &sd.events, pos)
    }
}

/// Which free space of `S` and `P` the candidates are read from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Backend {
    /// exact free space at `4Δ`
    Exact,
    /// piecewise-linear free space between `4Δ` and `(4+ε)Δ`; polygon
    /// vertex heights join the extremal sets
    Approx { eps: f64 },
}

/// Everything the greedy loops share: `S`, the free space of `S` and `P`,
/// per-edge sweep data in both orientations, and the Type (I) coverages.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub p: PolygonalCurve,
    pub simp: Simplification,
    pub delta: f64,
    pub ell: usize,
    pub backend: Backend,
    /// outer radius of the free space: `4Δ`, or at most `(4+ε)Δ`
    pub radius: f64,
    pub fs: FreeSpace,
    /// `edges[e] = [forward, mirrored]`
    pub edges: Vec<[Oriented; 2]>,
    pub type1: Vec<(Candidate, IntervalUnion)>,
}

/// The polytope of the approximate backend: circumradius at most `1 + ε/4`,
/// so the free space at `4Δ` lies within `(4 + ε)Δ`.
pub fn approx_ball(eps: f64) -> Result<BallPolytope> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::OutOfRange(format!("ε must be positive and finite, got {eps}")));
    }
    let ball = build_ball_polytope((eps / 4.0).min(0.2))?;
    debug_assert!(ball.outer <= 1.0 + eps / 4.0);
    Ok(ball)
}

pub fn validate(p: &PolygonalCurve, delta: f64, ell: usize) -> Result<()> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::OutOfRange(format!("Δ must be positive and finite, got {delta}")));
    }
    if ell < 2 {
        return Err(Error::OutOfRange(format!("ℓ must be at least 2, got {ell}")));
    }
    if p.len() < 2 {
        return Err(Error::TooFewVertices(p.len()));
    }
    Ok(())
}

/// `Cov_P(S[s,t], 4Δ)` for a vertex-to-vertex candidate, read off the free space.
pub fn type1_coverage(fs: &FreeSpace, c: &Candidate) -> IntervalUnion {
    let Candidate::TypeI { start, end } = *c else {
        panic!("type1_coverage needs a Type (I) candidate");
    };
    let m = fs.ny() as f64;
    reach_cover(fs, start as f64 / m, end as f64 / m)
}

impl Prepared {
    pub fn new(p: &PolygonalCurve, delta: f64, ell: usize) -> Result<Self> {
        Self::with_simplifier(p, delta, ell, Simplifier::Greedy)
    }

    pub fn with_simplifier(p: &PolygonalCurve, delta: f64, ell: usize, how: Simplifier) -> Result<Self> {
        Self::build(p, delta, ell, how, Backend::Exact)
    }

    pub fn build(p: &PolygonalCurve, delta: f64, ell: usize, how: Simplifier, backend: Backend) -> Result<Self> {
        validate(p, delta, ell)?;
        let simp = simplify_with(p, delta, how)?;
        let (fs, radius, vertices) = match backend {
            Backend::Exact => (FreeSpace::exact(&simp.curve, p, 4.0 * delta), 4.0 * delta, false),
            Backend::Approx { eps } => {
                let ball = approx_ball(eps)?;
                (FreeSpace::approximate(&simp.curve, p, 4.0 * delta, &ball), 4.0 * delta * ball.outer, true)
            }
        };
        let mut edges = Vec::with_capacity(fs.ny());
        for e in 0..fs.ny() {
            let row = fs.row(e);
            let mir = row.mirror();
            let (ef, em) = (extremal_points(&row, vertices), extremal_points(&mir, vertices));
            edges.push([Oriented::new(row, ef)?, Oriented::new(mir, em)?]);
        }
        let type1 = enumerate_type1(simp.curve.len(), ell)
            .into_iter()
            .map(|c| {
                let cov = type1_coverage(&fs, &c);
                (c, cov)
            })
            .collect();
        Ok(Prepared {
            p: p.clone(),
            simp,
            delta,
            ell,
            backend,
            radius,
            fs,
            edges,
            type1,
        })
    }

    pub fn n_windows(&self) -> usize {
        self.edges
            .iter()
            .flat_map(|o| o.iter())
            .flat_map(|o| o.seqs.iter())
            .map(|s| s.heights.len())
            .sum()
    }

    /// Molecular intervals of every edge (from the forward orientation).
    pub fn all_molecules(&self) -> Vec<Vec<Molecule>> {
        self.edges
            .iter()
            .map(|o| {
                let h = atomic::distinct_heights(&o[0].ext);
                molecules_of(&molecular_bounds(&o[0].row, &h))
            })
            .collect()
    }

    /// Proxy coverage of any candidate, recomputed from the row state.
    pub fn proxy_of(&self, c: &Candidate) -> IntervalUnion {
        match *c {
            Candidate::TypeI { .. } => type1_coverage(&self.fs, c),
            Candidate::TypeII { edge, s, t, reversed } | Candidate::TypeIII { edge, s, t, reversed } => {
                let o = &self.edges[edge][reversed as usize];
                let (ya, yb) = if reversed { (1.0 - t, 1.0 - s) } else { (s, t) };
                let keys = RowKeys::new(&o.row);
                let st = crate::coverage::scratch_state(&o.row, &keys, ya, yb);
                crate::coverage::proxy_cov(&o.row, ya, yb, &st)
            }
        }
    }
}

/// A center curve of the output with its provenance.
#[derive(Clone, Debug, Serialize)]
pub struct Center {
    pub candidate: Candidate,
    pub curve: PolygonalCurve,
    /// proxy coverage used by the greedy selection
    pub proxy: IntervalUnion,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Stats {
    pub rounds: usize,
    pub points: usize,
    pub simplified_vertices: usize,
    pub type1_candidates: usize,
    pub sweep_windows: usize,
    /// final guess of the doubling loop (fast cover only)
    pub final_k: Option<usize>,
    pub weight_mismatches: usize,
    /// centers added because the exact certificate found a gap
    pub repairs: usize,
    pub timings: Vec<(String, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Solution {
    pub centers: Vec<Center>,
    pub radius: f64,
    /// `⋃ Cov_P(c, radius)` recomputed from the output curves alone
    pub coverage: IntervalUnion,
    pub verified: bool,
    pub stats: Stats,
}

/// `⋃_c Cov_P(c, radius)` from scratch: one free space per center.
pub fn verify_coverage(p: &PolygonalCurve, centers: &[PolygonalCurve], radius: f64) -> IntervalUnion {
    let mut u = IntervalUnion::new();
    for c in centers {
        let fs = FreeSpace::exact(c, p, radius);
        u = u.union(&reach_cover(&fs, 0.0, 1.0));
    }
    u
}

/// Does the union cover `[0,1]` up to gaps of `tol`?
pub fn covers_unit(u: &IntervalUnion, tol: f64) -> bool {
    IntervalUnion::from_intervals([(0.0, 1.0)]).is_subset_of(u, tol)
}

pub(crate) fn finish(prep: &Prepared, chosen: Vec<Chosen>, mut stats: Stats) -> Result<Solution> {
    let t = Instant::now();
    let mut centers = Vec::with_capacity(chosen.len());
    for ch in chosen {
        centers.push(Center {
            curve: ch.candidate.materialize(&prep.simp.curve)?,
            candidate: ch.candidate,
            proxy: ch.coverage,
        });
    }
    let curves: Vec<PolygonalCurve> = centers.iter().map(|c| c.curve.clone()).collect();
    let mut coverage = verify_coverage(&prep.p, &curves, prep.radius);
    if !covers_unit(&coverage, CERT_TOL) {
        stats.repairs = repair(prep, &mut centers, &mut coverage)?;
    }
    let verified = covers_unit(&coverage, CERT_TOL);
    stats.timings.push(("verify".into(), t.elapsed().as_secs_f64()));
    stats.simplified_vertices = prep.simp.curve.len();
    stats.type1_candidates = prep.type1.len();
    stats.sweep_windows = prep.n_windows();
    Ok(Solution {
        centers,
        radius: prep.radius,
        coverage,
        verified,
        stats,
    })
}

/// A window whose endpoint sits exactly `radius` from a vertex of `P` can
/// pass through a single free point in one rounding and not in another, so
/// its proxy may claim a piece the materialized curve misses. Such gaps are
/// closed greedily with vertex-to-vertex centers, judged by their exact
/// coverage. Single edges of `S` always suffice: they lie within `Δ` of `P`.
fn repair(prep: &Prepared, centers: &mut Vec<Center>, coverage: &mut IntervalUnion) -> Result<usize> {
    let mut pool = Vec::with_capacity(prep.type1.len());
    for (c, proxy) in &prep.type1 {
        let curve = c.materialize(&prep.simp.curve)?;
        let exact = reach_cover(&FreeSpace::exact(&curve, &prep.p, prep.radius), 0.0, 1.0);
        pool.push((c, proxy, curve, exact));
    }
    let mut added = 0;
    while !covers_unit(coverage, CERT_TOL) {
        let gaps: Vec<(f64, f64)> = coverage.gaps_in(0.0, 1.0).into_iter().filter(|(a, b)| b - a > CERT_TOL).collect();
        let gain = |u: &IntervalUnion| gaps.iter().map(|&(a, b)| (b - a) - u.uncovered_in(a, b)).sum::<f64>();
        let best = pool.iter().map(|e| (gain(&e.3), e)).filter(|(g, _)| *g > 0.0).max_by(|x, y| x.0.total_cmp(&y.0));
        let Some((_, (c, proxy, curve, exact))) = best else { break };
        log::warn!("proxy coverage missed {gaps:?} at the exact radius; adding {c:?}");
        *coverage = coverage.union(exact);
        centers.push(Center {
            candidate: **c,
            curve: curve.clone(),
            proxy: (*proxy).clone(),
        });
        added += 1;
    }
    Ok(added)
}

/// Greedy cover of all atomic midpoints. Output covers `P` at `4Δ`.
pub fn solve_sc(p: &PolygonalCurve, delta: f64, ell: usize) -> Result<Solution> {
    solve_sc_with(p, delta, ell, Simplifier::Greedy)
}

pub fn solve_sc_with(p: &PolygonalCurve, delta: f64, ell: usize, how: Simplifier) -> Result<Solution> {
    let t0 = Instant::now();
    let prep = Prepared::with_simplifier(p, delta, ell, how)?;
    let t_prep = t0.elapsed().as_secs_f64();
    solve_sc_prepared(&prep, t_prep)
}

pub fn solve_sc_prepared(prep: &Prepared, t_prep: f64) -> Result<Solution> {
    let t1 = Instant::now();
    let atomic = compute_atomic(&prep.fs);
    let molecules = prep.all_molecules();
    let t_atomic = t1.elapsed().as_secs_f64();
    let t2 = Instant::now();
    let out = cover_a(prep, atomic.midpoints(), &molecules, None)?;
    let stats = Stats {
        rounds: out.rounds,
        points: atomic.len(),
        weight_mismatches: out.weight_mismatches,
        timings: vec![
            ("prepare".into(), t_prep),
            ("atomic".into(), t_atomic),
            ("greedy".into(), t2.elapsed().as_secs_f64()),
        ],
        ..Stats::default()
    };
    finish(prep, out.chosen, stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Point;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tangent_window_is_repaired() {
        // a Type (III) window ends exactly 4Δ from P's sixth vertex; its proxy
        // passes the single free point there, the exact free space does not
        let p = PolygonalCurve::from_coords(&[
            &[0.0, 0.0],
            &[-0.46911866873540065, 0.9369378202298639],
            &[-1.2028863882375267, 0.7385234593221992],
            &[-1.5913741295020085, 0.37678006403132125],
            &[-0.39319810259928034, 0.23660449467351263],
            &[0.6021150944836033, 0.3544736174263461],
            &[0.5124735138984678, 0.10787270518501701],
            &[-0.28915594822384594, -0.12447621224662386],
            &[-0.1807671914015221, -0.8091683297810657],
            &[-0.5957658458964586, -1.6102145374506929],
            &[-0.4988080178480604, -2.3472349158442287],
            &[-1.2189606911252813, -2.242079934832909],
            &[-2.189232838047822, -1.693376177660061],
            &[-1.1497082098474647, -1.4093553006042505],
            &[-1.1011920380445046, -1.2047124469437263],
        ])
        .unwrap();
        let sol = solve_sc(&p, 0.09469656758901661, 2).unwrap();
        assert!(sol.verified);
        assert!(sol.stats.repairs >= 1);
        assert!(matches!(sol.centers.last().unwrap().candidate, Candidate::TypeI { .. }));
    }

    #[test]
    fn single_segment_needs_one_center() {
        let p = PolygonalCurve::from_coords(&[&[0.0, 0.0], &[3.0, 1.0]]).unwrap();
        let sol = solve_sc(&p, 0.3, 2).unwrap();
        assert_eq!(sol.centers.len(), 1);
        assert!(sol.verified);
    }

    #[test]
    fn rejects_bad_parameters() {
        let p = PolygonalCurve::from_coords(&[&[0.0, 0.0], &[3.0, 1.0]]).unwrap();
        assert!(solve_sc(&p, 0.0, 2).is_err());
        assert!(solve_sc(&p, 1.0, 1).is_err());
    }

    #[test]
    fn corridor_traversed_twice() {
        // out along y = 0 and back along y = 0.1
        let p = PolygonalCurve::from_coords(&[
            &[0.0, 0.0],
            &[2.0, 0.0],
            &[4.0, 0.0],
            &[4.0, 0.1],
            &[2.0, 0.1],
            &[0.0, 0.1],
        ])
        .unwrap();
        let sol = solve_sc(&p, 0.1, 2).unwrap();
        assert!(sol.verified);
        assert!(sol.centers.len() <= 3, "{} centers", sol.centers.len());
    }

    #[test]
    fn random_instances_are_certified() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..20 {
            let n = rng.gen_range(6..=16);
            let mut pts = vec![Point(vec![0.0, 0.0])];
            for _ in 1..n {
                let l = pts.last().unwrap().0.clone();
                pts.push(Point(vec![l[0] + rng.gen_range(-1.0..1.5), l[1] + rng.gen_range(-1.0..1.0)]));
            }
            let p = PolygonalCurve::new(pts).unwrap();
            let sol = solve_sc(&p, rng.gen_range(0.1..0.6), rng.gen_range(2..=5)).unwrap();
            assert!(sol.verified, "gaps {:?}", sol.coverage.gaps_in(0.0, 1.0));
            assert_eq!(sol.stats.weight_mismatches, 0);
        }
    }
}
