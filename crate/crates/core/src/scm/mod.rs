//! Subtrajectory coverage maximization: `k` greedy rounds over the candidate
//! set, each adding the candidate whose proxy coverage adds the most measure
//! to the covered set `I_R`.
//!
//! Type (I) gains are read off their stored coverage intervals. Sweep windows
//! are evaluated a whole sequence at a time by replaying coefficient streams
//! that are patched only where a round changed `I_R`.

pub mod coeff;
pub mod measure;

use std::time::Instant;

use serde::Serialize;

use crate::candidates::Candidate;
use crate::curve::PolygonalCurve;
use crate::error::{Error, Result};
use crate::frechet::{reach_cover, FreeSpace};
use crate::interval::IntervalUnion;
use crate::sc::{approx_ball, verify_coverage, Backend, Center, Prepared};
use crate::simplify::Simplifier;

pub use coeff::{event_coeffs, l_term, CoeffEvents, EventCoeffs, RowVertices, Run, SeqCoeffs};
pub use measure::{MeasureSolution, Region};

pub const DEFAULT_EPS: f64 = 0.1;

/// Containment tolerance of the output checks, in the global parameter of `P`.
pub const VERIFY_TOL: f64 = 1e-6;

/// A candidate with its proxy coverage and the measure it adds to `I_R`.
#[derive(Clone, Debug, Serialize)]
pub struct Pick {
    pub candidate: Candidate,
    pub gain: f64,
    pub coverage: IntervalUnion,
}

/// Where a window lives: edge, orientation, sequence, position.
type WindowAt = (usize, usize, usize, usize);

/// The per-round state: `I_R` and the telescoping streams of every sequence.
pub struct ScmState<'a> {
    prep: &'a Prepared,
    verts: Vec<[RowVertices; 2]>,
    /// `seqs[e][o][q]`
    seqs: Vec<[Vec<SeqCoeffs>; 2]>,
    pub sol: MeasureSolution,
}

impl<'a> ScmState<'a> {
    pub fn new(prep: &'a Prepared) -> Result<Self> {
        if prep.backend == Backend::Exact {
            return Err(Error::OutOfRange("coverage maximization needs the approximate backend".into()));
        }
        let sol = MeasureSolution::new();
        let mut verts = Vec::with_capacity(prep.edges.len());
        let mut seqs = Vec::with_capacity(prep.edges.len());
        for pair in &prep.edges {
            let v = [RowVertices::new(&pair[0].row)?, RowVertices::new(&pair[1].row)?];
            let s = [0, 1].map(|o| {
                let or = &pair[o];
                or.seqs
                    .iter()
                    .map(|sd| SeqCoeffs::build(&or.row, &v[o], &sd.heights, &sd.events, &sol))
                    .collect()
            });
            verts.push(v);
            seqs.push(s);
        }
        Ok(ScmState { prep, verts, seqs, sol })
    }

    /// Telescoped residual measure of every window of one sequence.
    pub fn window_values(&self, e: usize, o: usize, q: usize) -> Vec<f64> {
        self.seqs[e][o][q].replay(&self.prep.edges[e][o].seqs[q].heights)
    }

    /// Events whose pair shape the decomposition does not cover.
    pub fn third_case(&self) -> usize {
        self.seqs.iter().flat_map(|s| s.iter()).flat_map(|v| v.iter()).map(|c| c.third_case).sum()
    }

    /// Nonzero coefficient changes summed over all sequences.
    pub fn nonzero_coefficients(&self) -> usize {
        self.seqs.iter().flat_map(|s| s.iter()).flat_map(|v| v.iter()).map(|c| c.streams.nonzero()).sum()
    }

    /// The candidate adding the most measure; earlier candidates win ties.
    pub fn eval_all_residual_measures(&self) -> Option<Pick> {
        let mut best_t1: Option<(usize, f64)> = None;
        for (k, (_, cov)) in self.prep.type1.iter().enumerate() {
            let g = self.sol.residual_in(cov);
            if best_t1.is_none_or(|b| g > b.1) {
                best_t1 = Some((k, g));
            }
        }
        let mut best_w: Option<(WindowAt, f64)> = None;
        for (e, pair) in self.seqs.iter().enumerate() {
            for (o, seqs) in pair.iter().enumerate() {
                for q in 0..seqs.len() {
                    for (pos, v) in self.window_values(e, o, q).into_iter().enumerate() {
                        if best_w.is_none_or(|b| v > b.1) {
                            best_w = Some(((e, o, q, pos), v));
                        }
                    }
                }
            }
        }
        match (best_t1, best_w) {
            (Some((k, g)), w) if w.is_none_or(|w| g >= w.1) => {
                let (c, cov) = &self.prep.type1[k];
                Some(Pick {
                    candidate: *c,
                    gain: g,
                    coverage: cov.clone(),
                })
            }
            (_, Some(((e, o, q, pos), g))) => {
                let or = &self.prep.edges[e][o];
                Some(Pick {
                    candidate: or.candidate(e, q, pos),
                    gain: g,
                    coverage: or.cover_at(q, pos),
                })
            }
            _ => None,
        }
    }

    /// Adds `cov` to `I_R` and patches the streams; returns the number of
    /// stream positions that changed.
    pub fn insert(&mut self, cov: &IntervalUnion) -> usize {
        let fresh = self.sol.insert_union(cov);
        if fresh.is_empty() {
            return 0;
        }
        let n = self.prep.fs.nx();
        let nf = n as f64;
        // one cell of slack each side: a piece ending on a cell boundary can
        // change how the neighbour locates its boundary value
        let lo = fresh.iter().map(|q| (q.0 * nf).floor() as usize).min().unwrap_or(0).saturating_sub(1);
        let hi = fresh
            .iter()
            .map(|q| ((q.1 * nf).ceil() as usize).saturating_sub(1))
            .max()
            .unwrap_or(0);
        let cells = (lo, (hi + 1).min(n - 1));
        let mut changed = 0;
        for (e, pair) in self.seqs.iter_mut().enumerate() {
            for (o, seqs) in pair.iter_mut().enumerate() {
                let or = &self.prep.edges[e][o];
                for (q, c) in seqs.iter_mut().enumerate() {
                    let sd = &or.seqs[q];
                    changed += c.update_on_change(&or.row, &self.verts[e][o], &sd.heights, &sd.events, &self.sol, cells);
                    c.refresh_l_terms(&or.row, &sd.events, &self.sol);
                }
            }
        }
        changed
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ScmStats {
    pub rounds: usize,
    pub simplified_vertices: usize,
    pub type1_candidates: usize,
    pub sweep_windows: usize,
    /// nonzero coefficient changes before the first round
    pub initial_coefficients: usize,
    /// stream positions patched over all rounds
    pub changed_coefficients: usize,
    pub third_case: usize,
    pub timings: Vec<(String, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScmSolution {
    pub centers: Vec<Center>,
    pub k: usize,
    pub eps: f64,
    /// outer radius of the approximate free space, at most `(4+ε)Δ`
    pub radius: f64,
    /// measure added by each round
    pub gains: Vec<f64>,
    /// `‖Ĉov(R)‖`
    pub proxy_measure: f64,
    /// coverage of the output curves in the approximate free space
    pub approx_coverage: IntervalUnion,
    pub approx_measure: f64,
    /// coverage of the output curves at `radius` with exact distances
    pub coverage: IntervalUnion,
    pub exact_measure: f64,
    /// `Ĉov(R) ⊆ approximate coverage ⊆ exact coverage`, up to `VERIFY_TOL`
    pub verified: bool,
    pub stats: ScmStats,
}

/// Greedy coverage maximization with `k` centers at radius `(4+ε)Δ`.
pub fn solve_scm(p: &PolygonalCurve, delta: f64, ell: usize, k: usize, eps: f64) -> Result<ScmSolution> {
    if k == 0 {
        return Err(Error::ZeroK);
    }
    let t0 = Instant::now();
    let prep = Prepared::build(p, delta, ell, Simplifier::Greedy, Backend::Approx { eps })?;
    solve_scm_prepared(&prep, k, t0.elapsed().as_secs_f64())
}

pub fn solve_scm_prepared(prep: &Prepared, k: usize, t_prep: f64) -> Result<ScmSolution> {
    if k == 0 {
        return Err(Error::ZeroK);
    }
    let Backend::Approx { eps } = prep.backend else {
        return Err(Error::OutOfRange("coverage maximization needs the approximate backend".into()));
    };
    let t1 = Instant::now();
    let mut state = ScmState::new(prep)?;
    let t_coeff = t1.elapsed().as_secs_f64();
    let mut stats = ScmStats {
        initial_coefficients: state.nonzero_coefficients(),
        ..ScmStats::default()
    };
    let t2 = Instant::now();
    let mut picks = Vec::new();
    let mut gains = Vec::new();
    while picks.len() < k {
        let Some(pick) = state.eval_all_residual_measures() else { break };
        // nothing left to gain: further centers would only repeat coverage
        if pick.gain <= 0.0 {
            break;
        }
        stats.changed_coefficients += state.insert(&pick.coverage);
        gains.push(pick.gain);
        picks.push(pick);
    }
    stats.third_case = state.third_case();
    let t_greedy = t2.elapsed().as_secs_f64();

    let t3 = Instant::now();
    let mut centers = Vec::with_capacity(picks.len());
    for pk in picks {
        centers.push(Center {
            curve: pk.candidate.materialize(&prep.simp.curve)?,
            candidate: pk.candidate,
            proxy: pk.coverage,
        });
    }
    let curves: Vec<PolygonalCurve> = centers.iter().map(|c| c.curve.clone()).collect();
    let ball = approx_ball(eps)?;
    let mut approx_coverage = IntervalUnion::new();
    for c in &curves {
        let fs = FreeSpace::approximate(c, &prep.p, 4.0 * prep.delta, &ball);
        approx_coverage = approx_coverage.union(&reach_cover(&fs, 0.0, 1.0));
    }
    let coverage = verify_coverage(&prep.p, &curves, prep.radius);
    let proxy = state.sol.to_union();
    let verified = proxy.is_subset_of(&approx_coverage, VERIFY_TOL) && approx_coverage.is_subset_of(&coverage, VERIFY_TOL);

    stats.rounds = centers.len();
    stats.simplified_vertices = prep.simp.curve.len();
    stats.type1_candidates = prep.type1.len();
    stats.sweep_windows = prep.n_windows();
    stats.timings = vec![
        ("prepare".into(), t_prep),
        ("coefficients".into(), t_coeff),
        ("greedy".into(), t_greedy),
        ("verify".into(), t3.elapsed().as_secs_f64()),
    ];
    Ok(ScmSolution {
        centers,
        k,
        eps,
        radius: prep.radius,
        gains,
        proxy_measure: state.sol.measure(),
        approx_measure: approx_coverage.measure(),
        approx_coverage,
        exact_measure: coverage.measure(),
        coverage,
        verified,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Point;
    use crate::oracle::brute_best_k_measure;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_curve(rng: &mut ChaCha8Rng, n: usize) -> PolygonalCurve {
        let mut pts = vec![Point(vec![0.0, 0.0])];
        for _ in 1..n {
            let l = pts.last().unwrap().0.clone();
            pts.push(Point(vec![l[0] + rng.gen_range(-1.0..1.5), l[1] + rng.gen_range(-1.0..1.0)]));
        }
        PolygonalCurve::new(pts).unwrap()
    }

    fn prep(rng: &mut ChaCha8Rng, max_n: usize) -> Prepared {
        let n = rng.gen_range(3..=max_n);
        let p = random_curve(rng, n);
        let delta = rng.gen_range(0.1..0.5);
        Prepared::build(&p, delta, 3, Simplifier::Greedy, Backend::Approx { eps: DEFAULT_EPS }).unwrap()
    }

    /// Proxy coverage of every candidate: Type (I) then every window.
    fn all_footprints(prep: &Prepared) -> Vec<IntervalUnion> {
        let mut out: Vec<IntervalUnion> = prep.type1.iter().map(|(_, c)| c.clone()).collect();
        for pair in &prep.edges {
            for or in pair {
                for q in 0..or.seqs.len() {
                    for pos in 0..or.seqs[q].heights.len() {
                        out.push(or.cover_at(q, pos));
                    }
                }
            }
        }
        out
    }

    fn direct_gain(u: &IntervalUnion, sol: &MeasureSolution) -> f64 {
        let r = sol.to_union();
        u.union(&r).measure() - r.measure()
    }

    #[test]
    fn rejects_bad_input() {
        let p = PolygonalCurve::from_coords(&[&[0.0, 0.0], &[3.0, 1.0]]).unwrap();
        assert_eq!(solve_scm(&p, 0.3, 2, 0, 0.1).unwrap_err(), Error::ZeroK);
        assert!(solve_scm(&p, 0.3, 2, 1, 0.0).is_err());
        let exact = Prepared::new(&p, 0.3, 2).unwrap();
        assert!(ScmState::new(&exact).is_err());
    }

    #[test]
    fn empty_solution_window_is_its_free_slice() {
        // P is one segment and S = P: the window (0, 1) covers everything
        let p = PolygonalCurve::from_coords(&[&[0.0, 0.0], &[3.0, 0.0]]).unwrap();
        let prep = Prepared::build(&p, 0.2, 2, Simplifier::Greedy, Backend::Approx { eps: 0.1 }).unwrap();
        let st = ScmState::new(&prep).unwrap();
        let best = st.eval_all_residual_measures().unwrap();
        assert!((best.gain - 1.0).abs() < 1e-9);
    }

    #[test]
    fn full_solution_zeroes_every_window() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let prep = prep(&mut rng, 8);
        let mut st = ScmState::new(&prep).unwrap();
        st.insert(&IntervalUnion::from_intervals([(0.0, 1.0)]));
        for e in 0..prep.edges.len() {
            for o in 0..2 {
                for q in 0..prep.edges[e][o].seqs.len() {
                    assert!(st.window_values(e, o, q).iter().all(|v| v.abs() < 1e-12));
                }
            }
        }
        assert_eq!(st.eval_all_residual_measures().map(|p| p.gain.abs() < 1e-12), Some(true));
    }

    #[test]
    fn telescoped_values_track_direct_measurement_across_rounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..6 {
            let prep = prep(&mut rng, 8);
            let mut st = ScmState::new(&prep).unwrap();
            for _round in 0..3 {
                for (e, pair) in prep.edges.iter().enumerate() {
                    for (o, or) in pair.iter().enumerate() {
                        for q in 0..or.seqs.len() {
                            for (pos, v) in st.window_values(e, o, q).into_iter().enumerate() {
                                let want = direct_gain(&or.cover_at(q, pos), &st.sol);
                                assert!((v - want).abs() <= 1e-9, "telescoped {v} direct {want}");
                            }
                        }
                    }
                }
                let Some(p) = st.eval_all_residual_measures() else { break };
                st.insert(&p.coverage);
            }
            assert_eq!(st.third_case(), 0);
        }
    }

    #[test]
    fn single_round_is_the_best_single_candidate() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..8 {
            let prep = prep(&mut rng, 8);
            let sol = solve_scm_prepared(&prep, 1, 0.0).unwrap();
            let best = all_footprints(&prep).iter().map(|u| u.measure()).fold(0.0, f64::max);
            assert!((sol.proxy_measure - best).abs() <= 1e-9, "{} vs {best}", sol.proxy_measure);
        }
    }

    #[test]
    fn many_rounds_exhaust_the_candidate_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..4 {
            let prep = prep(&mut rng, 6);
            let all = all_footprints(&prep).iter().fold(IntervalUnion::new(), |a, u| a.union(u));
            let sol = solve_scm_prepared(&prep, 10_000, 0.0).unwrap();
            assert!((sol.proxy_measure - all.measure()).abs() <= 1e-9);
            assert!(sol.gains.windows(2).all(|w| w[0] >= w[1] - 1e-9), "gains {:?}", sol.gains);
        }
    }

    #[test]
    fn greedy_is_within_one_minus_one_over_e_of_best_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let mut tested = 0;
        for _ in 0..10 {
            let prep = prep(&mut rng, 6);
            let foot = crate::oracle::reduce_footprints(all_footprints(&prep));
            if foot.len() > 60 {
                continue;
            }
            let sol = solve_scm_prepared(&prep, 2, 0.0).unwrap();
            let opt = brute_best_k_measure(&foot, 2).unwrap();
            assert!(sol.proxy_measure >= (1.0 - (-1.0f64).exp()) * opt - 1e-9);
            tested += 1;
        }
        assert!(tested >= 3);
    }

    #[test]
    fn output_is_verified_at_the_outer_radius() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..6 {
            let n = rng.gen_range(4..=10);
            let p = random_curve(&mut rng, n);
            let delta = rng.gen_range(0.1..0.5);
            let sol = solve_scm(&p, delta, 3, 2, DEFAULT_EPS).unwrap();
            assert!(sol.verified);
            assert!(4.0 * delta <= sol.radius && sol.radius <= (4.0 + DEFAULT_EPS) * delta);
            assert!(sol.exact_measure + VERIFY_TOL >= sol.approx_measure);
            assert!(sol.approx_measure + VERIFY_TOL >= sol.proxy_measure);
            assert!(sol.gains.iter().all(|&g| g > 0.0));
        }
    }
}
