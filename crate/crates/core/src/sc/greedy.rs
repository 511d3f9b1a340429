//! The greedy loop: repeatedly add the candidate covering the most remaining
//! points.
//!
//! Type (I) weights are recounted every round against the solution
//! structure. Weights of all sweep windows are kept in arrays and lowered by
//! the weight of the newly covered points, which a batch point query over the
//! touched molecular intervals delivers for a whole sequence at once.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::candidates::Candidate;
use crate::coverage::state::{l_hat, r_hat};
use crate::coverage::{batch_point_query, IntervalEvent, PairKind, WeightedPoints};
use crate::error::{Error, Result};
use crate::frechet::Row;
use crate::interval::IntervalUnion;
use crate::sc::atomic::Molecule;
use crate::sc::solution::SolutionIntervals;
use crate::sc::Prepared;

/// `Ĉov` at position `pos` of a sequence, from the pairs active there.
pub fn window_cover(row: &Row, heights: &[(f64, f64)], events: &[IntervalEvent], pos: usize) -> IntervalUnion {
    let (s, t) = heights[pos];
    IntervalUnion::from_intervals(events.iter().filter(|e| e.first <= pos && pos <= e.last).map(|e| match e.kind {
        PairKind::Local => (row.l(e.i, s), row.r(e.i, t)),
        PairKind::Global => (l_hat(row, e.i, s, e.bad_i), r_hat(row, e.j, t, e.bad_j)),
    }))
}

#[derive(Clone, Debug)]
pub struct Chosen {
    pub candidate: Candidate,
    pub coverage: IntervalUnion,
    /// remaining points covered when it was picked
    pub gain: u64,
}

#[derive(Clone, Debug)]
pub struct CoverOutcome {
    pub chosen: Vec<Chosen>,
    /// false when the round cap stopped the loop
    pub complete: bool,
    pub rounds: usize,
    /// rounds whose stored window weight disagreed with the recount
    pub weight_mismatches: usize,
    pub covered: IntervalUnion,
}

#[derive(Clone, Copy, Debug)]
enum Source {
    Type1(usize),
    Window { e: usize, o: usize, q: usize, pos: usize },
}

fn better(gain: u64, cand: &Candidate, best: &Option<(u64, Candidate, Source)>) -> bool {
    match best {
        None => true,
        Some((g, c, _)) => match gain.cmp(g) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => cand.selection_cmp(c) == Ordering::Less,
        },
    }
}

/// Covers `points` with candidates of `prep`. `molecules[e]` are the
/// molecular intervals of edge `e` (sorted, disjoint); only those holding a
/// point take part. Stops early after `cap` rounds.
pub fn cover_a(prep: &Prepared, points: Vec<f64>, molecules: &[Vec<Molecule>], cap: Option<usize>) -> Result<CoverOutcome> {
    let mut sol = SolutionIntervals::new(points);
    let ne = prep.edges.len();
    // W_e with the weights w_A(m) ≠ 0
    let mut we: Vec<BTreeMap<usize, u64>> = molecules
        .iter()
        .map(|ms| {
            ms.iter()
                .enumerate()
                .filter_map(|(k, m)| {
                    let w = sol.residual_count(m.lo, m.hi);
                    (w > 0).then_some((k, w))
                })
                .collect()
        })
        .collect();
    let mut cw: Vec<Vec<Vec<i64>>> = Vec::with_capacity(2 * ne);
    for e in 0..ne {
        let q = WeightedPoints::new(we[e].iter().map(|(&k, &w)| (molecules[e][k].mid(), w)).collect());
        for o in &prep.edges[e] {
            cw.push(
                o.seqs
                    .iter()
                    .map(|sd| {
                        batch_point_query(&o.row, &sd.heights, &sd.events, &q)
                            .into_iter()
                            .map(|x| x as i64)
                            .collect()
                    })
                    .collect(),
            );
        }
    }
    let mut chosen = Vec::new();
    let mut mismatches = 0;
    while sol.remaining() > 0 {
        if cap.is_some_and(|c| chosen.len() >= c) {
            return Ok(CoverOutcome {
                rounds: chosen.len(),
                chosen,
                complete: false,
                weight_mismatches: mismatches,
                covered: sol.covered().clone(),
            });
        }
        let mut best: Option<(u64, Candidate, Source)> = None;
        for (k, (c, cov)) in prep.type1.iter().enumerate() {
            let g = sol.residual_in(cov);
            if better(g, c, &best) {
                best = Some((g, *c, Source::Type1(k)));
            }
        }
        for e in 0..ne {
            for o in 0..2 {
                let or = &prep.edges[e][o];
                for (q, ws) in cw[2 * e + o].iter().enumerate() {
                    let mut top: Option<(u64, Candidate, Source)> = None;
                    for (pos, &w) in ws.iter().enumerate() {
                        let g = w.max(0) as u64;
                        // cheap pre-filter before building the candidate
                        if best.as_ref().is_some_and(|b| g < b.0) || top.as_ref().is_some_and(|b| g < b.0) {
                            continue;
                        }
                        let c = or.candidate(e, q, pos);
                        if better(g, &c, &top) {
                            top = Some((g, c, Source::Window { e, o, q, pos }));
                        }
                    }
                    if let Some((g, c, s)) = top {
                        if better(g, &c, &best) {
                            best = Some((g, c, s));
                        }
                    }
                }
            }
        }
        let Some((gain, cand, src)) = best else {
            return Err(Error::Uncoverable("no candidates".into()));
        };
        if gain == 0 {
            return Err(Error::Uncoverable(format!("{} points outside every candidate", sol.remaining())));
        }
        let coverage = match src {
            Source::Type1(k) => prep.type1[k].1.clone(),
            Source::Window { e, o, q, pos } => prep.edges[e][o].cover_at(q, pos),
        };
        // w_{A∩Ĉov(r)} per molecular interval, then w_A ← w_A − w_{A∩Ĉov(r)}
        for e in 0..ne {
            let ms = &molecules[e];
            let mut wp: BTreeMap<usize, u64> = BTreeMap::new();
            for &(a, b) in coverage.parts() {
                let k0 = ms.partition_point(|m| m.hi < a);
                let k1 = ms.partition_point(|m| m.lo <= b);
                for (&k, &w) in we[e].range(k0..k1) {
                    let m = ms[k];
                    let add = if a <= m.lo && m.hi <= b {
                        w
                    } else {
                        sol.residual_count(m.lo.max(a), m.hi.min(b))
                    };
                    *wp.entry(k).or_default() += add;
                }
            }
            let mut pts = Vec::new();
            for (k, w) in wp {
                if w == 0 {
                    continue;
                }
                let cur = we[e].get_mut(&k).expect("present");
                *cur -= w.min(*cur);
                if *cur == 0 {
                    we[e].remove(&k);
                }
                pts.push((ms[k].mid(), w));
            }
            if pts.is_empty() {
                continue;
            }
            let q = WeightedPoints::new(pts);
            for o in 0..2 {
                let or = &prep.edges[e][o];
                for (qi, sd) in or.seqs.iter().enumerate() {
                    let d = batch_point_query(&or.row, &sd.heights, &sd.events, &q);
                    for (x, y) in cw[2 * e + o][qi].iter_mut().zip(d) {
                        *x -= y as i64;
                    }
                }
            }
        }
        let newly = sol.cover(&coverage);
        if newly.len() as u64 != gain {
            mismatches += 1;
            log::warn!("round {}: stored weight {} but {} points covered", chosen.len(), gain, newly.len());
        }
        log::debug!("round {}: {:?} covers {} points", chosen.len(), cand, newly.len());
        chosen.push(Chosen {
            candidate: cand,
            coverage,
            gain: newly.len() as u64,
        });
    }
    Ok(CoverOutcome {
        rounds: chosen.len(),
        chosen,
        complete: true,
        weight_mismatches: mismatches,
        covered: sol.covered().clone(),
    })
}
