//! Residual measures of all windows of one sweep-sequence by telescoping.
//!
//! A pair `(i, j)` active at window `(s, t)` contributes the interval
//! `[f(s), g(t)]` with `f(s)` in cell `i` and `g(t)` in cell `j`. Its part
//! outside `I_R` splits into three terms:
//!
//! * `A(s) = ‖[f(s), x_{i+1}] ∖ I_R‖`, depending on `s` only,
//! * `B(t) = ‖[x_j, g(t)] ∖ I_R‖`, depending on `t` only,
//! * `L = ‖[x_{i+1}, x_j] ∖ I_R‖` if `i < j`, and `−‖[x_i, x_{i+1}] ∖ I_R‖`
//!   if `i = j`, depending on neither.
//!
//! On polygonal cells `f` is affine between consecutive vertex heights, so
//! `A` is affine in `s` as long as `s` stays between two vertex heights and
//! `f(s)` stays in one gap or one part of `I_R`. The same holds for `B`. Each
//! such run is a pair `(m, b)`; along the sequence we store the changes of
//! `m` and `b` where runs start and end, and every window value is
//! `m₋·s + b₋ + m₊·t + b₊ + L` with prefix-summed coefficients.

use crate::approx::vertex_heights;
use crate::coverage::{IntervalEvent, PairKind};
use crate::error::{Error, Result};
use crate::frechet::Row;
use crate::scm::measure::{MeasureSolution, Region};

/// `m·y + b` from position `pos` until the next run of the same side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Run {
    pub pos: usize,
    pub m: f64,
    pub b: f64,
}

/// Runs of the start-side and end-side terms of one event.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EventCoeffs {
    pub start: Vec<Run>,
    pub end: Vec<Run>,
}

/// Per-position changes of the four coefficients: slope and offset of the
/// start side (`−`) and of the end side (`+`). One extra slot past the end.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CoeffEvents {
    pub m_minus: Vec<f64>,
    pub b_minus: Vec<f64>,
    pub m_plus: Vec<f64>,
    pub b_plus: Vec<f64>,
}

impl CoeffEvents {
    fn zeros(len: usize) -> Self {
        CoeffEvents {
            m_minus: vec![0.0; len + 1],
            b_minus: vec![0.0; len + 1],
            m_plus: vec![0.0; len + 1],
            b_plus: vec![0.0; len + 1],
        }
    }

    pub fn nonzero(&self) -> usize {
        [&self.m_minus, &self.b_minus, &self.m_plus, &self.b_plus]
            .iter()
            .map(|v| v.iter().filter(|&&x| x != 0.0).count())
            .sum()
    }

    /// Positions where any of the four streams differ.
    pub fn diff_count(&self, o: &CoeffEvents) -> usize {
        (0..self.m_minus.len())
            .filter(|&k| {
                self.m_minus[k] != o.m_minus[k]
                    || self.b_minus[k] != o.b_minus[k]
                    || self.m_plus[k] != o.m_plus[k]
                    || self.b_plus[k] != o.b_plus[k]
            })
            .count()
    }
}

/// Sorted distinct polygon vertex heights of every cell of a row.
#[derive(Clone, Debug)]
pub struct RowVertices(Vec<Vec<f64>>);

impl RowVertices {
    pub fn new(row: &Row) -> Result<Self> {
        let mut out = Vec::with_capacity(row.n());
        for i in 0..row.n() {
            let Some(f) = row.features(i) else {
                out.push(Vec::new());
                continue;
            };
            let Some(mut v) = vertex_heights(row, i) else {
                return Err(Error::OutOfRange("measure coefficients need polygonal cells".into()));
            };
            v.push(f.bottom.y);
            v.push(f.top.y);
            for s in [f.left, f.right] {
                v.extend([s.0, s.1]);
            }
            v.retain(|&y| f.bottom.y <= y && y <= f.top.y);
            v.sort_by(f64::total_cmp);
            v.dedup();
            out.push(v);
        }
        Ok(RowVertices(out))
    }

    pub fn cell(&self, i: usize) -> &[f64] {
        &self.0[i]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Side {
    /// `‖[f(y), x_{c+1}] ∖ I_R‖`
    Start,
    /// `‖[x_c, f(y)] ∖ I_R‖`
    End,
}

fn run_for(side: Side, reg: Region, alpha: f64, beta: f64, lo: f64, hi: f64, sol: &MeasureSolution) -> (f64, f64) {
    match (side, reg) {
        (Side::Start, Region::Covered { hi: c1, .. }) => (0.0, sol.residual_measure(c1.min(hi), hi)),
        (Side::Start, Region::Gap { hi: g1, .. }) => {
            let g = g1.min(hi);
            (-alpha, g - beta + sol.residual_measure(g, hi))
        }
        (Side::End, Region::Covered { lo: c0, .. }) => (0.0, sol.residual_measure(lo, c0.max(lo))),
        (Side::End, Region::Gap { lo: g0, .. }) => {
            let g = g0.max(lo);
            (alpha, beta - g + sol.residual_measure(lo, g))
        }
    }
}

/// Runs of one side over `ys = heights[first..=last]`, which is non-decreasing.
#[allow(clippy::too_many_arguments)]
fn side_runs(
    row: &Row,
    verts: &RowVertices,
    cell: usize,
    use_r: bool,
    side: Side,
    ys: &[f64],
    first: usize,
    sol: &MeasureSolution,
) -> Vec<Run> {
    let f = |y: f64| {
        let (l, r) = row.lr(cell, y);
        if use_r {
            r
        } else {
            l
        }
    };
    let (lo, hi) = (row.x_at(cell), row.x_at(cell + 1));
    let vh = verts.cell(cell);
    let code = |j: usize| sol.locate(f(ys[j])).code();
    let mut runs: Vec<Run> = Vec::new();
    let mut k = 0;
    while k < ys.len() {
        let y = ys[k];
        // the affine piece [ya, yb] of f holding y
        let (ya, yb) = if vh.len() < 2 {
            (y, y)
        } else {
            let ia = vh.partition_point(|&v| v <= y).saturating_sub(1).min(vh.len() - 2);
            (vh[ia], vh[ia + 1])
        };
        let kend = (k + ys[k..].partition_point(|&v| v <= yb)).max(k + 1) - 1;
        let (alpha, beta) = if yb > ya {
            let (fa, fb) = (f(ya), f(yb));
            let alpha = (fb - fa) / (yb - ya);
            (alpha, fa - alpha * ya)
        } else {
            (0.0, f(y))
        };
        let mut j = k;
        while j <= kend {
            let c = code(j);
            let (mut a, mut b) = (j, kend);
            while a < b {
                let mid = (a + b).div_ceil(2);
                if code(mid) == c {
                    a = mid;
                } else {
                    b = mid - 1;
                }
            }
            let (m, off) = run_for(side, sol.locate(f(ys[j])), alpha, beta, lo, hi, sol);
            if runs.last().is_none_or(|r| r.m != m || r.b != off) {
                runs.push(Run {
                    pos: first + j,
                    m,
                    b: off,
                });
            }
            j = a + 1;
        }
        k = kend + 1;
    }
    runs
}

/// Coefficient runs of one event against the current `I_R`.
pub fn event_coeffs(row: &Row, verts: &RowVertices, heights: &[(f64, f64)], ev: &IntervalEvent, sol: &MeasureSolution) -> EventCoeffs {
    let ss: Vec<f64> = heights[ev.first..=ev.last].iter().map(|h| h.0).collect();
    let ts: Vec<f64> = heights[ev.first..=ev.last].iter().map(|h| h.1).collect();
    let global = ev.kind == PairKind::Global;
    let (j, end_r) = if global { (ev.j, !ev.bad_j) } else { (ev.i, true) };
    EventCoeffs {
        start: side_runs(row, verts, ev.i, global && ev.bad_i, Side::Start, &ss, ev.first, sol),
        end: side_runs(row, verts, j, end_r, Side::End, &ts, ev.first, sol),
    }
}

/// The measure-independent term of an event, or `None` when `i > j`, a
/// shape the decomposition does not cover.
pub fn l_term(row: &Row, ev: &IntervalEvent, sol: &MeasureSolution) -> Option<f64> {
    let j = if ev.kind == PairKind::Global { ev.j } else { ev.i };
    match ev.i.cmp(&j) {
        std::cmp::Ordering::Less => Some(sol.residual_measure(row.x_at(ev.i + 1), row.x_at(j))),
        std::cmp::Ordering::Equal => Some(-sol.residual_measure(row.x_at(ev.i), row.x_at(ev.i + 1))),
        std::cmp::Ordering::Greater => None,
    }
}

/// The telescoping state of one sweep-sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct SeqCoeffs {
    pub per_event: Vec<EventCoeffs>,
    pub streams: CoeffEvents,
    /// change of the summed `L` terms at each position
    pub l_stream: Vec<f64>,
    /// events whose pair has `i > j`
    pub third_case: usize,
}

impl SeqCoeffs {
    pub fn build(row: &Row, verts: &RowVertices, heights: &[(f64, f64)], events: &[IntervalEvent], sol: &MeasureSolution) -> Self {
        let per_event = events.iter().map(|e| event_coeffs(row, verts, heights, e, sol)).collect();
        let mut out = SeqCoeffs {
            per_event,
            streams: CoeffEvents::default(),
            l_stream: Vec::new(),
            third_case: 0,
        };
        out.materialize(events, heights.len());
        out.refresh_l_terms(row, events, sol);
        out
    }

    fn materialize(&mut self, events: &[IntervalEvent], len: usize) {
        let mut st = CoeffEvents::zeros(len);
        for (ev, c) in events.iter().zip(&self.per_event) {
            for (runs, m, b) in [
                (&c.start, &mut st.m_minus, &mut st.b_minus),
                (&c.end, &mut st.m_plus, &mut st.b_plus),
            ] {
                let (mut pm, mut pb) = (0.0, 0.0);
                for r in runs {
                    m[r.pos] += r.m - pm;
                    b[r.pos] += r.b - pb;
                    (pm, pb) = (r.m, r.b);
                }
                m[ev.last + 1] -= pm;
                b[ev.last + 1] -= pb;
            }
        }
        self.streams = st;
    }

    /// Recomputes every `L` term against `sol`.
    pub fn refresh_l_terms(&mut self, row: &Row, events: &[IntervalEvent], sol: &MeasureSolution) {
        let mut l = vec![0.0; self.streams.m_minus.len()];
        self.third_case = 0;
        for ev in events {
            match l_term(row, ev, sol) {
                Some(v) => {
                    l[ev.first] += v;
                    l[ev.last + 1] -= v;
                }
                None => self.third_case += 1,
            }
        }
        self.l_stream = l;
    }

    /// Recomputes the events with an endpoint cell in `cells` (inclusive
    /// range) and returns the number of stream positions that changed.
    #[allow(clippy::too_many_arguments)]
    pub fn update_on_change(
        &mut self,
        row: &Row,
        verts: &RowVertices,
        heights: &[(f64, f64)],
        events: &[IntervalEvent],
        sol: &MeasureSolution,
        cells: (usize, usize),
    ) -> usize {
        let touched = |c: usize| cells.0 <= c && c <= cells.1;
        let mut any = false;
        for (ev, c) in events.iter().zip(self.per_event.iter_mut()) {
            let j = if ev.kind == PairKind::Global { ev.j } else { ev.i };
            if touched(ev.i) || touched(j) {
                let fresh = event_coeffs(row, verts, heights, ev, sol);
                if fresh != *c {
                    *c = fresh;
                    any = true;
                }
            }
        }
        if !any {
            return 0;
        }
        let old = std::mem::take(&mut self.streams);
        self.materialize(events, heights.len());
        self.streams.diff_count(&old)
    }

    /// Residual measure of every window of the sequence.
    pub fn replay(&self, heights: &[(f64, f64)]) -> Vec<f64> {
        let st = &self.streams;
        let (mut mm, mut bm, mut mp, mut bp, mut l) = (0.0, 0.0, 0.0, 0.0, 0.0);
        heights
            .iter()
            .enumerate()
            .map(|(k, &(s, t))| {
                mm += st.m_minus[k];
                bm += st.b_minus[k];
                mp += st.m_plus[k];
                bp += st.b_plus[k];
                l += self.l_stream[k];
                mm * s + bm + mp * t + bp + l
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::{build_ball_polytope, PolyCell};
    use crate::frechet::CellShape;
    use crate::interval::IntervalUnion;
    use crate::sc::{window_cover, Backend, Prepared};
    use crate::simplify::Simplifier;
    use crate::curve::{Point, PolygonalCurve};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn direct(u: &IntervalUnion, sol: &MeasureSolution) -> f64 {
        let r = sol.to_union();
        u.union(&r).measure() - r.measure()
    }

    fn random_prep(rng: &mut ChaCha8Rng, max_n: usize) -> Prepared {
        let n = rng.gen_range(3..=max_n);
        let mut pts = vec![Point(vec![0.0, 0.0])];
        for _ in 1..n {
            let l = pts.last().unwrap().0.clone();
            pts.push(Point(vec![l[0] + rng.gen_range(-1.0..1.5), l[1] + rng.gen_range(-1.0..1.0)]));
        }
        let p = PolygonalCurve::new(pts).unwrap();
        let delta = rng.gen_range(0.1..0.6);
        Prepared::build(&p, delta, 3, Simplifier::Greedy, Backend::Approx { eps: 0.1 }).unwrap()
    }

    fn random_solution(rng: &mut ChaCha8Rng) -> MeasureSolution {
        let mut sol = MeasureSolution::new();
        let k = rng.gen_range(0..8);
        let u = IntervalUnion::from_intervals((0..k).map(|_| {
            let a: f64 = rng.gen_range(0.0..1.0);
            (a, (a + rng.gen_range(0.0f64..0.2)).min(1.0))
        }));
        sol.insert_union(&u);
        sol
    }

    #[test]
    fn empty_cell_has_no_runs() {
        let ball = build_ball_polytope(0.1).unwrap();
        let far = crate::approx::approx_cell((&[0.0, 0.0], &[1.0, 0.0]), (&[0.0, 5.0], &[1.0, 5.0]), 1.0, &ball);
        let row = Row::new(vec![CellShape::Poly(far)], vec![None, None], false);
        let verts = RowVertices::new(&row).unwrap();
        assert!(verts.cell(0).is_empty());
        let seq = SeqCoeffs::build(&row, &verts, &[(0.0, 1.0)], &[], &MeasureSolution::new());
        assert_eq!(seq.streams.nonzero(), 0);
        assert_eq!(seq.replay(&[(0.0, 1.0)]), vec![0.0]);
    }

    #[test]
    fn triangle_cell_chains_are_reproduced() {
        // a triangle with apex at the top: l rises, r falls, one kink each
        let tri = PolyCell::new(vec![(0.2, 0.0), (0.8, 0.0), (0.5, 0.9)]);
        let row = Row::new(vec![CellShape::Poly(tri)], vec![None, None], false);
        let verts = RowVertices::new(&row).unwrap();
        let heights: Vec<(f64, f64)> = (0..=9).map(|k| (k as f64 * 0.1, 0.9)).collect();
        let ev = IntervalEvent {
            kind: PairKind::Local,
            i: 0,
            j: 0,
            first: 0,
            last: 9,
            bad_i: false,
            bad_j: false,
        };
        let sol = MeasureSolution::new();
        let c = event_coeffs(&row, &verts, &heights, &ev, &sol);
        assert_eq!(c.start.len(), 1);
        for (k, &(s, _)) in heights.iter().enumerate() {
            let r = c.start.iter().rev().find(|r| r.pos <= k).unwrap();
            assert!((r.m * s + r.b - (1.0 - row.l(0, s))).abs() < 1e-12);
        }
        assert!(verts.cell(0).len() >= 2);
    }

    #[test]
    fn cannot_build_on_curved_cells() {
        let p = PolygonalCurve::from_coords(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap();
        let fs = crate::frechet::FreeSpace::exact(&p, &p, 0.3);
        assert!(RowVertices::new(&fs.row(0)).is_err());
    }

    #[test]
    fn telescoped_values_match_direct_measurement() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut windows = 0;
        for _ in 0..12 {
            let prep = random_prep(&mut rng, 9);
            let sol = random_solution(&mut rng);
            for o in prep.edges.iter().flat_map(|e| e.iter()) {
                let verts = RowVertices::new(&o.row).unwrap();
                for sd in &o.seqs {
                    let seq = SeqCoeffs::build(&o.row, &verts, &sd.heights, &sd.events, &sol);
                    assert_eq!(seq.third_case, 0);
                    for (pos, v) in seq.replay(&sd.heights).into_iter().enumerate() {
                        let want = direct(&window_cover(&o.row, &sd.heights, &sd.events, pos), &sol);
                        assert!((v - want).abs() <= 1e-9, "window {pos}: telescoped {v} direct {want}");
                        windows += 1;
                    }
                }
            }
        }
        assert!(windows > 1000);
    }

    #[test]
    fn random_inserts_match_rebuild_and_remove_restores() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..8 {
            let prep = random_prep(&mut rng, 8);
            let mut sol = random_solution(&mut rng);
            let o = &prep.edges[0][0];
            let n = o.row.n();
            let verts = RowVertices::new(&o.row).unwrap();
            for sd in &o.seqs {
                let mut seq = SeqCoeffs::build(&o.row, &verts, &sd.heights, &sd.events, &sol);
                let before = seq.clone();
                let sol_before = sol.clone();
                let a = rng.gen_range(0.0..1.0);
                let fresh = sol.insert_union(&IntervalUnion::from_intervals([(a, (a + 0.3f64).min(1.0))]));
                let cells = |fresh: &[(f64, f64)]| {
                    let lo = fresh.iter().map(|q| (q.0 * n as f64).floor() as usize).min().unwrap_or(0);
                    let hi = fresh.iter().map(|q| ((q.1 * n as f64).ceil() as usize).saturating_sub(1)).max().unwrap_or(0);
                    (lo.saturating_sub(1), (hi + 1).min(n - 1))
                };
                let range = cells(&fresh);
                seq.update_on_change(&o.row, &verts, &sd.heights, &sd.events, &sol, range);
                seq.refresh_l_terms(&o.row, &sd.events, &sol);
                let rebuilt = SeqCoeffs::build(&o.row, &verts, &sd.heights, &sd.events, &sol);
                assert_eq!(seq, rebuilt);
                for &(x, y) in fresh.iter().rev() {
                    sol.remove(x, y).unwrap();
                }
                assert_eq!(sol, sol_before);
                seq.update_on_change(&o.row, &verts, &sd.heights, &sd.events, &sol, range);
                seq.refresh_l_terms(&o.row, &sd.events, &sol);
                assert_eq!(seq, before);
            }
        }
    }

    #[test]
    fn full_edge_insert_zeroes_that_cell() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let prep = random_prep(&mut rng, 6);
        let o = &prep.edges[0][0];
        let n = o.row.n();
        let verts = RowVertices::new(&o.row).unwrap();
        let mut sol = MeasureSolution::new();
        sol.insert(0.0, 1.0 / n as f64).unwrap();
        for sd in &o.seqs {
            let seq = SeqCoeffs::build(&o.row, &verts, &sd.heights, &sd.events, &sol);
            for (ev, c) in sd.events.iter().zip(&seq.per_event) {
                if ev.i == 0 {
                    assert!(c.start.iter().all(|r| r.m == 0.0 && r.b == 0.0));
                }
            }
        }
    }

    #[test]
    fn events_are_sparse() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..6 {
            let prep = random_prep(&mut rng, 10);
            let n = prep.p.len() - 1;
            for o in prep.edges.iter().flat_map(|e| e.iter()) {
                let verts = RowVertices::new(&o.row).unwrap();
                let per_cell = (0..n).map(|i| verts.cell(i).len()).max().unwrap_or(0).max(1);
                for sd in &o.seqs {
                    let seq = SeqCoeffs::build(&o.row, &verts, &sd.heights, &sd.events, &MeasureSolution::new());
                    // every nonzero sits at an event boundary or a vertex crossing
                    let bound = 4 * (2 * sd.events.len() + 2 * n * per_cell);
                    assert!(seq.streams.nonzero() <= bound, "{} > {bound}", seq.streams.nonzero());
                }
            }
        }
    }
}
