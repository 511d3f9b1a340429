//! Weighted point query over every window of a sweep-sequence.
//!
//! A pair `(i, j)` active at a window covers `[a, b]` with `a` in cell `i` and
//! `b` in cell `j`. Its weight splits into a left term (points of cell `i` at
//! or right of `a`), a right term (points of cell `j` at or left of `b`) and a
//! constant for the cells strictly between. For a local pair the two terms
//! overlap and the constant subtracts the whole cell once.
//!
//! Ownership at a shared cell boundary `x_k`: the left term of cell `k` and
//! the right terms of cells `k−1` and `k` see the point, so every covered
//! point is counted exactly once.
//!
//! Each point enters a cell term over O(1) contiguous position ranges, since
//! `l` is convex and `r` concave in the height. Counts of active pairs per
//! (cell, term) are swept against the point deltas.

use std::collections::BTreeMap;

use crate::coverage::maintain::{IntervalEvent, PairKind};
use crate::frechet::Row;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Term {
    /// `q ≥ l_i(s)`
    LeftGood,
    /// `q ≥ r_i(s)`
    LeftBad,
    /// `q ≤ r_j(t)`
    RightGood,
    /// `q ≤ l_j(t)`
    RightBad,
}

/// Points of `[0,1]` with positive integer weights, sorted.
#[derive(Clone, Debug, Default)]
pub struct WeightedPoints {
    pts: Vec<(f64, u64)>,
    prefix: Vec<u64>,
}

impl WeightedPoints {
    pub fn new(mut pts: Vec<(f64, u64)>) -> Self {
        pts.retain(|p| p.1 > 0);
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut prefix = Vec::with_capacity(pts.len() + 1);
        prefix.push(0);
        for p in &pts {
            prefix.push(prefix.last().unwrap() + p.1);
        }
        WeightedPoints { pts, prefix }
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    pub fn points(&self) -> &[(f64, u64)] {
        &self.pts
    }

    pub fn total(&self) -> u64 {
        *self.prefix.last().unwrap()
    }

    fn lower(&self, x: f64) -> usize {
        self.pts.partition_point(|p| p.0 < x)
    }

    fn upper(&self, x: f64) -> usize {
        self.pts.partition_point(|p| p.0 <= x)
    }

    /// Weight in `[a, b)`.
    fn half_open(&self, a: f64, b: f64) -> u64 {
        let (i, j) = (self.lower(a), self.lower(b));
        if j <= i {
            0
        } else {
            self.prefix[j] - self.prefix[i]
        }
    }

    /// Weight in `[a, b]`.
    pub fn closed(&self, a: f64, b: f64) -> u64 {
        let (i, j) = (self.lower(a), self.upper(b));
        if j <= i {
            0
        } else {
            self.prefix[j] - self.prefix[i]
        }
    }
}

/// Per position of the sequence, the weight of `Q ∩ Ĉov` described by the
/// events. `heights[pos] = (s, t)`.
pub fn batch_point_query(row: &Row, heights: &[(f64, f64)], events: &[IntervalEvent], q: &WeightedPoints) -> Vec<u64> {
    let len = heights.len();
    let n = row.n();
    let mut diff = vec![0i64; len + 1];
    if q.is_empty() || len == 0 {
        return vec![0; len];
    }
    let left_owned = |c: usize| {
        if c + 1 == n {
            q.closed(row.x_at(c), row.x_at(c + 1))
        } else {
            q.half_open(row.x_at(c), row.x_at(c + 1))
        }
    };
    let mut active: BTreeMap<(usize, Term), Vec<(usize, i64)>> = BTreeMap::new();
    for e in events {
        let (lt, rt, constant) = match e.kind {
            PairKind::Local => (Term::LeftGood, Term::RightGood, -(left_owned(e.i) as i64)),
            PairKind::Global => (
                if e.bad_i { Term::LeftBad } else { Term::LeftGood },
                if e.bad_j { Term::RightBad } else { Term::RightGood },
                q.half_open(row.x_at(e.i + 1), row.x_at(e.j)) as i64,
            ),
        };
        diff[e.first] += constant;
        diff[e.last + 1] -= constant;
        for key in [(e.i, lt), (e.j, rt)] {
            let v = active.entry(key).or_default();
            v.push((e.first, 1));
            v.push((e.last + 1, -1));
        }
    }
    for ((c, term), mut counts) in active {
        let (x0, x1) = (row.x_at(c), row.x_at(c + 1));
        let right_closed = matches!(term, Term::RightGood | Term::RightBad) || c + 1 == n;
        let lo = q.lower(x0);
        let hi = if right_closed { q.upper(x1) } else { q.lower(x1) };
        let mut deltas: Vec<(usize, i64)> = Vec::new();
        for &(x, w) in &q.pts[lo..hi] {
            for (a, b) in term_ranges(row, heights, c, term, x) {
                deltas.push((a, w as i64));
                deltas.push((b, -(w as i64)));
            }
        }
        deltas.sort_unstable();
        counts.sort_unstable();
        sweep_products(&counts, &deltas, &mut diff);
    }
    let mut out = Vec::with_capacity(len);
    let mut acc = 0i64;
    for d in &diff[..len] {
        acc += d;
        debug_assert!(acc >= 0);
        out.push(acc.max(0) as u64);
    }
    out
}

/// Adds `count(pos) · weight(pos)` to `diff`, both given as sorted step deltas.
fn sweep_products(counts: &[(usize, i64)], weights: &[(usize, i64)], diff: &mut [i64]) {
    let (mut ci, mut wi) = (0, 0);
    let (mut c, mut w) = (0i64, 0i64);
    let mut pos = 0usize;
    loop {
        let next = match (counts.get(ci), weights.get(wi)) {
            (None, None) => break,
            (a, b) => a.map_or(usize::MAX, |x| x.0).min(b.map_or(usize::MAX, |x| x.0)),
        };
        if c != 0 && w != 0 && next > pos {
            diff[pos] += c * w;
            diff[next] -= c * w;
        }
        pos = next;
        while ci < counts.len() && counts[ci].0 == pos {
            c += counts[ci].1;
            ci += 1;
        }
        while wi < weights.len() && weights[wi].0 == pos {
            w += weights[wi].1;
            wi += 1;
        }
    }
}

/// Half-open position ranges where point `x` of cell `c` satisfies `term`.
fn term_ranges(row: &Row, h: &[(f64, f64)], c: usize, term: Term, x: f64) -> Vec<(usize, usize)> {
    let Some(f) = row.features(c) else {
        return Vec::new();
    };
    let use_s = matches!(term, Term::LeftGood | Term::LeftBad);
    let y = |p: usize| if use_s { h[p].0 } else { h[p].1 };
    let a = h.partition_point(|p| (if use_s { p.0 } else { p.1 }) < f.bottom.y);
    let b = h.partition_point(|p| (if use_s { p.0 } else { p.1 }) <= f.top.y);
    if a >= b {
        return Vec::new();
    }
    let l = |p: usize| row.l(c, y(p));
    let r = |p: usize| row.r(c, y(p));
    let lmin = extreme(a, b, &y, f.left, &|p, q| l(p) <= l(q));
    let rmax = extreme(a, b, &y, f.right, &|p, q| r(p) >= r(q));
    match term {
        Term::LeftGood => peak_range(a, b, lmin, &|p| l(p) <= x).into_iter().collect(),
        Term::RightGood => peak_range(a, b, rmax, &|p| r(p) >= x).into_iter().collect(),
        Term::LeftBad => complement(a, b, peak_range(a, b, rmax, &|p| r(p) > x)),
        Term::RightBad => complement(a, b, peak_range(a, b, lmin, &|p| l(p) < x)),
    }
}

/// Position of the extremum of a unimodal chain whose extreme heights span `plateau`.
fn extreme(a: usize, b: usize, y: &dyn Fn(usize) -> f64, plateau: (f64, f64), better: &dyn Fn(usize, usize) -> bool) -> usize {
    let p1 = a + partition(a, b, &|p| y(p) < plateau.0);
    let p2 = a + partition(a, b, &|p| y(p) <= plateau.1);
    if p1 < p2 {
        return p1;
    }
    match (p1 > a, p1 < b) {
        (true, true) => {
            if better(p1 - 1, p1) {
                p1 - 1
            } else {
                p1
            }
        }
        (true, false) => p1 - 1,
        _ => p1,
    }
}

/// The contiguous run of `pred` around `m`, as a half-open range, if `pred(m)`.
fn peak_range(a: usize, b: usize, m: usize, pred: &dyn Fn(usize) -> bool) -> Option<(usize, usize)> {
    if !pred(m) {
        return None;
    }
    let first = a + partition(a, m, &|p| !pred(p));
    let end = m + partition(m, b, pred);
    Some((first, end))
}

fn complement(a: usize, b: usize, hole: Option<(usize, usize)>) -> Vec<(usize, usize)> {
    match hole {
        None => vec![(a, b)],
        Some((x, y)) => [(a, x), (y, b)].into_iter().filter(|r| r.0 < r.1).collect(),
    }
}

/// Number of leading positions in `[from, to)` satisfying `pred`.
fn partition(from: usize, to: usize, pred: &dyn Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (from, to);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo - from
}
