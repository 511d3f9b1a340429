//! Windows of a sweep-sequence in which a cell index is bad.

use crate::coverage::state::bad_index_test;
use crate::frechet::Row;

/// Per cell: the contiguous range `[first, last]` of sequence positions where
/// it is bad, or `None`.
///
/// Along a sequence both heights are non-decreasing. For `s` the bad
/// condition holds on a prefix of the cell's height range (the left chain is
/// convex), for `t` on a suffix (the right chain is concave), so each side is
/// a contiguous run of positions found by binary search. Direct tests at the
/// ends settle rounding at the run boundaries.
pub fn compute_bad_windows(row: &Row, heights: &[(f64, f64)]) -> Vec<Option<(usize, usize)>> {
    (0..row.n()).map(|i| bad_window(row, i, heights)).collect()
}

fn bad_window(row: &Row, i: usize, h: &[(f64, f64)]) -> Option<(usize, usize)> {
    let f = row.features(i)?;
    let (bot, top) = (f.bottom.y, f.top.y);
    let (xt, xb) = (f.top.x_hi, f.bottom.x_lo);
    let n = h.len();
    let s_ok = |k: usize| {
        let s = h[k].0;
        if s < bot || s > top {
            return false;
        }
        xt < row.l(i, s)
    };
    let t_ok = |k: usize| {
        let t = h[k].1;
        if t < bot || t > top {
            return false;
        }
        row.r(i, t) < xb
    };
    let s_first = h.partition_point(|p| p.0 < bot);
    let s_end = s_first + partition(s_first, n, &s_ok);
    let t_last = h.partition_point(|p| p.1 <= top);
    let t_first = partition(0, t_last, &|k| !t_ok(k));
    let mut a = s_first.max(t_first);
    let mut b = s_end.min(t_last);
    if a >= b {
        return None;
    }
    b -= 1;
    let test = |k: usize| bad_index_test(row, i, h[k].0, h[k].1);
    while a <= b && !test(a) {
        a += 1;
    }
    while b >= a && !test(b) {
        if b == 0 {
            return None;
        }
        b -= 1;
    }
    if a > b {
        return scan_fallback(row, i, h);
    }
    while a > 0 && test(a - 1) {
        a -= 1;
    }
    while b + 1 < n && test(b + 1) {
        b += 1;
    }
    Some((a, b))
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

/// Numerical noise can break the monotone predicates near tangencies; then
/// scan instead. The scan keeps the first run found.
fn scan_fallback(row: &Row, i: usize, h: &[(f64, f64)]) -> Option<(usize, usize)> {
    let first = (0..h.len()).find(|&k| bad_index_test(row, i, h[k].0, h[k].1))?;
    let mut last = first;
    while last + 1 < h.len() && bad_index_test(row, i, h[last + 1].0, h[last + 1].1) {
        last += 1;
    }
    Some((first, last))
}
