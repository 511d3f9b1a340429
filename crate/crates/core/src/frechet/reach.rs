//! Monotone reachability in a free space grid.
//!
//! Paths are monotone in both coordinates. Inside a cell the free region is
//! convex, so any entry point `e` and exit point `f` with `e ≤ f`
//! (component-wise) are joined by the straight segment.

use crate::curve::PolygonalCurve;
use crate::frechet::grid::{split, FreeSpace, Span};
use crate::interval::IntervalUnion;

/// Monotonicity slack in local cell coordinates: a straight or vertical
/// free edge must not be cut by rounding of its two endpoints.
const MONO_EPS: f64 = 1e-12;

fn clip(s: Span, lo: f64, hi: f64) -> Span {
    let (a, b) = s?;
    let (a, b) = (a.max(lo), b.min(hi));
    (a <= b).then_some((a, b))
}

/// Height window of one row: rows `js..=jt`, local bounds `[ylo, yhi]` per row.
struct Window {
    js: usize,
    jt: usize,
    ys: f64,
    yt: f64,
}

impl Window {
    fn new(fs: &FreeSpace, s: f64, t: f64) -> Self {
        let (js, ys) = split(s, fs.ny());
        let (mut jt, mut yt) = split(t, fs.ny());
        if yt == 0.0 && jt > 0 && (jt, yt) != (js, ys) {
            jt -= 1;
            yt = 1.0;
        }
        Window { js, jt, ys, yt }
    }

    fn bounds(&self, j: usize) -> (f64, f64) {
        let lo = if j == self.js { self.ys } else { 0.0 };
        let hi = if j == self.jt { self.yt } else { 1.0 };
        (lo, hi)
    }

    fn rows(&self) -> std::ops::RangeInclusive<usize> {
        self.js..=self.jt
    }
}

/// Free x-span of column `i` at local height `y` of row `j`, honouring the
/// shared boundary spans at `y ∈ {0, 1}`.
fn hspan(fs: &FreeSpace, i: usize, j: usize, y: f64) -> Span {
    if y == 0.0 {
        fs.horizontal(i, j)
    } else if y == 1.0 {
        fs.horizontal(i, j + 1)
    } else {
        // snap to the cell's vertical boundaries as the row evaluators do, so
        // corner tangencies agree with the boundary spans
        let on = |k: usize| fs.vertical(k, j).is_some_and(|(a, b)| a <= y && y <= b);
        let (ls, rs) = (on(i), on(i + 1));
        match (fs.cell(i, j).slice(y), ls, rs) {
            (_, true, true) => Some((0.0, 1.0)),
            (Some((a, b)), _, _) => Some((if ls { 0.0 } else { a }, if rs { 1.0 } else { b })),
            (None, true, false) => Some((0.0, 0.0)),
            (None, false, true) => Some((1.0, 1.0)),
            (None, false, false) => None,
        }
    }
}

struct Pass {
    /// per row (offset by js), per cell: span on the left / bottom boundary
    left: Vec<Vec<Span>>,
    bottom: Vec<Vec<Span>>,
    right: Vec<Vec<Span>>,
    top: Vec<Vec<Span>>,
}

/// Forward reachability from the given start spans on the bottom line of `js`.
fn forward(fs: &FreeSpace, w: &Window, start: Vec<Span>) -> Pass {
    let nx = fs.nx();
    let rows = w.jt - w.js + 1;
    let mut p = Pass {
        left: vec![vec![None; nx]; rows],
        bottom: vec![vec![None; nx]; rows],
        right: vec![vec![None; nx]; rows],
        top: vec![vec![None; nx]; rows],
    };
    p.bottom[0] = start;
    for j in w.rows() {
        let r = j - w.js;
        let (ylo, yhi) = w.bounds(j);
        for i in 0..nx {
            let l = p.left[r][i];
            let b = p.bottom[r][i];
            let rspan = clip(fs.vertical(i + 1, j), ylo, yhi);
            let tspan = hspan(fs, i, j, yhi);
            let right = match (b, l) {
                (Some(_), _) => rspan,
                (None, Some((a1, _))) => clip(rspan, a1 - MONO_EPS, f64::INFINITY),
                _ => None,
            };
            let top = match (l, b) {
                (Some(_), _) => tspan,
                (None, Some((b1, _))) => clip(tspan, b1 - MONO_EPS, f64::INFINITY),
                _ => None,
            };
            p.right[r][i] = right;
            p.top[r][i] = top;
            if i + 1 < nx {
                p.left[r][i + 1] = right;
            }
            if j < w.jt {
                p.bottom[r + 1][i] = top;
            }
        }
    }
    p
}

/// Backward co-reachability towards the end line (top of row `jt`).
fn backward(fs: &FreeSpace, w: &Window, end: Vec<Span>) -> Pass {
    let nx = fs.nx();
    let rows = w.jt - w.js + 1;
    let mut p = Pass {
        left: vec![vec![None; nx]; rows],
        bottom: vec![vec![None; nx]; rows],
        right: vec![vec![None; nx]; rows],
        top: vec![vec![None; nx]; rows],
    };
    p.top[rows - 1] = end;
    for j in w.rows().rev() {
        let r = j - w.js;
        let (ylo, yhi) = w.bounds(j);
        for i in (0..nx).rev() {
            let rt = p.right[r][i];
            let tp = p.top[r][i];
            let lspan = clip(fs.vertical(i, j), ylo, yhi);
            let bspan = hspan(fs, i, j, ylo);
            let left = match (tp, rt) {
                (Some(_), _) => lspan,
                (None, Some((_, c2))) => clip(lspan, f64::NEG_INFINITY, c2 + MONO_EPS),
                _ => None,
            };
            let bottom = match (rt, tp) {
                (Some(_), _) => bspan,
                (None, Some((_, d2))) => clip(bspan, f64::NEG_INFINITY, d2 + MONO_EPS),
                _ => None,
            };
            p.left[r][i] = left;
            p.bottom[r][i] = bottom;
            if i > 0 {
                p.right[r][i - 1] = left;
            }
            if j > w.js {
                p.top[r - 1][i] = bottom;
            }
        }
    }
    p
}

/// `Cov_A(S[s,t])`: all x-intervals `[a,c]` joined by a monotone path from
/// `(a,s)` to `(c,t)`, as a disjoint union in P's global parameter.
pub fn reach_cover(fs: &FreeSpace, s: f64, t: f64) -> IntervalUnion {
    let nx = fs.nx();
    let gx = |i: usize, lx: f64| (i as f64 + lx) / nx as f64;
    if s >= t {
        let w = Window::new(fs, s, s);
        return IntervalUnion::from_intervals(
            (0..nx).filter_map(|i| hspan(fs, i, w.js, w.ys).map(|(a, b)| (gx(i, a), gx(i, b)))),
        );
    }
    let w = Window::new(fs, s, t);
    let start = (0..nx).map(|i| hspan(fs, i, w.js, w.ys)).collect();
    let end = (0..nx).map(|i| hspan(fs, i, w.jt, w.yt)).collect();
    let fwd = forward(fs, &w, start);
    let bwd = backward(fs, &w, end);
    let mut out = Vec::new();
    for r in 0..fwd.left.len() {
        for i in 0..nx {
            let (l, b) = (fwd.left[r][i], fwd.bottom[r][i]);
            let (rt, tp) = (bwd.right[r][i], bwd.top[r][i]);
            if let (Some((a1, _)), Some((_, c2))) = (l, rt) {
                if a1 <= c2 + MONO_EPS {
                    out.push((gx(i, 0.0), gx(i + 1, 0.0)));
                }
            }
            if let (Some(_), Some((_, d2))) = (l, tp) {
                out.push((gx(i, 0.0), gx(i, d2)));
            }
            if let (Some((b1, _)), Some(_)) = (b, rt) {
                out.push((gx(i, b1), gx(i + 1, 0.0)));
            }
            if let (Some((b1, _)), Some((_, d2))) = (b, tp) {
                if b1 <= d2 + MONO_EPS {
                    out.push((gx(i, b1.min(d2)), gx(i, d2.max(b1))));
                }
            }
        }
    }
    IntervalUnion::from_intervals(out)
}

/// Alt–Godau decision: is `d_F(P, Q) ≤ Δ`?
pub fn decide_frechet(p: &PolygonalCurve, q: &PolygonalCurve, delta: f64) -> bool {
    let fs = FreeSpace::exact(q, p, delta);
    decide_on(&fs)
}

/// Monotone path from `(0,0)` to `(1,1)` in an arbitrary free space grid.
pub fn decide_on(fs: &FreeSpace) -> bool {
    let nx = fs.nx();
    let origin_free = fs.horizontal(0, 0).is_some_and(|(a, _)| a == 0.0)
        && fs.vertical(0, 0).is_some_and(|(a, _)| a == 0.0);
    if !origin_free {
        return false;
    }
    let mut start = vec![None; nx];
    start[0] = Some((0.0, 0.0));
    let w = Window {
        js: 0,
        jt: fs.ny() - 1,
        ys: 0.0,
        yt: 1.0,
    };
    let fwd = forward(fs, &w, start);
    let last = fwd.top.len() - 1;
    let top_hit = fwd.top[last][nx - 1].is_some_and(|(_, b)| b == 1.0);
    let right_hit = fwd.right[last][nx - 1].is_some_and(|(_, b)| b == 1.0);
    top_hit || right_hit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Point;

    fn curve(pts: &[[f64; 2]]) -> PolygonalCurve {
        PolygonalCurve::new(pts.iter().map(|p| Point(p.to_vec())).collect()).unwrap()
    }

    #[test]
    fn identical_curves_at_zero() {
        let p = curve(&[[0.0, 0.0], [1.0, 1.0], [2.0, 0.0], [3.0, 2.0]]);
        assert!(decide_frechet(&p, &p, 0.0));
    }

    #[test]
    fn far_segments() {
        let p = curve(&[[0.0, 0.0], [1.0, 0.0]]);
        let q = curve(&[[0.0, 1.0], [1.0, 1.0]]);
        assert!(!decide_frechet(&p, &q, 0.5));
        assert!(decide_frechet(&p, &q, 1.0));
    }

    #[test]
    fn backtracking_needs_larger_radius() {
        // Q goes forward, back, forward; P is straight
        let p = curve(&[[0.0, 0.0], [3.0, 0.0]]);
        let q = curve(&[[0.0, 0.0], [2.0, 0.0], [1.0, 0.0], [3.0, 0.0]]);
        assert!(!decide_frechet(&p, &q, 0.4));
        assert!(decide_frechet(&p, &q, 0.5 + 1e-9));
    }

    #[test]
    fn full_free_space_covers_everything() {
        let p = curve(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]);
        let s = curve(&[[0.5, 0.0], [1.5, 0.0]]);
        let fs = FreeSpace::exact(&s, &p, 10.0);
        assert_eq!(reach_cover(&fs, 0.0, 1.0).parts(), &[(0.0, 1.0)]);
    }

    #[test]
    fn zero_height_window_is_the_slice() {
        let p = curve(&[[0.0, 0.0], [4.0, 0.0]]);
        let s = curve(&[[1.0, 0.5], [3.0, 0.5]]);
        let fs = FreeSpace::exact(&s, &p, 1.0);
        let cov = reach_cover(&fs, 0.0, 0.0);
        // |x·4 − 1| ≤ √0.75
        let h = 0.75f64.sqrt();
        assert_eq!(cov.len(), 1);
        let (a, b) = cov.parts()[0];
        assert!((a - (1.0 - h) / 4.0).abs() < 1e-9 && (b - (1.0 + h) / 4.0).abs() < 1e-9);
    }
}
