//! Exact free space of one edge pair: `{(x,y) ∈ [0,1]² : ‖a + x·u − b − y·v‖ ≤ Δ}`.
//!
//! Expanding the squared norm gives the conic
//! `f(x,y) = A x² + 2B xy + C y² + 2D x + 2E y + F ≤ 0`.
//! Every extent is found in closed form; tangent contacts are resolved toward
//! the closed (non-empty) side via a slack far below the geometric tolerance.

use crate::curve::{dot, sub};

/// Default geometric tolerance for boundary membership decisions.
pub const TAU_GEOM: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ExactCell {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    e: f64,
    f: f64,
}

/// Solves `α z² + β z + γ ≤ 0` on `[lo, hi]` for convex (α ≥ 0) quadratics.
pub(crate) fn solve_convex(alpha: f64, beta: f64, gamma: f64, lo: f64, hi: f64) -> Option<(f64, f64)> {
    if lo > hi {
        return None;
    }
    let alpha = alpha.max(0.0);
    let q = |z: f64| (alpha * z + beta) * z + gamma;
    // argmin over [lo, hi]
    let zm = if alpha > 0.0 {
        (-beta / (2.0 * alpha)).clamp(lo, hi)
    } else if beta > 0.0 {
        lo
    } else {
        hi
    };
    if q(zm) > 0.0 {
        return None;
    }
    let (r1, r2) = roots(alpha, beta, gamma);
    let left = if q(lo) <= 0.0 {
        lo
    } else {
        r1.clamp(lo, zm)
    };
    let right = if q(hi) <= 0.0 {
        hi
    } else {
        r2.clamp(zm, hi)
    };
    Some((left.min(zm), right.max(zm)))
}

/// Ordered real roots (r1 ≤ r2) of `α z² + β z + γ`, discriminant clamped at 0.
/// A vanishing α degrades to the linear root on the appropriate side.
fn roots(alpha: f64, beta: f64, gamma: f64) -> (f64, f64) {
    if alpha == 0.0 {
        if beta == 0.0 {
            return (f64::NEG_INFINITY, f64::INFINITY);
        }
        let r = -gamma / beta;
        return if beta > 0.0 {
            (f64::NEG_INFINITY, r)
        } else {
            (r, f64::INFINITY)
        };
    }
    let disc = (beta * beta - 4.0 * alpha * gamma).max(0.0);
    let sq = disc.sqrt();
    let qq = -0.5 * (beta + if beta >= 0.0 { sq } else { -sq });
    if qq == 0.0 {
        let z = -beta / (2.0 * alpha);
        return (z, z);
    }
    let z1 = qq / alpha;
    let z2 = gamma / qq;
    if z1 <= z2 {
        (z1, z2)
    } else {
        (z2, z1)
    }
}

impl ExactCell {
    /// Cell for P-edge `a → a+u` (horizontal axis) against S-edge `b → b+v` (vertical axis).
    pub fn new(p0: &[f64], p1: &[f64], q0: &[f64], q1: &[f64], delta: f64) -> Self {
        Self::with_tolerance(p0, p1, q0, q1, delta, TAU_GEOM)
    }

    pub fn with_tolerance(p0: &[f64], p1: &[f64], q0: &[f64], q1: &[f64], delta: f64, tau: f64) -> Self {
        let u = sub(p1, p0);
        let v = sub(q1, q0);
        let w = sub(p0, q0);
        let ww = dot(&w, &w);
        let uu = dot(&u, &u);
        let vv = dot(&v, &v);
        let scale = ww.max(uu).max(vv).max(delta * delta);
        let slack = 1e-6 * tau * scale;
        ExactCell {
            a: uu,
            b: -dot(&u, &v),
            c: vv,
            d: dot(&w, &u),
            e: -dot(&w, &v),
            f: ww - delta * delta - slack,
        }
    }

    /// Signed conic value; non-positive inside the free space.
    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.a * x * x + 2.0 * self.b * x * y + self.c * y * y + 2.0 * self.d * x + 2.0 * self.e * y + self.f
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.value(x, y) <= 0.0
    }

    /// y-extent of the region within the unit cell.
    pub fn y_range(&self) -> Option<(f64, f64)> {
        extent(self.a, self.b, self.c, self.d, self.e, self.f)
    }

    /// x-extent of the region within the unit cell.
    pub fn x_range(&self) -> Option<(f64, f64)> {
        extent(self.c, self.b, self.a, self.e, self.d, self.f)
    }

    /// Horizontal slice at height `y`, or `None` when it misses the region.
    pub fn slice(&self, y: f64) -> Option<(f64, f64)> {
        slice_of(self.a, self.b, self.c, self.d, self.e, self.f, y)
    }

    /// Vertical slice at abscissa `x`.
    pub fn vslice(&self, x: f64) -> Option<(f64, f64)> {
        slice_of(self.c, self.b, self.a, self.e, self.d, self.f, x)
    }

    /// Slice at a height known to lie within `y_range`: falls back to the
    /// conic's closest abscissa when rounding reports an empty slice.
    pub fn slice_clamped(&self, y: f64) -> (f64, f64) {
        self.slice(y).unwrap_or_else(|| {
            let xm = if self.a > 0.0 {
                (-(self.b * y + self.d) / self.a).clamp(0.0, 1.0)
            } else {
                0.0
            };
            (xm, xm)
        })
    }

    pub fn vslice_clamped(&self, x: f64) -> (f64, f64) {
        self.vslice(x).unwrap_or_else(|| {
            let ym = if self.c > 0.0 {
                (-(self.b * x + self.e) / self.c).clamp(0.0, 1.0)
            } else {
                0.0
            };
            (ym, ym)
        })
    }
}

/// Slice along the first coordinate at a fixed second coordinate `y`.
fn slice_of(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64, y: f64) -> Option<(f64, f64)> {
    let beta = 2.0 * (b * y + d);
    let gamma = (c * y + 2.0 * e) * y + f;
    solve_convex(a, beta, gamma, 0.0, 1.0)
}

/// Range of the second coordinate `y` over which some `x ∈ [0,1]` is inside.
///
/// `g(y) = min_x f(x,y)` is convex and piecewise quadratic with breakpoints
/// where the unconstrained minimiser `x*(y) = −(B y + D)/A` crosses 0 or 1.
fn extent(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Option<(f64, f64)> {
    // pieces of y ∈ [0,1]
    let mut cuts = vec![0.0, 1.0];
    if a > 0.0 && b != 0.0 {
        for target in [0.0, 1.0] {
            // x*(y) = target  ⇔  B y = −(A·target + D)
            let y = -(a * target + d) / b;
            if y > 0.0 && y < 1.0 {
                cuts.push(y);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for w in cuts.windows(2) {
        let (ya, yb) = (w[0], w[1]);
        let ym = 0.5 * (ya + yb);
        let xs = if a > 0.0 { -(b * ym + d) / a } else { 0.0 };
        let (alpha, beta, gamma) = if a <= 0.0 || xs <= 0.0 {
            // x pinned at 0
            (c, 2.0 * e, f)
        } else if xs >= 1.0 {
            (c, 2.0 * (e + b), a + 2.0 * d + f)
        } else {
            // interior minimiser; the leading coefficient is the Gram determinant
            let gram = (a * c - b * b).max(0.0) / a;
            (gram, 2.0 * (e - b * d / a), f - d * d / a)
        };
        if let Some((l, h)) = solve_convex(alpha, beta, gamma, ya, yb) {
            lo = lo.min(l);
            hi = hi.max(h);
        }
    }
    (lo <= hi).then_some((lo, hi))
}
