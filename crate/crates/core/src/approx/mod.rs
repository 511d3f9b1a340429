//! Piecewise-linear (1+ε)-approximate free space.
//!
//! The Euclidean ball is replaced by a polytope `D` with `B₁ ⊆ D ⊆ B_{1+4ε}`.
//! In practice `D` is much tighter; [`BallPolytope::outer`] records the
//! actual circumradius.
//! Since `eP(x) − eS(y) = w + x·u − y·v` spans at most three dimensions, `D`
//! lives in that reduced space, so the cell complexity does not depend on `d`.

mod extremal;
mod hull;

pub use extremal::{extremal_points, vertex_heights, Extremal, ExtremalKind, ExtremalSet};

use std::collections::HashMap;

use crate::curve::{dot, sub};
use crate::error::{Error, Result};
use crate::frechet::Row;

/// `(l_i(y), r_i(y))` of a row in global x, `(∞, ∞)` for an empty slice.
pub fn boundary_fns(row: &Row, i: usize, y: f64) -> (f64, f64) {
    row.lr(i, y)
}

/// A ball polytope given by unit-normal half-spaces `⟨n, z⟩ ≤ offset`.
#[derive(Clone, Debug)]
pub struct BallPolytope {
    pub eps: f64,
    /// Largest vertex norm, so `D ⊆ B_outer`.
    pub outer: f64,
    pub halfspaces: Vec<([f64; 3], f64)>,
    pub vertices: Vec<[f64; 3]>,
}

/// Convex hull of the boundary points of an `ε/2`-lattice inside the unit ball,
/// scaled so its nearest facet touches the unit sphere. The scale never
/// exceeds `1+4ε`.
pub fn build_ball_polytope(eps: f64) -> Result<BallPolytope> {
    if !(eps > 0.0 && eps <= 0.2) {
        return Err(Error::OutOfRange(format!("ball polytope needs 0 < ε ≤ 1/5, got {eps}")));
    }
    let h = eps / 2.0;
    let r = (1.0 / h).floor() as i64;
    let r2 = (1.0 / (h * h)) * (1.0 + 1e-12);
    let inside = |x: i64, y: i64, z: i64| ((x * x + y * y + z * z) as f64) <= r2;
    // only points extreme along a lattice axis can be hull vertices
    let mut pts: Vec<[i64; 3]> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for a in -r..=r {
        for b in -r..=r {
            let Some(top) = (0..=r).rev().find(|&c| inside(a, b, c)) else {
                continue;
            };
            for c in [top, -top] {
                for p in [[a, b, c], [a, c, b], [c, a, b]] {
                    if seen.insert(p) {
                        pts.push(p);
                    }
                }
            }
        }
    }
    let tris = hull::convex_hull(&pts);
    let mut planes: HashMap<[i64; 4], ()> = HashMap::new();
    let mut halfspaces = Vec::new();
    let mut vert_ids = std::collections::BTreeSet::new();
    for t in &tris {
        let (a, b, c) = (pts[t[0]], pts[t[1]], pts[t[2]]);
        let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
        let n = [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ];
        let off = n[0] * a[0] + n[1] * a[1] + n[2] * a[2];
        let g = gcd(gcd(n[0].abs(), n[1].abs()), gcd(n[2].abs(), off.abs())).max(1);
        let key = [n[0] / g, n[1] / g, n[2] / g, off / g];
        vert_ids.extend(t.iter().copied());
        if planes.insert(key, ()).is_none() {
            let len = ((n[0] * n[0] + n[1] * n[1] + n[2] * n[2]) as f64).sqrt();
            let unit = [n[0] as f64 / len, n[1] as f64 / len, n[2] as f64 / len];
            halfspaces.push((unit, off as f64 / len * h));
        }
    }
    let nearest = halfspaces.iter().map(|h| h.1).fold(f64::INFINITY, f64::min);
    let scale = ((1.0 + 1e-12) / nearest).min(1.0 + 4.0 * eps);
    for hs in &mut halfspaces {
        hs.1 *= scale;
    }
    let vertices: Vec<[f64; 3]> = vert_ids
        .into_iter()
        .map(|i| pts[i].map(|c| c as f64 * h * scale))
        .collect();
    let outer = vertices.iter().map(|v| dot(v, v).sqrt()).fold(0.0, f64::max);
    Ok(BallPolytope {
        eps,
        outer,
        halfspaces,
        vertices,
    })
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl BallPolytope {
    pub fn facet_count(&self) -> usize {
        self.halfspaces.len()
    }

    /// Gauge (polyhedral norm) of `z`: smallest λ with `z ∈ λD`.
    pub fn gauge(&self, z: [f64; 3]) -> f64 {
        self.halfspaces
            .iter()
            .map(|(n, o)| (n[0] * z[0] + n[1] * z[1] + n[2] * z[2]) / o)
            .fold(0.0, f64::max)
    }
}

/// Orthonormal coordinates of `w + x·u − y·v` in the span of `{w, v, u}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduced {
    pub w: [f64; 3],
    pub u: [f64; 3],
    pub v: [f64; 3],
}

impl Reduced {
    pub fn at(&self, x: f64, y: f64) -> [f64; 3] {
        [0, 1, 2].map(|k| self.w[k] + x * self.u[k] - y * self.v[k])
    }
}

/// Maps the edge pair into three coordinates preserving `‖eP(x) − eS(y)‖`.
pub fn reduce_to_3d(es: (&[f64], &[f64]), ep: (&[f64], &[f64])) -> Reduced {
    let w = sub(ep.0, es.0);
    let u = sub(ep.1, ep.0);
    let v = sub(es.1, es.0);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for g in [&w, &v, &u] {
        let mut r = g.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&r, b);
                for (ri, bi) in r.iter_mut().zip(b) {
                    *ri -= c * bi;
                }
            }
        }
        let norm = dot(&r, &r).sqrt();
        let scale = dot(g, g).sqrt();
        if norm > 1e-12 * scale.max(f64::MIN_POSITIVE) && norm > 0.0 {
            basis.push(r.iter().map(|x| x / norm).collect());
        }
    }
    let coords = |g: &Vec<f64>| {
        let mut out = [0.0; 3];
        for (k, b) in basis.iter().enumerate() {
            out[k] = dot(g, b);
        }
        out
    };
    Reduced {
        w: coords(&w),
        u: coords(&u),
        v: coords(&v),
    }
}

/// Convex polygon inside the unit cell, counter-clockwise.
#[derive(Clone, Debug, Default)]
pub struct PolyCell {
    verts: Vec<(f64, f64)>,
    /// y-monotone chains from bottom to top, as vertex lists.
    left: Vec<(f64, f64)>,
    right: Vec<(f64, f64)>,
}

/// `∩ {(x,y) : ⟨n, w + xu − yv⟩ ≤ Δ·offset} ∩ [0,1]²`.
pub fn approx_cell(es: (&[f64], &[f64]), ep: (&[f64], &[f64]), delta: f64, ball: &BallPolytope) -> PolyCell {
    let red = reduce_to_3d(es, ep);
    let mut poly = vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
    for (n, off) in &ball.halfspaces {
        let a = n[0] * red.u[0] + n[1] * red.u[1] + n[2] * red.u[2];
        let b = -(n[0] * red.v[0] + n[1] * red.v[1] + n[2] * red.v[2]);
        let c = delta * off - (n[0] * red.w[0] + n[1] * red.w[1] + n[2] * red.w[2]);
        poly = clip(&poly, a, b, c);
        if poly.is_empty() {
            break;
        }
    }
    PolyCell::new(poly)
}

/// Sutherland–Hodgman clip against `a·x + b·y ≤ c`.
fn clip(poly: &[(f64, f64)], a: f64, b: f64, c: f64) -> Vec<(f64, f64)> {
    let val = |p: (f64, f64)| a * p.0 + b * p.1 - c;
    if poly.iter().all(|&p| val(p) <= 0.0) {
        return poly.to_vec();
    }
    let mut out = Vec::with_capacity(poly.len() + 1);
    let k = poly.len();
    for i in 0..k {
        let p = poly[i];
        let q = poly[(i + 1) % k];
        let (vp, vq) = (val(p), val(q));
        if vp <= 0.0 {
            out.push(p);
        }
        if (vp < 0.0 && vq > 0.0) || (vp > 0.0 && vq < 0.0) {
            let t = vp / (vp - vq);
            out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
        }
    }
    out.dedup_by(|x, y| (x.0 - y.0).abs() < 1e-15 && (x.1 - y.1).abs() < 1e-15);
    while out.len() > 1 {
        let (f, l) = (out[0], out[out.len() - 1]);
        if (f.0 - l.0).abs() < 1e-15 && (f.1 - l.1).abs() < 1e-15 {
            out.pop();
        } else {
            break;
        }
    }
    out
}

impl PolyCell {
    pub fn new(verts: Vec<(f64, f64)>) -> Self {
        if verts.is_empty() {
            return PolyCell::default();
        }
        let k = verts.len();
        let ymin = verts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let ymax = verts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        let pick = |y: f64, leftmost: bool| -> usize {
            (0..k)
                .filter(|&i| verts[i].1 == y)
                .min_by(|&i, &j| {
                    let o = verts[i].0.total_cmp(&verts[j].0);
                    if leftmost {
                        o
                    } else {
                        o.reverse()
                    }
                })
                .unwrap()
        };
        let (bl, br, tl, tr) = (pick(ymin, true), pick(ymin, false), pick(ymax, true), pick(ymax, false));
        // counter-clockwise: BR → TR is the right chain; TL → BL descends the left chain
        let mut right = vec![verts[br]];
        let mut i = br;
        while i != tr {
            i = (i + 1) % k;
            right.push(verts[i]);
        }
        let mut left = vec![verts[tl]];
        let mut i = tl;
        while i != bl {
            i = (i + 1) % k;
            left.push(verts[i]);
        }
        left.reverse();
        PolyCell { verts, left, right }
    }

    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.verts
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn y_range(&self) -> Option<(f64, f64)> {
        let b = self.left.first()?;
        let t = self.left.last()?;
        Some((b.1, t.1))
    }

    pub fn x_range(&self) -> Option<(f64, f64)> {
        if self.verts.is_empty() {
            return None;
        }
        let lo = self.verts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let hi = self.verts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        Some((lo, hi))
    }

    fn chain_at(chain: &[(f64, f64)], y: f64, leftmost: bool) -> f64 {
        // first vertex with height ≥ y
        let j = chain.partition_point(|p| p.1 < y);
        if j == 0 {
            return chain[0].0;
        }
        if j == chain.len() {
            return chain[chain.len() - 1].0;
        }
        let (p, q) = (chain[j - 1], chain[j]);
        if q.1 == y {
            // horizontal runs at the same height: take the extreme one
            let mut x = q.0;
            let mut m = j + 1;
            while m < chain.len() && chain[m].1 == y {
                x = if leftmost { x.min(chain[m].0) } else { x.max(chain[m].0) };
                m += 1;
            }
            return x;
        }
        let t = (y - p.1) / (q.1 - p.1);
        p.0 + t * (q.0 - p.0)
    }

    pub fn slice(&self, y: f64) -> Option<(f64, f64)> {
        let (y0, y1) = self.y_range()?;
        if y < y0 || y > y1 {
            return None;
        }
        Some(self.slice_clamped(y))
    }

    pub fn slice_clamped(&self, y: f64) -> (f64, f64) {
        if self.verts.is_empty() {
            return (0.0, 0.0);
        }
        let (y0, y1) = self.y_range().unwrap();
        if y <= y0 {
            let b = (self.left[0].0, self.right[0].0);
            return (b.0.min(b.1), b.0.max(b.1));
        }
        if y >= y1 {
            let t = (self.left[self.left.len() - 1].0, self.right[self.right.len() - 1].0);
            return (t.0.min(t.1), t.0.max(t.1));
        }
        let l = Self::chain_at(&self.left, y, true);
        let r = Self::chain_at(&self.right, y, false);
        (l.min(r), r.max(l))
    }

    /// Linear scan over all edges; reference for the chain evaluation.
    pub fn slice_scan(&self, y: f64) -> Option<(f64, f64)> {
        let k = self.verts.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..k {
            let p = self.verts[i];
            let q = self.verts[(i + 1) % k];
            if (p.1 <= y && y <= q.1) || (q.1 <= y && y <= p.1) {
                let xs = if p.1 == q.1 {
                    vec![p.0, q.0]
                } else {
                    let t = (y - p.1) / (q.1 - p.1);
                    vec![p.0 + t * (q.0 - p.0)]
                };
                for x in xs {
                    lo = lo.min(x);
                    hi = hi.max(x);
                }
            }
        }
        (lo <= hi).then_some((lo, hi))
    }

    pub fn vslice(&self, x: f64) -> Option<(f64, f64)> {
        let (x0, x1) = self.x_range()?;
        if x < x0 || x > x1 {
            return None;
        }
        Some(self.vslice_clamped(x))
    }

    pub fn vslice_clamped(&self, x: f64) -> (f64, f64) {
        let k = self.verts.len();
        if k == 0 {
            return (0.0, 0.0);
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..k {
            let p = self.verts[i];
            let q = self.verts[(i + 1) % k];
            if (p.0 <= x && x <= q.0) || (q.0 <= x && x <= p.0) {
                if p.0 == q.0 {
                    lo = lo.min(p.1.min(q.1));
                    hi = hi.max(p.1.max(q.1));
                } else {
                    let t = (x - p.0) / (q.0 - p.0);
                    let y = p.1 + t * (q.1 - p.1);
                    lo = lo.min(y);
                    hi = hi.max(y);
                }
            }
        }
        if lo > hi {
            // x just outside the polygon: nearest vertex height
            let v = self
                .verts
                .iter()
                .min_by(|a, b| (a.0 - x).abs().total_cmp(&(b.0 - x).abs()))
                .unwrap();
            return (v.1, v.1);
        }
        (lo, hi)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.slice(y).is_some_and(|(a, b)| a - 1e-12 <= x && x <= b + 1e-12)
    }

    pub fn is_convex(&self) -> bool {
        let k = self.verts.len();
        if k < 3 {
            return true;
        }
        (0..k).all(|i| {
            let a = self.verts[i];
            let b = self.verts[(i + 1) % k];
            let c = self.verts[(i + 2) % k];
            (b.0 - a.0) * (c.1 - b.1) - (b.1 - a.1) * (c.0 - b.0) >= -1e-12
        })
    }
}
