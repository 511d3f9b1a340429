//! Free space of two curves as a grid of cells with consistent boundary intervals.
//!
//! Columns follow the edges of `P` (x axis), rows the edges of `S` (y axis).
//! A point on a cell boundary is free iff it is free in the closure of every
//! incident cell, so shared boundary intervals are intersections.

use crate::approx::{BallPolytope, PolyCell};
use crate::curve::PolygonalCurve;
use crate::frechet::cell::ExactCell;

pub type Span = Option<(f64, f64)>;

#[derive(Clone, Debug)]
pub enum CellShape {
    Exact(ExactCell),
    Poly(PolyCell),
    /// `y ↦ 1−y` image of another cell: the cell against the reversed S-edge.
    Mirrored(Box<CellShape>),
}

fn flip(s: Span) -> Span {
    s.map(|(a, b)| (1.0 - b, 1.0 - a))
}

impl CellShape {
    pub fn mirrored(&self) -> CellShape {
        match self {
            CellShape::Mirrored(c) => (**c).clone(),
            c => CellShape::Mirrored(Box::new(c.clone())),
        }
    }

    pub fn y_range(&self) -> Span {
        match self {
            CellShape::Exact(c) => c.y_range(),
            CellShape::Poly(c) => c.y_range(),
            CellShape::Mirrored(c) => flip(c.y_range()),
        }
    }

    pub fn x_range(&self) -> Span {
        match self {
            CellShape::Exact(c) => c.x_range(),
            CellShape::Poly(c) => c.x_range(),
            CellShape::Mirrored(c) => c.x_range(),
        }
    }

    /// Horizontal slice; heights inside `y_range` never report empty, so a
    /// tangent extreme point survives rounding in the slice formula.
    pub fn slice(&self, y: f64) -> Span {
        let raw = match self {
            CellShape::Exact(c) => c.slice(y),
            CellShape::Poly(c) => c.slice(y),
            CellShape::Mirrored(c) => c.slice(1.0 - y),
        };
        raw.or_else(|| {
            let (lo, hi) = self.y_range()?;
            (lo <= y && y <= hi).then(|| self.slice_clamped(y))
        })
    }

    pub fn vslice(&self, x: f64) -> Span {
        match self {
            CellShape::Exact(c) => c.vslice(x),
            CellShape::Poly(c) => c.vslice(x),
            CellShape::Mirrored(c) => flip(c.vslice(x)),
        }
    }

    /// Slice at a height inside `y_range`; never empty.
    pub fn slice_clamped(&self, y: f64) -> (f64, f64) {
        match self {
            CellShape::Exact(c) => c.slice_clamped(y),
            CellShape::Poly(c) => c.slice_clamped(y),
            CellShape::Mirrored(c) => c.slice_clamped(1.0 - y),
        }
    }

    pub fn vslice_clamped(&self, x: f64) -> (f64, f64) {
        match self {
            CellShape::Exact(c) => c.vslice_clamped(x),
            CellShape::Poly(c) => c.vslice_clamped(x),
            CellShape::Mirrored(c) => {
                let (a, b) = c.vslice_clamped(x);
                (1.0 - b, 1.0 - a)
            }
        }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        match self {
            CellShape::Exact(c) => c.contains(x, y),
            CellShape::Poly(c) => c.contains(x, y),
            CellShape::Mirrored(c) => c.contains(x, 1.0 - y),
        }
    }
}

/// Intersection of two boundary spans; near-touching tangencies collapse to a point.
pub(crate) fn meet(a: Span, b: Span) -> Span {
    let (a0, a1) = a?;
    let (b0, b1) = b?;
    let lo = a0.max(b0);
    let hi = a1.min(b1);
    if lo <= hi {
        Some((lo, hi))
    } else if lo - hi < 1e-12 {
        let m = 0.5 * (lo + hi);
        Some((m, m))
    } else {
        None
    }
}

#[derive(Clone, Debug)]
pub struct FreeSpace {
    nx: usize,
    ny: usize,
    cells: Vec<CellShape>,
    /// `vb[j * (nx+1) + k]`: free y-span on vertical line `x = k` in row `j`.
    vb: Vec<Span>,
    /// `hb[k * nx + i]`: free x-span on horizontal line `y = k` in column `i`.
    hb: Vec<Span>,
}

impl FreeSpace {
    pub fn from_cells(nx: usize, ny: usize, cells: Vec<CellShape>) -> Self {
        assert_eq!(cells.len(), nx * ny);
        let at = |i: usize, j: usize| &cells[j * nx + i];
        let mut vb = Vec::with_capacity((nx + 1) * ny);
        for j in 0..ny {
            for k in 0..=nx {
                let left = (k > 0).then(|| at(k - 1, j).vslice(1.0));
                let right = (k < nx).then(|| at(k, j).vslice(0.0));
                vb.push(match (left, right) {
                    (Some(a), Some(b)) => meet(a, b),
                    (Some(a), None) => a,
                    (None, Some(b)) => b,
                    (None, None) => None,
                });
            }
        }
        let mut hb = Vec::with_capacity(nx * (ny + 1));
        for k in 0..=ny {
            for i in 0..nx {
                let below = (k > 0).then(|| at(i, k - 1).slice(1.0));
                let above = (k < ny).then(|| at(i, k).slice(0.0));
                hb.push(match (below, above) {
                    (Some(a), Some(b)) => meet(a, b),
                    (Some(a), None) => a,
                    (None, Some(b)) => b,
                    (None, None) => None,
                });
            }
        }
        FreeSpace {
            nx,
            ny,
            cells,
            vb,
            hb,
        }
    }

    /// Exact Δ-free space of `s` (rows) and `p` (columns).
    pub fn exact(s: &PolygonalCurve, p: &PolygonalCurve, delta: f64) -> Self {
        let nx = p.n_edges();
        let ny = s.n_edges();
        let mut cells = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            let (q0, q1) = s.edge(j);
            for i in 0..nx {
                let (p0, p1) = p.edge(i);
                cells.push(CellShape::Exact(ExactCell::new(&p0.0, &p1.0, &q0.0, &q1.0, delta)));
            }
        }
        Self::from_cells(nx, ny, cells)
    }

    /// Piecewise-linear approximate free space built from a ball polytope.
    pub fn approximate(s: &PolygonalCurve, p: &PolygonalCurve, delta: f64, ball: &BallPolytope) -> Self {
        let nx = p.n_edges();
        let ny = s.n_edges();
        let mut cells = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            let (q0, q1) = s.edge(j);
            for i in 0..nx {
                let (p0, p1) = p.edge(i);
                cells.push(CellShape::Poly(crate::approx::approx_cell(
                    (&q0.0, &q1.0),
                    (&p0.0, &p1.0),
                    delta,
                    ball,
                )));
            }
        }
        Self::from_cells(nx, ny, cells)
    }

    /// Free space against the reversed `S`, sharing this one's cell geometry.
    pub fn mirrored(&self) -> FreeSpace {
        let mut cells = Vec::with_capacity(self.cells.len());
        for j in (0..self.ny).rev() {
            for i in 0..self.nx {
                cells.push(self.cell(i, j).mirrored());
            }
        }
        Self::from_cells(self.nx, self.ny, cells)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn cell(&self, i: usize, j: usize) -> &CellShape {
        &self.cells[j * self.nx + i]
    }

    pub fn vertical(&self, k: usize, j: usize) -> Span {
        self.vb[j * (self.nx + 1) + k]
    }

    pub fn horizontal(&self, i: usize, k: usize) -> Span {
        self.hb[k * self.nx + i]
    }

    /// The restriction `A_e` to edge `j` of `S`.
    pub fn row(&self, j: usize) -> Row {
        let cells = self.cells[j * self.nx..(j + 1) * self.nx].to_vec();
        let v = (0..=self.nx).map(|k| self.vertical(k, j)).collect();
        Row::new(cells, v, false)
    }

    /// Point membership at global coordinates (x on P, y on S).
    pub fn contains_global(&self, x: f64, y: f64) -> bool {
        let (i, lx) = split(x, self.nx);
        let (j, ly) = split(y, self.ny);
        self.cell(i, j).contains(lx, ly)
    }
}

/// Global parameter to (cell, local) with the last cell owning 1.
pub(crate) fn split(t: f64, n: usize) -> (usize, f64) {
    let scaled = t.clamp(0.0, 1.0) * n as f64;
    let i = (scaled.floor() as usize).min(n - 1);
    (i, (scaled - i as f64).clamp(0.0, 1.0))
}

/// Bottom- or top-most feature of a cell: height and x-extent (global x).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Feature {
    pub y: f64,
    pub x_lo: f64,
    pub x_hi: f64,
}

#[derive(Clone, Debug)]
pub struct CellFeatures {
    pub bottom: Feature,
    pub top: Feature,
    /// y-extent of the left-most / right-most points.
    pub left: (f64, f64),
    pub right: (f64, f64),
}

/// One row `A_e` of the free space, possibly mirrored (`y ↦ 1−y`) to serve `rev(e)`.
///
/// All heights below are in the row's own (possibly mirrored) frame; x is
/// global on P. Cell `i` spans `[i/n, (i+1)/n]`; `v[k]` is the free span on the
/// line `x = k/n`, so `v[i]` / `v[i+1]` are cell `i`'s left / right boundaries.
#[derive(Clone, Debug)]
pub struct Row {
    cells: Vec<CellShape>,
    v: Vec<Span>,
    /// boundary spans in the unmirrored frame
    raw_v: Vec<Span>,
    mirrored: bool,
    feats: Vec<Option<CellFeatures>>,
}

impl Row {
    pub fn new(cells: Vec<CellShape>, v_raw: Vec<Span>, mirrored: bool) -> Self {
        let v = v_raw
            .iter()
            .map(|s| if mirrored { s.map(|(a, b)| (1.0 - b, 1.0 - a)) } else { *s })
            .collect();
        let mut row = Row {
            cells,
            v,
            raw_v: v_raw,
            mirrored,
            feats: Vec::new(),
        };
        row.feats = (0..row.cells.len()).map(|i| row.compute_features(i)).collect();
        row
    }

    pub fn mirror(&self) -> Row {
        Row::new(self.cells.clone(), self.raw_v.clone(), !self.mirrored)
    }

    pub fn is_mirrored(&self) -> bool {
        self.mirrored
    }

    pub fn n(&self) -> usize {
        self.cells.len()
    }

    pub fn shape(&self, i: usize) -> &CellShape {
        &self.cells[i]
    }

    pub fn x_at(&self, k: usize) -> f64 {
        k as f64 / self.cells.len() as f64
    }

    pub fn boundary(&self, k: usize) -> Span {
        self.v[k]
    }

    pub fn features(&self, i: usize) -> Option<&CellFeatures> {
        self.feats[i].as_ref()
    }

    fn inner_y(&self, y: f64) -> f64 {
        if self.mirrored {
            1.0 - y
        } else {
            y
        }
    }

    fn to_global(&self, i: usize, lx: f64) -> f64 {
        let n = self.cells.len() as f64;
        (i as f64 + lx) / n
    }

    fn raw_y_range(&self, i: usize) -> Span {
        let r = self.cells[i].y_range()?;
        Some(if self.mirrored { (1.0 - r.1, 1.0 - r.0) } else { r })
    }

    fn compute_features(&self, i: usize) -> Option<CellFeatures> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for s in [self.raw_y_range(i), self.v[i], self.v[i + 1]].into_iter().flatten() {
            lo = lo.min(s.0);
            hi = hi.max(s.1);
        }
        if lo > hi {
            return None;
        }
        let lo = lo.clamp(0.0, 1.0);
        let hi = hi.clamp(0.0, 1.0);
        let (bl, br) = self.eval_raw(i, lo);
        let (tl, tr) = self.eval_raw(i, hi);
        let left = self.v[i].unwrap_or_else(|| self.extreme_x_span(i, true));
        let right = self.v[i + 1].unwrap_or_else(|| self.extreme_x_span(i, false));
        Some(CellFeatures {
            bottom: Feature {
                y: lo,
                x_lo: bl,
                x_hi: br,
            },
            top: Feature {
                y: hi,
                x_lo: tl,
                x_hi: tr,
            },
            left,
            right,
        })
    }

    fn extreme_x_span(&self, i: usize, leftmost: bool) -> (f64, f64) {
        let c = &self.cells[i];
        match c.x_range() {
            Some((x0, x1)) => {
                let (a, b) = c.vslice_clamped(if leftmost { x0 } else { x1 });
                if self.mirrored {
                    (1.0 - b, 1.0 - a)
                } else {
                    (a, b)
                }
            }
            None => {
                let y = self.raw_y_range(i).map(|r| r.0).unwrap_or(0.0);
                (y, y)
            }
        }
    }

    /// `(l_i(y), r_i(y))` without the stored-feature shortcut.
    fn eval_raw(&self, i: usize, y: f64) -> (f64, f64) {
        let in_span = |s: Span| s.is_some_and(|(a, b)| a <= y && y <= b);
        let left_snap = in_span(self.v[i]);
        let right_snap = in_span(self.v[i + 1]);
        let (lx, rx) = if left_snap && right_snap {
            (0.0, 1.0)
        } else {
            let iy = self.inner_y(y);
            let (a, b) = self.cells[i].slice_clamped(iy);
            (if left_snap { 0.0 } else { a }, if right_snap { 1.0 } else { b })
        };
        let l = if left_snap { self.x_at(i) } else { self.to_global(i, lx) };
        let r = if right_snap { self.x_at(i + 1) } else { self.to_global(i, rx) };
        (l, r.max(l))
    }

    /// `l_i(y)`: leftmost free x of cell `i` at height `y`, `∞` if none.
    pub fn l(&self, i: usize, y: f64) -> f64 {
        self.lr(i, y).0
    }

    /// `r_i(y)`: rightmost free x of cell `i` at height `y`, `∞` if none.
    pub fn r(&self, i: usize, y: f64) -> f64 {
        self.lr(i, y).1
    }

    pub fn lr(&self, i: usize, y: f64) -> (f64, f64) {
        let Some(f) = &self.feats[i] else {
            return (f64::INFINITY, f64::INFINITY);
        };
        if y < f.bottom.y || y > f.top.y {
            return (f64::INFINITY, f64::INFINITY);
        }
        if y == f.bottom.y {
            return (f.bottom.x_lo, f.bottom.x_hi);
        }
        if y == f.top.y {
            return (f.top.x_lo, f.top.x_hi);
        }
        self.eval_raw(i, y)
    }

    pub fn alive(&self, i: usize, y: f64) -> bool {
        self.feats[i]
            .as_ref()
            .is_some_and(|f| f.bottom.y <= y && y <= f.top.y)
    }

    pub fn bottom(&self, i: usize) -> Option<Feature> {
        self.feats[i].as_ref().map(|f| f.bottom)
    }

    pub fn top(&self, i: usize) -> Option<Feature> {
        self.feats[i].as_ref().map(|f| f.top)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(pts: &[[f64; 2]]) -> PolygonalCurve {
        PolygonalCurve::new(pts.iter().map(|p| crate::curve::Point(p.to_vec())).collect()).unwrap()
    }

    #[test]
    fn boundary_spans_are_shared() {
        let p = curve(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.5], [3.0, 0.0]]);
        let s = curve(&[[0.0, 0.2], [3.0, 0.2]]);
        let fs = FreeSpace::exact(&s, &p, 0.4);
        let row = fs.row(0);
        for i in 0..row.n() {
            if let Some(f) = row.features(i) {
                assert!(f.bottom.y <= f.top.y);
                assert!(f.bottom.x_lo <= f.bottom.x_hi);
            }
        }
        // at a height in the shared boundary span both neighbours snap
        if let Some((lo, hi)) = row.boundary(1) {
            let y = 0.5 * (lo + hi);
            assert_eq!(row.r(0, y), row.x_at(1));
            assert_eq!(row.l(1, y), row.x_at(1));
        }
    }

    #[test]
    fn mirror_swaps_heights() {
        let p = curve(&[[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]]);
        let s = curve(&[[0.0, 0.0], [2.0, 0.3]]);
        let fs = FreeSpace::exact(&s, &p, 0.6);
        let row = fs.row(0);
        let m = row.mirror();
        assert!(m.is_mirrored());
        for i in 0..row.n() {
            for k in 0..=40 {
                let y = k as f64 / 40.0;
                let (a, b) = row.lr(i, y);
                let (c, d) = m.lr(i, 1.0 - y);
                if a.is_finite() && c.is_finite() {
                    assert!((a - c).abs() < 1e-9 && (b - d).abs() < 1e-9);
                }
            }
        }
        let back = m.mirror();
        assert!(!back.is_mirrored());
        for k in 0..row.n() + 1 {
            assert_eq!(back.boundary(k), row.boundary(k));
        }
    }

    #[test]
    fn empty_cell_is_infinite() {
        let p = curve(&[[0.0, 0.0], [1.0, 0.0]]);
        let s = curve(&[[0.0, 5.0], [1.0, 5.0]]);
        let row = FreeSpace::exact(&s, &p, 1.0).row(0);
        assert_eq!(row.lr(0, 0.5), (f64::INFINITY, f64::INFINITY));
        assert!(!row.alive(0, 0.5));
    }
}
