//! Polygonal curves in ℝ^d with the uniform global parametrization over [0,1].
//!
//! Edge `i` (1-based) of an `n`-vertex curve occupies the global parameter
//! range `[(i-1)/(n-1), i/(n-1)]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dist(&self, other: &Point) -> f64 {
        dist(&self.0, &other.0)
    }

    pub fn lerp(&self, other: &Point, t: f64) -> Point {
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + t * (b - a))
                .collect(),
        )
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Point(v)
    }
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// A position on a curve: 1-based edge index plus local parameter in [0,1].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveParam {
    pub edge_index: usize,
    pub local_t: f64,
}

impl CurveParam {
    pub fn new(edge_index: usize, local_t: f64) -> Self {
        CurveParam {
            edge_index,
            local_t,
        }
    }

    /// Canonical form: `local_t < 1` except at the final vertex.
    pub fn canonical(self, n_edges: usize) -> Self {
        if self.local_t >= 1.0 && self.edge_index < n_edges {
            CurveParam::new(self.edge_index + 1, 0.0)
        } else {
            self
        }
    }

    pub fn to_global(self, n_edges: usize) -> f64 {
        ((self.edge_index - 1) as f64 + self.local_t) / n_edges as f64
    }

    pub fn from_global(t: f64, n_edges: usize) -> Self {
        let t = t.clamp(0.0, 1.0);
        let scaled = t * n_edges as f64;
        let e = (scaled.floor() as usize).min(n_edges - 1);
        let local = (scaled - e as f64).clamp(0.0, 1.0);
        CurveParam::new(e + 1, local).canonical(n_edges)
    }
}

impl PartialOrd for CurveParam {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        // (i, 1) and (i+1, 0) are the same point
        let a = self.edge_index as f64 + self.local_t;
        let b = other.edge_index as f64 + other.local_t;
        a.partial_cmp(&b)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolygonalCurve {
    vertices: Vec<Point>,
}

impl PolygonalCurve {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::TooFewVertices(vertices.len()));
        }
        let d = vertices[0].dim();
        if d == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        for v in &vertices {
            if v.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: v.dim(),
                });
            }
            if v.0.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        Ok(PolygonalCurve { vertices })
    }

    pub fn from_coords(rows: &[&[f64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| Point(r.to_vec())).collect())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i]
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn n_edges(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    /// Edge `i` as (start, end) vertex pair, 0-based.
    pub fn edge(&self, i: usize) -> (&Point, &Point) {
        (&self.vertices[i], &self.vertices[i + 1])
    }

    pub fn eval(&self, p: CurveParam) -> Result<Point> {
        if p.edge_index == 0 || p.edge_index > self.n_edges() {
            return Err(Error::EdgeOutOfRange {
                edge: p.edge_index,
                n_edges: self.n_edges(),
            });
        }
        let (a, b) = self.edge(p.edge_index - 1);
        if p.local_t == 0.0 {
            return Ok(a.clone());
        }
        if p.local_t == 1.0 {
            return Ok(b.clone());
        }
        Ok(a.lerp(b, p.local_t))
    }

    pub fn eval_global(&self, t: f64) -> Point {
        self.eval(CurveParam::from_global(t, self.n_edges()))
            .expect("from_global yields a valid edge")
    }

    /// Vertices of `P[s,t]`: the two endpoints and every vertex strictly between.
    pub fn subcurve(&self, s: CurveParam, t: CurveParam) -> Result<PolygonalCurve> {
        if s > t {
            return Err(Error::InvertedRange);
        }
        let m = self.n_edges();
        let s = s.canonical(m);
        let t = t.canonical(m);
        let mut out = vec![self.eval(s)?];
        // vertex k (0-based) sits at position k; keep those strictly inside (s, t)
        let first = if s.local_t >= 1.0 {
            s.edge_index + 1
        } else {
            s.edge_index
        };
        let last = if t.local_t == 0.0 {
            t.edge_index - 1
        } else {
            t.edge_index
        };
        for k in first..last {
            out.push(self.vertices[k].clone());
        }
        out.push(self.eval(t)?);
        PolygonalCurve::new(out)
    }

    pub fn subcurve_global(&self, s: f64, t: f64) -> Result<PolygonalCurve> {
        let m = self.n_edges();
        self.subcurve(CurveParam::from_global(s, m), CurveParam::from_global(t, m))
    }

    pub fn reverse(&self) -> PolygonalCurve {
        let mut v = self.vertices.clone();
        v.reverse();
        PolygonalCurve { vertices: v }
    }
}

/// A subcurve descriptor; reversal is a flag only.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubcurveRef {
    pub start: CurveParam,
    pub end: CurveParam,
    pub reversed: bool,
}

impl SubcurveRef {
    pub fn materialize(&self, curve: &PolygonalCurve) -> Result<PolygonalCurve> {
        let c = curve.subcurve(self.start, self.end)?;
        Ok(if self.reversed { c.reverse() } else { c })
    }

    /// `(start, end)` in the global parameter of a curve with `n_edges` edges.
    pub fn global_range(&self, n_edges: usize) -> (f64, f64) {
        (self.start.to_global(n_edges), self.end.to_global(n_edges))
    }
}
