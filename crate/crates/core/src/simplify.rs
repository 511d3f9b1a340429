//! Simplification `S` of `P` with `d_F(S, P) ≤ 2Δ`.

use serde::{Deserialize, Serialize};

use crate::curve::PolygonalCurve;
use crate::error::{Error, Result};
use crate::frechet::decide_frechet;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Simplifier {
    /// Vertex-restricted greedy shortcutting.
    #[default]
    Greedy,
    /// `S = P`; keeps tests independent of the shortcut heuristic.
    IdentityForTests,
}

#[derive(Clone, Debug)]
pub struct Simplification {
    pub curve: PolygonalCurve,
    /// `source[k]`: index in `P` of the k-th vertex of `S`.
    pub source: Vec<usize>,
}

pub fn simplify(p: &PolygonalCurve, delta: f64) -> Result<Simplification> {
    simplify_with(p, delta, Simplifier::Greedy)
}

pub fn simplify_with(p: &PolygonalCurve, delta: f64, how: Simplifier) -> Result<Simplification> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::OutOfRange(format!("Δ must be positive, got {delta}")));
    }
    let source = match how {
        Simplifier::IdentityForTests => (0..p.len()).collect(),
        Simplifier::Greedy => greedy(p, delta),
    };
    let curve = PolygonalCurve::new(source.iter().map(|&i| p.vertex(i).clone()).collect())?;
    Ok(Simplification { curve, source })
}

/// From the current vertex jump to the furthest later vertex whose shortcut
/// segment is within `Δ` of the skipped piece. Gives `d_F(S, P) ≤ Δ`.
fn greedy(p: &PolygonalCurve, delta: f64) -> Vec<usize> {
    let n = p.len();
    let mut out = vec![0];
    let mut i = 0;
    while i + 1 < n {
        let mut best = i + 1;
        for j in (i + 2..n).rev() {
            if shortcut_ok(p, i, j, delta) {
                best = j;
                break;
            }
        }
        out.push(best);
        i = best;
    }
    out
}

fn shortcut_ok(p: &PolygonalCurve, i: usize, j: usize, delta: f64) -> bool {
    let piece = PolygonalCurve::new(p.vertices()[i..=j].to_vec()).expect("≥ 2 vertices");
    let seg = PolygonalCurve::new(vec![p.vertex(i).clone(), p.vertex(j).clone()]).expect("2 vertices");
    decide_frechet(&seg, &piece, delta)
}
