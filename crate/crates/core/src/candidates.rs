//! Candidate centers and sweep-sequences over extremal heights.
//!
//! Type (I): vertex-to-vertex subcurves of `S` spanning a power of two edges.
//! Type (II): prefixes/suffixes of one edge cut at an extremal height.
//! Type (III): subedges between extremal heights a power of two positions apart.
//! (II) and (III) also come reversed; those are produced by running the forward
//! machinery on the mirrored row.

use serde::{Deserialize, Serialize};

use crate::approx::ExtremalSet;
use crate::curve::{CurveParam, PolygonalCurve, SubcurveRef};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum Candidate {
    /// `S` from vertex `start` to vertex `end` (0-based).
    #[serde(rename = "I")]
    TypeI { start: usize, end: usize },
    /// `S` restricted to edge `edge` (0-based) between local heights `s ≤ t`.
    #[serde(rename = "II")]
    TypeII { edge: usize, s: f64, t: f64, reversed: bool },
    #[serde(rename = "III")]
    TypeIII { edge: usize, s: f64, t: f64, reversed: bool },
}

impl Candidate {
    /// Tie-break rank: I < II < III.
    pub fn type_rank(&self) -> u8 {
        match self {
            Candidate::TypeI { .. } => 0,
            Candidate::TypeII { .. } => 1,
            Candidate::TypeIII { .. } => 2,
        }
    }

    /// Deterministic tie-break order: type rank, then the descriptor fields.
    pub fn selection_cmp(&self, other: &Candidate) -> std::cmp::Ordering {
        use Candidate::*;
        match (*self, *other) {
            (TypeI { start: a0, end: a1 }, TypeI { start: b0, end: b1 }) => (a0, a1).cmp(&(b0, b1)),
            (
                TypeII { edge: e0, s: s0, t: t0, reversed: r0 } | TypeIII { edge: e0, s: s0, t: t0, reversed: r0 },
                TypeII { edge: e1, s: s1, t: t1, reversed: r1 } | TypeIII { edge: e1, s: s1, t: t1, reversed: r1 },
            ) if self.type_rank() == other.type_rank() => e0
                .cmp(&e1)
                .then(r0.cmp(&r1))
                .then(s0.total_cmp(&s1))
                .then(t0.total_cmp(&t1)),
            _ => self.type_rank().cmp(&other.type_rank()),
        }
    }

    /// Window `(ya, yb)` of a row in its own frame, mapped back to `S`.
    pub fn from_window(edge: usize, ya: f64, yb: f64, mirrored: bool) -> Candidate {
        let (s, t) = if mirrored { (1.0 - yb, 1.0 - ya) } else { (ya, yb) };
        if ya == 0.0 || yb == 1.0 {
            Candidate::TypeII { edge, s, t, reversed: mirrored }
        } else {
            Candidate::TypeIII { edge, s, t, reversed: mirrored }
        }
    }

    pub fn subcurve_ref(&self) -> SubcurveRef {
        match *self {
            Candidate::TypeI { start, end } => SubcurveRef {
                start: CurveParam::new(start + 1, 0.0),
                end: CurveParam::new(end, 1.0),
                reversed: false,
            },
            Candidate::TypeII { edge, s, t, reversed } | Candidate::TypeIII { edge, s, t, reversed } => {
                SubcurveRef {
                    start: CurveParam::new(edge + 1, s),
                    end: CurveParam::new(edge + 1, t),
                    reversed,
                }
            }
        }
    }

    pub fn materialize(&self, s: &PolygonalCurve) -> Result<PolygonalCurve> {
        self.subcurve_ref().materialize(s)
    }
}

/// All Type (I) candidates of a simplification with `n_vertices` vertices.
pub fn enumerate_type1(n_vertices: usize, ell: usize) -> Vec<Candidate> {
    let mut out = Vec::new();
    if n_vertices < 2 {
        return out;
    }
    let mut span = 1;
    while span <= ell.max(1) {
        for start in 0..n_vertices {
            if start + span < n_vertices {
                out.push(Candidate::TypeI {
                    start,
                    end: start + span,
                });
            }
        }
        span *= 2;
    }
    out.sort_by_key(|c| match *c {
        Candidate::TypeI { start, end } => (start, end),
        _ => unreachable!(),
    });
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceKind {
    TypeII,
    TypeIII { gap: usize },
}

/// Pairs `(a, b)` of positions in `ℰ` with `a ≤ b`, listed in sweep order.
///
/// Consecutive pairs advance each coordinate by at most one. The maintenance
/// pass walks the list backwards, where both heights are non-increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSequence {
    pub pairs: Vec<(usize, usize)>,
    pub kind: SequenceKind,
    /// built on the mirrored row, so windows stand for reversed subedges
    pub mirrored: bool,
}

impl SweepSequence {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn steps_ok(&self) -> bool {
        self.pairs.windows(2).all(|w| {
            let ((c, d), (a, b)) = (w[0], w[1]);
            a >= c && a - c <= 1 && b >= d && b - d <= 1
        }) && self.pairs.iter().all(|&(a, b)| a <= b)
    }
}

/// The Type (II) sequence plus one Type (III) sequence per gap `2^j < |ℰ|`.
pub fn build_sweep_sequences(ext: &ExtremalSet, mirrored: bool) -> Result<Vec<SweepSequence>> {
    let m = ext.len();
    if m < 2 || ext.y(0) != 0.0 || ext.y(m - 1) != 1.0 {
        return Err(Error::MissingEndpoints);
    }
    let mut out = Vec::new();
    let mut pairs: Vec<(usize, usize)> = (0..m).map(|b| (0, b)).collect();
    pairs.extend((1..m).map(|a| (a, m - 1)));
    out.push(SweepSequence {
        pairs,
        kind: SequenceKind::TypeII,
        mirrored,
    });
    let mut gap = 1;
    while gap < m {
        let mut pairs: Vec<(usize, usize)> = (0..gap).map(|b| (0, b)).collect();
        pairs.extend((0..m - gap).map(|a| (a, a + gap)));
        pairs.extend((m - gap..m).map(|a| (a, m - 1)));
        out.push(SweepSequence {
            pairs,
            kind: SequenceKind::TypeIII { gap },
            mirrored,
        });
        gap *= 2;
    }
    Ok(out)
}
