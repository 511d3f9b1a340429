//! Extremal heights `ℰ(A_e)` of one row, sorted under a symbolic perturbation.

use crate::frechet::{CellShape, Row};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtremalKind {
    Start,
    Bottom,
    Left,
    Right,
    Vertex,
    Top,
    End,
}

impl ExtremalKind {
    /// Bottom below left/right/vertex below top within a cell.
    fn rank(self) -> u8 {
        match self {
            ExtremalKind::Start => 0,
            ExtremalKind::Bottom => 1,
            ExtremalKind::Left | ExtremalKind::Right | ExtremalKind::Vertex => 2,
            ExtremalKind::Top => 3,
            ExtremalKind::End => 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extremal {
    pub y: f64,
    pub cell: usize,
    pub kind: ExtremalKind,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExtremalSet {
    pub entries: Vec<Extremal>,
}

impl ExtremalSet {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn y(&self, k: usize) -> f64 {
        self.entries[k].y
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.y).collect()
    }
}

/// Polygon vertex heights of cell `i` in the row's frame; `None` for curved cells.
pub fn vertex_heights(row: &Row, i: usize) -> Option<Vec<f64>> {
    let (poly, flipped) = match row.shape(i) {
        CellShape::Poly(p) => (p, false),
        CellShape::Mirrored(c) => match &**c {
            CellShape::Poly(p) => (p, true),
            _ => return None,
        },
        CellShape::Exact(_) => return None,
    };
    let flip = flipped != row.is_mirrored();
    Some(poly.vertices().iter().map(|&(_, y)| if flip { 1.0 - y } else { y }).collect())
}

/// Heights of left/right/bottom/top-most features of every non-empty cell,
/// plus 0 and 1; with `with_vertices`, every polygon vertex height as well.
pub fn extremal_points(row: &Row, with_vertices: bool) -> ExtremalSet {
    let mut entries = vec![
        Extremal {
            y: 0.0,
            cell: 0,
            kind: ExtremalKind::Start,
        },
        Extremal {
            y: 1.0,
            cell: 0,
            kind: ExtremalKind::End,
        },
    ];
    let mut push = |y: f64, cell: usize, kind: ExtremalKind| {
        entries.push(Extremal { y, cell, kind });
    };
    for i in 0..row.n() {
        let Some(f) = row.features(i) else { continue };
        push(f.bottom.y, i, ExtremalKind::Bottom);
        push(f.top.y, i, ExtremalKind::Top);
        push(f.left.0, i, ExtremalKind::Left);
        push(f.left.1, i, ExtremalKind::Left);
        push(f.right.0, i, ExtremalKind::Right);
        push(f.right.1, i, ExtremalKind::Right);
        if with_vertices {
            for y in vertex_heights(row, i).unwrap_or_default() {
                if y >= f.bottom.y && y <= f.top.y {
                    push(y, i, ExtremalKind::Vertex);
                }
            }
        }
    }
    entries.sort_by(|a, b| {
        a.y.total_cmp(&b.y)
            .then(a.kind.rank().cmp(&b.kind.rank()))
            .then(a.cell.cmp(&b.cell))
            .then(a.kind.cmp(&b.kind))
    });
    entries.dedup_by(|a, b| a == b);
    ExtremalSet { entries }
}
