//! Exact free space, boundary evaluators and monotone reachability.

pub mod cell;
pub mod grid;
pub mod reach;

pub use cell::{ExactCell, TAU_GEOM};
pub use grid::{CellFeatures, CellShape, Feature, FreeSpace, Row, Span};
pub use reach::{decide_frechet, decide_on, reach_cover};

use crate::curve::Point;

/// Exact free space of P-edge `ep` against S-edge `es`.
pub fn exact_cell(ep: (&Point, &Point), es: (&Point, &Point), delta: f64) -> ExactCell {
    ExactCell::new(&ep.0 .0, &ep.1 .0, &es.0 .0, &es.1 .0, delta)
}

/// `(l(y), r(y))` in the cell's local x, `(∞, ∞)` for an empty slice.
pub fn boundary_fns_exact(cell: &ExactCell, y: f64) -> (f64, f64) {
    cell.slice(y).unwrap_or((f64::INFINITY, f64::INFINITY))
}
