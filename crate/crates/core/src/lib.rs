//! Subtrajectory covering (SC) and coverage maximization (SCM) under the
//! continuous Fréchet distance.

pub mod approx;
pub mod candidates;
pub mod coverage;
pub mod curve;
pub mod error;
pub mod fast;
pub mod frechet;
pub mod interval;
#[cfg(any(test, feature = "test-support"))]
pub mod oracle;
pub mod sc;
pub mod scm;
pub mod simplify;

pub use curve::{CurveParam, Point, PolygonalCurve, SubcurveRef};
pub use error::{Error, Result};
pub use interval::IntervalUnion;
