//! Coverage of a single edge's row: combinatorial state and its maintenance.

pub mod bad;
pub mod batch;
pub mod ds;
pub mod maintain;
pub mod state;
#[cfg(test)]
pub(crate) mod testgen;

pub use bad::compute_bad_windows;
pub use batch::{batch_point_query, WeightedPoints};
pub use ds::{JumpRightDS, ShootLeftDS};
pub use maintain::{maintain, IntervalEvent, Maintainer, PairKind};
pub use state::{proxy_cov, proxy_parts, scratch_state, CombinatorialState, HKey, RowKeys};
