//! Cayley-graph machinery for rearrangement groups: geodesic distances,
//! graded intervals between group elements, poset analytics and
//! classification, and exact three-point medians.

pub mod cayley;
pub mod classify;
pub mod error;
pub mod group;
pub mod interval;
pub mod median;
pub mod perm;

pub use cayley::{DistanceOracle, GeodesicMode, GeodesicSet, Strategy};
pub use classify::{census, classify, normaliser, theorem1_check, Classification, Relation};
pub use error::{Error, Result};
pub use group::{is_generating, Element, GeneratingSet, GroupModel, ModelKind, Word};
pub use interval::{
    build_interval, interval_stats, order_isomorphic, partial_interval, prefix_le, GradedInterval,
    IntervalStats,
};
pub use median::{median_parity_check, medians, MedianResult, Triangle};
pub use perm::Perm;
