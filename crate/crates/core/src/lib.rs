//! Time-table filtering for the RobustCumulative constraint.
//!
//! Every activity has a duration, a height and a slack `k`: the resource
//! must be able to absorb, at any time, the largest height among activities
//! that may be running late by up to `k` units. Filtering is done with a
//! dynamic sweep in each direction ([`sweep_min`], [`sweep_max`]) and
//! coordinated by [`propagator::propagate`]. The [`oracle`] module holds
//! slow time-indexed reference implementations used in tests.

pub mod batch;
pub mod bench;
pub mod engine;
pub mod io;
pub mod model;
pub mod oracle;
pub mod propagator;
pub mod solver;
pub mod sweep_max;
pub mod sweep_min;

pub use io::{parse_instance, serialize_instance, ParseError};
pub use model::{
    compulsory_part, kcp, ActivityId, ActivitySpec, BoundsStore, Change, Height, Instance, Time,
    TimeInterval,
};
pub use propagator::{cumulative_propagate, naive_transform, propagate, Propagation};
pub use solver::{Mode, Objective, SearchStats, SolveOutcome, SolveStatus};
