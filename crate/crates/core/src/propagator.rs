//! Joint fixpoint of both sweeps.

use crate::engine::{SweepOutcome, SweepStats};
use crate::model::{BoundsStore, Instance};
use crate::sweep_max::sweep_max_with_stats;
use crate::sweep_min::sweep_min_with_stats;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Propagation {
    Failed,
    /// Fixpoint reached; `changed` tells whether any bound moved.
    Fixpoint { changed: bool },
}

impl Propagation {
    pub fn is_failed(self) -> bool {
        self == Propagation::Failed
    }

    pub fn changed(self) -> bool {
        matches!(self, Propagation::Fixpoint { changed: true })
    }
}

/// Counters accumulated over a [`propagate_with_stats`] call.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PropagationStats {
    pub min_sweeps: usize,
    pub max_sweeps: usize,
    /// Per forward sweep, events processed.
    pub min_events: Vec<usize>,
    /// Per backward sweep, SKCP events created per activity.
    pub max_skcp: Vec<Vec<u32>>,
    pub max_events: Vec<usize>,
}

/// Alternates the forward and backward sweeps until neither moves a bound.
pub fn propagate(instance: &Instance, bounds: &mut BoundsStore) -> Propagation {
    propagate_inner(instance, bounds, None)
}

pub fn propagate_with_stats(
    instance: &Instance,
    bounds: &mut BoundsStore,
    stats: &mut PropagationStats,
) -> Propagation {
    propagate_inner(instance, bounds, Some(stats))
}

fn propagate_inner(
    instance: &Instance,
    bounds: &mut BoundsStore,
    mut stats: Option<&mut PropagationStats>,
) -> Propagation {
    if bounds.is_failed() {
        return Propagation::Failed;
    }
    let mut changed = false;
    // Forward sweep first; afterwards one sweep without change in the other
    // direction means both are at fixpoint.
    let mut forward = true;
    let mut quiet = 0;
    while quiet < 2 {
        let mut sweep = SweepStats::default();
        let outcome = if forward {
            sweep_min_with_stats(instance, bounds, &mut sweep)
        } else {
            sweep_max_with_stats(instance, bounds, &mut sweep)
        };
        if let Some(s) = stats.as_deref_mut() {
            if forward {
                s.min_sweeps += 1;
                s.min_events.push(sweep.events);
            } else {
                s.max_sweeps += 1;
                s.max_events.push(sweep.events);
                s.max_skcp.push(sweep.skcp_created);
            }
        }
        match outcome {
            SweepOutcome::Failed => return Propagation::Failed,
            SweepOutcome::Fixpoint { changed: true } => {
                changed = true;
                quiet = 1;
            }
            SweepOutcome::Fixpoint { changed: false } => quiet += 1,
        }
        forward = !forward;
    }
    Propagation::Fixpoint { changed }
}

/// Plain Cumulative time-table filtering: [`propagate`] with every slack
/// set to zero.
pub fn cumulative_propagate(instance: &Instance, bounds: &mut BoundsStore) -> Propagation {
    if instance.activities.iter().all(|a| a.slack == 0) {
        propagate(instance, bounds)
    } else {
        propagate(&instance.without_slack(), bounds)
    }
}

/// Models robustness by stretching every duration by its slack.
pub fn naive_transform(instance: &Instance) -> Instance {
    let activities = instance
        .ids()
        .map(|a| {
            let mut spec = *instance.spec(a);
            spec.duration += spec.slack;
            spec.slack = 0;
            (spec, instance.bounds.s_min(a), instance.bounds.s_max(a))
        })
        .collect();
    Instance::new(instance.capacity, activities, Some(instance.horizon))
}
