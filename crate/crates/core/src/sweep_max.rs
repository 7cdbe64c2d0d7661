//! Right-to-left dynamic sweep adjusting end upper bounds.
//!
//! This is not the mirror image of the forward sweep. K-compulsory parts
//! are entered from their fixed right end `e_min + k`, while their left end
//! `max(s_max, e_min)` keeps moving left as long as the owner is being
//! pruned. `Skcp` events track that left end and are regenerated when found
//! stale. An activity's own K-compulsory part is ignored when testing its
//! own latest placement.

use crate::engine::{
    CandidateSet, Direction, Event, EventKind, EventQueue, LazyActivityHeap, SweepOutcome,
    SweepStats,
};
use crate::model::{ActivityId, BoundsStore, Change, Height, Instance, Time};
use crate::sweep_min::{FilterReport, END};

/// Initial events: `Ekcp` at `e_min + k` (when `k > 0`), `Ecp` at `e_min`,
/// and `Pr` at `e_max + k` for activities that are not fixed.
pub fn generate_events_max(instance: &Instance, bounds: &BoundsStore) -> EventQueue {
    let mut q = EventQueue::with_capacity(Direction::Backward, 4 * instance.len());
    for a in instance.ids() {
        let k = instance.spec(a).slack;
        let e_min = bounds.e_min(a);
        if k > 0 {
            q.push(Event::new(EventKind::Ekcp, a, e_min + k));
        }
        q.push(Event::new(EventKind::Ecp, a, e_min));
        if !bounds.is_fixed(a) {
            q.push(Event::new(EventKind::Pr, a, bounds.e_max(a) + k));
        }
    }
    q
}

#[inline]
fn kcp_start(bounds: &BoundsStore, a: ActivityId) -> Time {
    bounds.s_max(a).max(bounds.e_min(a))
}

pub struct MaxSweepState<'a> {
    instance: &'a Instance,
    pub queue: EventQueue,
    /// Current position of the line.
    pub delta: Time,
    /// Next (smaller) event date, `-END` when none is left.
    pub next: Time,
    /// Sum of compulsory-part heights over `[next, delta)`.
    pub profile: Height,
    pub kcp: LazyActivityHeap,
    pub candidates: CandidateSet,
    /// SKCP events created so far, per activity.
    pub skcp_created: Vec<u32>,
    events: Vec<Event>,
    scratch: Vec<ActivityId>,
}

impl<'a> MaxSweepState<'a> {
    pub fn new(instance: &'a Instance, bounds: &BoundsStore) -> Self {
        Self {
            instance,
            queue: generate_events_max(instance, bounds),
            delta: 0,
            next: -END,
            profile: 0,
            kcp: LazyActivityHeap::new(),
            candidates: CandidateSet::new(),
            skcp_created: vec![0; instance.len()],
            events: Vec::new(),
            scratch: Vec::new(),
        }
    }

    fn push_skcp(&mut self, a: ActivityId, date: Time) {
        self.skcp_created[a.0] += 1;
        self.queue.push(Event::new(EventKind::Skcp, a, date));
    }

    /// Extracts and applies every event at the next (largest) date. Returns
    /// `false` when the queue was already empty.
    pub fn process_events_max(&mut self, bounds: &BoundsStore) -> bool {
        self.events.clear();
        let Some(delta) = self.queue.extract_front(&mut self.events) else {
            return false;
        };
        self.delta = delta;
        for i in 0..self.events.len() {
            let Event { kind, activity: a, .. } = self.events[i];
            let spec = self.instance.spec(a);
            match kind {
                EventKind::Ecp => {
                    let s_max = bounds.s_max(a);
                    if s_max < delta {
                        self.profile += spec.height;
                        self.queue.push(Event::new(EventKind::Scp, a, s_max));
                    }
                }
                EventKind::Scp => self.profile -= spec.height,
                EventKind::Ekcp => {
                    let start = kcp_start(bounds, a);
                    if start < delta {
                        self.kcp.insert(a, spec.height);
                        self.push_skcp(a, start);
                    }
                }
                EventKind::Skcp => {
                    // stale: the owner was pruned since this event was created
                    let start = kcp_start(bounds, a);
                    if start < delta {
                        self.push_skcp(a, start);
                    }
                }
                EventKind::Pr => self.candidates.insert(a, spec.height),
            }
        }
        self.next = self.queue.next_date().unwrap_or(-END);
        true
    }

    fn expired(bounds: &BoundsStore, delta: Time) -> impl Fn(ActivityId) -> bool + '_ {
        move |a| delta <= kcp_start(bounds, a)
    }

    /// Highest K-compulsory part covering `[next, delta)`.
    pub fn max_kcp(&mut self, bounds: &BoundsStore) -> Height {
        self.kcp.max_height(Self::expired(bounds, self.delta))
    }

    /// Highest K-compulsory part covering `[next, delta)` other than `a`'s.
    pub fn max_kcp_excluding(&mut self, a: ActivityId, bounds: &BoundsStore) -> Height {
        self.kcp
            .max_height_excluding(a, Self::expired(bounds, self.delta))
    }

    /// Tests every candidate placed at its latest start against
    /// `[next, delta)`: the execution `[s_max, e_max)` and the delay window
    /// `[e_max, e_max + k)` must both fit.
    pub fn filter_max(&mut self, bounds: &mut BoundsStore) -> FilterReport {
        let mut report = FilterReport::default();
        let cap = self.instance.capacity;
        let (delta, next) = (self.delta, self.next);
        let max_kcp = self.max_kcp(bounds);
        let threshold = cap - self.profile - max_kcp;
        self.scratch.clear();
        self.candidates.taller_than(threshold, &mut self.scratch);
        for i in 0..self.scratch.len() {
            let a = self.scratch[i];
            let spec = self.instance.spec(a);
            // Left of max(s_max, e_min) the placement is the activity's own
            // compulsory part, covered by the overload test.
            if delta <= kcp_start(bounds, a) {
                self.candidates.remove(a, spec.height);
                continue;
            }
            if bounds.e_max(a) > next {
                let others = self.max_kcp_excluding(a, bounds);
                if self.profile + spec.height + others > cap {
                    report.prunings += 1;
                    if bounds.tighten_end_max(a, next) == Change::Failed {
                        report.failed = true;
                        return report;
                    }
                }
            }
            let e_max = bounds.e_max(a);
            if spec.slack > 0
                && e_max < delta
                && e_max + spec.slack > next
                && self.profile + spec.height > cap
            {
                report.prunings += 1;
                if bounds.tighten_end_max(a, next - spec.slack) == Change::Failed {
                    report.failed = true;
                    return report;
                }
            }
        }
        report
    }
}

pub fn sweep_max(instance: &Instance, bounds: &mut BoundsStore) -> SweepOutcome {
    sweep_max_with_stats(instance, bounds, &mut SweepStats::default())
}

pub fn sweep_max_with_stats(
    instance: &Instance,
    bounds: &mut BoundsStore,
    stats: &mut SweepStats,
) -> SweepOutcome {
    let mut state = MaxSweepState::new(instance, bounds);
    let mut changed = false;
    let outcome = loop {
        if !state.process_events_max(bounds) {
            break SweepOutcome::Fixpoint { changed };
        }
        if state.profile + state.max_kcp(bounds) > instance.capacity {
            break SweepOutcome::Failed;
        }
        let report = state.filter_max(bounds);
        stats.prunings += report.prunings;
        changed |= report.prunings > 0;
        if report.failed {
            break SweepOutcome::Failed;
        }
    };
    stats.events += state.queue.extracted();
    stats.created += state.queue.pushed();
    if stats.skcp_created.len() < instance.len() {
        stats.skcp_created.resize(instance.len(), 0);
    }
    for (total, n) in stats.skcp_created.iter_mut().zip(&state.skcp_created) {
        *total += n;
    }
    outcome
}
