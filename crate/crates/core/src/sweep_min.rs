//! Left-to-right dynamic sweep adjusting start lower bounds.
//!
//! Compulsory parts are discovered on the fly: an `Scp` event sits at every
//! `s_max` and, once reached, the activity's earliest end is final, so its
//! `Ecp` and K-compulsory part can be scheduled without ever creating
//! anything on the left of the line. A single pass reaches the fixpoint.

use crate::engine::{
    CandidateSet, Direction, Event, EventKind, EventQueue, LazyActivityHeap, SweepOutcome,
    SweepStats,
};
use crate::model::{ActivityId, BoundsStore, Change, Height, Instance, Time};

/// Stand-in for the date after the last event.
pub(crate) const END: Time = Time::MAX / 4;

/// Initial events: `Scp` at `s_max` for everybody, `Pr` at `s_min` for
/// activities that are not fixed.
pub fn generate_events_min(instance: &Instance, bounds: &BoundsStore) -> EventQueue {
    let mut q = EventQueue::with_capacity(Direction::Forward, 4 * instance.len());
    for a in instance.ids() {
        q.push(Event::new(EventKind::Scp, a, bounds.s_max(a)));
        if !bounds.is_fixed(a) {
            q.push(Event::new(EventKind::Pr, a, bounds.s_min(a)));
        }
    }
    q
}

/// Totals of one `filter_min` pass.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FilterReport {
    pub prunings: usize,
    pub failed: bool,
}

pub struct MinSweepState<'a> {
    instance: &'a Instance,
    pub queue: EventQueue,
    /// Current position of the line.
    pub delta: Time,
    /// Next event date, [`END`] when none is left.
    pub next: Time,
    /// Sum of compulsory-part heights over `[delta, next)`.
    pub profile: Height,
    pub kcp: LazyActivityHeap,
    pub candidates: CandidateSet,
    events: Vec<Event>,
    scratch: Vec<ActivityId>,
}

impl<'a> MinSweepState<'a> {
    pub fn new(instance: &'a Instance, bounds: &BoundsStore) -> Self {
        Self {
            instance,
            queue: generate_events_min(instance, bounds),
            delta: 0,
            next: END,
            profile: 0,
            kcp: LazyActivityHeap::new(),
            candidates: CandidateSet::new(),
            events: Vec::new(),
            scratch: Vec::new(),
        }
    }

    /// Extracts and applies every event at the next date. Returns `false`
    /// when the queue was already empty.
    pub fn process_events_min(&mut self, bounds: &BoundsStore) -> bool {
        self.events.clear();
        let Some(delta) = self.queue.extract_front(&mut self.events) else {
            return false;
        };
        self.delta = delta;
        for i in 0..self.events.len() {
            let Event { kind, activity: a, .. } = self.events[i];
            let spec = self.instance.spec(a);
            match kind {
                EventKind::Scp => {
                    let e_min = bounds.e_min(a);
                    if delta < e_min {
                        self.profile += spec.height;
                        self.queue.push(Event::new(EventKind::Ecp, a, e_min));
                    } else if delta < e_min + spec.slack {
                        self.kcp.insert(a, spec.height);
                        self.queue.push(Event::new(EventKind::Ekcp, a, e_min + spec.slack));
                    }
                }
                EventKind::Ecp => {
                    self.profile -= spec.height;
                    if spec.slack > 0 {
                        self.kcp.insert(a, spec.height);
                        self.queue.push(Event::new(EventKind::Ekcp, a, delta + spec.slack));
                    }
                }
                // expired entries leave the heap lazily
                EventKind::Ekcp => {}
                EventKind::Pr => self.candidates.insert(a, spec.height),
                EventKind::Skcp => unreachable!("no SKCP events in the forward sweep"),
            }
        }
        self.next = self.queue.next_date().unwrap_or(END);
        true
    }

    /// Highest K-compulsory part covering `[delta, next)`.
    pub fn max_kcp(&mut self, bounds: &BoundsStore) -> Height {
        let delta = self.delta;
        let instance = self.instance;
        self.kcp
            .max_height(|a| delta >= bounds.e_min(a) + instance.spec(a).slack)
    }

    /// Tests every candidate against `[delta, next)` and pushes its start
    /// to `next` when either its execution or its delay window cannot fit.
    pub fn filter_min(&mut self, bounds: &mut BoundsStore) -> FilterReport {
        let mut report = FilterReport::default();
        let cap = self.instance.capacity;
        let (delta, next) = (self.delta, self.next);
        let max_kcp = self.max_kcp(bounds);
        // nobody at or below this height conflicts on this interval
        let threshold = cap - self.profile - max_kcp;
        self.scratch.clear();
        self.candidates.taller_than(threshold, &mut self.scratch);
        for i in 0..self.scratch.len() {
            let a = self.scratch[i];
            let spec = self.instance.spec(a);
            let e_min = bounds.e_min(a);
            // Past s_max the rest of the placement is the activity's own
            // compulsory and K-compulsory parts, covered by the overload test.
            if bounds.s_max(a) <= delta || e_min + spec.slack <= delta {
                self.candidates.remove(a, spec.height);
                continue;
            }
            let conflict = if delta < e_min {
                self.profile + spec.height + max_kcp > cap
            } else {
                self.profile + spec.height > cap
            };
            if conflict {
                report.prunings += 1;
                if bounds.tighten_start_min(a, next) == Change::Failed {
                    report.failed = true;
                    return report;
                }
            }
        }
        report
    }
}

pub fn sweep_min(instance: &Instance, bounds: &mut BoundsStore) -> SweepOutcome {
    sweep_min_with_stats(instance, bounds, &mut SweepStats::default())
}

pub fn sweep_min_with_stats(
    instance: &Instance,
    bounds: &mut BoundsStore,
    stats: &mut SweepStats,
) -> SweepOutcome {
    let mut state = MinSweepState::new(instance, bounds);
    let mut changed = false;
    let outcome = loop {
        if !state.process_events_min(bounds) {
            break SweepOutcome::Fixpoint { changed };
        }
        if state.profile + state.max_kcp(bounds) > instance.capacity {
            break SweepOutcome::Failed;
        }
        let report = state.filter_min(bounds);
        stats.prunings += report.prunings;
        changed |= report.prunings > 0;
        if report.failed {
            break SweepOutcome::Failed;
        }
    };
    stats.events += state.queue.extracted();
    stats.created += state.queue.pushed();
    outcome
}
