//! Machinery shared by both sweep directions: a dated event queue that hands
//! out all events of the next date at once, and the lazily cleaned
//! max-height heap of activities whose K-compulsory part covers the line.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap};

use crate::model::{ActivityId, Height, Time};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Left to right, used to filter start lower bounds.
    Forward,
    /// Right to left, used to filter end upper bounds.
    Backward,
}

impl Direction {
    /// Maps a date so that "earlier in sweep order" is always "smaller".
    #[inline]
    fn orient(self, date: Time) -> Time {
        match self {
            Direction::Forward => date,
            Direction::Backward => -date,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EventKind {
    /// Start of a compulsory part.
    Scp,
    /// End of a compulsory part.
    Ecp,
    /// Activity becomes a pruning candidate.
    Pr,
    /// End of a K-compulsory part.
    Ekcp,
    /// Start of a K-compulsory part (backward sweep only).
    Skcp,
}

impl EventKind {
    /// Processing rank among events sharing a date.
    fn rank(self, dir: Direction) -> u8 {
        use EventKind::*;
        match dir {
            Direction::Forward => match self {
                Scp => 0,
                Ecp => 1,
                Ekcp => 2,
                Pr => 3,
                Skcp => 4,
            },
            Direction::Backward => match self {
                Ecp => 0,
                Scp => 1,
                Ekcp => 2,
                Skcp => 3,
                Pr => 4,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Event {
    pub kind: EventKind,
    pub activity: ActivityId,
    pub date: Time,
}

impl Event {
    pub fn new(kind: EventKind, activity: ActivityId, date: Time) -> Self {
        Self {
            kind,
            activity,
            date,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Entry {
    key: (Time, u8, usize),
    event: Event,
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Pending events, ordered by date in sweep direction.
///
/// Once a date has been extracted, new events may only be pushed strictly
/// beyond it.
#[derive(Debug, Clone)]
pub struct EventQueue {
    dir: Direction,
    heap: BinaryHeap<Reverse<Entry>>,
    position: Option<Time>,
    pushed: usize,
    extracted: usize,
}

impl EventQueue {
    pub fn new(dir: Direction) -> Self {
        Self {
            dir,
            heap: BinaryHeap::new(),
            position: None,
            pushed: 0,
            extracted: 0,
        }
    }

    pub fn with_capacity(dir: Direction, capacity: usize) -> Self {
        Self {
            heap: BinaryHeap::with_capacity(capacity),
            ..Self::new(dir)
        }
    }

    pub fn direction(&self) -> Direction {
        self.dir
    }

    pub fn push(&mut self, event: Event) {
        if let Some(pos) = self.position {
            assert!(
                self.dir.orient(event.date) > self.dir.orient(pos),
                "event {event:?} created at or behind the sweep line {pos}"
            );
        }
        self.pushed += 1;
        self.heap.push(Reverse(Entry {
            key: (
                self.dir.orient(event.date),
                event.kind.rank(self.dir),
                event.activity.0,
            ),
            event,
        }));
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    /// Total number of events ever pushed.
    pub fn pushed(&self) -> usize {
        self.pushed
    }

    /// Total number of events extracted so far.
    pub fn extracted(&self) -> usize {
        self.extracted
    }

    /// Date of the next pending event; `None` once the queue is exhausted.
    pub fn next_date(&self) -> Option<Time> {
        self.heap.peek().map(|Reverse(e)| e.event.date)
    }

    /// Removes every event carrying the extreme date and appends them to
    /// `out` in processing order. Returns that date.
    pub fn extract_front(&mut self, out: &mut Vec<Event>) -> Option<Time> {
        let date = self.next_date()?;
        while let Some(Reverse(e)) = self.heap.peek() {
            if e.event.date != date {
                break;
            }
            out.push(e.event);
            self.heap.pop();
            self.extracted += 1;
        }
        self.position = Some(date);
        Some(date)
    }
}

/// Max-heap of activities by height (ties: lower id first). Entries are
/// never removed explicitly: an entry found expired at the top is dropped.
#[derive(Debug, Clone, Default)]
pub struct LazyActivityHeap {
    heap: BinaryHeap<(Height, Reverse<usize>)>,
}

impl LazyActivityHeap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, a: ActivityId, height: Height) {
        self.heap.push((height, Reverse(a.0)));
    }

    /// Physical number of entries, expired ones included.
    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    fn clean_top(&mut self, expired: &impl Fn(ActivityId) -> bool) -> Option<(Height, ActivityId)> {
        while let Some(&(h, Reverse(id))) = self.heap.peek() {
            if expired(ActivityId(id)) {
                self.heap.pop();
            } else {
                return Some((h, ActivityId(id)));
            }
        }
        None
    }

    /// Height of the highest live entry, 0 when there is none.
    pub fn max_height(&mut self, expired: impl Fn(ActivityId) -> bool) -> Height {
        self.clean_top(&expired).map_or(0, |(h, _)| h)
    }

    /// Like [`max_height`](Self::max_height) but ignoring `x`: when `x` is on
    /// top, the second live entry answers.
    pub fn max_height_excluding(
        &mut self,
        x: ActivityId,
        expired: impl Fn(ActivityId) -> bool,
    ) -> Height {
        match self.clean_top(&expired) {
            None => 0,
            Some((h, top)) if top != x => h,
            Some(_) => {
                let top = self.heap.pop().expect("peeked");
                let second = self.clean_top(&expired).map_or(0, |(h, _)| h);
                self.heap.push(top);
                second
            }
        }
    }
}

/// Pruning candidates ordered by decreasing height, so that a pass can stop
/// at the first activity too small to be in conflict.
#[derive(Debug, Clone, Default)]
pub struct CandidateSet {
    set: BTreeSet<(Reverse<Height>, usize)>,
}

impl CandidateSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, a: ActivityId, height: Height) {
        self.set.insert((Reverse(height), a.0));
    }

    pub fn remove(&mut self, a: ActivityId, height: Height) {
        self.set.remove(&(Reverse(height), a.0));
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    /// Appends to `out` every candidate strictly taller than `threshold`.
    pub fn taller_than(&self, threshold: Height, out: &mut Vec<ActivityId>) {
        out.extend(
            self.set
                .iter()
                .take_while(|(Reverse(h), _)| *h > threshold)
                .map(|&(_, id)| ActivityId(id)),
        );
    }
}

/// Result of one sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepOutcome {
    Failed,
    Fixpoint { changed: bool },
}

impl SweepOutcome {
    pub fn is_failed(self) -> bool {
        self == SweepOutcome::Failed
    }

    pub fn changed(self) -> bool {
        matches!(self, SweepOutcome::Fixpoint { changed: true })
    }
}

/// Instrumentation filled in by a sweep.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepStats {
    /// Events extracted from the queue.
    pub events: usize,
    /// Events pushed into the queue, initial ones included.
    pub created: usize,
    /// Bound updates performed.
    pub prunings: usize,
    /// Per activity, number of SKCP events created (backward sweep only).
    pub skcp_created: Vec<u32>,
}
