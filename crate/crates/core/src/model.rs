//! Instance data, start/end bound stores and the compulsory-part intervals
//! derived from them.

use std::fmt;
use std::sync::Arc;

/// A point on the discrete time axis.
pub type Time = i64;

/// Resource consumption of an activity, and the resource capacity.
pub type Height = i64;

/// Dense index of an activity inside an [`Instance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActivityId(pub usize);

impl ActivityId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ActivityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Immutable data of one activity: duration, height and slack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ActivitySpec {
    pub duration: Time,
    pub height: Height,
    pub slack: Time,
}

impl ActivitySpec {
    pub fn new(duration: Time, height: Height, slack: Time) -> Self {
        Self {
            duration,
            height,
            slack,
        }
    }
}

/// An interval on the time axis. Whether `end` is included is stated by
/// whoever produces it; everything in this crate uses `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TimeInterval {
    pub start: Time,
    pub end: Time,
}

impl TimeInterval {
    pub fn new(start: Time, end: Time) -> Self {
        Self { start, end }
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    /// Half-open membership test.
    pub fn contains(&self, t: Time) -> bool {
        self.start <= t && t < self.end
    }

    pub fn len(&self) -> Time {
        (self.end - self.start).max(0)
    }
}

/// Outcome of a single bound update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Change {
    Unchanged,
    Tightened,
    Failed,
}

impl Change {
    pub fn is_failed(self) -> bool {
        self == Change::Failed
    }
}

/// Start-time bounds of every activity. End bounds are channeled through
/// the (fixed) durations: `e = s + p`.
///
/// Bounds only ever shrink. A store where some `s_min > s_max` is failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsStore {
    durations: Arc<[Time]>,
    s_min: Vec<Time>,
    s_max: Vec<Time>,
}

impl BoundsStore {
    pub fn new(durations: impl Into<Arc<[Time]>>, s_min: Vec<Time>, s_max: Vec<Time>) -> Self {
        let durations = durations.into();
        assert_eq!(durations.len(), s_min.len());
        assert_eq!(durations.len(), s_max.len());
        Self {
            durations,
            s_min,
            s_max,
        }
    }

    pub fn len(&self) -> usize {
        self.s_min.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s_min.is_empty()
    }

    #[inline]
    pub fn duration(&self, a: ActivityId) -> Time {
        self.durations[a.0]
    }

    #[inline]
    pub fn s_min(&self, a: ActivityId) -> Time {
        self.s_min[a.0]
    }

    #[inline]
    pub fn s_max(&self, a: ActivityId) -> Time {
        self.s_max[a.0]
    }

    #[inline]
    pub fn e_min(&self, a: ActivityId) -> Time {
        self.s_min[a.0] + self.durations[a.0]
    }

    #[inline]
    pub fn e_max(&self, a: ActivityId) -> Time {
        self.s_max[a.0] + self.durations[a.0]
    }

    #[inline]
    pub fn is_fixed(&self, a: ActivityId) -> bool {
        self.s_min[a.0] == self.s_max[a.0]
    }

    pub fn all_fixed(&self) -> bool {
        self.s_min.iter().zip(&self.s_max).all(|(lo, hi)| lo == hi)
    }

    pub fn is_failed(&self) -> bool {
        self.s_min.iter().zip(&self.s_max).any(|(lo, hi)| lo > hi)
    }

    pub fn starts_min(&self) -> &[Time] {
        &self.s_min
    }

    pub fn starts_max(&self) -> &[Time] {
        &self.s_max
    }

    pub fn ids(&self) -> impl Iterator<Item = ActivityId> {
        (0..self.len()).map(ActivityId)
    }

    /// `s_min := max(s_min, value)`.
    pub fn tighten_start_min(&mut self, a: ActivityId, value: Time) -> Change {
        let i = a.0;
        if value <= self.s_min[i] {
            return Change::Unchanged;
        }
        self.s_min[i] = value;
        if value > self.s_max[i] {
            Change::Failed
        } else {
            Change::Tightened
        }
    }

    /// `s_max := min(s_max, value)`.
    pub fn tighten_start_max(&mut self, a: ActivityId, value: Time) -> Change {
        let i = a.0;
        if value >= self.s_max[i] {
            return Change::Unchanged;
        }
        self.s_max[i] = value;
        if self.s_min[i] > value {
            Change::Failed
        } else {
            Change::Tightened
        }
    }

    /// `e_max := min(e_max, value)`, moving `s_max` along.
    pub fn tighten_end_max(&mut self, a: ActivityId, value: Time) -> Change {
        let p = self.durations[a.0];
        self.tighten_start_max(a, value.saturating_sub(p))
    }

    /// Fixes `a` at `start`. Fails when `start` is outside the domain.
    pub fn fix_start(&mut self, a: ActivityId, start: Time) -> Change {
        match (self.tighten_start_min(a, start), self.tighten_start_max(a, start)) {
            (Change::Failed, _) | (_, Change::Failed) => Change::Failed,
            (Change::Unchanged, Change::Unchanged) => Change::Unchanged,
            _ => Change::Tightened,
        }
    }

    /// Same store with every duration replaced; start bounds are kept.
    pub fn with_durations(&self, durations: impl Into<Arc<[Time]>>) -> Self {
        Self::new(durations, self.s_min.clone(), self.s_max.clone())
    }

    /// Start assignment of a fully fixed store.
    pub fn assignment(&self) -> Option<Vec<Time>> {
        self.all_fixed().then(|| self.s_min.clone())
    }
}

/// Compulsory part `[s_max, e_min)`, absent when empty.
pub fn compulsory_part(bounds: &BoundsStore, a: ActivityId) -> Option<TimeInterval> {
    let (s, e) = (bounds.s_max(a), bounds.e_min(a));
    (s < e).then(|| TimeInterval::new(s, e))
}

/// K-compulsory part `[max(s_max, e_min), e_min + k)`, possibly empty.
pub fn kcp(bounds: &BoundsStore, a: ActivityId, spec: &ActivitySpec) -> TimeInterval {
    let e_min = bounds.e_min(a);
    TimeInterval::new(bounds.s_max(a).max(e_min), e_min + spec.slack)
}

/// A RobustCumulative instance: capacity, activities, initial start bounds
/// and a time horizon bounding every `e_max + k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub capacity: Height,
    pub activities: Vec<ActivitySpec>,
    pub bounds: BoundsStore,
    pub horizon: Time,
}

impl Instance {
    /// Builds an instance from `(spec, s_min, s_max)` triples. Pass `None`
    /// as horizon to use `sum(p + k) + max s_min`.
    pub fn new(
        capacity: Height,
        activities: Vec<(ActivitySpec, Time, Time)>,
        horizon: Option<Time>,
    ) -> Self {
        let specs: Vec<ActivitySpec> = activities.iter().map(|(s, _, _)| *s).collect();
        let durations: Vec<Time> = specs.iter().map(|s| s.duration).collect();
        let s_min = activities.iter().map(|(_, lo, _)| *lo).collect();
        let s_max = activities.iter().map(|(_, _, hi)| *hi).collect();
        let bounds = BoundsStore::new(durations, s_min, s_max);
        let horizon = horizon.unwrap_or_else(|| default_horizon(&specs, &bounds));
        Self {
            capacity,
            activities: specs,
            bounds,
            horizon,
        }
    }

    pub fn len(&self) -> usize {
        self.activities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.activities.is_empty()
    }

    #[inline]
    pub fn spec(&self, a: ActivityId) -> &ActivitySpec {
        &self.activities[a.0]
    }

    pub fn ids(&self) -> impl Iterator<Item = ActivityId> {
        (0..self.len()).map(ActivityId)
    }

    pub fn max_slack(&self) -> Time {
        self.activities.iter().map(|a| a.slack).max().unwrap_or(0)
    }

    /// Copy with every slack set to zero (plain Cumulative).
    pub fn without_slack(&self) -> Instance {
        let mut out = self.clone();
        for a in &mut out.activities {
            a.slack = 0;
        }
        out
    }

    /// Checks the structural invariants of an instance.
    pub fn validate(&self) -> Result<(), String> {
        if self.capacity < 1 {
            return Err(format!("capacity must be >= 1, got {}", self.capacity));
        }
        for a in self.ids() {
            let spec = self.spec(a);
            if spec.duration < 1 {
                return Err(format!("activity {a}: duration must be >= 1"));
            }
            if spec.height < 1 {
                return Err(format!("activity {a}: height must be >= 1"));
            }
            if spec.slack < 0 {
                return Err(format!("activity {a}: slack must be >= 0"));
            }
            if self.bounds.duration(a) != spec.duration {
                return Err(format!("activity {a}: bounds store duration mismatch"));
            }
            if self.bounds.s_min(a) < 0 {
                return Err(format!("activity {a}: s_min must be >= 0"));
            }
            if self.bounds.s_min(a) > self.bounds.s_max(a) {
                return Err(format!("activity {a}: s_min > s_max"));
            }
            if self.bounds.e_max(a) + spec.slack > self.horizon {
                return Err(format!("activity {a}: e_max + k exceeds horizon {}", self.horizon));
            }
        }
        Ok(())
    }
}

fn default_horizon(specs: &[ActivitySpec], bounds: &BoundsStore) -> Time {
    let work: Time = specs.iter().map(|s| s.duration + s.slack).sum();
    let release = bounds.starts_min().iter().copied().max().unwrap_or(0);
    let needed = bounds
        .ids()
        .map(|a| bounds.e_max(a) + specs[a.0].slack)
        .max()
        .unwrap_or(0);
    (work + release).max(needed)
}
