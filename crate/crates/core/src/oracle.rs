//! Time-indexed ground truth.
//!
//! Everything here evaluates the declarative conditions point by point over
//! the time axis. It is deliberately naive and shares no code with the
//! sweeps, so it can be used to check them.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{ActivityId, BoundsStore, Change, Height, Instance, Time};

/// Which declarative condition a [`Violation`] breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    FailureCheck,
    /// Lower bounds, activity placed at its earliest start.
    MinRunning,
    /// Lower bounds, delay window after the earliest end.
    MinDelay,
    /// Upper bounds, activity placed at its latest start.
    MaxRunning,
    /// Upper bounds, delay window after the latest end.
    MaxDelay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Violation {
    pub activity: ActivityId,
    pub time: Time,
    pub condition: Condition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureCheck {
    Ok,
    Fail(Time),
}

impl FailureCheck {
    pub fn is_fail(self) -> bool {
        matches!(self, FailureCheck::Fail(_))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large for exhaustive enumeration (n = {n}, horizon = {horizon})")]
    TooLarge { n: usize, horizon: Time },
}

pub const ENUMERATION_MAX_ACTIVITIES: usize = 5;
pub const ENUMERATION_MAX_HORIZON: Time = 12;

/// Time span that covers every interval the bounds can produce.
fn span(instance: &Instance, bounds: &BoundsStore) -> usize {
    let reach = instance
        .ids()
        .map(|a| bounds.e_max(a).max(bounds.e_min(a)) + instance.spec(a).slack)
        .max()
        .unwrap_or(0);
    instance.horizon.max(reach).max(0) as usize
}

fn clamp(t: Time, len: usize) -> usize {
    t.clamp(0, len as Time) as usize
}

/// `[from, to)` clipped to `0..len`; empty when `from >= to`.
fn window(from: Time, to: Time, len: usize) -> std::ops::Range<usize> {
    let start = clamp(from, len);
    start..clamp(to, len).max(start)
}

/// Per time point: sum of compulsory-part heights, and the two largest
/// K-compulsory-part heights with the owner of the largest.
struct Profile {
    cp_sum: Vec<Height>,
    top: Vec<Option<(Height, ActivityId)>>,
    second: Vec<Height>,
}

impl Profile {
    fn build(instance: &Instance, bounds: &BoundsStore) -> Self {
        let len = span(instance, bounds);
        let mut cp_sum = vec![0; len];
        let mut top: Vec<Option<(Height, ActivityId)>> = vec![None; len];
        let mut second = vec![0; len];
        for a in instance.ids() {
            let h = instance.spec(a).height;
            let k = instance.spec(a).slack;
            let (s_max, e_min) = (bounds.s_max(a), bounds.e_min(a));
            for load in &mut cp_sum[window(s_max, e_min, len)] {
                *load += h;
            }
            for t in clamp(s_max.max(e_min), len)..clamp(e_min + k, len) {
                match top[t] {
                    Some((best, _)) if best >= h => second[t] = second[t].max(h),
                    Some((best, _)) => {
                        second[t] = best;
                        top[t] = Some((h, a));
                    }
                    None => top[t] = Some((h, a)),
                }
            }
        }
        Self { cp_sum, top, second }
    }

    fn len(&self) -> usize {
        self.cp_sum.len()
    }

    fn kcp_max(&self, t: usize) -> Height {
        self.top[t].map_or(0, |(h, _)| h)
    }

    fn kcp_max_excluding(&self, t: usize, x: ActivityId) -> Height {
        match self.top[t] {
            Some((_, owner)) if owner == x => self.second[t],
            Some((h, _)) => h,
            None => 0,
        }
    }
}

/// Failure check: at every `t`, compulsory-part heights plus the single
/// largest K-compulsory-part height must fit in the capacity.
pub fn tt_failure_check(instance: &Instance, bounds: &BoundsStore) -> FailureCheck {
    let profile = Profile::build(instance, bounds);
    (0..profile.len())
        .find(|&t| profile.cp_sum[t] + profile.kcp_max(t) > instance.capacity)
        .map_or(FailureCheck::Ok, |t| FailureCheck::Fail(t as Time))
}

/// Checks a full start assignment: at every `t`, running heights plus the
/// `r` largest heights whose delay window `[e, e + k)` covers `t`.
pub fn check_solution_r(instance: &Instance, starts: &[Time], r: usize) -> bool {
    assert!(r >= 1);
    assert_eq!(starts.len(), instance.len());
    let reach = instance
        .ids()
        .map(|a| starts[a.0] + instance.spec(a).duration + instance.spec(a).slack)
        .max()
        .unwrap_or(0);
    let len = instance.horizon.max(reach).max(0) as usize;
    let mut running = vec![0 as Height; len];
    let mut delayed: Vec<Vec<Height>> = vec![Vec::new(); len];
    for a in instance.ids() {
        let spec = instance.spec(a);
        let s = starts[a.0];
        let e = s + spec.duration;
        for load in &mut running[window(s, e, len)] {
            *load += spec.height;
        }
        for hs in &mut delayed[window(e, e + spec.slack, len)] {
            hs.push(spec.height);
        }
    }
    (0..len).all(|t| {
        let hs = &mut delayed[t];
        hs.sort_unstable_by(|x, y| y.cmp(x));
        let reserve: Height = hs.iter().take(r).sum();
        running[t] + reserve <= instance.capacity
    })
}

/// Plain Cumulative check, slacks ignored.
pub fn check_cumulative(instance: &Instance, starts: &[Time]) -> bool {
    check_solution_r(&instance.without_slack(), starts, 1)
}

fn verify_fixpoint(
    instance: &Instance,
    bounds: &BoundsStore,
    placement: impl Fn(ActivityId) -> Time,
    running: Condition,
    delay: Condition,
) -> Vec<Violation> {
    let profile = Profile::build(instance, bounds);
    let len = profile.len();
    let cap = instance.capacity;
    let mut out = Vec::new();
    for t in 0..len {
        if profile.cp_sum[t] + profile.kcp_max(t) > cap {
            let ti = t as Time;
            let culprit = instance
                .ids()
                .find(|&a| bounds.s_max(a) <= ti && ti < bounds.e_min(a))
                .or(profile.top[t].map(|(_, a)| a))
                .expect("overload without contributors");
            out.push(Violation {
                activity: culprit,
                time: ti,
                condition: Condition::FailureCheck,
            });
        }
    }
    for b in instance.ids() {
        let spec = instance.spec(b);
        let start = placement(b);
        let end = start + spec.duration;
        let own_cp_start = bounds.s_max(b);
        let own_cp_end = bounds.e_min(b);
        for t in clamp(start, len)..clamp(end, len) {
            let ti = t as Time;
            let own = if own_cp_start <= ti && ti < own_cp_end { spec.height } else { 0 };
            let load = spec.height + profile.cp_sum[t] - own + profile.kcp_max_excluding(t, b);
            if load > cap {
                out.push(Violation {
                    activity: b,
                    time: ti,
                    condition: running,
                });
            }
        }
        for t in clamp(end, len)..clamp(end + spec.slack, len) {
            let ti = t as Time;
            let own = if own_cp_start <= ti && ti < own_cp_end { spec.height } else { 0 };
            if profile.cp_sum[t] - own + spec.height > cap {
                out.push(Violation {
                    activity: b,
                    time: ti,
                    condition: delay,
                });
            }
        }
    }
    out
}

/// Lower-bound fixpoint conditions: each activity placed at its earliest
/// start, running and then delayed, fits on top of everybody else's
/// compulsory material.
pub fn verify_fixpoint_min(instance: &Instance, bounds: &BoundsStore) -> Vec<Violation> {
    verify_fixpoint(
        instance,
        bounds,
        |b| bounds.s_min(b),
        Condition::MinRunning,
        Condition::MinDelay,
    )
}

/// Upper-bound fixpoint conditions, with each activity placed at its latest
/// start.
pub fn verify_fixpoint_max(instance: &Instance, bounds: &BoundsStore) -> Vec<Violation> {
    verify_fixpoint(
        instance,
        bounds,
        |b| bounds.s_max(b),
        Condition::MaxRunning,
        Condition::MaxDelay,
    )
}

fn fixing_fails(instance: &Instance, bounds: &BoundsStore, a: ActivityId, start: Time) -> bool {
    let mut trial = bounds.clone();
    if trial.fix_start(a, start) == Change::Failed {
        return true;
    }
    tt_failure_check(instance, &trial).is_fail()
}

/// Time-table fixpoint by trimming one unit at a time: a bound value is
/// removed while fixing the activity there fails the failure check.
/// Returns `None` when some domain empties.
pub fn bruteforce_tt_fixpoint(instance: &Instance, bounds: &BoundsStore) -> Option<BoundsStore> {
    let mut cur = bounds.clone();
    if cur.is_failed() {
        return None;
    }
    loop {
        let mut changed = false;
        for a in instance.ids() {
            while cur.s_min(a) <= cur.s_max(a) && fixing_fails(instance, &cur, a, cur.s_min(a)) {
                cur.tighten_start_min(a, cur.s_min(a) + 1);
                changed = true;
            }
            if cur.s_min(a) > cur.s_max(a) {
                return None;
            }
            while fixing_fails(instance, &cur, a, cur.s_max(a)) {
                cur.tighten_start_max(a, cur.s_max(a) - 1);
                changed = true;
                if cur.s_min(a) > cur.s_max(a) {
                    return None;
                }
            }
        }
        if !changed {
            return Some(cur);
        }
    }
}

/// Every start assignment inside `bounds` that satisfies the robust check
/// with order `r`.
pub fn enumerate_solutions(
    instance: &Instance,
    bounds: &BoundsStore,
    r: usize,
) -> Result<BTreeSet<Vec<Time>>, OracleError> {
    if instance.len() > ENUMERATION_MAX_ACTIVITIES || instance.horizon > ENUMERATION_MAX_HORIZON {
        return Err(OracleError::TooLarge {
            n: instance.len(),
            horizon: instance.horizon,
        });
    }
    let mut out = BTreeSet::new();
    if bounds.is_failed() {
        return Ok(out);
    }
    let n = instance.len();
    let mut starts: Vec<Time> = bounds.starts_min().to_vec();
    loop {
        if check_solution_r(instance, &starts, r) {
            out.insert(starts.clone());
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == n {
                return Ok(out);
            }
            if starts[i] < bounds.starts_max()[i] {
                starts[i] += 1;
                break;
            }
            starts[i] = bounds.starts_min()[i];
            i += 1;
        }
    }
}
