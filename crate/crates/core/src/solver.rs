//! Depth-first branch and bound over start times.
//!
//! Branching picks the unfixed activity with the smallest `s_min` (ties by
//! id); the left branch fixes it there, the right branch forbids that
//! value. Every node is propagated; states are restored from full copies
//! of the bounds store.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::model::{ActivityId, BoundsStore, Change, Instance, Time};
use crate::oracle;
use crate::propagator::{naive_transform, propagate};

/// How robustness is modelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// RobustCumulative filtering on the instance as given.
    RCumulative,
    /// Plain Cumulative: slacks ignored.
    Cumulative,
    /// Durations stretched by their slack, solved as plain Cumulative.
    Naive,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::RCumulative, Mode::Cumulative, Mode::Naive];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::RCumulative => "rcumulative",
            Mode::Cumulative => "cumulative",
            Mode::Naive => "naive",
        }
    }

    /// The instance actually handed to the propagator.
    pub fn model(self, instance: &Instance) -> Instance {
        match self {
            Mode::RCumulative => instance.clone(),
            Mode::Cumulative => instance.without_slack(),
            Mode::Naive => naive_transform(instance),
        }
    }

    pub fn default_objective(self) -> Objective {
        match self {
            Mode::RCumulative => Objective::WorstCaseMakespan,
            Mode::Cumulative | Mode::Naive => Objective::Makespan,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rcumulative" => Ok(Mode::RCumulative),
            "cumulative" => Ok(Mode::Cumulative),
            "naive" => Ok(Mode::Naive),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    /// `max(e + k)`: completion if every delay materializes.
    WorstCaseMakespan,
    /// `max(e)`.
    Makespan,
}

impl Objective {
    /// Value on a fully fixed store.
    pub fn evaluate(self, instance: &Instance, bounds: &BoundsStore) -> Time {
        debug_assert!(bounds.all_fixed());
        instance
            .ids()
            .map(|a| match self {
                Objective::WorstCaseMakespan => bounds.e_min(a) + instance.spec(a).slack,
                Objective::Makespan => bounds.e_min(a),
            })
            .max()
            .unwrap_or(0)
    }

    /// Restricts every end so that the objective is at most `bound`.
    fn post(self, instance: &Instance, bounds: &mut BoundsStore, bound: Time) -> Change {
        let mut out = Change::Unchanged;
        for a in instance.ids() {
            let limit = match self {
                Objective::WorstCaseMakespan => bound - instance.spec(a).slack,
                Objective::Makespan => bound,
            };
            match bounds.tighten_end_max(a, limit) {
                Change::Failed => return Change::Failed,
                Change::Tightened => out = Change::Tightened,
                Change::Unchanged => {}
            }
        }
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub failures: u64,
    pub propagations: u64,
    pub solutions: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Proven optimal.
    Optimal,
    /// A solution, optimality not proven (first-solution search).
    Feasible,
    Infeasible,
    /// Time limit hit; `assignment` holds the best incumbent, if any.
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub assignment: Option<Vec<Time>>,
    pub objective: Option<Time>,
    pub stats: SearchStats,
}

fn select(bounds: &BoundsStore) -> Option<ActivityId> {
    bounds
        .ids()
        .filter(|&a| !bounds.is_fixed(a))
        .min_by_key(|&a| (bounds.s_min(a), a.0))
}

fn search(
    instance: &Instance,
    mode: Mode,
    objective: Option<Objective>,
    timeout: Option<Duration>,
) -> SolveOutcome {
    let started = Instant::now();
    let model = mode.model(instance);
    let mut stats = SearchStats::default();
    let mut best: Option<(Time, Vec<Time>)> = None;
    let mut timed_out = false;

    let mut stack = vec![model.bounds.clone()];
    while let Some(mut node) = stack.pop() {
        if timeout.is_some_and(|t| started.elapsed() >= t) {
            timed_out = true;
            break;
        }
        stats.nodes += 1;
        if let (Some(obj), Some((value, _))) = (objective, &best) {
            if obj.post(&model, &mut node, value - 1).is_failed() {
                stats.failures += 1;
                continue;
            }
        }
        stats.propagations += 1;
        if propagate(&model, &mut node).is_failed() {
            stats.failures += 1;
            continue;
        }
        let Some(a) = select(&node) else {
            let starts = node.assignment().expect("all fixed");
            assert!(
                oracle::check_solution_r(&model, &starts, 1),
                "propagation accepted an invalid schedule"
            );
            stats.solutions += 1;
            match objective {
                None => {
                    best = Some((mode.default_objective().evaluate(&model, &node), starts));
                    break;
                }
                Some(obj) => {
                    let value = obj.evaluate(&model, &node);
                    if best.as_ref().is_none_or(|(v, _)| value < *v) {
                        best = Some((value, starts));
                    }
                }
            }
            continue;
        };
        let value = node.s_min(a);
        let mut right = node.clone();
        if right.tighten_start_min(a, value + 1) != Change::Failed {
            stack.push(right);
        }
        node.fix_start(a, value);
        stack.push(node);
    }

    stats.elapsed = started.elapsed();
    let status = match (&best, timed_out, objective) {
        (_, true, _) => SolveStatus::Timeout,
        (None, false, _) => SolveStatus::Infeasible,
        (Some(_), false, None) => SolveStatus::Feasible,
        (Some(_), false, Some(_)) => SolveStatus::Optimal,
    };
    let (objective, assignment) = match best {
        Some((v, s)) => (Some(v), Some(s)),
        None => (None, None),
    };
    SolveOutcome {
        status,
        assignment,
        objective,
        stats,
    }
}

/// First solution found by the static branching, no objective.
pub fn solve_first(instance: &Instance, mode: Mode, timeout: Option<Duration>) -> SolveOutcome {
    search(instance, mode, None, timeout)
}

/// Optimal solution for `objective` (the mode's default when `None`).
pub fn solve_optimal(
    instance: &Instance,
    mode: Mode,
    objective: Option<Objective>,
    timeout: Option<Duration>,
) -> SolveOutcome {
    search(
        instance,
        mode,
        Some(objective.unwrap_or(mode.default_objective())),
        timeout,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ActivitySpec;

    fn one(p: Time, k: Time) -> Instance {
        Instance::new(3, vec![(ActivitySpec::new(p, 2, k), 0, 10)], Some(20))
    }

    #[test]
    fn single_activity_first_solution() {
        let i = Instance::new(3, vec![(ActivitySpec::new(2, 1, 1), 4, 9)], None);
        let out = solve_first(&i, Mode::RCumulative, None);
        assert_eq!(out.status, SolveStatus::Feasible);
        assert_eq!(out.assignment, Some(vec![4]));
    }

    #[test]
    fn single_activity_optimum() {
        let out = solve_optimal(&one(3, 2), Mode::RCumulative, None, None);
        assert_eq!(out.status, SolveStatus::Optimal);
        assert_eq!(out.objective, Some(5));
        let out = solve_optimal(&one(3, 2), Mode::Naive, None, None);
        assert_eq!(out.objective, Some(5));
        let out = solve_optimal(&one(3, 2), Mode::Cumulative, None, None);
        assert_eq!(out.objective, Some(3));
    }

    #[test]
    fn infeasible_at_root() {
        let i = Instance::new(
            2,
            vec![(ActivitySpec::new(2, 2, 0), 1, 1), (ActivitySpec::new(1, 1, 2), 0, 0)],
            Some(4),
        );
        let out = solve_first(&i, Mode::RCumulative, None);
        assert_eq!(out.status, SolveStatus::Infeasible);
        assert_eq!(out.stats.nodes, 1);
        assert!(out.assignment.is_none());
    }

    #[test]
    fn robust_beats_naive_on_small_case() {
        // Three unit-height activities, C = 2. Naive (p + k = 4): two at a
        // time, makespan 8. Robust: the third one runs inside the shared
        // delay window of the first two, worst case 6.
        let spec = ActivitySpec::new(2, 1, 2);
        let i = Instance::new(2, vec![(spec, 0, 20), (spec, 0, 20), (spec, 0, 20)], Some(30));
        let rc = solve_optimal(&i, Mode::RCumulative, None, None);
        let nv = solve_optimal(&i, Mode::Naive, None, None);
        assert_eq!(rc.status, SolveStatus::Optimal);
        assert_eq!(rc.objective, Some(6));
        assert_eq!(nv.objective, Some(8));
        let starts = rc.assignment.unwrap();
        assert!(oracle::check_solution_r(&i, &starts, 1));
    }

    #[test]
    fn mode_parsing() {
        for m in Mode::ALL {
            assert_eq!(m.as_str().parse::<Mode>().unwrap(), m);
        }
        assert!("bogus".parse::<Mode>().is_err());
    }
}
