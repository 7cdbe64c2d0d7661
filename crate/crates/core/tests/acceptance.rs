//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Pass criterion numbers as arguments to
//! run a subset, e.g. `cargo test --test acceptance -- 1 4`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rcumulative::bench::{self, ComparisonParams, ScalingMode};
use rcumulative::oracle::{self, bruteforce_tt_fixpoint, enumerate_solutions};
use rcumulative::propagator::{propagate_with_stats, PropagationStats};
use rcumulative::{propagate, Instance};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn corpus(seed: u64, count: usize, max_n: usize, max_h: i64, with_slack: bool) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| common::small_instance(&mut rng, max_n, max_h, with_slack))
        .collect()
}

fn main_corpus() -> Vec<Instance> {
    corpus(11, 1200, 8, 40, true)
}

fn fixpoint_conditions() -> Outcome {
    let instances = main_corpus();
    let mut checked = 0;
    let mut violations = 0;
    for inst in &instances {
        let mut b = inst.bounds.clone();
        if propagate(inst, &mut b).is_failed() {
            continue;
        }
        checked += 1;
        violations += oracle::verify_fixpoint_min(inst, &b).len();
        violations += oracle::verify_fixpoint_max(inst, &b).len();
    }
    let detail = format!("{} instances, {checked} at fixpoint, {violations} violations", instances.len());
    if violations == 0 { Ok(detail) } else { Err(detail) }
}

fn failure_agreement() -> Outcome {
    let instances = main_corpus();
    let mut disagreements = 0;
    let mut failures = 0;
    for inst in &instances {
        let mut b = inst.bounds.clone();
        let failed = propagate(inst, &mut b).is_failed();
        let reference = bruteforce_tt_fixpoint(inst, &inst.bounds);
        let reference_failed = reference
            .as_ref()
            .is_none_or(|r| oracle::tt_failure_check(inst, r).is_fail());
        failures += usize::from(reference_failed);
        let post_ok = failed || !oracle::tt_failure_check(inst, &b).is_fail();
        if failed != reference_failed || !post_ok {
            disagreements += 1;
        }
    }
    let detail = format!("{} instances, {failures} failing, {disagreements} disagreements", instances.len());
    if disagreements == 0 { Ok(detail) } else { Err(detail) }
}

fn solution_preservation() -> Outcome {
    let instances = corpus(12, 300, 5, 12, true);
    let mut mismatches = 0;
    let mut solutions = 0;
    for inst in &instances {
        let before = enumerate_solutions(inst, &inst.bounds, 1).map_err(|e| e.to_string())?;
        let mut b = inst.bounds.clone();
        let after = if propagate(inst, &mut b).is_failed() {
            Default::default()
        } else {
            enumerate_solutions(inst, &b, 1).map_err(|e| e.to_string())?
        };
        solutions += before.len();
        mismatches += usize::from(before != after);
    }
    let detail = format!("{} instances, {solutions} solutions, {mismatches} mismatches", instances.len());
    if mismatches == 0 { Ok(detail) } else { Err(detail) }
}

fn zero_slack_collapse() -> Outcome {
    let instances = corpus(13, 600, 8, 40, false);
    let mut mismatches = 0;
    for inst in &instances {
        let mut b = inst.bounds.clone();
        let got = (!propagate(inst, &mut b).is_failed()).then_some(b);
        mismatches += usize::from(got != bruteforce_tt_fixpoint(inst, &inst.bounds));
    }
    let detail = format!("{} instances, {mismatches} mismatches", instances.len());
    if mismatches == 0 { Ok(detail) } else { Err(detail) }
}

fn idempotence() -> Outcome {
    let instances = main_corpus();
    let mut changed = 0;
    for inst in &instances {
        let mut b = inst.bounds.clone();
        if propagate(inst, &mut b).is_failed() {
            continue;
        }
        let snapshot = b.clone();
        let again = propagate(inst, &mut b);
        changed += usize::from(again.is_failed() || again.changed() || b != snapshot);
    }
    let detail = format!("{} instances, {changed} changed on re-propagation", instances.len());
    if changed == 0 { Ok(detail) } else { Err(detail) }
}

fn event_counts() -> Outcome {
    let instances = main_corpus();
    let mut violations = 0;
    let (mut worst_min, mut worst_skcp) = (0.0f64, 0u32);
    for inst in &instances {
        let mut stats = PropagationStats::default();
        propagate_with_stats(inst, &mut inst.bounds.clone(), &mut stats);
        let n = inst.len();
        for &events in &stats.min_events {
            worst_min = worst_min.max(events as f64 / n as f64);
            violations += usize::from(events > 4 * n);
        }
        for per_activity in &stats.max_skcp {
            for a in inst.ids() {
                let created = per_activity[a.0];
                worst_skcp = worst_skcp.max(created);
                violations += usize::from(i64::from(created) > inst.spec(a).slack + 1);
            }
        }
    }
    let detail = format!(
        "{} instances, max forward events/n {worst_min:.2}, max SKCP per activity {worst_skcp}, {violations} violations",
        instances.len()
    );
    if violations == 0 { Ok(detail) } else { Err(detail) }
}

fn scaling() -> Outcome {
    let ns = [100, 200, 400, 800, 1600];
    let limit = Duration::from_secs(120);
    let rows = bench::run_scaling(&ns, &[ScalingMode::Cumulative, ScalingMode::RCumulative], 1, Some(limit));
    let mut problems = Vec::new();
    let mut parts = Vec::new();
    for &n in &ns {
        let find = |m| rows.iter().find(|r| r.n == n && r.mode == m).expect("row present");
        let (cum, rc) = (find(ScalingMode::Cumulative), find(ScalingMode::RCumulative));
        match (cum.seconds, rc.seconds) {
            (Some(c), Some(r)) => {
                parts.push(format!("n={n} {r:.3}s/{c:.3}s"));
                if r > 3.0 * c {
                    problems.push(format!("n={n} ratio {:.2}", r / c));
                }
                if !rc.verified || !cum.verified {
                    problems.push(format!("n={n} unverified schedule"));
                }
            }
            _ => problems.push(format!("n={n} timeout")),
        }
    }
    let detail = format!("rcumulative/cumulative: {}", parts.join(", "));
    if problems.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; {}", problems.join(", ")))
    }
}

fn table_properties() -> Outcome {
    let params = ComparisonParams::default();
    let report = bench::run_comparison(&params);
    let rows = &report.rows;
    let mut problems = Vec::new();
    for r in rows {
        if r.instances != params.count {
            problems.push(format!("ratio {} only {} instances solved", r.ratio, r.instances));
        }
    }
    // (a)
    for r in rows.iter().filter(|r| r.worse > 0) {
        problems.push(format!("(a) ratio {} #Worse {}", r.ratio, r.worse));
    }
    // (b)
    let avgs: Vec<f64> = rows.iter().map(|r| r.avg.unwrap_or(f64::NAN)).collect();
    for r in rows.iter().filter(|r| r.ratio >= 0.4 - 1e-9) {
        if r.avg.is_none_or(|a| a <= 0.0) {
            problems.push(format!("(b) ratio {} Avg {:?}", r.ratio, r.avg));
        }
    }
    let inversions = avgs.windows(2).filter(|w| w[1].partial_cmp(&w[0]).is_none_or(|o| o.is_lt())).count();
    if inversions > 1 {
        problems.push(format!("(b) {inversions} Avg inversions"));
    }
    // (c)
    for r in rows.iter().filter(|r| r.ratio >= 0.6 - 1e-9 && r.better != params.count) {
        problems.push(format!("(c) ratio {} #Better {}", r.ratio, r.better));
    }
    let summary: Vec<String> = rows
        .iter()
        .map(|r| format!("{}:avg {:.1} better {}", r.ratio, r.avg.unwrap_or(f64::NAN), r.better))
        .collect();
    let detail = format!("{} inversions; {}", inversions, summary.join(", "));
    if problems.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{}; {detail}", problems.join(", ")))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (1, "fixpoint conditions hold after propagation", fixpoint_conditions),
        (2, "failure detection agrees with the reference", failure_agreement),
        (3, "propagation keeps exactly the solutions", solution_preservation),
        (4, "zero slack equals plain time-table fixpoint", zero_slack_collapse),
        (5, "propagation is idempotent", idempotence),
        (6, "event counts within bounds", event_counts),
        (7, "first-solution scaling", scaling),
        (8, "optimal makespan comparison", table_properties),
    ];
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name, run) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let started = Instant::now();
        let outcome = run();
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id}: PASS {name} [{secs:.1}s] {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id}: FAIL {name} [{secs:.1}s] {detail}");
            }
        }
    }
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
