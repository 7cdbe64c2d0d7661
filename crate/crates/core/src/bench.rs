//! Random instances and the two experiments: first-solution scaling and the
//! optimal makespan comparison between robust filtering and the naive
//! stretched-duration model.

use std::fmt;
use std::io;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::batch::{par_map, seq_map};
use crate::model::{ActivitySpec, Height, Instance, Time};
use crate::oracle;
use crate::solver::{solve_first, solve_optimal, Mode, SolveStatus};

/// How slacks are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SlackSpec {
    /// Same `k` for every activity.
    Fixed(Time),
    /// Uniform over `1..=2*avg-1`, so the mean is `avg`.
    Average(Time),
    /// `k = max(1, round(ratio * p))`.
    Ratio(f64),
}

impl SlackSpec {
    fn draw(self, duration: Time, rng: &mut impl Rng) -> Time {
        match self {
            SlackSpec::Fixed(k) => k,
            SlackSpec::Average(avg) => rng.gen_range(1..=(2 * avg - 1).max(1)),
            SlackSpec::Ratio(r) => slack_for_ratio(r, duration),
        }
    }
}

pub fn slack_for_ratio(ratio: f64, duration: Time) -> Time {
    ((ratio * duration as f64).round() as Time).max(1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorParams {
    pub n: usize,
    pub duration: (Time, Time),
    pub height: (Height, Height),
    pub capacity: Height,
    pub slack: SlackSpec,
}

impl GeneratorParams {
    /// Scaling regime: p in 5..=10, h in 1..=5, C = 30, average k = 4.
    pub fn scaling(n: usize) -> Self {
        Self {
            n,
            duration: (5, 10),
            height: (1, 5),
            capacity: 30,
            slack: SlackSpec::Average(4),
        }
    }

    /// Comparison regime: p in 1..=9, h in 1..=5, C = 16.
    pub fn comparison(n: usize, slack: SlackSpec) -> Self {
        Self {
            n,
            duration: (1, 9),
            height: (1, 5),
            capacity: 16,
            slack,
        }
    }
}

/// Deterministic for a given seed. Horizon is `sum(p + k)` and every start
/// domain is `[0, H - p - k]`.
pub fn generate_random_instance(params: &GeneratorParams, seed: u64) -> Instance {
    assert!(params.duration.0 >= 1 && params.duration.0 <= params.duration.1);
    assert!(params.height.0 >= 1 && params.height.0 <= params.height.1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let specs: Vec<ActivitySpec> = (0..params.n)
        .map(|_| {
            let p = rng.gen_range(params.duration.0..=params.duration.1);
            let h = rng.gen_range(params.height.0..=params.height.1);
            let k = params.slack.draw(p, &mut rng);
            ActivitySpec::new(p, h, k)
        })
        .collect();
    with_open_domains(params.capacity, specs)
}

/// Builds an instance whose start domains span the whole horizon.
pub fn with_open_domains(capacity: Height, specs: Vec<ActivitySpec>) -> Instance {
    let horizon: Time = specs.iter().map(|s| s.duration + s.slack).sum();
    let acts = specs
        .into_iter()
        .map(|s| (s, 0, horizon - s.duration - s.slack))
        .collect();
    Instance::new(capacity, acts, Some(horizon))
}

/// How a slack-to-duration ratio becomes per-activity slacks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SlackScheme {
    /// One `k` for every activity: `round(ratio * mean duration of the
    /// generator range)`, at least 1. With durations in 1..=9 the ratios
    /// 0.2..=2.0 give k = 1..=10.
    #[default]
    Uniform,
    /// `k = max(1, round(ratio * p))` per activity.
    Proportional,
}

impl FromStr for SlackScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(SlackScheme::Uniform),
            "proportional" => Ok(SlackScheme::Proportional),
            other => Err(format!("unknown slack scheme `{other}`")),
        }
    }
}

/// Same durations and heights, slacks reset according to `scheme`.
pub fn with_slack_ratio(
    instance: &Instance,
    ratio: f64,
    scheme: SlackScheme,
    duration_range: (Time, Time),
) -> Instance {
    let mean = (duration_range.0 + duration_range.1) as f64 / 2.0;
    let uniform_k = ((ratio * mean).round() as Time).max(1);
    let specs = instance
        .activities
        .iter()
        .map(|s| {
            let k = match scheme {
                SlackScheme::Uniform => uniform_k,
                SlackScheme::Proportional => slack_for_ratio(ratio, s.duration),
            };
            ActivitySpec::new(s.duration, s.height, k)
        })
        .collect();
    with_open_domains(instance.capacity, specs)
}

fn derive_seed(seed: u64, index: u64) -> u64 {
    seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScalingMode {
    Cumulative,
    RCumulative,
    /// Stretched durations solved with plain Cumulative filtering.
    Decomposition,
}

impl ScalingMode {
    pub fn solver_mode(self) -> Mode {
        match self {
            ScalingMode::Cumulative => Mode::Cumulative,
            ScalingMode::RCumulative => Mode::RCumulative,
            ScalingMode::Decomposition => Mode::Naive,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ScalingMode::Cumulative => "cumulative",
            ScalingMode::RCumulative => "rcumulative",
            ScalingMode::Decomposition => "decomposition",
        }
    }
}

impl fmt::Display for ScalingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScalingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cumulative" => Ok(ScalingMode::Cumulative),
            "rcumulative" => Ok(ScalingMode::RCumulative),
            "decomposition" | "naive" => Ok(ScalingMode::Decomposition),
            other => Err(format!("unknown scaling mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    pub mode: ScalingMode,
    /// Wall-clock seconds of the solve call, `None` on timeout.
    pub seconds: Option<f64>,
    pub nodes: u64,
    /// The schedule passed the independent checker.
    pub verified: bool,
}

/// Instance used for size `n` in the scaling experiment.
pub fn scaling_instance(n: usize, seed: u64) -> Instance {
    generate_random_instance(&GeneratorParams::scaling(n), derive_seed(seed, n as u64))
}

/// One first-solution run per `(n, mode)`. Runs are sequential so that
/// timings do not interfere.
pub fn run_scaling(
    ns: &[usize],
    modes: &[ScalingMode],
    seed: u64,
    timeout: Option<Duration>,
) -> Vec<ScalingRow> {
    let mut rows = Vec::with_capacity(ns.len() * modes.len());
    for &n in ns {
        let instance = scaling_instance(n, seed);
        rows.extend(seq_map(modes, |&mode| run_scaling_one(&instance, mode, timeout)));
    }
    rows
}

pub fn run_scaling_one(instance: &Instance, mode: ScalingMode, timeout: Option<Duration>) -> ScalingRow {
    let started = Instant::now();
    let out = solve_first(instance, mode.solver_mode(), timeout);
    let seconds = started.elapsed().as_secs_f64();
    let verified = match (&out.assignment, mode) {
        (Some(s), ScalingMode::Cumulative) => oracle::check_cumulative(instance, s),
        // stretched schedules are also robust schedules of the original
        (Some(s), _) => oracle::check_solution_r(instance, s, 1),
        (None, _) => false,
    };
    if out.status == SolveStatus::Timeout {
        log::warn!("scaling n={} mode={mode}: timeout", instance.len());
    }
    ScalingRow {
        n: instance.len(),
        mode,
        seconds: (out.status != SolveStatus::Timeout).then_some(seconds),
        nodes: out.stats.nodes,
        verified,
    }
}

#[derive(Serialize)]
struct ScalingCsv<'a> {
    n: usize,
    mode: &'a str,
    seconds: String,
    nodes: u64,
    verified: bool,
}

pub const TIMEOUT_SENTINEL: &str = "timeout";

pub fn write_scaling_csv<W: io::Write>(rows: &[ScalingRow], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(ScalingCsv {
            n: r.n,
            mode: r.mode.as_str(),
            seconds: r
                .seconds
                .map_or_else(|| TIMEOUT_SENTINEL.to_string(), |s| format!("{s:.6}")),
            nodes: r.nodes,
            verified: r.verified,
        })?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonParams {
    pub count: usize,
    pub n: usize,
    pub capacity: Height,
    pub duration: (Time, Time),
    pub height: (Height, Height),
    pub ratios: Vec<f64>,
    pub scheme: SlackScheme,
    pub seed: u64,
    /// Per optimal solve.
    pub timeout: Option<Duration>,
}

pub const TABLE_RATIOS: [f64; 10] = [0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0];

impl Default for ComparisonParams {
    fn default() -> Self {
        Self {
            count: 50,
            n: 10,
            capacity: 16,
            duration: (1, 9),
            height: (1, 5),
            ratios: TABLE_RATIOS.to_vec(),
            scheme: SlackScheme::Uniform,
            seed: 1,
            timeout: Some(Duration::from_secs(300)),
        }
    }
}

/// Optimal objectives of one instance at one ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatioResult {
    /// Plain makespan of the stretched model.
    pub naive: Time,
    /// Worst-case makespan under robust filtering.
    pub robust: Time,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceResult {
    pub index: usize,
    /// Optimal makespan of the plain problem; `None` on timeout.
    pub cumulative: Option<Time>,
    /// One entry per ratio; `None` when a solve timed out.
    pub ratios: Vec<Option<RatioResult>>,
}

impl InstanceResult {
    /// `100 * (naive - robust) / cumulative`.
    pub fn deviation(&self, ratio_index: usize) -> Option<f64> {
        let cum = self.cumulative?;
        let r = self.ratios[ratio_index]?;
        Some(100.0 * (r.naive - r.robust) as f64 / cum as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub ratio: f64,
    pub instances: usize,
    pub min: Option<f64>,
    pub avg: Option<f64>,
    pub max: Option<f64>,
    pub worse: usize,
    pub better: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
    pub instances: Vec<InstanceResult>,
}

pub fn comparison_instance(params: &ComparisonParams, index: usize) -> Instance {
    let gen = GeneratorParams {
        n: params.n,
        duration: params.duration,
        height: params.height,
        capacity: params.capacity,
        slack: SlackSpec::Fixed(0),
    };
    generate_random_instance(&gen, derive_seed(params.seed, index as u64))
}

fn optimum(instance: &Instance, mode: Mode, timeout: Option<Duration>) -> Option<Time> {
    let out = solve_optimal(instance, mode, None, timeout);
    match out.status {
        SolveStatus::Optimal => out.objective,
        SolveStatus::Timeout => None,
        // open domains over sum(p + k) always admit the serial schedule
        status => panic!("unexpected {status:?} on a generated instance"),
    }
}

pub fn compare_instance(params: &ComparisonParams, index: usize) -> InstanceResult {
    let base = comparison_instance(params, index);
    let cumulative = optimum(&base, Mode::Cumulative, params.timeout);
    let ratios = params
        .ratios
        .iter()
        .map(|&ratio| {
            let inst = with_slack_ratio(&base, ratio, params.scheme, params.duration);
            let naive = optimum(&inst, Mode::Naive, params.timeout);
            let robust = optimum(&inst, Mode::RCumulative, params.timeout);
            match (naive, robust) {
                (Some(naive), Some(robust)) => Some(RatioResult { naive, robust }),
                _ => {
                    log::warn!("instance {index} ratio {ratio}: timeout, excluded");
                    None
                }
            }
        })
        .collect();
    if cumulative.is_none() {
        log::warn!("instance {index}: cumulative optimum timed out, excluded");
    }
    InstanceResult {
        index,
        cumulative,
        ratios,
    }
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

pub fn aggregate(ratios: &[f64], instances: &[InstanceResult]) -> Vec<ComparisonRow> {
    ratios
        .iter()
        .enumerate()
        .map(|(j, &ratio)| {
            let mut devs = Vec::new();
            let (mut worse, mut better) = (0, 0);
            for inst in instances {
                let (Some(dev), Some(r)) = (inst.deviation(j), inst.ratios[j]) else {
                    continue;
                };
                devs.push(dev);
                worse += usize::from(r.robust > r.naive);
                better += usize::from(r.robust < r.naive);
            }
            let n = devs.len();
            let fold = |init: f64, f: fn(f64, f64) -> f64| {
                (n > 0).then(|| round2(devs.iter().copied().fold(init, f)))
            };
            ComparisonRow {
                ratio,
                instances: n,
                min: fold(f64::INFINITY, f64::min),
                avg: (n > 0).then(|| round2(devs.iter().sum::<f64>() / n as f64)),
                max: fold(f64::NEG_INFINITY, f64::max),
                worse,
                better,
            }
        })
        .collect()
}

/// Optimal solves for every instance and ratio; instances run in parallel
/// and are merged back in index order.
pub fn run_comparison(params: &ComparisonParams) -> ComparisonReport {
    let indices: Vec<usize> = (0..params.count).collect();
    let instances = par_map(&indices, |&i| compare_instance(params, i));
    ComparisonReport {
        rows: aggregate(&params.ratios, &instances),
        instances,
    }
}

pub fn write_comparison_csv<W: io::Write>(rows: &[ComparisonRow], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic_and_valid() {
        let p = GeneratorParams::scaling(100);
        let a = generate_random_instance(&p, 1);
        let b = generate_random_instance(&p, 1);
        assert_eq!(a, b);
        a.validate().unwrap();
        assert_ne!(a, generate_random_instance(&p, 2));
        for s in &a.activities {
            assert!((5..=10).contains(&s.duration));
            assert!((1..=5).contains(&s.height));
            assert!((1..=7).contains(&s.slack));
        }
        let mean = a.activities.iter().map(|s| s.slack).sum::<Time>() as f64 / 100.0;
        assert!((3.0..=5.0).contains(&mean), "mean slack {mean}");
    }

    #[test]
    fn table_regime_instance() {
        let p = GeneratorParams::comparison(10, SlackSpec::Fixed(2));
        let i = generate_random_instance(&p, 7);
        assert_eq!(i.capacity, 16);
        assert_eq!(i.len(), 10);
        assert!(i.activities.iter().all(|s| s.slack == 2 && (1..=9).contains(&s.duration)));
        i.validate().unwrap();
    }

    #[test]
    fn ratio_slack_rounds_with_floor_of_one() {
        assert_eq!(slack_for_ratio(0.2, 1), 1);
        assert_eq!(slack_for_ratio(0.2, 9), 2);
        assert_eq!(slack_for_ratio(1.0, 7), 7);
        assert_eq!(slack_for_ratio(1.4, 5), 7);
        assert_eq!(slack_for_ratio(2.0, 9), 18);
    }

    #[test]
    fn zero_slack_means_zero_deviation() {
        let inst = InstanceResult {
            index: 0,
            cumulative: Some(10),
            ratios: vec![Some(RatioResult { naive: 10, robust: 10 })],
        };
        let rows = aggregate(&[0.0], &[inst]);
        assert_eq!(rows[0].avg, Some(0.0));
        assert_eq!(rows[0].worse, 0);
        assert_eq!(rows[0].better, 0);
    }

    #[test]
    fn scaling_csv_format() {
        let rows = vec![
            ScalingRow {
                n: 100,
                mode: ScalingMode::RCumulative,
                seconds: Some(0.5),
                nodes: 100,
                verified: true,
            },
            ScalingRow {
                n: 100,
                mode: ScalingMode::Decomposition,
                seconds: None,
                nodes: 7,
                verified: false,
            },
        ];
        let mut buf = Vec::new();
        write_scaling_csv(&rows, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "n,mode,seconds,nodes,verified\n100,rcumulative,0.500000,100,true\n100,decomposition,timeout,7,false\n"
        );
    }

    #[test]
    fn small_comparison_runs() {
        let params = ComparisonParams {
            count: 3,
            n: 5,
            ratios: vec![0.0, 1.0],
            ..Default::default()
        };
        let report = run_comparison(&params);
        assert_eq!(report.rows.len(), 2);
        // ratio 0 still draws k = 1 (floor), so only check #Worse
        for row in &report.rows {
            assert_eq!(row.worse, 0);
            assert_eq!(row.instances, 3);
        }
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_comparison_csv(&report.rows, &mut a).unwrap();
        write_comparison_csv(&run_comparison(&params).rows, &mut b).unwrap();
        assert_eq!(a, b);
    }
}
