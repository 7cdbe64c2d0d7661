use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use rcumulative::bench::{self, ComparisonParams, GeneratorParams, ScalingMode, SlackScheme, SlackSpec};
use rcumulative::oracle;
use rcumulative::solver::{solve_first, solve_optimal, SolveStatus};
use rcumulative::{parse_instance, propagate, serialize_instance, Mode, Propagation};

const EXIT_USAGE: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_VIOLATION: u8 = 3;
const EXIT_TIMEOUT: u8 = 4;

/// Time-table filtering and search for cumulative scheduling with slack.
#[derive(Parser)]
#[command(name = "rcum", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random instance.
    Generate(GenerateArgs),
    /// Run filtering to fixpoint and print the resulting bounds.
    Propagate {
        #[arg(long = "in")]
        input: PathBuf,
        /// Check the fixpoint against the reference conditions.
        #[arg(long)]
        verify: bool,
    },
    /// Search for a schedule.
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "rcumulative")]
        mode: Mode,
        /// Minimise the mode's objective instead of stopping at the first solution.
        #[arg(long)]
        optimal: bool,
        /// Seconds.
        #[arg(long)]
        timeout: Option<f64>,
    },
    #[command(subcommand)]
    Bench(BenchCommand),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    pmin: i64,
    #[arg(long, default_value_t = 9)]
    pmax: i64,
    #[arg(long, default_value_t = 1)]
    hmin: i64,
    #[arg(long, default_value_t = 5)]
    hmax: i64,
    #[arg(long, default_value_t = 16)]
    cap: i64,
    /// Mean slack; slacks are uniform over 1..=2*kavg-1.
    #[arg(long, conflicts_with = "kfixed")]
    kavg: Option<i64>,
    /// Same slack for every activity.
    #[arg(long)]
    kfixed: Option<i64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BenchCommand {
    /// First-solution time per size and mode.
    Scaling {
        #[arg(long, value_delimiter = ',', default_value = "100,200,400,800,1600")]
        ns: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "cumulative,rcumulative,decomposition")]
        modes: Vec<ScalingMode>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Seconds per run.
        #[arg(long, default_value_t = 120.0)]
        timeout: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal makespans, naive stretching against robust filtering.
    Compare {
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, value_delimiter = ',', default_value = "0.2,0.4,0.6,0.8,1.0,1.2,1.4,1.6,1.8,2.0")]
        ratios: Vec<f64>,
        /// `uniform`: one slack for all activities, ratio times the mean
        /// duration. `proportional`: ratio times each duration.
        #[arg(long, default_value = "uniform")]
        scheme: SlackScheme,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Seconds per optimal solve.
        #[arg(long, default_value_t = 300.0)]
        timeout: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn seconds(s: f64) -> Result<Duration> {
    Duration::try_from_secs_f64(s).with_context(|| format!("invalid timeout {s}"))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(
            fs::File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn read_instance(path: &Path) -> Result<rcumulative::Instance> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("invalid instance {}", path.display()))
}

fn generate(args: GenerateArgs) -> Result<u8> {
    if args.pmin < 1 || args.pmin > args.pmax || args.hmin < 1 || args.hmin > args.hmax {
        bail!("duration and height ranges must be non-empty and start at 1 or more");
    }
    let slack = match (args.kavg, args.kfixed) {
        (Some(k), None) if k >= 1 => SlackSpec::Average(k),
        (None, Some(k)) if k >= 0 => SlackSpec::Fixed(k),
        (None, None) => SlackSpec::Fixed(0),
        _ => bail!("--kavg must be at least 1 and --kfixed at least 0"),
    };
    let params = GeneratorParams {
        n: args.n,
        duration: (args.pmin, args.pmax),
        height: (args.hmin, args.hmax),
        capacity: args.cap,
        slack,
    };
    let instance = bench::generate_random_instance(&params, args.seed);
    output(args.out.as_deref())?.write_all(serialize_instance(&instance).as_bytes())?;
    Ok(0)
}

fn run_propagate(input: &Path, verify: bool) -> Result<u8> {
    let instance = read_instance(input)?;
    let mut bounds = instance.bounds.clone();
    let result = propagate(&instance, &mut bounds);
    let mut out = io::stdout().lock();
    if result == Propagation::Failed {
        writeln!(out, "failed")?;
        return Ok(EXIT_INFEASIBLE);
    }
    writeln!(out, "fixpoint changed={}", result.changed())?;
    for a in instance.ids() {
        writeln!(out, "{} {} {}", a.0, bounds.s_min(a), bounds.s_max(a))?;
    }
    if verify {
        let mut violations = oracle::verify_fixpoint_min(&instance, &bounds);
        violations.extend(oracle::verify_fixpoint_max(&instance, &bounds));
        for v in &violations {
            writeln!(out, "violation {v:?}")?;
        }
        if !violations.is_empty() {
            return Ok(EXIT_VIOLATION);
        }
        writeln!(out, "verified")?;
    }
    Ok(0)
}

fn run_solve(input: &Path, mode: Mode, optimal: bool, timeout: Option<f64>) -> Result<u8> {
    let instance = read_instance(input)?;
    let timeout = timeout.map(seconds).transpose()?;
    let out = if optimal {
        solve_optimal(&instance, mode, None, timeout)
    } else {
        solve_first(&instance, mode, timeout)
    };
    let mut w = io::stdout().lock();
    let status = match out.status {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Feasible => "feasible",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::Timeout => "timeout",
    };
    writeln!(w, "status {status}")?;
    if let (Some(obj), Some(starts)) = (out.objective, &out.assignment) {
        writeln!(w, "objective {obj}")?;
        let starts: Vec<String> = starts.iter().map(ToString::to_string).collect();
        writeln!(w, "starts {}", starts.join(" "))?;
    }
    writeln!(
        w,
        "nodes {} failures {} time {:.3}",
        out.stats.nodes,
        out.stats.failures,
        out.stats.elapsed.as_secs_f64()
    )?;
    Ok(match out.status {
        SolveStatus::Optimal | SolveStatus::Feasible => 0,
        SolveStatus::Infeasible => EXIT_INFEASIBLE,
        SolveStatus::Timeout => EXIT_TIMEOUT,
    })
}

fn run_bench(cmd: BenchCommand) -> Result<u8> {
    match cmd {
        BenchCommand::Scaling {
            ns,
            modes,
            seed,
            timeout,
            out,
        } => {
            let rows = bench::run_scaling(&ns, &modes, seed, Some(seconds(timeout)?));
            bench::write_scaling_csv(&rows, output(out.as_deref())?)?;
            Ok(if rows.iter().any(|r| r.seconds.is_some() && !r.verified) {
                EXIT_VIOLATION
            } else {
                0
            })
        }
        BenchCommand::Compare {
            count,
            ratios,
            scheme,
            seed,
            timeout,
            out,
        } => {
            let params = ComparisonParams {
                count,
                ratios,
                scheme,
                seed,
                timeout: Some(seconds(timeout)?),
                ..Default::default()
            };
            let report = bench::run_comparison(&params);
            bench::write_comparison_csv(&report.rows, output(out.as_deref())?)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Generate(args) => generate(args),
        Command::Propagate { input, verify } => run_propagate(&input, verify),
        Command::Solve {
            input,
            mode,
            optimal,
            timeout,
        } => run_solve(&input, mode, optimal, timeout),
        Command::Bench(cmd) => run_bench(cmd),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            log::error!("{e:#}");
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
