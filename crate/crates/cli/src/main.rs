use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use robustsub::continuous::ContinuousConfig;
use robustsub::functions::{check_submodular_monotone, PropertyReport, EXHAUSTIVE_CHECK_LIMIT};
use robustsub::harness::{
    run_experiment, ExperimentConfig, ExperimentResult, InstanceSpec, LoadedInstance,
};
use robustsub::offline::{brute_force_opt, robust_offline_solve, BruteForceResult};
use robustsub::online::OnlineRun;
use robustsub::{
    online_softmin_run, robust_continuous_solve, BiCriteriaSolution, Constraint, ElementSet, Error,
    EstimatorConfig, GammaSearch, OnlineConfig,
};

const DEFAULT_EPSILON: f64 = 0.1;

#[derive(Parser, Debug)]
#[command(
    name = "robustsub",
    version,
    about = "Robust monotone submodular maximization"
)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo samples per multilinear estimate (default scales with n).
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Accuracy ε in (0, 1); overrides the instance file.
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    output: Format,
    /// Literal online parameters (tiny instances only).
    #[arg(long = "paper-params", global = true)]
    literal_params: bool,
    /// Directory every input and output path is relative to.
    #[arg(long, global = true, default_value = ".")]
    workdir: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Search::Descending)]
    gamma_search: Search,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Search {
    Descending,
    Binary,
}

impl From<Search> for GammaSearch {
    fn from(s: Search) -> Self {
        match s {
            Search::Descending => GammaSearch::Descending,
            Search::Binary => GammaSearch::Binary,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Robust reduction with extended greedy (any constraint type).
    Solve { instance: PathBuf },
    /// Continuous greedy with swap rounding (partition matroids).
    SolveContinuous {
        instance: PathBuf,
        /// Step size of the ascent.
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        /// Rounding draws per γ level before rejecting it.
        #[arg(long, default_value_t = 20)]
        repeats: usize,
    },
    /// Extended bang-per-buck on a knapsack instance.
    SolveKnapsack { instance: PathBuf },
    /// Extended greedy on an intersection of matroids.
    SolveIntersection { instance: PathBuf },
    /// Distributionally robust solve over a polytope of mixtures.
    SolveDro { instance: PathBuf },
    /// Online soft-min learner against the instance's adversary.
    Online {
        instance: PathBuf,
        /// Per-round JSON lines.
        #[arg(long)]
        transcript: Option<PathBuf>,
        /// Regret curve as CSV.
        #[arg(long)]
        regret_csv: Option<PathBuf>,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        /// Rounding draws averaged into each payoff.
        #[arg(long, default_value_t = 32)]
        draws: usize,
        /// Fresh perturbation every round.
        #[arg(long)]
        adaptive: bool,
    },
    /// Exact max-min optimum by enumeration.
    Oracle { instance: PathBuf },
    /// Synthetic facility-location experiment from a JSON config.
    Experiment {
        config: Option<PathBuf>,
        /// Zero every wall-time field so runs compare byte for byte.
        #[arg(long)]
        no_timing: bool,
    },
    /// Checks submodularity, monotonicity and the matroid axioms.
    Validate { instance: PathBuf },
}

/// Failure with its exit code: 2 for bad parameters, 3 for size limits, 1 otherwise.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::SizeLimit { .. } => 3,
            Error::Parameter(_)
            | Error::ElementOutOfRange { .. }
            | Error::DimensionMismatch { .. }
            | Error::NotAMatroid(_)
            | Error::OutsidePolytope { .. }
            | Error::GammaTooLarge { .. }
            | Error::Unsupported(_)
            | Error::Json(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> CliResult<u8> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match &cli.command {
        Command::Solve { instance } => {
            let inst = load(cli, instance)?;
            solve_offline(cli, &inst, &mut out)?
        }
        Command::SolveKnapsack { instance } => {
            let inst = load(cli, instance)?;
            require(
                &inst,
                |c| matches!(c, Constraint::Knapsack(_)),
                "a knapsack",
            )?;
            solve_offline(cli, &inst, &mut out)?
        }
        Command::SolveIntersection { instance } => {
            let inst = load(cli, instance)?;
            require(
                &inst,
                |c| matches!(c, Constraint::Intersection(_)),
                "an intersection",
            )?;
            solve_offline(cli, &inst, &mut out)?
        }
        Command::SolveDro { instance } => {
            let inst = load(cli, instance)?;
            require(
                &inst,
                |c| matches!(c, Constraint::Polytope { .. }),
                "a polytope",
            )?;
            solve_offline(cli, &inst, &mut out)?
        }
        Command::SolveContinuous {
            instance,
            delta,
            repeats,
        } => {
            let inst = load(cli, instance)?;
            let cfg = ContinuousConfig {
                delta: *delta,
                repeats: *repeats,
                estimator: estimator(cli),
                seed: cli.seed,
                ..ContinuousConfig::default()
            };
            let eps = epsilon(cli, &inst);
            let sol = robust_continuous_solve(
                &inst.objectives,
                inst.matroid()?.as_ref(),
                eps,
                &cfg,
                cli.gamma_search.into(),
            )?;
            write_solution(cli, &inst, "solve-continuous", eps, &sol, &mut out)?;
            0
        }
        Command::Online {
            instance,
            transcript,
            regret_csv,
            eta,
            alpha,
            delta,
            draws,
            adaptive,
        } => {
            let inst = load(cli, instance)?;
            let cfg = OnlineConfig {
                epsilon: cli
                    .epsilon
                    .or(inst.epsilon)
                    .unwrap_or(OnlineConfig::default().epsilon),
                eta: *eta,
                alpha: *alpha,
                delta: *delta,
                literal_params: cli.literal_params,
                draws: *draws,
                estimator: estimator(cli),
                seed: cli.seed,
                adaptive: *adaptive,
                ..OnlineConfig::default()
            };
            let run = online_softmin_run(&inst.schedule()?, inst.matroid()?, &cfg)?;
            if let Some(p) = transcript {
                let f = File::create(cli.workdir.join(p))?;
                run.write_transcript_jsonl(BufWriter::new(f))?;
            }
            if let Some(p) = regret_csv {
                let f = File::create(cli.workdir.join(p))?;
                run.report.write_curve_csv(BufWriter::new(f))?;
            }
            write_online(cli, &run, &mut out)?;
            0
        }
        Command::Oracle { instance } => {
            let inst = load(cli, instance)?;
            let best = brute_force_opt(&inst.objectives, &inst.constraint)?;
            write_oracle(cli, &inst, &best, &mut out)?;
            0
        }
        Command::Experiment { config, no_timing } => {
            let cfg = match config {
                Some(p) => {
                    let text = std::fs::read_to_string(cli.workdir.join(p))?;
                    serde_json::from_str(&text).map_err(Error::from)?
                }
                None => ExperimentConfig {
                    seed: cli.seed,
                    ..ExperimentConfig::desk_scale()
                },
            };
            let mut result = run_experiment(&cfg)?;
            if *no_timing {
                result = result.without_timing();
            }
            write_experiment(cli, &result, &mut out)?;
            0
        }
        Command::Validate { instance } => validate(cli, instance, &mut out)?,
    };
    out.flush()?;
    Ok(code)
}

fn load(cli: &Cli, path: &Path) -> CliResult<LoadedInstance> {
    Ok(InstanceSpec::load(path, &cli.workdir)?)
}

fn require(inst: &LoadedInstance, ok: impl Fn(&Constraint) -> bool, what: &str) -> CliResult<()> {
    if ok(&inst.constraint) {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "this command needs {what} constraint, got {:?}",
            inst.constraint
        ))
        .into())
    }
}

fn epsilon(cli: &Cli, inst: &LoadedInstance) -> f64 {
    cli.epsilon.or(inst.epsilon).unwrap_or(DEFAULT_EPSILON)
}

fn estimator(cli: &Cli) -> EstimatorConfig {
    EstimatorConfig {
        samples: cli.samples,
        seed: cli.seed,
        ..EstimatorConfig::default()
    }
}

fn solve_offline(cli: &Cli, inst: &LoadedInstance, out: &mut impl Write) -> CliResult<u8> {
    let eps = epsilon(cli, inst);
    let sol = robust_offline_solve(&inst.robust(eps)?, cli.gamma_search.into())?;
    write_solution(cli, inst, "solve", eps, &sol, out)?;
    Ok(0)
}

fn labelled(inst: &LoadedInstance, set: &ElementSet) -> Vec<String> {
    set.iter().map(|e| inst.ground.label(e)).collect()
}

#[derive(Serialize)]
struct SolveReport<'a> {
    command: &'a str,
    epsilon: f64,
    min_value: f64,
    union_labels: Vec<String>,
    #[serde(flatten)]
    solution: &'a BiCriteriaSolution,
}

fn write_solution(
    cli: &Cli,
    inst: &LoadedInstance,
    command: &str,
    epsilon: f64,
    sol: &BiCriteriaSolution,
    out: &mut impl Write,
) -> CliResult<()> {
    match cli.output {
        Format::Json => {
            let report = SolveReport {
                command,
                epsilon,
                min_value: sol.min_value(),
                union_labels: labelled(inst, &sol.union),
                solution: sol,
            };
            json_line(out, &report)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["layer", "element", "label"])?;
            for (i, layer) in sol.layers.iter().enumerate() {
                for e in layer.iter() {
                    w.write_record([i.to_string(), e.to_string(), inst.ground.label(e)])?;
                }
            }
            w.flush()?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct OracleReport<'a> {
    value: f64,
    set: &'a ElementSet,
    labels: Vec<String>,
    visited: u64,
}

fn write_oracle(
    cli: &Cli,
    inst: &LoadedInstance,
    best: &BruteForceResult,
    out: &mut impl Write,
) -> CliResult<()> {
    match cli.output {
        Format::Json => json_line(
            out,
            &OracleReport {
                value: best.value,
                set: &best.set,
                labels: labelled(inst, &best.set),
                visited: best.visited,
            },
        ),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["value", "set"])?;
            let set: Vec<String> = best.set.iter().map(|e| e.to_string()).collect();
            w.write_record([best.value.to_string(), set.join(" ")])?;
            w.flush()?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct OnlineSummary<'a> {
    params: &'a robustsub::online::OnlineParams,
    epsilon: f64,
    hindsight_value: f64,
    hindsight_exact: bool,
    total_payoff: f64,
    final_regret: f64,
    average_regret: f64,
    played_sets: Vec<ElementSet>,
}

fn write_online(cli: &Cli, run: &OnlineRun, out: &mut impl Write) -> CliResult<()> {
    match cli.output {
        Format::Json => {
            let r = &run.report;
            let horizon = run.params.horizon;
            json_line(
                out,
                &OnlineSummary {
                    params: &run.params,
                    epsilon: r.epsilon,
                    hindsight_value: r.hindsight_value,
                    hindsight_exact: r.hindsight_exact,
                    total_payoff: r.per_round_payoffs.iter().sum(),
                    final_regret: r.final_regret(),
                    average_regret: r.average_regret(horizon),
                    played_sets: run.played_sets(),
                },
            )
        }
        Format::Csv => Ok(run.report.write_curve_csv(out)?),
    }
}

fn write_experiment(cli: &Cli, result: &ExperimentResult, out: &mut impl Write) -> CliResult<()> {
    match cli.output {
        Format::Json => json_line(out, result),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "trial",
                "seed",
                "wall_time_s",
                "oracle_calls",
                "union_size",
                "max_per_part",
                "avg_per_part",
                "min_objective_value",
                "gamma",
                "ell",
            ])?;
            for r in &result.records {
                let max = r.per_part_sizes.iter().copied().max().unwrap_or(0);
                let avg = r.per_part_sizes.iter().sum::<usize>() as f64
                    / r.per_part_sizes.len().max(1) as f64;
                w.write_record([
                    r.trial.to_string(),
                    r.seed.to_string(),
                    r.wall_time_s.to_string(),
                    r.oracle_calls.to_string(),
                    r.union_size.to_string(),
                    max.to_string(),
                    avg.to_string(),
                    r.min_objective_value.to_string(),
                    r.gamma.map_or(String::new(), |g| g.to_string()),
                    r.ell.to_string(),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ValidationReport {
    n: usize,
    constraint: String,
    /// One entry per objective; `None` when the ground set is too large to enumerate.
    objectives: Vec<Option<PropertyReport>>,
    valid: bool,
}

/// Exit 0 when every check passes, 2 on the first failed axiom. Loading an
/// explicit family already runs the matroid axioms.
fn validate(cli: &Cli, path: &Path, out: &mut impl Write) -> CliResult<u8> {
    let inst = load(cli, path)?;
    let n = inst.n();
    let objectives = if n <= EXHAUSTIVE_CHECK_LIMIT {
        inst.objectives
            .iter()
            .map(|f| check_submodular_monotone(f, &inst.ground).map(Some))
            .collect::<robustsub::Result<Vec<_>>>()?
    } else {
        vec![None; inst.objectives.len()]
    };
    let valid = objectives.iter().flatten().all(PropertyReport::passed);
    let report = ValidationReport {
        n,
        constraint: format!("{:?}", inst.constraint),
        objectives,
        valid,
    };
    match cli.output {
        Format::Json => json_line(out, &report)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["objective", "submodular", "monotone", "nonnegative"])?;
            for (i, r) in report.objectives.iter().enumerate() {
                let cell = |b: Option<bool>| b.map_or("unchecked".to_string(), |b| b.to_string());
                w.write_record([
                    i.to_string(),
                    cell(r.as_ref().map(|r| r.submodular)),
                    cell(r.as_ref().map(|r| r.monotone)),
                    cell(r.as_ref().map(|r| r.nonnegative)),
                ])?;
            }
            w.flush()?;
        }
    }
    if !valid {
        eprintln!("error: an objective is not monotone submodular");
        return Ok(2);
    }
    Ok(0)
}

fn json_line(out: &mut impl Write, value: &impl Serialize) -> CliResult<()> {
    serde_json::to_writer(&mut *out, value).map_err(Error::from)?;
    writeln!(out)?;
    Ok(())
}
