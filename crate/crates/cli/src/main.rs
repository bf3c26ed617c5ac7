mod config;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use adhoc_progress::analytic::spatial_density_of_progress;
use adhoc_progress::experiments::{sweep, sweep_points, AnalyticValues};
use adhoc_progress::validation::Validator;
use clap::{Args, Parser, Subcommand};

use config::{ConfigError, Format, RunConfig};
use output::{Cell, Table};

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(
    name = "adhoc-progress",
    version,
    about = "Density of progress in Aloha ad hoc networks with multi-antenna receivers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form NFP progress and MSR bounds over the sweep axis.
    Analytic(Common),
    /// Monte Carlo estimates with matching analytic values.
    Simulate(Common),
    /// Acceptance criteria with measured values and tolerances.
    Validate(Common),
}

#[derive(Args)]
struct Common {
    /// Configuration file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Worker threads. Results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

enum Failure {
    Config(ConfigError),
    Run(String),
    Validation,
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Run(format!("writing output: {e}"))
    }
}

fn load(common: &Common) -> Result<RunConfig, ConfigError> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError::new(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::parse(&text)
                .map_err(|e| ConfigError::new(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = common.trials {
        cfg.trials = trials;
    }
    if let Some(format) = common.format {
        cfg.format = format;
    }
    if common.out.is_some() {
        cfg.out.clone_from(&common.out);
    }
    Ok(cfg)
}

fn emit(cfg: &RunConfig, table: &Table) -> Result<(), Failure> {
    match &cfg.out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Failure::Run(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            table.write(cfg.format, &mut w)?;
            w.flush()?;
        }
        None => table.write(cfg.format, io::stdout().lock())?,
    }
    Ok(())
}

fn swept(value: Option<f64>) -> Cell {
    value.into()
}

fn analytic(cfg: &RunConfig) -> Result<Table, Failure> {
    cfg.params
        .validate()
        .map_err(|e| ConfigError::new(e.to_string()))?;
    let plan = adhoc_progress::experiments::ExperimentPlan {
        params: cfg.params,
        sweep: cfg.sweep.clone(),
        ..Default::default()
    };
    let points = sweep_points(&plan).map_err(|e| ConfigError::new(e.to_string()))?;
    let mut table = Table::new(&[
        "swept_value",
        "nfp_progress",
        "nfp_density",
        "msr_upper_progress",
        "msr_upper_density",
        "baccelli_lower_progress",
    ]);
    for (value, params) in points {
        let a = AnalyticValues::at(&params);
        let density = |v: Option<f64>| v.map(|x| spatial_density_of_progress(&params, x));
        table.push(vec![
            swept(value),
            a.nfp.into(),
            density(a.nfp).into(),
            a.msr_upper.into(),
            density(a.msr_upper).into(),
            a.baccelli_lower.into(),
        ]);
    }
    Ok(table)
}

fn simulate(cfg: &RunConfig) -> Result<Table, Failure> {
    let plan = cfg.plan()?;
    let rows = sweep(&plan).map_err(|e| Failure::Run(e.to_string()))?;
    let mut table = Table::new(&[
        "swept_value",
        "scheme",
        "mean_progress",
        "density_of_progress",
        "ci_halfwidth",
        "trials",
        "resampled_trials",
        "analytic_progress",
        "analytic_density",
        "error",
    ]);
    for row in &rows {
        for &scheme in &plan.schemes {
            let analytic = row.analytic.for_scheme(scheme);
            let analytic_density = analytic.map(|x| spatial_density_of_progress(&row.params, x));
            let mut cells = vec![swept(row.value), Cell::Text(scheme.name().into())];
            match &row.outcome {
                Ok(summary) => {
                    let e = summary
                        .estimate(scheme)
                        .expect("every planned scheme is simulated");
                    cells.extend([
                        Cell::Real(e.mean_progress),
                        Cell::Real(e.density_of_progress),
                        Cell::Real(e.ci_halfwidth),
                        Cell::Count(e.trials as u64),
                        Cell::Count(summary.resampled_trials as u64),
                        analytic.into(),
                        analytic_density.into(),
                        Cell::Empty,
                    ]);
                }
                Err(message) => {
                    eprintln!("point {:?} failed: {message}", row.value);
                    cells.extend([
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                    ]);
                    cells.extend([
                        analytic.into(),
                        analytic_density.into(),
                        Cell::Text(message.clone()),
                    ]);
                }
            }
            table.push(cells);
        }
    }
    Ok(table)
}

fn validate(cfg: &RunConfig) -> Result<(Table, bool), Failure> {
    let validator = Validator::new(cfg.validation()?);
    let mut table = Table::new(&[
        "criterion",
        "title",
        "passed",
        "measured",
        "tolerance",
        "details",
    ]);
    let mut all_passed = true;
    for &criterion in &cfg.criteria {
        let report = validator
            .run(criterion)
            .map_err(|e| Failure::Run(format!("{criterion} could not be evaluated: {e}")))?;
        eprintln!("{}", report.line());
        all_passed &= report.passed;
        table.push(vec![
            Cell::Text(criterion.id().into()),
            Cell::Text(criterion.title().into()),
            Cell::Flag(report.passed),
            Cell::Text(report.measured),
            Cell::Text(report.tolerance),
            Cell::Text(report.details.join("; ")),
        ]);
    }
    Ok((table, all_passed))
}

fn execute(command: &Command) -> Result<(), Failure> {
    let (Command::Analytic(common) | Command::Simulate(common) | Command::Validate(common)) =
        command;
    let cfg = load(common)?;
    let run = || -> Result<(), Failure> {
        match command {
            Command::Analytic(_) => emit(&cfg, &analytic(&cfg)?),
            Command::Simulate(_) => emit(&cfg, &simulate(&cfg)?),
            Command::Validate(_) => {
                let (table, passed) = validate(&cfg)?;
                emit(&cfg, &table)?;
                if passed {
                    Ok(())
                } else {
                    Err(Failure::Validation)
                }
            }
        }
    };
    match common.threads {
        Some(0) => Err(ConfigError::new("--threads must be positive").into()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::Run(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("configuration error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAILURE)
        }
        Err(Failure::Validation) => {
            eprintln!("validation failed");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}
