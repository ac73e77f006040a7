//! Command-line front end for the weighted self-normalized bound suite.
//!
//! Exit codes: 0 when every checked row holds, 1 when some row is a
//! violation, 2 on usage or configuration errors.

pub mod commands;
pub mod config;
pub mod report;
pub mod verify;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use selfnorm_core::bounds::BoundsError;
use selfnorm_core::processes::ProcessError;
use selfnorm_core::McError;

use commands::ProcessKind;
use config::{parse_list, parse_number, ConfigError, Format, NumList, RunConfig};
use report::{Header, Table};
use verify::Check;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    MonteCarlo(#[from] McError),
    #[error(transparent)]
    Process(#[from] ProcessError),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Parser)]
#[command(name = "selfnorm", version, about = "Weighted self-normalized martingale bounds: tables, simulation and verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print c(a) and b(a) for a list of weights.
    Weights {
        /// Print the eight special (a, c) pairs instead.
        #[arg(long)]
        table1: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Print the pointwise margin on an (a, x) grid.
    Hermite {
        #[command(flatten)]
        common: Common,
    },
    /// Simulate one trace and print it step by step.
    Simulate {
        #[arg(value_enum, id = "PROCESS_KIND", value_name = "PROCESS")]
        process: ProcessKind,
        #[command(flatten)]
        common: Common,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[command(flatten)]
        common: Common,
    },
    /// Compare risk thresholds over a grid of empirical risks.
    LearningTable {
        #[command(flatten)]
        common: Common,
    },
}

fn a_grid_arg(s: &str) -> Result<NumList, ConfigError> {
    if s.trim() == "default" {
        Ok(NumList(Vec::new()))
    } else {
        parse_list(s)
    }
}

/// Flags shared by every subcommand. Numbers accept ratios such as `1/3`;
/// lists are comma separated.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Weight parameter(s) a.
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    a: Option<NumList>,
    /// Weight grid for the margin suite, or `default`.
    #[arg(long, value_parser = a_grid_arg)]
    a_grid: Option<NumList>,
    /// Horizon.
    #[arg(long)]
    n: Option<u64>,
    /// Monte Carlo replicates.
    #[arg(long)]
    reps: Option<usize>,
    /// Base seed; defaults to $SELFNORM_SEED, then 42.
    #[arg(long)]
    seed: Option<u64>,
    /// Confidence parameter of the Hoeffding interval.
    #[arg(long, value_parser = parse_number)]
    alpha: Option<f64>,
    /// Threshold grid (x values, or delta values for coverage checks).
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    x_grid: Option<NumList>,
    /// Exponent grid for supermartingale and Laplace checks.
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    t_grid: Option<NumList>,
    /// Empirical-risk grid for the learning table.
    #[arg(long, value_parser = parse_list)]
    r_grid: Option<NumList>,
    /// Level y of the variation constraint.
    #[arg(long, value_parser = parse_number)]
    y: Option<f64>,
    /// Moment order for the missing-factor check.
    #[arg(long, value_parser = parse_number)]
    holder_p: Option<f64>,
    /// AR(1) noise parameter p.
    #[arg(long, value_parser = parse_number)]
    p: Option<f64>,
    /// AR(1) coefficient.
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Learning: true threshold.
    #[arg(long, value_parser = parse_number)]
    theta_star: Option<f64>,
    /// Learning: label noise rate.
    #[arg(long, value_parser = parse_number)]
    eta: Option<f64>,
    /// Learning: initial step size.
    #[arg(long, value_parser = parse_number)]
    gamma0: Option<f64>,
    /// Learning: initial threshold.
    #[arg(long, value_parser = parse_number)]
    c0: Option<f64>,
    /// Confidence level delta.
    #[arg(long, value_parser = parse_number)]
    delta: Option<f64>,
    /// Bound on the ensemble second-moment average.
    #[arg(long, value_parser = parse_number)]
    v_bar: Option<f64>,
    /// Process for checks that accept any process.
    #[arg(long, value_parser = ["ar1", "idla", "learn"])]
    process: Option<String>,
    /// Output file; defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    workers: Option<usize>,
}

impl Common {
    fn into_config(self) -> Result<RunConfig, ConfigError> {
        let flags = RunConfig {
            a: self.a,
            a_grid: self.a_grid,
            n: self.n,
            reps: self.reps,
            seed: self.seed,
            alpha: self.alpha,
            x_grid: self.x_grid,
            t_grid: self.t_grid,
            r_grid: self.r_grid,
            y: self.y,
            holder_p: self.holder_p,
            p: self.p,
            theta: self.theta,
            theta_star: self.theta_star,
            eta: self.eta,
            gamma0: self.gamma0,
            c0: self.c0,
            delta: self.delta,
            v_bar: self.v_bar,
            process: self.process,
            out: self.out,
            format: self.format,
            workers: self.workers,
        };
        match self.config {
            Some(path) => Ok(RunConfig::load(&path)?.overlay(flags)),
            None => Ok(flags),
        }
    }
}

impl Command {
    fn name(&self) -> String {
        match self {
            Command::Weights { .. } => "weights".into(),
            Command::Hermite { .. } => "hermite".into(),
            Command::Simulate { process, .. } => format!("simulate {process:?}").to_lowercase(),
            Command::Verify { check, .. } => {
                let v = clap::ValueEnum::to_possible_value(check).expect("visible variant");
                format!("verify {}", v.get_name())
            }
            Command::LearningTable { .. } => "learning-table".into(),
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Weights { common, .. }
            | Command::Hermite { common }
            | Command::Simulate { common, .. }
            | Command::Verify { common, .. }
            | Command::LearningTable { common } => common,
        }
    }
}

fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Table, CliError> {
    match cmd {
        Command::Weights { table1, .. } => commands::weights(cfg, *table1),
        Command::Hermite { .. } => commands::hermite(cfg),
        Command::Simulate { process, .. } => commands::simulate(cfg, *process),
        Command::Verify { check, .. } => verify::run(*check, cfg),
        Command::LearningTable { .. } => commands::learning_table(cfg),
    }
}

/// Parses `args`, runs the command and writes the report. Returns the exit code.
pub fn run<I, T>(args: I, env_seed: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run_command(&cli.command, env_seed, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn run_command(cmd: &Command, env_seed: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let mut cfg = cmd.common().clone().into_config()?;
    let seed = cfg.resolve_seed(env_seed)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Pool(e.to_string()))?;
    let table = pool.install(|| execute(cmd, &cfg))?;

    let name = cmd.name();
    let header = Header { command: &name, config: &cfg, seed, version: env!("CARGO_PKG_VERSION") };
    match &cfg.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            report::write_report(&mut w, &header, &table, cfg.format())?;
            w.flush()?;
        }
        None => report::write_report(&mut *stdout, &header, &table, cfg.format())?,
    }
    if table.violations > 0 {
        writeln!(stderr, "{}: {} of {} rows violated", name, table.violations, table.rows.len())?;
    }
    Ok(exit_code(&table))
}

pub fn exit_code(table: &Table) -> i32 {
    if table.violations > 0 {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    }
}
