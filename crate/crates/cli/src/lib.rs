//! Command-line harness for the `cmloops` library.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fmt;
use std::fs;

use clap::{Parser, Subcommand};

use config::{CommonArgs, ExperimentConfig};
use output::Report;

pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_UNDEFINED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "cmloops", version, about = "Self-loops and multiple edges in configuration models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree moments, exact Poisson means, Stein factors and estimates.
    Moments(CommonArgs),
    /// Per-replicate statistics and Poisson distances.
    Montecarlo(CommonArgs),
    /// Exact law by exhaustive enumeration of a small instance.
    Enumerate(CommonArgs),
    /// Kolmogorov-Smirnov distance of standardized S (and M) to the normal.
    Clt(CommonArgs),
    /// Distance of the thinned sum to its Poisson limit.
    CramerWold(CommonArgs),
    /// Law of the number of edges removed by erasing loops and multi-edges.
    Erased(CommonArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Moments(_) => "moments",
            Command::Montecarlo(_) => "montecarlo",
            Command::Enumerate(_) => "enumerate",
            Command::Clt(_) => "clt",
            Command::CramerWold(_) => "cramer-wold",
            Command::Erased(_) => "erased",
        }
    }

    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::Moments(a)
            | Command::Montecarlo(a)
            | Command::Enumerate(a)
            | Command::Clt(a)
            | Command::CramerWold(a)
            | Command::Erased(a) => a,
        }
    }
}

/// A failure with the process exit code it maps to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<cmloops::Error> for CliError {
    fn from(e: cmloops::Error) -> Self {
        use cmloops::Error;
        let code = match e {
            Error::TooLarge { .. } => EXIT_CAP,
            Error::Undefined(_) => EXIT_UNDEFINED,
            _ => EXIT_INVALID,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

/// Output of one invocation.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub rendered: String,
    pub warnings: Vec<String>,
    pub written_to: Option<std::path::PathBuf>,
}

fn dispatch(command: &Command, cfg: &ExperimentConfig) -> Result<Report, CliError> {
    match command {
        Command::Moments(_) => commands::moments(cfg),
        Command::Montecarlo(_) => commands::montecarlo(cfg),
        Command::Enumerate(_) => commands::enumerate(cfg),
        Command::Clt(_) => commands::clt(cfg),
        Command::CramerWold(_) => commands::cramer_wold(cfg),
        Command::Erased(_) => commands::erased(cfg),
    }
}

#[cfg(feature = "parallel")]
fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::invalid(format!("cannot start {t} threads: {e}")))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_threads<T: Send>(_threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    Ok(f())
}

/// Runs a parsed command line, writing to `--out` when given.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let args = cli.command.args();
    let cfg = ExperimentConfig::from_args(args)?;
    let report = with_threads(args.threads, || dispatch(&cli.command, &cfg))??;
    let rendered = output::render(&report, cli.command.name(), &cfg, args.threads);
    if let Some(path) = &args.out {
        fs::write(path, &rendered).map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(Outcome {
        rendered,
        warnings: report.warnings,
        written_to: args.out.clone(),
    })
}

/// Parses `args` (including the program name) and runs them.
pub fn execute<I, T>(args: I) -> Result<Outcome, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::invalid(e.to_string()))?;
    run(&cli)
}
