use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

mod commands;

use commands::{BitangentArgs, BoundArgs, CountArgs, LinesArgs, MonodromyArgs, ReduceArgs, SelftestArgs, SolveArgs};

const EXIT_INVALID: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_USAGE: u8 = 64;

/// Tschirnhaus towers, resolvent-degree bounds, lines, bitangents and
/// monodromy certificates, with JSON in and out.
#[derive(Debug, Parser)]
#[command(name = "rdlab", version)]
pub struct Cli {
    /// Root seed for every stochastic step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Residual tolerance for accepting numerical results.
    #[arg(long, global = true, value_parser = positive_f64, default_value_t = rdlab_core::tschirnhaus::TOWER_TOL)]
    tol: f64,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reduce a polynomial to a normal form and print the solution tower.
    Reduce(ReduceArgs),
    /// Solve a polynomial through its reduction tower.
    Solve(SolveArgs),
    /// Resolvent-degree upper bound for a degree or a group.
    Bound(BoundArgs),
    /// The 27 lines on a cubic surface.
    Lines(LinesArgs),
    /// The 28 bitangents of a plane quartic.
    Bitangents(BitangentArgs),
    /// Numerical monodromy certificate for an enumerative family.
    Monodromy(MonodromyArgs),
    /// Enumerative counts.
    Count(CountArgs),
    /// Run the acceptance suite.
    Selftest(SelftestArgs),
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] rdlab_core::Error),
    #[error("{0}")]
    Input(String),
    #[error("{message}")]
    Check { message: String, diagnostic: Value },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_input_error() => EXIT_INVALID,
            CliError::Input(_) => EXIT_INVALID,
            _ => EXIT_NUMERICAL,
        }
    }
}

pub struct Context {
    pub seed: u64,
    pub tol: f64,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("RDLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Input(format!("RDLAB_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Input(format!("cannot size the thread pool: {e}")))
}

fn emit(out: Option<&PathBuf>, value: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Input(format!("cannot write `{}`: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| CliError::Input(e.to_string()))
        }
    }
}

fn run(cli: &Cli) -> Result<Value, CliError> {
    configure_threads()?;
    let ctx = Context { seed: cli.seed, tol: cli.tol };
    match &cli.command {
        Command::Reduce(a) => commands::reduce(&ctx, a),
        Command::Solve(a) => commands::solve(&ctx, a),
        Command::Bound(a) => commands::bound(a),
        Command::Lines(a) => commands::lines(&ctx, a),
        Command::Bitangents(a) => commands::bitangents(&ctx, a),
        Command::Monodromy(a) => commands::monodromy(&ctx, a),
        Command::Count(a) => commands::count(a),
        Command::Selftest(a) => commands::selftest(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::InvalidSubcommand
                | ErrorKind::MissingSubcommand
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => EXIT_USAGE,
                _ => EXIT_INVALID,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = run(&cli).and_then(|v| emit(cli.out.as_ref(), &v));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let code = err.exit_code();
            let kind = match &err {
                _ if code == EXIT_INVALID => "invalid-input",
                CliError::Check { .. } => "check-failed",
                _ => "numerical-failure",
            };
            let mut report = json!({ "status": kind, "message": err.to_string() });
            if let CliError::Check { diagnostic, .. } = &err {
                report["diagnostic"] = diagnostic.clone();
            }
            if code == EXIT_NUMERICAL {
                let _ = emit(cli.out.as_ref(), &report);
            }
            eprintln!("rdlab: {err}");
            ExitCode::from(code)
        }
    }
}
