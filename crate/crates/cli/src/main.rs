//! `radres`: experiments on weighted resolvent norms of radial Schrödinger
//! operators. Every command writes one CSV file.
//!
//! Exit codes: 0 success, 2 bad input or violated precondition, 3 a
//! numerical quality check failed, 1 anything else.

mod commands;
mod config;
mod grids;
mod output;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use radres_core::Error;

use config::{Command, ExperimentConfig, Params};

#[derive(Parser)]
#[command(name = "radres", version, about = "Weighted resolvent norms for radial potentials")]
struct Cli {
    /// Cap on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Sub,
}

#[derive(Args)]
struct RunArgs {
    /// `key = value` file supplying any of the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the effective configuration here before running.
    #[arg(long)]
    save_config: Option<PathBuf>,
    #[command(flatten)]
    params: Params,
}

#[derive(Subcommand)]
enum Sub {
    /// Fundamental solutions u0, u1 of one channel.
    Solve(RunArgs),
    /// Weighted resolvent norm in R^n, channel by channel.
    Norm(RunArgs),
    /// Full norm over a grid of h.
    SweepH(RunArgs),
    /// Single-channel norm over a grid of m.
    SweepM(RunArgs),
    /// Mellin transform, multiplier and decomposition checks.
    MellinCheck(RunArgs),
    /// Bessel values, Wronskian and envelope ratios at argument nu*z.
    BesselCheck(RunArgs),
    /// Write a matplotlib script for a CSV produced by another command.
    Plot {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, value_enum)]
        kind: Command,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn read_config(path: &PathBuf, cmd: Command) -> Result<Params, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read config {}: {e}", path.display())))?;
    let c = ExperimentConfig::parse(&text)?;
    if c.command != cmd {
        return Err(Error::Precondition(format!(
            "config is for '{}', not '{}'",
            c.command.name(),
            cmd.name()
        ))
        .into());
    }
    Ok(c.params)
}

fn execute(cmd: Command, a: RunArgs) -> Result<(), Failure> {
    let params = match &a.config {
        Some(path) => a.params.over(read_config(path, cmd)?),
        None => a.params,
    };
    if let Some(path) = &a.save_config {
        let c = ExperimentConfig { command: cmd, params: params.clone() };
        std::fs::write(path, c.serialize()).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    let table = commands::run(cmd, &params)?;
    table
        .write(params.out.as_deref())
        .map_err(|e| Failure::Io(format!("cannot write output: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("thread pool set once");
    }
    let result = match cli.cmd {
        Sub::Solve(a) => execute(Command::Solve, a),
        Sub::Norm(a) => execute(Command::Norm, a),
        Sub::SweepH(a) => execute(Command::SweepH, a),
        Sub::SweepM(a) => execute(Command::SweepM, a),
        Sub::MellinCheck(a) => execute(Command::MellinCheck, a),
        Sub::BesselCheck(a) => execute(Command::BesselCheck, a),
        Sub::Plot { csv, kind, out } => plot::emit_plot_script(&csv, kind, &out).map_err(Failure::from),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_precondition() { 2 } else { 3 })
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
