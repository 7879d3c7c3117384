// SPDX-License-Identifier: Apache-2.0

use clap::{Args, Parser, Subcommand};
use slenderflow_cli::{CliError, CliResult, Command, ExperimentConfig, Sink, CONFIG_SCHEMA};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "slenderflow", version, about = "Stokes flow experiments on thin closed fibers")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Axial drag of a torus against tabulated exact values.
    TorusDrag(RunArgs),
    /// Model surface integrals over (epsilon, q_n).
    QuadratureTable(RunArgs),
    /// Solver against slender-body theory as epsilon shrinks.
    KrCompare(RunArgs),
    /// Slender-body discrepancy on nearly self-intersecting hairties.
    NearIntersection(RunArgs),
    /// Condition numbers of the discrete system.
    ConditionTable(RunArgs),
    /// Quadrature node layout as CSV and SVG.
    QuadratureSvg(RunArgs),
    /// Print the configuration schema.
    Schema,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output_dir` in the configuration.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Replace every q_n in the configuration.
    #[arg(long)]
    qn: Option<usize>,
}

fn execute(command: Command, args: &RunArgs) -> CliResult<Vec<String>> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(qn) = args.qn {
        cfg.override_qn(qn)?;
    }
    command.validate(&cfg)?;
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        slenderflow_core::configure_threads(n).map_err(CliError::solver("configuring threads"))?;
    }
    let dir = args
        .out
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let sink = Sink::new(&dir, &cfg.experiment)?;
    let outcome = command.run(&cfg, &sink)?;
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    Ok(outcome.violations)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match &cli.command {
        Cmd::TorusDrag(a) => (Command::TorusDrag, a),
        Cmd::QuadratureTable(a) => (Command::QuadratureTable, a),
        Cmd::KrCompare(a) => (Command::KrCompare, a),
        Cmd::NearIntersection(a) => (Command::NearIntersection, a),
        Cmd::ConditionTable(a) => (Command::ConditionTable, a),
        Cmd::QuadratureSvg(a) => (Command::QuadratureSvg, a),
        Cmd::Schema => {
            print!("{CONFIG_SCHEMA}");
            return ExitCode::SUCCESS;
        }
    };
    match execute(command, args) {
        Ok(violations) if violations.is_empty() => ExitCode::SUCCESS,
        Ok(violations) => {
            for v in &violations {
                eprintln!("fixture violation: {v}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
