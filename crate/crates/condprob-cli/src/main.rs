//! `condprob`: conditional probability as map composition, on the command
//! line.  Runs built-in worked examples, conditions user-supplied classical
//! or operator-algebraic models, and re-verifies emitted reports.
//!
//! Exit codes: 0 on success, 1 on malformed input (unreadable file, bad
//! JSON, inconsistent shapes), 2 on a domain validation failure (the report
//! names the error: `NotATest`, `MarginalNotInvertible`, `DegenerateEffect`,
//! `TriangleViolation`, `ResultMismatch`).

mod examples;
mod model;
mod report;
mod scenario;
mod verify;

use clap::{Parser, Subcommand, ValueEnum};
use report::{CliError, Report};
use serde::de::DeserializeOwned;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "condprob",
    version,
    about = "Conditional probability as map composition: exact classical \
             conditioning and operator-algebraic effect conditioning."
)]
struct Cli {
    /// Seed for every randomized check (probe selection); fixed default for
    /// reproducible output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format for the report.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run a built-in worked example (hair, country, or bomb).
    Examples {
        /// Which example to run.
        name: String,
    },
    /// Condition a stochastic model file on its predicate.
    ClassicalCondition {
        /// Path to a JSON model file: {"model": …, "predicate": …} or
        /// {"model": …, "tests": […]} with --ntest.
        #[arg(long)]
        model: PathBuf,
        /// Split the model along the file's `tests` array (an n-outcome
        /// test suite summing to truth) instead of one predicate.
        #[arg(long)]
        ntest: bool,
    },
    /// Condition an operator-algebra scenario file on its effect.
    QuantumCondition {
        /// Path to a JSON scenario file: {"a_shape": …, "b_shape": …,
        /// "f": …, "e": …} with optional "probes" and "seed".
        #[arg(long)]
        scenario: PathBuf,
        /// Number of random Hermitian probes for the triangle residual
        /// (overrides the scenario file; default 20).
        #[arg(long)]
        probes: Option<usize>,
    },
    /// Re-derive a previously emitted report from its embedded inputs and
    /// check the stored results.
    Verify {
        /// Path to a report produced by this tool.
        #[arg(long)]
        result: PathBuf,
    },
    /// Run the interaction-free bomb tester.
    Bomb,
}

/// Reads and deserializes a JSON input file, reporting failures as
/// malformed input (exit code 1).
fn read_json_file<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Malformed(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))
}

fn command_label(command: &Command) -> String {
    match command {
        Command::Examples { name } => format!("examples {name}"),
        Command::ClassicalCondition { .. } => "classical-condition".to_owned(),
        Command::QuantumCondition { .. } => "quantum-condition".to_owned(),
        Command::Verify { .. } => "verify".to_owned(),
        Command::Bomb => "bomb".to_owned(),
    }
}

fn dispatch(cli: &Cli, label: &str) -> Result<Report, CliError> {
    match &cli.command {
        Command::Examples { name } => examples::find(name)?.run(label, cli.seed),
        Command::ClassicalCondition { model, ntest } => {
            model::run(label, cli.seed, model, *ntest)
        }
        Command::QuantumCondition { scenario, probes } => {
            scenario::run(label, cli.seed, scenario, *probes)
        }
        Command::Verify { result } => verify::run(label, cli.seed, result),
        Command::Bomb => examples::bomb_report(label, cli.seed),
    }
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&report.json)
                .expect("reports serialize");
            text.push('\n');
            text
        }
        Format::Text => report.text.clone(),
    }
}

fn write_output(cli: &Cli, report: &Report) -> Result<(), String> {
    let rendered = render(report, cli.format);
    match &cli.out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let label = command_label(&cli.command);
    match dispatch(&cli, &label) {
        Ok(report) => match write_output(&cli, &report) {
            Ok(()) => ExitCode::SUCCESS,
            Err(message) => {
                eprintln!("error: {message}");
                ExitCode::from(1)
            }
        },
        Err(CliError::Malformed(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Validation { name, message }) => {
            let failure = report::validation_failure(&label, cli.seed, name, &message);
            if let Err(io_message) = write_output(&cli, &failure) {
                eprintln!("error: {io_message}");
            }
            ExitCode::from(2)
        }
    }
}
