//! The `classical-condition` subcommand: condition a stochastic model on a
//! fuzzy predicate (or split it along an n-outcome test suite).

use crate::report::{CliError, Report};
use crate::{read_json_file, report};
use condprob::{
    condition, condition_ntest, verify_triangle, ClassicalError, KleisliMap, Predicate,
};
use serde::Deserialize;
use serde_json::json;
use std::fmt::Write as _;
use std::path::Path;

/// On-disk model file: a stochastic map plus either one predicate (binary
/// conditioning) or a list of predicates summing to truth (`--ntest`).
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub model: KleisliMap,
    #[serde(default)]
    pub predicate: Option<Predicate>,
    #[serde(default)]
    pub tests: Option<Vec<Predicate>>,
}

/// Only a failed test-suite check is a domain validation failure; everything
/// else about a bad model file is malformed input.
fn map_classical_error(err: ClassicalError) -> CliError {
    match err {
        ClassicalError::NotATest(_) => CliError::Validation {
            name: "NotATest",
            message: err.to_string(),
        },
        other => CliError::malformed(other),
    }
}

pub fn run(command: &str, seed: u64, path: &Path, ntest: bool) -> Result<Report, CliError> {
    let file: ModelFile = read_json_file(path)?;
    if ntest {
        let tests = file.tests.ok_or_else(|| {
            CliError::Malformed("--ntest needs a `tests` array in the model file".to_owned())
        })?;
        ntest_report(command, seed, &file.model, &tests)
    } else {
        let predicate = file.predicate.ok_or_else(|| {
            CliError::Malformed(
                "model file needs a `predicate` (or pass --ntest with a `tests` array)"
                    .to_owned(),
            )
        })?;
        binary_report(command, seed, &file.model, &predicate)
    }
}

fn rows_text(map: &KleisliMap, indent: &str) -> String {
    let mut out = String::new();
    for x in map.source().iter() {
        let row = map.row(x).expect("total row table");
        let _ = writeln!(out, "{indent}{x}: {row}");
    }
    out
}

/// Conditions `model` on `predicate` and renders the full report; shared by
/// `classical-condition` and the built-in worked examples.
pub fn binary_report(
    command: &str,
    seed: u64,
    model: &KleisliMap,
    predicate: &Predicate,
) -> Result<Report, CliError> {
    let result = condition(model, predicate).map_err(map_classical_error)?;
    let triangle_exact = verify_triangle(&result);

    let mut text = String::from("engine: classical (exact rationals)\n");
    text.push_str("predicate validity at each input:\n");
    for x in model.source().iter() {
        let value = result.marginal.value(x).expect("marginal is total");
        let _ = writeln!(text, "  {x}: {value}");
    }
    text.push_str("updated model given the predicate holds:\n");
    text.push_str(&rows_text(&result.cond_true, "  "));
    text.push_str("updated model given the predicate fails:\n");
    text.push_str(&rows_text(&result.cond_false, "  "));
    text.push_str("joint over tagged outcomes (k1 = holds, k2 = fails):\n");
    text.push_str(&rows_text(&result.joint, "  "));
    if result.degenerate_points.is_empty() {
        text.push_str("degenerate inputs (uniform fallback rows): none\n");
    } else {
        let listed: Vec<String> = result
            .degenerate_points
            .iter()
            .map(ToString::to_string)
            .collect();
        let _ = writeln!(
            text,
            "degenerate inputs (uniform fallback rows): {}",
            listed.join(", ")
        );
    }
    let _ = writeln!(
        text,
        "triangle recomposition: {}",
        if triangle_exact { "exact" } else { "BROKEN" }
    );

    let body = json!({
        "engine": "classical",
        "mode": "binary",
        "input": { "model": model, "predicate": predicate },
        "result": result,
        "triangle_exact": triangle_exact,
    });
    Ok(report::success(command, seed, body, &text))
}

fn ntest_report(
    command: &str,
    seed: u64,
    model: &KleisliMap,
    tests: &[Predicate],
) -> Result<Report, CliError> {
    let conditionals = condition_ntest(model, tests).map_err(map_classical_error)?;

    let mut text = String::from("engine: classical (exact rationals)\n");
    let _ = writeln!(text, "test outcomes: {}", conditionals.len());
    for (i, cond) in conditionals.iter().enumerate() {
        let _ = writeln!(text, "updated model given outcome {i}:");
        text.push_str(&rows_text(cond, "  "));
    }

    let body = json!({
        "engine": "classical",
        "mode": "ntest",
        "input": { "model": model, "tests": tests },
        "result": { "conditionals": conditionals },
    });
    Ok(report::success(command, seed, body, &text))
}
