//! The `verify` subcommand: re-derive a previously emitted report from the
//! inputs it embeds and check that the stored results still hold together.

use crate::report::{fmt_f64, CliError, Report};
use crate::{read_json_file, report};
use condprob::bomb::Scenario;
use condprob::cstar::{condition_param, AlgebraShape, Effect, PUMap};
use condprob::{condition, condition_ntest, verify_triangle, AlgebraElement};
use condprob::{ConditioningResult, KleisliMap, Predicate};
use serde::Deserialize;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::Path;

/// Residual bound a recomputed operator triangle must meet.
const RESIDUAL_BOUND: f64 = 1e-8;
/// Reconstruction-gap bound for the operator uniqueness check.
const GAP_BOUND: f64 = 1e-10;
/// How far stored floats may drift from recomputed ones: generous against
/// the 12-significant-digit rounding applied on output.
const MATCH_TOL: f64 = 1e-9;

/// The slice of a stored report that verification needs.
#[derive(Deserialize)]
struct StoredReport {
    command: String,
    seed: u64,
    status: String,
    #[serde(default)]
    engine: Option<String>,
    #[serde(default)]
    mode: Option<String>,
    #[serde(default)]
    probes: Option<usize>,
    #[serde(default)]
    input: Option<Value>,
    #[serde(default)]
    result: Option<Value>,
}

fn field(value: &Option<Value>, name: &str) -> Result<Value, CliError> {
    value
        .as_ref()
        .and_then(|v| v.get(name))
        .cloned()
        .ok_or_else(|| CliError::Malformed(format!("report is missing `{name}`")))
}

fn decode<T: serde::de::DeserializeOwned>(value: Value, what: &str) -> Result<T, CliError> {
    serde_json::from_value(value)
        .map_err(|e| CliError::Malformed(format!("report has a malformed {what}: {e}")))
}

/// One named check with its outcome, for the verification report.
struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

impl Check {
    fn exact(name: &'static str, passed: bool) -> Self {
        Check {
            name,
            passed,
            detail: if passed { "exact".to_owned() } else { "mismatch".to_owned() },
        }
    }

    fn bounded(name: &'static str, value: f64, bound: f64) -> Self {
        Check {
            name,
            passed: value < bound,
            detail: format!("{} (bound {})", fmt_f64(value), fmt_f64(bound)),
        }
    }
}

pub fn run(command: &str, seed: u64, path: &Path) -> Result<Report, CliError> {
    let stored: StoredReport = read_json_file(path)?;
    if stored.status != "ok" {
        return Err(CliError::Malformed(
            "the report records an error, so there is no result to verify".to_owned(),
        ));
    }
    let engine = stored.engine.clone().ok_or_else(|| {
        CliError::Malformed("report has no `engine` field; cannot pick a verifier".to_owned())
    })?;

    let checks = match engine.as_str() {
        "classical" => verify_classical(&stored)?,
        "operator" => verify_operator(&stored)?,
        "interferometer" => verify_interferometer(&stored)?,
        other => {
            return Err(CliError::Malformed(format!(
                "unknown engine `{other}` in report"
            )))
        }
    };

    let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed).collect();
    if let Some(first) = failed.first() {
        let name = if first.name.contains("triangle") || first.name.contains("gap") {
            "TriangleViolation"
        } else {
            "ResultMismatch"
        };
        return Err(CliError::Validation {
            name,
            message: format!("{}: {}", first.name, first.detail),
        });
    }

    let mut text = String::new();
    let _ = writeln!(
        text,
        "verified report: {} (engine {engine})",
        stored.command
    );
    for check in &checks {
        let _ = writeln!(text, "  {}: {}", check.name, check.detail);
    }
    let body = json!({
        "engine": "verify",
        "verified_command": stored.command,
        "verified_engine": engine,
        "checks": checks
            .iter()
            .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
            .collect::<Vec<_>>(),
    });
    Ok(report::success(command, seed, body, &text))
}

fn verify_classical(stored: &StoredReport) -> Result<Vec<Check>, CliError> {
    let model: KleisliMap = decode(field(&stored.input, "model")?, "model")?;
    if stored.mode.as_deref() == Some("ntest") {
        let tests: Vec<Predicate> = decode(field(&stored.input, "tests")?, "test list")?;
        let stored_conditionals: Vec<KleisliMap> =
            decode(field(&stored.result, "conditionals")?, "conditional list")?;
        let recomputed = condition_ntest(&model, &tests).map_err(CliError::malformed)?;
        Ok(vec![Check::exact(
            "stored conditionals match recomputation",
            recomputed == stored_conditionals,
        )])
    } else {
        let predicate: Predicate = decode(field(&stored.input, "predicate")?, "predicate")?;
        let stored_result: ConditioningResult = decode(
            stored
                .result
                .clone()
                .ok_or_else(|| CliError::Malformed("report is missing `result`".to_owned()))?,
            "conditioning result",
        )?;
        let recomputed = condition(&model, &predicate).map_err(CliError::malformed)?;
        Ok(vec![
            Check::exact(
                "stored result matches recomputation",
                recomputed == stored_result,
            ),
            Check::exact("triangle recomposition", verify_triangle(&recomputed)),
        ])
    }
}

fn max_matrix_diff(a: &PUMap, b: &PUMap) -> f64 {
    if a.matrix().shape() != b.matrix().shape() {
        return f64::INFINITY;
    }
    (a.matrix() - b.matrix())
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
}

fn verify_operator(stored: &StoredReport) -> Result<Vec<Check>, CliError> {
    let a: AlgebraShape = decode(field(&stored.input, "a_shape")?, "algebra shape")?;
    let b: AlgebraShape = decode(field(&stored.input, "b_shape")?, "algebra shape")?;
    let f: PUMap = decode(field(&stored.input, "f")?, "process map")?;
    let e_element: AlgebraElement = decode(field(&stored.input, "e")?, "effect element")?;
    if f.source() != &b || f.target() != &a.center() || e_element.shape() != &a.tensor(&b) {
        return Err(CliError::Malformed(
            "report's embedded shapes disagree with its process map or effect".to_owned(),
        ));
    }
    let e = Effect::new(e_element).map_err(CliError::malformed)?;
    let probes = stored.probes.unwrap_or(crate::scenario::DEFAULT_PROBES);

    let stored_true: PUMap = decode(field(&stored.result, "cond_true")?, "conditional map")?;
    let stored_false: PUMap = decode(field(&stored.result, "cond_false")?, "conditional map")?;

    let recomputed = condition_param(&a, &f, &e).map_err(CliError::malformed)?;
    let residual = recomputed
        .triangle_residual(probes, stored.seed)
        .map_err(CliError::malformed)?;
    let gap = recomputed.reconstruction_gap().map_err(CliError::malformed)?;
    let drift = max_matrix_diff(&recomputed.cond_true, &stored_true)
        .max(max_matrix_diff(&recomputed.cond_false, &stored_false));

    Ok(vec![
        Check::bounded("stored conditionals drift from recomputation", drift, MATCH_TOL),
        Check::bounded("triangle residual", residual, RESIDUAL_BOUND),
        Check::bounded("reconstruction gap", gap, GAP_BOUND),
    ])
}

fn verify_interferometer(stored: &StoredReport) -> Result<Vec<Check>, CliError> {
    let stored_result: condprob::bomb::Report = decode(
        stored
            .result
            .clone()
            .ok_or_else(|| CliError::Malformed("report is missing `result`".to_owned()))?,
        "interferometer result",
    )?;
    let recomputed = Scenario::new()
        .map_err(CliError::malformed)?
        .run()
        .map_err(CliError::malformed)?;

    let mut drift = (recomputed.detection_probability - stored_result.detection_probability)
        .abs()
        .max((recomputed.dud_given_detection - stored_result.dud_given_detection).abs())
        .max((recomputed.live_given_detection - stored_result.live_given_detection).abs())
        .max((recomputed.round_trip_defect - stored_result.round_trip_defect).abs());
    if recomputed.stages.len() != stored_result.stages.len() {
        drift = f64::INFINITY;
    } else {
        for (ours, theirs) in recomputed.stages.iter().zip(&stored_result.stages) {
            if ours.stage != theirs.stage {
                drift = f64::INFINITY;
                break;
            }
            drift = drift
                .max((ours.detected_up - theirs.detected_up).abs())
                .max((ours.exited_right - theirs.exited_right).abs())
                .max((ours.exploded - theirs.exploded).abs())
                .max((ours.vanished - theirs.vanished).abs());
        }
    }

    Ok(vec![Check::bounded(
        "stored outcomes drift from recomputation",
        drift,
        MATCH_TOL,
    )])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    fn write_report(report: &Report) -> tempfile::NamedTempFile {
        let file = tempfile::NamedTempFile::new().unwrap();
        std::fs::write(
            file.path(),
            serde_json::to_string_pretty(&report.json).unwrap(),
        )
        .unwrap();
        file
    }

    #[test]
    fn classical_report_round_trips_through_verify() {
        let (model, predicate) = examples::country_model();
        let report =
            crate::model::binary_report("classical-condition", 0, &model, &predicate).unwrap();
        let file = write_report(&report);
        let verdict = run("verify", 0, file.path()).unwrap();
        assert_eq!(verdict.json["status"], "ok");
        assert_eq!(verdict.json["verified_engine"], "classical");
    }

    #[test]
    fn tampered_classical_report_is_rejected() {
        let (model, predicate) = examples::country_model();
        let report =
            crate::model::binary_report("classical-condition", 0, &model, &predicate).unwrap();
        let mut doc = report.json.clone();
        // Swap the two branches: still well-formed, no longer the answer.
        let cond_true = doc["result"]["cond_true"].clone();
        doc["result"]["cond_true"] = doc["result"]["cond_false"].clone();
        doc["result"]["cond_false"] = cond_true;
        let file = tempfile::NamedTempFile::new().unwrap();
        std::fs::write(file.path(), serde_json::to_string(&doc).unwrap()).unwrap();
        let err = run("verify", 0, file.path()).unwrap_err();
        match err {
            CliError::Validation { name, .. } => assert_eq!(name, "ResultMismatch"),
            other => panic!("expected validation failure, got {other:?}"),
        }
    }

    #[test]
    fn interferometer_report_round_trips_through_verify() {
        let report = examples::bomb_report("bomb", 0).unwrap();
        let file = write_report(&report);
        let verdict = run("verify", 0, file.path()).unwrap();
        assert_eq!(verdict.json["status"], "ok");
        assert_eq!(verdict.json["verified_engine"], "interferometer");
    }
}
