//! The `quantum-condition` subcommand: condition a center-valued operator
//! process on an effect of the composite algebra.

use crate::report::{fmt_complex, fmt_f64, CliError, Report};
use crate::{read_json_file, report};
use condprob::cstar::{condition_param, AlgebraShape, Effect, PUMap, QConditioningResult, C};
use condprob::{AlgebraElement, CstarError};
use nalgebra::DMatrix;
use serde::Deserialize;
use serde_json::json;
use std::fmt::Write as _;
use std::path::Path;

/// Probe count used when neither the scenario file nor `--probes` says
/// otherwise.
pub const DEFAULT_PROBES: usize = 20;

/// On-disk scenario: block shapes for the two algebras, the process
/// `f: B → Z(A)` as a complex matrix (rows = blocks of `A`, columns = the
/// vectorized basis of `B`, entries `[re, im]`), and the conditioning effect
/// as an element of `A ⊗ B`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub a_shape: Vec<usize>,
    pub b_shape: Vec<usize>,
    pub f: Vec<Vec<[f64; 2]>>,
    pub e: AlgebraElement,
    #[serde(default)]
    pub probes: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

/// Only a near-singular marginal (or a degenerate effect) is a domain
/// validation failure; everything else about a bad scenario is malformed
/// input.
fn map_cstar_error(err: CstarError) -> CliError {
    match err {
        CstarError::MarginalNotInvertible { .. } => CliError::Validation {
            name: "MarginalNotInvertible",
            message: err.to_string(),
        },
        CstarError::DegenerateEffect { .. } => CliError::Validation {
            name: "DegenerateEffect",
            message: err.to_string(),
        },
        other => CliError::malformed(other),
    }
}

fn matrix_from_rows(rows: &[Vec<[f64; 2]>]) -> Result<DMatrix<C>, CliError> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(CliError::Malformed(
            "`f` must be a non-empty rectangular matrix of [re, im] entries".to_owned(),
        ));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |r, c| {
        C::new(rows[r][c][0], rows[r][c][1])
    }))
}

pub fn run(
    command: &str,
    global_seed: u64,
    path: &Path,
    probes_flag: Option<usize>,
) -> Result<Report, CliError> {
    let file: ScenarioFile = read_json_file(path)?;
    let a = AlgebraShape::new(file.a_shape).map_err(CliError::malformed)?;
    let b = AlgebraShape::new(file.b_shape).map_err(CliError::malformed)?;
    let f = PUMap::new(b.clone(), a.center(), matrix_from_rows(&file.f)?)
        .map_err(CliError::malformed)?;
    if file.e.shape() != &a.tensor(&b) {
        return Err(CliError::Malformed(format!(
            "effect lives in {} but the composite algebra is {}",
            file.e.shape(),
            a.tensor(&b)
        )));
    }
    let e = Effect::new(file.e).map_err(CliError::malformed)?;
    let probes = probes_flag.or(file.probes).unwrap_or(DEFAULT_PROBES);
    let seed = file.seed.unwrap_or(global_seed);
    condition_report(command, seed, probes, &a, &b, &f, &e)
}

fn matrix_text(map: &PUMap, indent: &str) -> String {
    let m = map.matrix();
    let mut out = String::new();
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|c| fmt_complex(m[(r, c)].re, m[(r, c)].im))
            .collect();
        let _ = writeln!(out, "{indent}[{}]", row.join(", "));
    }
    out
}

/// Conditions the process on the effect and renders the full report; shared
/// by `quantum-condition` and the cross-engine example path.
pub fn condition_report(
    command: &str,
    seed: u64,
    probes: usize,
    a: &AlgebraShape,
    b: &AlgebraShape,
    f: &PUMap,
    e: &Effect,
) -> Result<Report, CliError> {
    let result: QConditioningResult = condition_param(a, f, e).map_err(map_cstar_error)?;
    let residual = result
        .triangle_residual(probes, seed)
        .map_err(CliError::malformed)?;
    let gap = result.reconstruction_gap().map_err(CliError::malformed)?;
    let spectrum = result
        .marginal
        .element()
        .hermitian_eigenvalues()
        .map_err(CliError::malformed)?;

    let mut text = String::from("engine: operator (complex floats)\n");
    let _ = writeln!(text, "algebra A: {a}, register B: {b}");
    let spectrum_text: Vec<String> = spectrum
        .iter()
        .map(|block| {
            let entries: Vec<String> = block.iter().map(|&l| fmt_f64(l)).collect();
            format!("[{}]", entries.join(", "))
        })
        .collect();
    let _ = writeln!(
        text,
        "marginal effect spectrum (per block, ascending): {}",
        spectrum_text.join(" ")
    );
    text.push_str("conditioned map given the effect holds (rows = output basis of A):\n");
    text.push_str(&matrix_text(&result.cond_true, "  "));
    text.push_str("conditioned map given the effect fails:\n");
    text.push_str(&matrix_text(&result.cond_false, "  "));
    let _ = writeln!(
        text,
        "triangle residual ({probes} probes, seed {seed}): {}",
        fmt_f64(residual)
    );
    let _ = writeln!(text, "reconstruction gap: {}", fmt_f64(gap));

    let body = json!({
        "engine": "operator",
        "probes": probes,
        "input": { "a_shape": a, "b_shape": b, "f": f, "e": e.element() },
        "result": {
            "marginal": e_marginal_json(&result),
            "marginal_spectrum": spectrum,
            "cond_true": result.cond_true,
            "cond_false": result.cond_false,
            "joint": result.joint,
            "triangle_residual": residual,
            "reconstruction_gap": gap,
        },
    });
    Ok(report::success(command, seed, body, &text))
}

fn e_marginal_json(result: &QConditioningResult) -> serde_json::Value {
    serde_json::to_value(result.marginal.element()).expect("elements serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A qubit process with a gentle effect: everything invertible.
    fn qubit_fixture() -> (AlgebraShape, AlgebraShape, PUMap, Effect) {
        let a = AlgebraShape::new([1, 1]).unwrap();
        let b = AlgebraShape::new([2]).unwrap();
        // f: M₂ → ℂ² by two states: normalized trace and the |0⟩⟨0| pinch
        // mixed with the maximally mixed state.
        let rows = vec![
            vec![[0.5, 0.0], [0.0, 0.0], [0.0, 0.0], [0.5, 0.0]],
            vec![[0.75, 0.0], [0.0, 0.0], [0.0, 0.0], [0.25, 0.0]],
        ];
        let f = PUMap::new(b.clone(), a.center(), matrix_from_rows(&rows).unwrap()).unwrap();
        // A diagonal effect on A ⊗ B = M₂ ⊕ M₂ with spectrum in [0.3, 0.7].
        let ab = a.tensor(&b);
        let blocks = [[0.3, 0.6], [0.4, 0.7]]
            .iter()
            .map(|diag| {
                DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                    2,
                    diag.iter().map(|&d| C::new(d, 0.0)),
                ))
            })
            .collect();
        let e = AlgebraElement::from_blocks(ab, blocks).unwrap();
        (a, b, f, Effect::new(e).unwrap())
    }

    #[test]
    fn report_carries_spectrum_maps_and_residual() {
        let (a, b, f, e) = qubit_fixture();
        let report = condition_report("quantum-condition", 7, 5, &a, &b, &f, &e).unwrap();
        assert_eq!(report.json["engine"], "operator");
        assert_eq!(report.json["probes"], 5);
        let residual = report.json["result"]["triangle_residual"].as_f64().unwrap();
        assert!(residual < 1e-8, "residual {residual}");
        assert!(report.json["result"]["marginal_spectrum"].is_array());
        assert!(report.text.contains("triangle residual (5 probes, seed 7)"));
    }

    #[test]
    fn zero_effect_reports_marginal_not_invertible() {
        let (a, b, f, _) = qubit_fixture();
        let e = Effect::zero(&a.tensor(&b));
        let err = condition_report("quantum-condition", 0, 5, &a, &b, &f, &e).unwrap_err();
        match err {
            CliError::Validation { name, .. } => assert_eq!(name, "MarginalNotInvertible"),
            other => panic!("expected validation failure, got {other:?}"),
        }
    }
}
