//! Report assembly: one JSON document and one plain-text rendering per run,
//! both deterministic for a fixed (input, seed, format) triple.

use serde_json::{Map, Value};

/// How far a command got, and what the caller should do with it.
#[derive(Debug)]
pub enum CliError {
    /// The input could not be understood at all (missing file, bad JSON,
    /// schema violation, inconsistent shapes).  Exit code 1, message on
    /// stderr, no report.
    Malformed(String),
    /// The input parsed but fails a domain validity check.  Exit code 2,
    /// with the error name embedded in an ordinary report.
    Validation {
        name: &'static str,
        message: String,
    },
}

impl CliError {
    /// Wraps any displayable parse/shape problem as malformed input.
    pub fn malformed(err: impl std::fmt::Display) -> Self {
        CliError::Malformed(err.to_string())
    }
}

/// A finished report in both output formats.
#[derive(Debug)]
pub struct Report {
    /// The JSON document, with every float already rounded to 12
    /// significant digits.
    pub json: Value,
    /// The human-readable rendering of the same content.
    pub text: String,
}

/// Rounds to 12 significant decimal digits: the printed form is shorter and
/// diffs are stable, while staying far inside every tolerance the library
/// enforces.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Formats a float for the text report: 12 significant digits, scientific
/// notation only when plain decimal would be unreadable.
pub fn fmt_f64(x: f64) -> String {
    let r = round_sig(x);
    if r != 0.0 && (r.abs() < 1e-4 || r.abs() >= 1e15) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

/// Formats a complex `[re, im]` entry for the text report.
pub fn fmt_complex(re: f64, im: f64) -> String {
    let (re, im) = (round_sig(re), round_sig(im));
    if im == 0.0 {
        fmt_f64(re)
    } else if re == 0.0 {
        format!("{}i", fmt_f64(im))
    } else if im < 0.0 {
        format!("{}-{}i", fmt_f64(re), fmt_f64(-im))
    } else {
        format!("{}+{}i", fmt_f64(re), fmt_f64(im))
    }
}

/// Rounds every float in a JSON tree to 12 significant digits, in place.
fn round_floats(value: &mut Value) {
    match value {
        Value::Number(n) => {
            if n.is_f64() {
                if let Some(rounded) = n.as_f64().map(round_sig).and_then(serde_json::Number::from_f64) {
                    *value = Value::Number(rounded);
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn header_fields(command: &str, seed: u64, status: &str) -> Map<String, Value> {
    let mut map = Map::new();
    map.insert(
        "library_version".to_owned(),
        Value::String(condprob::VERSION.to_owned()),
    );
    map.insert(
        "vectorization_convention".to_owned(),
        Value::String(condprob::cstar::VEC_CONVENTION.to_owned()),
    );
    map.insert("command".to_owned(), Value::String(command.to_owned()));
    map.insert("seed".to_owned(), Value::Number(seed.into()));
    map.insert("status".to_owned(), Value::String(status.to_owned()));
    map
}

fn header_text(command: &str, seed: u64, status: &str) -> String {
    format!(
        "condprob {} (convention {})\ncommand: {}\nseed: {}\nstatus: {}\n",
        condprob::VERSION,
        condprob::cstar::VEC_CONVENTION,
        command,
        seed,
        status
    )
}

/// Assembles a successful report: shared header fields, then the
/// command-specific `body` entries, floats rounded throughout.
pub fn success(command: &str, seed: u64, body: Value, text_body: &str) -> Report {
    let mut fields = header_fields(command, seed, "ok");
    if let Value::Object(entries) = body {
        for (k, v) in entries {
            fields.insert(k, v);
        }
    }
    let mut json = Value::Object(fields);
    round_floats(&mut json);
    Report {
        json,
        text: format!("{}{}", header_text(command, seed, "ok"), text_body),
    }
}

/// Assembles the exit-code-2 report for a domain validation failure, naming
/// the error.
pub fn validation_failure(command: &str, seed: u64, name: &str, message: &str) -> Report {
    let mut fields = header_fields(command, seed, "error");
    fields.insert("error".to_owned(), Value::String(name.to_owned()));
    fields.insert("message".to_owned(), Value::String(message.to_owned()));
    Report {
        json: Value::Object(fields),
        text: format!(
            "{}error: {}\nmessage: {}\n",
            header_text(command, seed, "error"),
            name,
            message
        ),
    }
}
