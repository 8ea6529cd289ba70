//! Built-in worked examples, selectable by name.  Each case is a strategy
//! object so `examples <name>` can dispatch through one registry and new
//! cases only have to implement the trait.

use crate::model;
use crate::report::{fmt_f64, CliError, Report};
use crate::report;
use condprob::bomb::Scenario;
use condprob::{rat, FiniteDistribution, FiniteSet, KleisliMap, Label, Predicate};
use serde_json::json;
use std::fmt::Write as _;

/// One runnable worked example.
pub trait ExampleCase {
    /// The name used on the command line.
    fn name(&self) -> &'static str;
    /// One-line description for error messages and docs.
    fn summary(&self) -> &'static str;
    /// Produces the full report.  `command` is echoed into the report
    /// header; `seed` is recorded even when the case is deterministic.
    fn run(&self, command: &str, seed: u64) -> Result<Report, CliError>;
}

/// All built-in examples, in menu order.
pub fn registry() -> Vec<Box<dyn ExampleCase>> {
    vec![
        Box::new(HairExample),
        Box::new(CountryExample),
        Box::new(BombExample),
    ]
}

/// Looks a case up by name, or reports the available cases with their
/// one-line summaries.
pub fn find(name: &str) -> Result<Box<dyn ExampleCase>, CliError> {
    let cases = registry();
    let menu: Vec<String> = cases
        .iter()
        .map(|c| format!("{} ({})", c.name(), c.summary()))
        .collect();
    cases
        .into_iter()
        .find(|c| c.name() == name)
        .ok_or_else(|| {
            CliError::Malformed(format!(
                "unknown example `{name}`; available: {}",
                menu.join("; ")
            ))
        })
}

/// Conditioning a one-point population model on an observed trait.
struct HairExample;

impl ExampleCase for HairExample {
    fn name(&self) -> &'static str {
        "hair"
    }

    fn summary(&self) -> &'static str {
        "update a two-thirds/one-third population after observing a trait"
    }

    fn run(&self, command: &str, seed: u64) -> Result<Report, CliError> {
        let genders = FiniteSet::from_atoms(["M", "W"]).map_err(CliError::malformed)?;
        let population = KleisliMap::from_distribution(
            genders.clone(),
            FiniteDistribution::new([
                (Label::atom("M"), rat(2, 3)),
                (Label::atom("W"), rat(1, 3)),
            ])
            .map_err(CliError::malformed)?,
        )
        .map_err(CliError::malformed)?;
        let trait_likelihood = Predicate::new(
            genders,
            [
                (Label::atom("M"), rat(3, 10)),
                (Label::atom("W"), rat(8, 10)),
            ],
        )
        .map_err(CliError::malformed)?;
        let predicate = Predicate::on_second(population.source(), &trait_likelihood);
        model::binary_report(command, seed, &population, &predicate)
    }
}

/// Conditioning a two-country gender model on country-dependent likelihoods.
struct CountryExample;

/// The two-country model and its tensored predicate, shared with the
/// integration tests.
pub fn country_model() -> (KleisliMap, Predicate) {
    let countries = FiniteSet::from_atoms(["A", "B"]).expect("valid atoms");
    let genders = FiniteSet::from_atoms(["M", "W"]).expect("valid atoms");
    let model = KleisliMap::new(
        countries.clone(),
        genders.clone(),
        [
            (
                Label::atom("A"),
                FiniteDistribution::new([
                    (Label::atom("M"), rat(9, 20)),
                    (Label::atom("W"), rat(11, 20)),
                ])
                .expect("normalized"),
            ),
            (
                Label::atom("B"),
                FiniteDistribution::new([
                    (Label::atom("M"), rat(1, 2)),
                    (Label::atom("W"), rat(1, 2)),
                ])
                .expect("normalized"),
            ),
        ],
    )
    .expect("total row table");
    let pair = |x: &str, y: &str| Label::pair(Label::atom(x), Label::atom(y));
    let predicate = Predicate::new(
        countries.tensor(&genders),
        [
            (pair("A", "M"), rat(1, 10)),
            (pair("A", "W"), rat(8, 10)),
            (pair("B", "M"), rat(2, 10)),
            (pair("B", "W"), rat(9, 10)),
        ],
    )
    .expect("values in [0, 1]");
    (model, predicate)
}

impl ExampleCase for CountryExample {
    fn name(&self) -> &'static str {
        "country"
    }

    fn summary(&self) -> &'static str {
        "update a two-country gender model on country-dependent likelihoods"
    }

    fn run(&self, command: &str, seed: u64) -> Result<Report, CliError> {
        let (model, predicate) = country_model();
        model::binary_report(command, seed, &model, &predicate)
    }
}

/// The interaction-free bomb tester.
struct BombExample;

impl ExampleCase for BombExample {
    fn name(&self) -> &'static str {
        "bomb"
    }

    fn summary(&self) -> &'static str {
        "interaction-free bomb tester: detect a live bomb without setting it off"
    }

    fn run(&self, command: &str, seed: u64) -> Result<Report, CliError> {
        bomb_report(command, seed)
    }
}

/// Runs the interferometer and renders its report; also the body of the
/// top-level `bomb` subcommand.
pub fn bomb_report(command: &str, seed: u64) -> Result<Report, CliError> {
    let scenario = Scenario::new().map_err(CliError::malformed)?;
    let outcome = scenario.run().map_err(CliError::malformed)?;

    let mut text = String::from("engine: interferometer (operator states)\n");
    let _ = writeln!(
        text,
        "detection probability (up detector, register intact): {}",
        fmt_f64(outcome.detection_probability)
    );
    let _ = writeln!(
        text,
        "dud given detection: {}",
        fmt_f64(outcome.dud_given_detection)
    );
    let _ = writeln!(
        text,
        "live given detection: {}",
        fmt_f64(outcome.live_given_detection)
    );
    let _ = writeln!(
        text,
        "empty-interferometer round trip defect: {}",
        fmt_f64(outcome.round_trip_defect)
    );
    text.push_str("stage outcomes (detected-up / exited-right / exploded / vanished):\n");
    for stage in &outcome.stages {
        let _ = writeln!(
            text,
            "  {}: {} / {} / {} / {}",
            stage.stage,
            fmt_f64(stage.detected_up),
            fmt_f64(stage.exited_right),
            fmt_f64(stage.exploded),
            fmt_f64(stage.vanished)
        );
    }

    let body = json!({
        "engine": "interferometer",
        "result": outcome,
    });
    Ok(report::success(command, seed, body, &text))
}
