//! Command-line front-end: argument parsing, input loading, the verbs, and
//! the JSON report they all write.

pub mod args;
pub mod commands;
pub mod inputs;
pub mod report;

use std::fmt;

use anyhow::Result;
use serde_json::json;

use args::{Cli, Command, ToricCmd, TransversalCmd};
use report::{Outcome, Report};

/// A malformed request, as opposed to a failure while running it.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Exit status when every check passed.
pub const EXIT_PASS: u8 = 0;
/// Exit status when a check or expectation failed.
pub const EXIT_FAIL: u8 = 1;
/// Exit status for usage errors (also clap's).
pub const EXIT_USAGE: u8 = 2;
/// Exit status when the computation itself failed.
pub const EXIT_ERROR: u8 = 3;

/// Runs the parsed command and returns its report and summary lines.
pub fn run(cli: &Cli) -> Result<(Report, Vec<String>)> {
    use commands::*;
    let c = &cli.common;
    let (name, params, outcome): (&str, serde_json::Value, Outcome) = match &cli.command {
        Command::Distance { code, max_weight } => (
            "distance",
            json!({"code": code, "max_weight": max_weight}),
            cmd_distance(c, code, *max_weight as usize)?,
        ),
        Command::Correctable { code, errors } => (
            "correctable",
            json!({"code": code, "errors": errors}),
            cmd_correctable(c, code, errors)?,
        ),
        Command::Transversal { sub } => match sub {
            TransversalCmd::LieDim { code, cutoff } => (
                "transversal lie-dim",
                json!({"code": code, "cutoff": cutoff}),
                cmd_lie_dim(c, code, *cutoff)?,
            ),
            TransversalCmd::TrivialAction { code, samples } => (
                "transversal trivial-action",
                json!({"code": code, "samples": samples}),
                cmd_trivial_action(c, code, *samples)?,
            ),
            TransversalCmd::Holonomy { code, gate } => (
                "transversal holonomy",
                json!({"code": code, "gate": gate}),
                cmd_holonomy(c, code, gate)?,
            ),
            TransversalCmd::Flatness { code, trials } => (
                "transversal flatness",
                json!({"code": code, "trials": trials}),
                cmd_transversal_flatness(c, code, *trials)?,
            ),
        },
        Command::Toric { sub } => match sub {
            ToricCmd::Build { toric } => ("toric build", json!({"toric": toric}), cmd_toric_build(c, toric)?),
            ToricCmd::Braid { toric, routing } => (
                "toric braid",
                json!({"toric": toric, "routing": routing}),
                cmd_toric_braid(c, toric, *routing)?,
            ),
            ToricCmd::Flatness {
                toric,
                trials,
                word_len,
            } => (
                "toric flatness",
                json!({"toric": toric, "trials": trials, "word_len": word_len}),
                cmd_toric_flatness(c, toric, *trials, *word_len)?,
            ),
            ToricCmd::FaceChecks { toric } => (
                "toric face-checks",
                json!({"toric": toric}),
                cmd_face_checks(c, toric)?,
            ),
        },
        Command::ReportMerge { inputs } => (
            "report-merge",
            json!({"inputs": inputs}),
            cmd_report_merge(c, inputs)?,
        ),
    };
    let report = Report::new(name, config_value(c, params), &outcome);
    let mut summary = outcome.summary;
    for check in report.checks.iter().filter(|c| !c.passed) {
        summary.push(format!("failed: {} ({})", check.name, check.value));
    }
    summary.push(format!("{} {name}", if report.passed { "PASS" } else { "FAIL" }));
    Ok((report, summary))
}
