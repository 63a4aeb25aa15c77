//! Report rendering.

use std::fmt::Write;

use serde::Serialize;

use superbi_core::VerificationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// One line of the structured format.
#[derive(Debug, Serialize)]
pub struct Record<'a> {
    pub suite: &'a str,
    pub check_id: &'a str,
    pub anchor: &'a str,
    pub status: String,
    pub residual_terms: usize,
    pub micros: u128,
}

pub fn records(report: &VerificationReport) -> impl Iterator<Item = Record<'_>> {
    report.checks.iter().map(|c| Record {
        suite: &report.suite,
        check_id: &c.id,
        anchor: &c.anchor,
        status: c.status.to_string(),
        residual_terms: c.residual_terms,
        micros: c.elapsed.as_micros(),
    })
}

/// One JSON object per check, newline separated.
pub fn render_json(report: &VerificationReport) -> String {
    records(report)
        .map(|r| serde_json::to_string(&r).expect("records serialize") + "\n")
        .collect()
}

pub fn render_text(report: &VerificationReport) -> String {
    let mut out = String::new();
    let passed = report.checks.iter().filter(|c| c.passed()).count();
    writeln!(
        out,
        "suite {} [{}]: {passed}/{} checks passed",
        report.suite,
        report.mode,
        report.len()
    )
    .unwrap();
    for c in &report.checks {
        let tag = if c.passed() { "PASS" } else { "FAIL" };
        writeln!(out, "  {tag} {} ({} us)", c.id, c.elapsed.as_micros()).unwrap();
        if !c.passed() {
            writeln!(out, "       identity: {}", c.anchor).unwrap();
            writeln!(out, "       residual ({} terms): {}", c.residual_terms, c.residual).unwrap();
        }
    }
    out
}

pub fn render(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Text => render_text(report),
        Format::Json => render_json(report),
    }
}
