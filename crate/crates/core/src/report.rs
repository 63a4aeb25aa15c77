//! Verification reports.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::scalars::{ParamPoint, ParamScalar};
use crate::superspace::{SuperElement, UVPolynomial};
use crate::superweyl::OperatorElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass => write!(f, "pass"),
            Status::Fail => write!(f, "fail"),
        }
    }
}

/// How the parameters were treated while checking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamMode {
    Symbolic,
    Evaluated(ParamPoint),
}

impl fmt::Display for ParamMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamMode::Symbolic => write!(f, "symbolic"),
            ParamMode::Evaluated(p) => write!(f, "evaluated(nu1={},nu2={},nu3={})", p[0], p[1], p[2]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub id: String,
    /// The identity being checked, written out.
    pub anchor: String,
    pub status: Status,
    /// Nonempty whenever `status` is `Fail`.
    pub residual: String,
    pub residual_terms: usize,
    pub elapsed: Duration,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub suite: String,
    pub mode: ParamMode,
    pub checks: Vec<CheckOutcome>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, mode: ParamMode) -> Self {
        Self {
            suite: suite.into(),
            mode,
            checks: Vec::new(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Appends the checks of another report, keeping ids unique by prefixing
    /// with that report's suite name.
    pub fn absorb(&mut self, other: VerificationReport) {
        for mut c in other.checks {
            c.id = format!("{}/{}", other.suite, c.id);
            self.checks.push(c);
        }
        self.sort();
    }

    pub fn sort(&mut self) {
        self.checks.sort_by(|a, b| a.id.cmp(&b.id));
    }
}

/// Something whose vanishing means a check passed.
pub trait Residual {
    fn term_count(&self) -> usize;
    fn summary(&self) -> String;
}

const SUMMARY_LIMIT: usize = 400;

fn truncate(s: String) -> String {
    if s.len() <= SUMMARY_LIMIT {
        s
    } else {
        let mut end = SUMMARY_LIMIT;
        while !s.is_char_boundary(end) {
            end -= 1;
        }
        format!("{} ...", &s[..end])
    }
}

macro_rules! residual_impl {
    ($($t:ty),*) => {$(
        impl Residual for $t {
            fn term_count(&self) -> usize { self.term_count() }
            fn summary(&self) -> String { truncate(self.to_string()) }
        }
    )*};
}

residual_impl!(OperatorElement, SuperElement, UVPolynomial);

impl Residual for ParamScalar {
    fn term_count(&self) -> usize {
        if self.is_zero() {
            0
        } else {
            self.size()
        }
    }
    fn summary(&self) -> String {
        truncate(self.to_string())
    }
}

/// Residual of a check that cannot be phrased as one algebraic difference.
#[derive(Debug, Clone, Default)]
pub struct Mismatches(pub Vec<String>);

impl Mismatches {
    pub fn push(&mut self, s: impl Into<String>) {
        self.0.push(s.into());
    }

    pub fn merge<R: Residual>(&mut self, label: &str, r: &R) {
        if r.term_count() > 0 {
            self.0.push(format!("{label}: {}", r.summary()));
        }
    }
}

impl Residual for Mismatches {
    fn term_count(&self) -> usize {
        self.0.len()
    }
    fn summary(&self) -> String {
        truncate(self.0.join("; "))
    }
}

/// A check to be run: id, anchor and a closure computing the residual.
pub struct PendingCheck<'a> {
    pub id: String,
    pub anchor: String,
    run: Box<dyn Fn() -> Result<Box<dyn Residual>, String> + Send + Sync + 'a>,
}

impl<'a> PendingCheck<'a> {
    pub fn new<R, F>(id: impl Into<String>, anchor: impl Into<String>, f: F) -> Self
    where
        R: Residual + 'static,
        F: Fn() -> R + Send + Sync + 'a,
    {
        Self {
            id: id.into(),
            anchor: anchor.into(),
            run: Box::new(move || Ok(Box::new(f()) as Box<dyn Residual>)),
        }
    }

    /// A check whose computation may fail outright; errors become failures.
    pub fn fallible<R, E, F>(id: impl Into<String>, anchor: impl Into<String>, f: F) -> Self
    where
        R: Residual + 'static,
        E: fmt::Display,
        F: Fn() -> Result<R, E> + Send + Sync + 'a,
    {
        Self {
            id: id.into(),
            anchor: anchor.into(),
            run: Box::new(move || {
                f().map(|r| Box::new(r) as Box<dyn Residual>)
                    .map_err(|e| e.to_string())
            }),
        }
    }

    fn execute(self) -> CheckOutcome {
        let start = Instant::now();
        let result = (self.run)();
        let elapsed = start.elapsed();
        let (status, residual, residual_terms) = match result {
            Ok(r) if r.term_count() == 0 => (Status::Pass, String::new(), 0),
            Ok(r) => {
                let mut s = r.summary();
                if s.is_empty() {
                    s = "nonzero residual".into();
                }
                (Status::Fail, s, r.term_count())
            }
            Err(e) => (Status::Fail, format!("error: {e}"), 1),
        };
        CheckOutcome {
            id: self.id,
            anchor: self.anchor,
            status,
            residual,
            residual_terms,
            elapsed,
        }
    }
}

/// Runs independent checks on the rayon pool; the report is sorted by id.
pub fn run_checks(suite: &str, mode: ParamMode, checks: Vec<PendingCheck<'_>>) -> VerificationReport {
    let mut seen = std::collections::HashSet::new();
    for c in &checks {
        assert!(seen.insert(c.id.clone()), "duplicate check id {}", c.id);
    }
    let outcomes: Vec<CheckOutcome> = checks.into_par_iter().map(PendingCheck::execute).collect();
    let mut report = VerificationReport {
        suite: suite.to_string(),
        mode,
        checks: outcomes,
    };
    report.sort();
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failures_carry_residuals_and_order_is_stable() {
        let checks = vec![
            PendingCheck::new("b", "x = x", OperatorElement::zero),
            PendingCheck::new("a", "1 = 0", OperatorElement::identity),
            PendingCheck::fallible("c", "err", || Err::<OperatorElement, _>("boom")),
        ];
        let r = run_checks("t", ParamMode::Symbolic, checks);
        let ids: Vec<_> = r.checks.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, ["a", "b", "c"]);
        assert!(!r.all_passed());
        assert_eq!(r.failures().count(), 2);
        assert!(r.failures().all(|c| !c.residual.is_empty()));
        assert_eq!(r.get("a").unwrap().residual, "(1)");
    }
}
