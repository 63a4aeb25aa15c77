//! Acceptance criteria. Each criterion prints one PASS or FAIL line; every
//! check is exact, so a criterion passes only when all residuals are zero.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use superbi_cli::{run_suite, SuiteName, SuiteOptions};
use superbi_core::eigen::Subspace;
use superbi_core::scalars::{rat, ParamPoint};
use superbi_core::VerificationReport;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn run(name: SuiteName, options: &SuiteOptions) -> (VerificationReport, Duration) {
    let start = Instant::now();
    let report = run_suite(name, options).expect("valid options");
    (report, start.elapsed())
}

fn summarize(report: &VerificationReport) -> String {
    let failures: Vec<String> = report
        .failures()
        .take(3)
        .map(|c| format!("{}: {}", c.id, c.residual))
        .collect();
    if failures.is_empty() {
        format!("{} checks, all residuals zero", report.len())
    } else {
        format!(
            "{} of {} checks failed, e.g. {}",
            report.failures().count(),
            report.len(),
            failures.join(" | ")
        )
    }
}

fn options(max_degree: u32, max_n: u32, samples: usize) -> SuiteOptions {
    SuiteOptions {
        max_degree,
        max_n,
        samples,
        ..SuiteOptions::default()
    }
}

fn osp_relations() -> Outcome {
    let opts = SuiteOptions::default();
    let start = Instant::now();
    let (osp, _) = run(SuiteName::Osp, &opts);
    let (central, _) = run(SuiteName::Centrality, &opts);
    let elapsed = start.elapsed();
    Outcome {
        passed: osp.all_passed() && central.all_passed() && elapsed < Duration::from_secs(5),
        detail: format!("relations: {}; centrality: {}; {elapsed:.2?}", summarize(&osp), summarize(&central)),
    }
}

fn bannai_ito() -> Outcome {
    let (report, elapsed) = run(SuiteName::BannaiIto, &SuiteOptions::default());
    Outcome {
        passed: report.all_passed() && report.len() == 4 && elapsed < Duration::from_secs(30),
        detail: format!("{} in {elapsed:.2?}", summarize(&report)),
    }
}

fn kernel_round_trips() -> Outcome {
    let (report, _) = run(SuiteName::Kernel, &options(6, 5, 64));
    Outcome {
        passed: report.all_passed() && report.len() >= 50,
        detail: format!("random quadruples of degree <= 6: {}", summarize(&report)),
    }
}

fn action_identities() -> Outcome {
    let (report, _) = run(SuiteName::Actions, &options(8, 5, 0));
    Outcome {
        passed: report.all_passed() && report.len() == 12,
        detail: format!("monomials of degree <= 8: {}", summarize(&report)),
    }
}

fn eigenbasis() -> Outcome {
    let (report, _) = run(SuiteName::Eigen, &options(8, 6, 0));
    let ranks: BTreeSet<&str> = report
        .checks
        .iter()
        .filter(|c| c.id.ends_with("/rank"))
        .map(|c| c.id.as_str())
        .collect();
    let expected_ranks = Subspace::ALL.len() * 7;
    Outcome {
        passed: report.all_passed() && ranks.len() == expected_ranks,
        detail: format!("N <= 6, {} rank checks: {}", ranks.len(), summarize(&report)),
    }
}

fn tridiagonal() -> Outcome {
    let (report, _) = run(SuiteName::Tridiag, &options(8, 5, 0));
    Outcome {
        passed: report.all_passed(),
        detail: format!("N <= 5: {}", summarize(&report)),
    }
}

fn jacobi() -> Outcome {
    let (report, _) = run(SuiteName::Jacobi, &options(8, 6, 0));
    Outcome {
        passed: report.all_passed(),
        detail: format!("k <= 6: {}", summarize(&report)),
    }
}

fn oracle() -> Outcome {
    let (report, _) = run(SuiteName::Oracle, &options(8, 5, 200));
    Outcome {
        passed: report.all_passed() && report.len() >= 200,
        detail: format!("seeded operator pairs: {}", summarize(&report)),
    }
}

/// Configurations of the symbolic criteria, rerun at bound parameters.
fn symbolic_configurations() -> Vec<(SuiteName, SuiteOptions)> {
    vec![
        (SuiteName::Osp, SuiteOptions::default()),
        (SuiteName::Centrality, SuiteOptions::default()),
        (SuiteName::BannaiIto, SuiteOptions::default()),
        (SuiteName::Kernel, options(6, 5, 64)),
        (SuiteName::Actions, options(8, 5, 0)),
        (SuiteName::Eigen, options(8, 6, 0)),
        (SuiteName::Tridiag, options(8, 5, 0)),
        (SuiteName::Jacobi, options(8, 6, 0)),
        (SuiteName::Oracle, options(8, 5, 200)),
    ]
}

fn generic_points() -> [ParamPoint; 3] {
    [
        [rat(1, 3), rat(2, 5), rat(3, 7)],
        [rat(5, 11), rat(7, 13), rat(4, 17)],
        [rat(10, 19), rat(3, 23), rat(8, 29)],
    ]
}

fn evaluated_agreement() -> Outcome {
    let mut problems = Vec::new();
    let mut total = 0;
    for (name, opts) in symbolic_configurations() {
        let (symbolic, _) = run(name, &opts);
        let symbolic_ids: Vec<&str> = symbolic.checks.iter().map(|c| c.id.as_str()).collect();
        for point in generic_points() {
            let bound = SuiteOptions {
                params: Some(point.clone()),
                ..opts.clone()
            };
            let (evaluated, _) = run(name, &bound);
            total += evaluated.len();
            let ids: Vec<&str> = evaluated.checks.iter().map(|c| c.id.as_str()).collect();
            if ids != symbolic_ids {
                problems.push(format!("{name}: check ids differ at {}", evaluated.mode));
            }
            if symbolic.all_passed() != evaluated.all_passed() || !evaluated.all_passed() {
                problems.push(format!("{name} at {}: {}", evaluated.mode, summarize(&evaluated)));
            }
        }
    }
    Outcome {
        passed: problems.is_empty(),
        detail: if problems.is_empty() {
            format!("{total} evaluated checks at 3 points agree with the symbolic runs")
        } else {
            problems.join("; ")
        },
    }
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 9] = [
        ("osp(1|2) relations", osp_relations),
        ("Bannai-Ito relations", bannai_ito),
        ("kernel round trip", kernel_round_trips),
        ("action identities", action_identities),
        ("eigenbasis", eigenbasis),
        ("tridiagonal action", tridiagonal),
        ("Jacobi identities", jacobi),
        ("oracle equivalence", oracle),
        ("evaluated cross-check", evaluated_agreement),
    ];
    let mut failed = Vec::new();
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        let outcome = criterion();
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!("{tag} [{}] {name}: {}", i + 1, outcome.detail);
        if !outcome.passed {
            failed.push(*name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

