use std::time::Instant;

use superbi_core::eigen::{verify_eigenbasis, verify_odd_invariants, Subspace};
use superbi_core::jacobi::verify_jacobi_identities;
use superbi_core::osp::{check_bannai_ito, check_centrality, check_fundamental_relations};
use superbi_core::tridiagonal::verify_tridiagonal;
use superbi_core::{Model, VerificationReport};

fn assert_passes(report: &VerificationReport) {
    for c in report.failures() {
        eprintln!("{}/{} [{}]: {}", report.suite, c.id, c.anchor, c.residual);
    }
    assert!(report.all_passed(), "{} has failures", report.suite);
}

fn timed(name: &str, f: impl FnOnce() -> VerificationReport) -> VerificationReport {
    let start = Instant::now();
    let r = f();
    eprintln!("{name}: {} checks in {:?}", r.len(), start.elapsed());
    r
}

#[test]
fn fundamental_relations() {
    let m = Model::symbolic();
    let r = timed("osp", || check_fundamental_relations(&m));
    assert_eq!(r.len(), 51);
    assert_passes(&r);
}

#[test]
fn casimirs_are_central() {
    let m = Model::symbolic();
    assert_passes(&timed("centrality", || check_centrality(&m)));
}

#[test]
fn bannai_ito_relations() {
    let m = Model::symbolic();
    let r = timed("bannai-ito", || check_bannai_ito(&m));
    assert_eq!(r.len(), 4);
    assert_passes(&r);
}

#[test]
fn eigenbasis_up_to_six() {
    let m = Model::symbolic();
    assert_passes(&timed("eigen", || verify_eigenbasis(&m, &Subspace::ALL, 6)));
}

#[test]
fn odd_invariants_up_to_five() {
    let m = Model::symbolic();
    assert_passes(&timed("odd invariants", || verify_odd_invariants(&m, 5)));
}

#[test]
fn tridiagonal_up_to_five() {
    let m = Model::symbolic();
    assert_passes(&timed("tridiag", || verify_tridiagonal(&m, &Subspace::ALL, 5)));
}

#[test]
fn jacobi_up_to_six() {
    let m = Model::symbolic();
    assert_passes(&timed("jacobi", || verify_jacobi_identities(&m, 6)));
}
