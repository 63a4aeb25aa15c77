//! Named verification suites.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use superbi_core::eigen::{verify_eigenbasis, verify_odd_invariants, Subspace};
use superbi_core::jacobi::verify_jacobi_identities;
use superbi_core::kernel::{check_action_identities, kernel_decompose, total_lowering, KernelComponents};
use superbi_core::osp::{check_bannai_ito, check_centrality, check_fundamental_relations};
use superbi_core::report::{run_checks, Mismatches, PendingCheck};
use superbi_core::scalars::ParamPoint;
use superbi_core::tridiagonal::verify_tridiagonal;
use superbi_core::{
    Model, NormalWord, OperatorElement, ParamScalar, SuperElement, SuperMonomial, ThetaSet,
    UVPolynomial, VerificationReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum SuiteName {
    Osp,
    Centrality,
    BannaiIto,
    Kernel,
    Actions,
    Eigen,
    Tridiag,
    Jacobi,
    Oracle,
    All,
}

impl SuiteName {
    /// Every suite that `all` runs, in order.
    pub const EACH: [SuiteName; 9] = [
        SuiteName::Osp,
        SuiteName::Centrality,
        SuiteName::BannaiIto,
        SuiteName::Kernel,
        SuiteName::Actions,
        SuiteName::Eigen,
        SuiteName::Tridiag,
        SuiteName::Jacobi,
        SuiteName::Oracle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Osp => "osp",
            SuiteName::Centrality => "centrality",
            SuiteName::BannaiIto => "bannai-ito",
            SuiteName::Kernel => "kernel",
            SuiteName::Actions => "actions",
            SuiteName::Eigen => "eigen",
            SuiteName::Tridiag => "tridiag",
            SuiteName::Jacobi => "jacobi",
            SuiteName::Oracle => "oracle",
            SuiteName::All => "all",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const MAX_DEGREE_LIMIT: u32 = 12;
pub const MAX_N_LIMIT: u32 = 8;
/// Degree cap for the random kernel round trips.
pub const KERNEL_DEGREE: u32 = 6;

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    /// Monomial degree bound for `actions`.
    pub max_degree: u32,
    /// Block bound for `eigen` and `tridiag`, and the Jacobi degree bound.
    pub max_n: u32,
    pub subspaces: Vec<Subspace>,
    pub params: Option<ParamPoint>,
    pub seed: u64,
    /// Number of random cases for `kernel` and `oracle`.
    pub samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            max_degree: 8,
            max_n: 5,
            subspaces: Subspace::ALL.to_vec(),
            params: None,
            seed: 0x5eed,
            samples: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OptionsError {
    #[error("max degree {0} exceeds the limit {MAX_DEGREE_LIMIT}")]
    MaxDegree(u32),
    #[error("max N {0} exceeds the limit {MAX_N_LIMIT}")]
    MaxN(u32),
    #[error("no subspace selected")]
    NoSubspace,
}

impl SuiteOptions {
    pub fn validate(&self) -> Result<(), OptionsError> {
        if self.max_degree > MAX_DEGREE_LIMIT {
            return Err(OptionsError::MaxDegree(self.max_degree));
        }
        if self.max_n > MAX_N_LIMIT {
            return Err(OptionsError::MaxN(self.max_n));
        }
        if self.subspaces.is_empty() {
            return Err(OptionsError::NoSubspace);
        }
        Ok(())
    }

    pub fn model(&self) -> Model {
        match &self.params {
            Some(p) => Model::evaluated(p.clone()),
            None => Model::symbolic(),
        }
    }
}

/// Runs one suite. `all` runs every suite and merges the reports, prefixing
/// check ids with the suite they came from.
pub fn run_suite(name: SuiteName, options: &SuiteOptions) -> Result<VerificationReport, OptionsError> {
    options.validate()?;
    let model = options.model();
    Ok(run_with(name, options, &model))
}

fn run_with(name: SuiteName, options: &SuiteOptions, model: &Model) -> VerificationReport {
    let mut report = match name {
        SuiteName::Osp => check_fundamental_relations(model),
        SuiteName::Centrality => check_centrality(model),
        SuiteName::BannaiIto => check_bannai_ito(model),
        SuiteName::Kernel => kernel_round_trips(model, options),
        SuiteName::Actions => check_action_identities(model, options.max_degree),
        SuiteName::Eigen => {
            let mut r = verify_eigenbasis(model, &options.subspaces, options.max_n);
            if options.subspaces.contains(&Subspace::Odd) {
                let invariants = verify_odd_invariants(model, options.max_n);
                r.checks.extend(invariants.checks.into_iter().map(|mut c| {
                    c.id = format!("invariants/{}", c.id);
                    c
                }));
                r.sort();
            }
            r
        }
        SuiteName::Tridiag => verify_tridiagonal(model, &options.subspaces, options.max_n),
        SuiteName::Jacobi => verify_jacobi_identities(model, options.max_n),
        SuiteName::Oracle => oracle_pairs(model, options),
        SuiteName::All => {
            let mut all = VerificationReport::new("all", model.mode().clone());
            for each in SuiteName::EACH {
                all.absorb(run_with(each, options, model));
            }
            return all;
        }
    };
    report.suite = name.as_str().to_string();
    report
}

/// A random coefficient: a small nonzero integer, or occasionally a parameter.
fn coefficient(rng: &mut ChaCha8Rng, model: &Model) -> ParamScalar {
    if rng.gen_bool(0.2) {
        model.nu(rng.gen_range(1..=3))
    } else {
        let c = rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 };
        ParamScalar::from_int(c)
    }
}

fn uv_polynomial(rng: &mut ChaCha8Rng, model: &Model, max_degree: u32) -> UVPolynomial {
    let mut p = UVPolynomial::zero();
    for _ in 0..rng.gen_range(0..=5) {
        let d = rng.gen_range(0..=max_degree);
        let i = rng.gen_range(0..=d);
        p.add_term(i, d - i, coefficient(rng, model));
    }
    p
}

fn super_element(rng: &mut ChaCha8Rng, model: &Model, max_degree: u32) -> SuperElement {
    let mut f = SuperElement::zero();
    for _ in 0..rng.gen_range(1..=4) {
        let mut x = [0; 3];
        for _ in 0..rng.gen_range(0..=max_degree) {
            x[rng.gen_range(0..3)] += 1;
        }
        let m = SuperMonomial::new(x, ThetaSet::from_bits(rng.gen_range(0..8)));
        f.add_term(m, coefficient(rng, model));
    }
    f
}

fn operator(rng: &mut ChaCha8Rng, model: &Model) -> OperatorElement {
    let mut op = OperatorElement::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let mut w = NormalWord::IDENTITY;
        for v in 0..3 {
            w.xexp[v] = rng.gen_range(0..=2);
            w.dxexp[v] = rng.gen_range(0..=2);
        }
        w.theta = ThetaSet::from_bits(rng.gen_range(0..8));
        w.dtheta = ThetaSet::from_bits(rng.gen_range(0..8));
        op.add_term(w, coefficient(rng, model));
    }
    op
}

fn kernel_round_trips(model: &Model, options: &SuiteOptions) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let degree = options.max_degree.min(KERNEL_DEGREE);
    let lowering = total_lowering();
    let lowering = match &options.params {
        Some(p) => lowering.specialize(p).expect("lowering operator is parameter-free"),
        None => lowering,
    };
    let checks = (0..options.samples)
        .map(|i| {
            let comps = KernelComponents {
                h1: uv_polynomial(&mut rng, model, degree),
                h2: uv_polynomial(&mut rng, model, degree),
                g1: uv_polynomial(&mut rng, model, degree),
                g2: uv_polynomial(&mut rng, model, degree),
            };
            let lowering = lowering.clone();
            PendingCheck::new(
                format!("roundtrip/{i:04}"),
                "A-(123) F = 0 and F = O1(h1) + O2(h2) + E1(g1) + E2(g2) decomposes back",
                move || {
                    let f = comps.assemble();
                    let mut m = Mismatches::default();
                    m.merge("A-(123) F", &lowering.apply(&f));
                    match kernel_decompose(&f) {
                        Ok(back) if back == comps => {}
                        Ok(back) => m.push(format!("decomposed to {back:?}, expected {comps:?}")),
                        Err(e) => m.push(e.to_string()),
                    }
                    m
                },
            )
        })
        .collect();
    run_checks("kernel", model.mode().clone(), checks)
}

fn oracle_pairs(model: &Model, options: &SuiteOptions) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed ^ 0x0a11_ce5e);
    let checks = (0..options.samples)
        .map(|i| {
            let a = operator(&mut rng, model);
            let b = operator(&mut rng, model);
            let f = super_element(&mut rng, model, 4);
            PendingCheck::new(
                format!("pair/{i:04}"),
                "(a b) f = a (b f) with a b normal ordered",
                move || &a.compose(&b).apply(&f) - &a.apply(&b.apply(&f)),
            )
        })
        .collect();
    run_checks("oracle", model.mode().clone(), checks)
}
