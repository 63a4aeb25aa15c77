//! Joint eigenvectors of `Q(123)` and `Q(12)` in the kernel of `A-(123)`.
//!
//! For each degree `N` the odd kernel elements of degree `N` are spanned by
//! `f±(k,N) = O1(h) + O2(g±)`, `0 <= k <= N`, and the even ones by
//! `f±(k,N) = E1(h±) + E2(g)`, with `k < N` for the even minus family. All
//! polynomial pieces are homogenized Jacobi polynomials `u^N P_k(1 + 2v/u)`.

use std::fmt;

use thiserror::Error;

use crate::jacobi::{eigen_jacobi_params, jacobi};
use crate::kernel::{embed, kernel_decompose, total_lowering, EmbeddingKind, KernelComponents};
use crate::linalg::Matrix;
use crate::osp::{Model, SubsetLabel};
use crate::report::{run_checks, Mismatches, PendingCheck, VerificationReport};
use crate::scalars::{int, ParamScalar};
use crate::superspace::{Parity, SuperElement, UVPolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subspace {
    Odd,
    Even,
}

impl Subspace {
    pub const ALL: [Subspace; 2] = [Subspace::Odd, Subspace::Even];

    pub fn parity(self) -> Parity {
        match self {
            Subspace::Odd => Parity::Odd,
            Subspace::Even => Parity::Even,
        }
    }

    /// Number of basis vectors of degree `n`.
    pub fn dimension(self, n: u32) -> usize {
        match self {
            Subspace::Odd => 2 * (n as usize + 1),
            Subspace::Even => 2 * n as usize + 1,
        }
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subspace::Odd => "odd",
            Subspace::Even => "even",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_int(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EigenError {
    #[error("invalid eigenvector label {subspace} {sign} k={k} N={n}")]
    InvalidLabel {
        subspace: Subspace,
        sign: Sign,
        k: u32,
        n: u32,
    },
}

/// Index of `f±(k,N)` in the odd or even family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EigenLabel {
    subspace: Subspace,
    sign: Sign,
    k: u32,
    n: u32,
}

impl EigenLabel {
    pub fn new(subspace: Subspace, sign: Sign, k: u32, n: u32) -> Result<Self, EigenError> {
        let valid = match (subspace, sign) {
            (Subspace::Even, Sign::Minus) => k < n,
            _ => k <= n,
        };
        if valid {
            Ok(Self { subspace, sign, k, n })
        } else {
            Err(EigenError::InvalidLabel { subspace, sign, k, n })
        }
    }

    pub fn subspace(self) -> Subspace {
        self.subspace
    }

    pub fn sign(self) -> Sign {
        self.sign
    }

    pub fn k(self) -> u32 {
        self.k
    }

    pub fn n(self) -> u32 {
        self.n
    }

    /// All labels of degree `n`: the plus family by increasing `k`, then the minus family.
    pub fn all(subspace: Subspace, n: u32) -> Vec<EigenLabel> {
        [Sign::Plus, Sign::Minus]
            .into_iter()
            .flat_map(|sign| (0..=n).filter_map(move |k| EigenLabel::new(subspace, sign, k, n).ok()))
            .collect()
    }
}

impl fmt::Display for EigenLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}-k{}-N{}", self.subspace, self.sign, self.k, self.n)
    }
}

fn c(n: i64) -> ParamScalar {
    ParamScalar::from_int(n)
}

/// `u^deg P_k^(alpha,beta)(1 + 2v/u)` with `alpha = -N - 2nu1 + da`, `beta = -N - 2nu2 + db`.
fn homogenized_jacobi(model: &Model, k: i64, n: u32, deg: u32, da: i64, db: i64) -> UVPolynomial {
    let (alpha, beta) = eigen_jacobi_params(model, n, da, db);
    jacobi(k, &alpha, &beta).homogenized_shifted(deg)
}

/// The `C[u,v]` components of `f±(k,N)`.
pub fn eigen_components(model: &Model, label: EigenLabel) -> KernelComponents {
    let (k, n) = (label.k as i64, label.n);
    let nn = c(n as i64);
    let nu1x2 = model.nu(1).scale(&int(2));
    let nu12x2 = model.nu_sum(&[1, 2]).scale(&int(2));
    match label.subspace {
        Subspace::Odd => {
            let h = homogenized_jacobi(model, k, n, n, -1, 0);
            let g = match label.sign {
                Sign::Plus => {
                    // (2N + 2nu12 - k) / (N + 2nu1 - k)
                    let num = &(&nn.scale(&int(2)) + &nu12x2) - &c(k);
                    let den = &(&nn + &nu1x2) - &c(k);
                    let factor = num.checked_div(&den).expect("generic parameters");
                    homogenized_jacobi(model, k, n, n, 0, 0).scale(&factor)
                }
                Sign::Minus => -&homogenized_jacobi(model, k - 1, n, n, 0, 0),
            };
            KernelComponents {
                h1: h,
                h2: g,
                ..Default::default()
            }
        }
        Subspace::Even => {
            let g = homogenized_jacobi(model, k, n, n, 0, 0);
            let h = if n == 0 {
                UVPolynomial::zero()
            } else {
                match label.sign {
                    Sign::Plus => {
                        let factor = &(&nn + &nu1x2) - &c(k);
                        homogenized_jacobi(model, k - 1, n, n - 1, 0, 1).scale(&factor)
                    }
                    Sign::Minus => {
                        let factor = &(&c(k + 1) - &nn.scale(&int(2))) - &nu12x2;
                        homogenized_jacobi(model, k, n, n - 1, 0, 1).scale(&factor)
                    }
                }
            };
            KernelComponents {
                g1: h,
                g2: g,
                ..Default::default()
            }
        }
    }
}

pub fn build_eigenvector(model: &Model, label: EigenLabel) -> SuperElement {
    eigen_components(model, label).assemble()
}

/// Eigenvalue of `Q(123)` on the degree-`n` part of the subspace.
pub fn q123_eigenvalue(model: &Model, subspace: Subspace, n: u32) -> ParamScalar {
    let base = &c(2 * n as i64) + &model.nu_sum(&[1, 2, 3]).scale(&int(2));
    match subspace {
        Subspace::Odd => -&(&base + &ParamScalar::from_ratio(1, 2)),
        Subspace::Even => &base - &ParamScalar::from_ratio(1, 2),
    }
}

/// Eigenvalue of `Q(12)` on `f±(k,N)`.
pub fn q12_eigenvalue(model: &Model, label: EigenLabel) -> ParamScalar {
    let half = ParamScalar::from_ratio(1, 2);
    let base = &c(label.n as i64 - label.k as i64) + &model.nu_sum(&[1, 2]);
    let sign = int(2 * label.sign.as_int());
    match label.subspace {
        Subspace::Odd => &base.scale(&sign) - &half,
        Subspace::Even => &(&base - &half).scale(&sign) + &half,
    }
}

/// Checks kernel membership, parity, homogeneity and both eigenvalue equations.
pub fn verify_eigenpair(model: &Model, label: EigenLabel) -> VerificationReport {
    run_checks("eigen", model.mode().clone(), eigenpair_checks(model, label))
}

fn eigenpair_checks(model: &Model, label: EigenLabel) -> Vec<PendingCheck<'_>> {
    let f = build_eigenvector(model, label);
    let id = |s: &str| format!("{label}/{s}");
    let mut checks = Vec::new();
    {
        let f = f.clone();
        checks.push(PendingCheck::new(id("kernel"), "A-(123) f = 0", move || {
            total_lowering().apply(&f)
        }));
    }
    {
        let f = f.clone();
        checks.push(PendingCheck::new(
            id("shape"),
            "f is nonzero, of pure parity and of weight 2 deg_x + deg_t = 2N + parity",
            move || {
                let mut m = Mismatches::default();
                if f.is_zero() {
                    m.push("eigenvector is zero");
                }
                if !f.is_zero() && f.parity() != Some(label.subspace.parity()) {
                    m.push(format!("wrong parity: {:?}", f.parity()));
                }
                let weight = 2 * label.n as usize + usize::from(label.subspace == Subspace::Odd);
                for (mono, _) in f.terms() {
                    if 2 * mono.x_degree() as usize + mono.theta.len() != weight {
                        m.push(format!("term of wrong weight: {mono:?}"));
                    }
                }
                m
            },
        ));
    }
    {
        let f = f.clone();
        let mu = q123_eigenvalue(model, label.subspace, label.n);
        let anchor = match label.subspace {
            Subspace::Odd => "Q(123) f = -(2N + 2nu123 + 1/2) f",
            Subspace::Even => "Q(123) f = (2N + 2nu123 - 1/2) f",
        };
        checks.push(PendingCheck::new(id("Q123"), anchor, move || {
            &model.casimir(SubsetLabel::FULL).apply(&f) - &f.scale(&mu)
        }));
    }
    {
        let lambda = q12_eigenvalue(model, label);
        let anchor = match label.subspace {
            Subspace::Odd => "Q(12) f = (+-2(N - k + nu12) - 1/2) f",
            Subspace::Even => "Q(12) f = (+-2(N - k + nu12 - 1/2) + 1/2) f",
        };
        let q12: SubsetLabel = "12".parse().expect("subset literal");
        checks.push(PendingCheck::new(id("Q12"), anchor, move || {
            &model.casimir(q12).apply(&f) - &f.scale(&lambda)
        }));
    }
    checks
}

/// Coordinates of a kernel element of degree `n` and the given parity in
/// the monomial basis of its defining components: `(h1, h2)` coefficients
/// for odd, `(g1, g2)` for even.
pub fn kernel_coordinates(subspace: Subspace, n: u32, comps: &KernelComponents) -> Vec<ParamScalar> {
    let mut out = Vec::with_capacity(subspace.dimension(n));
    let mut push = |p: &UVPolynomial, deg: u32| {
        for b in 0..=deg {
            out.push(p.coefficient(deg - b, b));
        }
    };
    match subspace {
        Subspace::Odd => {
            push(&comps.h1, n);
            push(&comps.h2, n);
        }
        Subspace::Even => {
            if n > 0 {
                push(&comps.g1, n - 1);
            }
            push(&comps.g2, n);
        }
    }
    out
}

/// Matrix whose columns are the coordinates of the eigenvectors in `labels`.
pub fn basis_matrix(model: &Model, subspace: Subspace, n: u32, labels: &[EigenLabel]) -> Matrix {
    let columns: Vec<_> = labels
        .iter()
        .map(|&l| kernel_coordinates(subspace, n, &eigen_components(model, l)))
        .collect();
    Matrix::from_columns(&columns).expect("coordinate vectors share a length")
}

/// Rank over the parameter field of `{f±(k,N)}` at fixed `N`.
pub fn basis_rank(model: &Model, subspace: Subspace, n: u32) -> usize {
    basis_matrix(model, subspace, n, &EigenLabel::all(subspace, n)).rank()
}

/// Kernel membership, eigenvalues and basis rank for every `N <= max_n`.
pub fn verify_eigenbasis(model: &Model, subspaces: &[Subspace], max_n: u32) -> VerificationReport {
    let mut checks = Vec::new();
    for &subspace in subspaces {
        for n in 0..=max_n {
            for label in EigenLabel::all(subspace, n) {
                checks.extend(eigenpair_checks(model, label));
            }
            let expected = subspace.dimension(n);
            checks.push(PendingCheck::new(
                format!("{subspace}-N{n}/rank"),
                match subspace {
                    Subspace::Odd => "rank {f(k,N)} = 2(N + 1)",
                    Subspace::Even => "rank {f(k,N)} = 2N + 1",
                },
                move || {
                    let mut m = Mismatches::default();
                    let rank = basis_rank(model, subspace, n);
                    if rank != expected {
                        m.push(format!("rank {rank}, expected {expected}"));
                    }
                    m
                },
            ));
        }
    }
    run_checks("eigen", model.mode().clone(), checks)
}

/// `g = ((1 + 2lambda + 4nu12) h + 4u h_u - 4u h_v) / (1 + 2lambda + 4nu1 - 4nu2)`.
pub fn odd_quotient(model: &Model, lambda: &ParamScalar, h: &UVPolynomial) -> UVPolynomial {
    let one = ParamScalar::one();
    let two_lambda = lambda.scale(&int(2));
    let num_c = &(&one + &two_lambda) + &model.nu_sum(&[1, 2]).scale(&int(4));
    let den = &(&(&one + &two_lambda) + &model.nu(1).scale(&int(4))) - &model.nu(2).scale(&int(4));
    let body = &(&h.scale(&num_c) + &h.partial_u().shift(1, 0).scale(&c(4)))
        - &h.partial_v().shift(1, 0).scale(&c(4));
    body.scale(&den.recip().expect("generic parameters"))
}

/// `(u^2 du^2 - u^2 du dv + (2nu12+1) u du - (2nu1+1) u dv + nu12^2 - (2lambda+1)^2/16) h`.
pub fn odd_h_operator(model: &Model, lambda: &ParamScalar, h: &UVPolynomial) -> UVPolynomial {
    let nu12 = model.nu_sum(&[1, 2]);
    let hu = h.partial_u();
    let hv = h.partial_v();
    let shifted = &lambda.scale(&int(2)) + &ParamScalar::one();
    let constant = &(&nu12 * &nu12) - &(&shifted * &shifted).scale(&crate::scalars::rat(1, 16));
    let terms = [
        hu.partial_u().shift(2, 0),
        -&hu.partial_v().shift(2, 0),
        hu.shift(1, 0).scale(&(&nu12.scale(&int(2)) + &ParamScalar::one())),
        -&hv.shift(1, 0).scale(&(&model.nu(1).scale(&int(2)) + &ParamScalar::one())),
        h.scale(&constant),
    ];
    terms.iter().fold(UVPolynomial::zero(), |acc, t| &acc + t)
}

/// The closed forms of the odd `g±` agree with the quotient formula, and `h`
/// solves its second-order equation, for every `k <= N <= max_n`.
pub fn verify_odd_invariants(model: &Model, max_n: u32) -> VerificationReport {
    let mut checks = Vec::new();
    for n in 0..=max_n {
        for k in 0..=n {
            for sign in [Sign::Plus, Sign::Minus] {
                let label = EigenLabel::new(Subspace::Odd, sign, k, n).expect("k <= n");
                checks.push(PendingCheck::new(
                    format!("{label}/quotient"),
                    "(1 + 2l + 4nu1 - 4nu2) g = (1 + 2l + 4nu12) h + 4u h_u - 4u h_v",
                    move || {
                        let comps = eigen_components(model, label);
                        let lambda = q12_eigenvalue(model, label);
                        &comps.h2 - &odd_quotient(model, &lambda, &comps.h1)
                    },
                ));
                checks.push(PendingCheck::new(
                    format!("{label}/h-equation"),
                    "(u^2 du^2 - u^2 du dv + (2nu12+1) u du - (2nu1+1) u dv + nu12^2 - (2l+1)^2/16) h = 0",
                    move || {
                        let comps = eigen_components(model, label);
                        odd_h_operator(model, &q12_eigenvalue(model, label), &comps.h1)
                    },
                ));
            }
        }
    }
    run_checks("eigen-invariants", model.mode().clone(), checks)
}

/// Expresses a kernel element in the embedding components; convenience for
/// callers holding a raw [`SuperElement`].
pub fn decompose_in(subspace: Subspace, n: u32, f: &SuperElement) -> Option<Vec<ParamScalar>> {
    kernel_decompose(f)
        .ok()
        .map(|comps| kernel_coordinates(subspace, n, &comps))
}

/// Embedding of a kernel coordinate vector back into superspace.
pub fn from_coordinates(subspace: Subspace, n: u32, coords: &[ParamScalar]) -> SuperElement {
    let poly = |slice: &[ParamScalar], deg: u32| {
        UVPolynomial::from_terms(
            slice
                .iter()
                .enumerate()
                .map(|(b, c)| ((deg - b as u32, b as u32), c.clone())),
        )
    };
    let m = n as usize + 1;
    match subspace {
        Subspace::Odd => {
            &embed(EmbeddingKind::O1, &poly(&coords[..m], n))
                + &embed(EmbeddingKind::O2, &poly(&coords[m..], n))
        }
        Subspace::Even => {
            let split = n as usize;
            let h = if n == 0 {
                UVPolynomial::zero()
            } else {
                poly(&coords[..split], n - 1)
            };
            &embed(EmbeddingKind::E1, &h) + &embed(EmbeddingKind::E2, &poly(&coords[split..], n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(s: Subspace, sign: Sign, k: u32, n: u32) -> EigenLabel {
        EigenLabel::new(s, sign, k, n).unwrap()
    }

    #[test]
    fn label_validation() {
        assert!(EigenLabel::new(Subspace::Even, Sign::Minus, 2, 2).is_err());
        assert!(EigenLabel::new(Subspace::Odd, Sign::Minus, 2, 2).is_ok());
        assert!(EigenLabel::new(Subspace::Odd, Sign::Plus, 3, 2).is_err());
        assert_eq!(EigenLabel::all(Subspace::Even, 0).len(), 1);
        assert_eq!(EigenLabel::all(Subspace::Odd, 3).len(), 8);
    }

    #[test]
    fn small_eigenvectors() {
        let m = Model::symbolic();
        let t = |i| SuperElement::theta(i);
        // (odd, +, 0, 0): (t1 - t2) + (nu12 / nu1)(t2 - t3)
        let ratio = m.nu_sum(&[1, 2]).checked_div(&m.nu(1)).unwrap();
        let expected = &(&t(1) - &t(2)) + &(&t(2) - &t(3)).scale(&ratio);
        assert_eq!(build_eigenvector(&m, label(Subspace::Odd, Sign::Plus, 0, 0)), expected);

        assert_eq!(
            build_eigenvector(&m, label(Subspace::Even, Sign::Plus, 0, 0)),
            SuperElement::one()
        );

        let u3 = UVPolynomial::monomial(3, 0, ParamScalar::one());
        assert_eq!(
            build_eigenvector(&m, label(Subspace::Odd, Sign::Minus, 0, 3)),
            embed(EmbeddingKind::O1, &u3)
        );
    }

    #[test]
    fn eigenpairs_small_degree() {
        let m = Model::symbolic();
        let r = verify_eigenbasis(&m, &Subspace::ALL, 2);
        for f in r.failures() {
            eprintln!("{}: {}", f.id, f.residual);
        }
        assert!(r.all_passed());
    }

    #[test]
    fn coordinates_round_trip() {
        let m = Model::symbolic();
        for s in Subspace::ALL {
            for l in EigenLabel::all(s, 2) {
                let f = build_eigenvector(&m, l);
                let coords = decompose_in(s, 2, &f).unwrap();
                assert_eq!(from_coordinates(s, 2, &coords), f);
            }
        }
    }
}
