//! The action of `Q(23)` on the joint eigenbasis of `Q(123)` and `Q(12)`.
//!
//! `Q(23)` preserves each degree-`N` block of the kernel. Expanding
//! `Q(23) f±(k,N)` back in the eigenbasis gives a matrix with at most three
//! nonzero entries per column:
//!
//! odd:
//! - `Q(23) f+(k) = a+(k) f-(k) + b+(k) f+(k) + c+(k) f-(k+1)`
//! - `Q(23) f-(k) = a-(k) f+(k-1) + b-(k) f-(k) + c-(k) f+(k)`
//!
//! even:
//! - `Q(23) f+(k) = a+(k) f-(k-1) + b+(k) f+(k) + c+(k) f-(k)`
//! - `Q(23) f-(k) = a-(k) f+(k) + b-(k+1) f-(k) + c-(k+1) f+(k+1)`
//!
//! Here `a`, `b`, `c` stand for the coefficient families alpha, beta, gamma,
//! whose closed forms live in [`closed_form`].

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::eigen::{
    basis_matrix, build_eigenvector, kernel_coordinates, EigenLabel, Sign, Subspace,
};
use crate::kernel::{kernel_decompose, KernelError};
use crate::linalg::{solve, LinalgError, Matrix};
use crate::osp::{Model, SubsetLabel};
use crate::report::{run_checks, Mismatches, PendingCheck, VerificationReport};
use crate::scalars::{int, ParamScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TridiagonalError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("expansion system: {0}")]
    Linalg(#[from] LinalgError),
}

/// `Q(23)` in the eigenbasis of one degree-`N` block.
#[derive(Debug, Clone)]
pub struct Q23Expansion {
    pub subspace: Subspace,
    pub n: u32,
    pub labels: Vec<EigenLabel>,
    /// Column `j` holds the coordinates of `Q(23) f_j`.
    pub matrix: Matrix,
}

impl Q23Expansion {
    fn index(&self, sign: Sign, k: i64) -> Option<usize> {
        if k < 0 {
            return None;
        }
        self.labels
            .iter()
            .position(|l| l.sign() == sign && i64::from(l.k()) == k)
    }

    /// Coefficient of `f(target)` in `Q(23) f(source)`; zero for labels outside the block.
    pub fn coefficient(&self, target: (Sign, i64), source: (Sign, i64)) -> ParamScalar {
        match (self.index(target.0, target.1), self.index(source.0, source.1)) {
            (Some(i), Some(j)) => self.matrix[(i, j)].clone(),
            _ => ParamScalar::zero(),
        }
    }
}

/// Expands `Q(23) f±(k,N)` in the eigenbasis by one exact linear solve.
pub fn expand_q23(model: &Model, subspace: Subspace, n: u32) -> Result<Q23Expansion, TridiagonalError> {
    let labels = EigenLabel::all(subspace, n);
    let basis = basis_matrix(model, subspace, n, &labels);
    let q23 = model.casimir("23".parse::<SubsetLabel>().expect("subset literal"));
    let images = labels
        .iter()
        .map(|&l| {
            let image = q23.apply(&build_eigenvector(model, l));
            Ok(kernel_coordinates(subspace, n, &kernel_decompose(&image)?))
        })
        .collect::<Result<Vec<_>, TridiagonalError>>()?;
    let rhs = Matrix::from_columns(&images)?;
    let matrix = solve(&basis, &rhs)?;
    Ok(Q23Expansion {
        subspace,
        n,
        labels,
        matrix,
    })
}

/// Coefficient families of the tridiagonal action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Alpha,
    Beta,
    Gamma,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Alpha => "alpha",
            Family::Beta => "beta",
            Family::Gamma => "gamma",
        })
    }
}

fn c(n: i64) -> ParamScalar {
    ParamScalar::from_int(n)
}

fn div(a: ParamScalar, b: ParamScalar) -> ParamScalar {
    a.checked_div(&b).expect("generic parameters")
}

fn prod(factors: &[ParamScalar]) -> ParamScalar {
    factors.iter().fold(ParamScalar::one(), |acc, f| &acc * f)
}

/// Closed forms of `alpha±(k)`, `beta±(k)`, `gamma±(k)` at degree `n`.
pub fn closed_form(model: &Model, subspace: Subspace, family: Family, sign: Sign, k: i64, n: u32) -> ParamScalar {
    let nu = |j| model.nu(j).scale(&int(2));
    let nu1 = nu(1);
    let nu2 = nu(2);
    let nu3 = nu(3);
    // twice the parameter sums
    let s12 = &nu1 + &nu2;
    let s123 = &s12 + &nu3;
    let h12 = model.nu_sum(&[1, 2]);
    let n = i64::from(n);
    let lin = |base: &ParamScalar, m: i64| base + &c(m);
    let sgn = sign.as_int();
    match (subspace, family, sign) {
        (Subspace::Odd, Family::Alpha, Sign::Plus) => div(
            &lin(&nu2, n - k) * &lin(&s123, 2 * n - k),
            lin(&h12, n - k),
        ),
        (Subspace::Odd, Family::Alpha, Sign::Minus) => div(
            prod(&[c(2), lin(&nu1, n - k + 1), lin(&s12, n - k)]),
            lin(&s12, 2 * n - 2 * k + 1),
        ),
        (Subspace::Odd, Family::Gamma, Sign::Plus) => div(
            prod(&[c(2 * (n - k) * (k + 1)), lin(&s12, 2 * n - k)]),
            &lin(&nu1, n - k) * &lin(&s12, 2 * n - 2 * k - 1),
        ),
        (Subspace::Odd, Family::Gamma, Sign::Minus) => div(
            &lin(&nu3, k) * &lin(&nu1, n - k),
            lin(&h12, n - k),
        ),
        (Subspace::Odd, Family::Beta, _) => {
            // +-(nu1 - nu2)(nu12 + 2nu3 + N)/(nu12 + N - k)
            //   -+ (2nu12 - 1)(2nu12 + 2N + 1)/(2(2nu12 + 2N - 2k -+ 1))
            let first = div(
                &(&model.nu(1) - &model.nu(2)) * &lin(&(&h12 + &nu3), n),
                lin(&h12, n - k),
            );
            let second = div(
                &lin(&s12, -1) * &lin(&s12, 2 * n + 1),
                lin(&s12, 2 * n - 2 * k - sgn).scale(&int(2)),
            );
            (&first - &second).scale(&int(sgn))
        }
        (Subspace::Even, Family::Alpha, Sign::Plus) => div(
            &lin(&nu1, n - k) * &lin(&nu2, n - k),
            lin(&h12, n - k),
        ),
        (Subspace::Even, Family::Alpha, Sign::Minus) => div(
            prod(&[c(2), lin(&s12, n - k - 1), lin(&s123, 2 * n - k - 1)]),
            lin(&s12, 2 * n - 2 * k - 1),
        ),
        (Subspace::Even, Family::Gamma, Sign::Plus) => div(
            prod(&[c(2 * (n - k)), lin(&nu3, k)]),
            lin(&s12, 2 * n - 2 * k - 1),
        ),
        (Subspace::Even, Family::Gamma, Sign::Minus) => div(
            prod(&[c(k), lin(&s12, 2 * n - k)]),
            lin(&h12, n - k),
        ),
        (Subspace::Even, Family::Beta, _) => {
            // -+(nu1 - nu2)(nu12 + N)/(nu12 + N - k)
            //   +- (2nu12 - 1)(2nu12 + 4nu3 + 2N - 1)/(2(2nu12 + 2N - 2k -+ 1))
            let first = div(
                &(&model.nu(1) - &model.nu(2)) * &lin(&h12, n),
                lin(&h12, n - k),
            );
            let second = div(
                &lin(&s12, -1) * &lin(&(&s12 + &nu3.scale(&int(2))), 2 * n - 1),
                lin(&s12, 2 * n - 2 * k - sgn).scale(&int(2)),
            );
            (&second - &first).scale(&int(sgn))
        }
    }
}

/// Position of each closed-form coefficient in the expansion matrix:
/// `(family, sign, k) -> ((target sign, target k), (source sign, source k))`.
fn placement(subspace: Subspace, family: Family, sign: Sign, k: i64) -> ((Sign, i64), (Sign, i64)) {
    use Family::*;
    use Sign::*;
    match (subspace, family, sign) {
        (Subspace::Odd, Alpha, Plus) => ((Minus, k), (Plus, k)),
        (Subspace::Odd, Beta, Plus) => ((Plus, k), (Plus, k)),
        (Subspace::Odd, Gamma, Plus) => ((Minus, k + 1), (Plus, k)),
        (Subspace::Odd, Alpha, Minus) => ((Plus, k - 1), (Minus, k)),
        (Subspace::Odd, Beta, Minus) => ((Minus, k), (Minus, k)),
        (Subspace::Odd, Gamma, Minus) => ((Plus, k), (Minus, k)),
        (Subspace::Even, Alpha, Plus) => ((Minus, k - 1), (Plus, k)),
        (Subspace::Even, Beta, Plus) => ((Plus, k), (Plus, k)),
        (Subspace::Even, Gamma, Plus) => ((Minus, k), (Plus, k)),
        (Subspace::Even, Alpha, Minus) => ((Plus, k), (Minus, k)),
        (Subspace::Even, Beta, Minus) => ((Minus, k - 1), (Minus, k - 1)),
        (Subspace::Even, Gamma, Minus) => ((Plus, k), (Minus, k - 1)),
    }
}

/// Reads the coefficient that the closed form `(family, sign, k)` predicts.
pub fn extracted(expansion: &Q23Expansion, family: Family, sign: Sign, k: i64) -> ParamScalar {
    let (target, source) = placement(expansion.subspace, family, sign, k);
    expansion.coefficient(target, source)
}

/// All matrix positions where the tridiagonal pattern allows a nonzero entry.
fn allowed_positions(expansion: &Q23Expansion) -> BTreeMap<(usize, usize), ()> {
    let mut allowed = BTreeMap::new();
    for family in [Family::Alpha, Family::Beta, Family::Gamma] {
        for sign in [Sign::Plus, Sign::Minus] {
            for k in -1..=i64::from(expansion.n) + 1 {
                let (t, s) = placement(expansion.subspace, family, sign, k);
                if let (Some(i), Some(j)) = (expansion.index(t.0, t.1), expansion.index(s.0, s.1)) {
                    allowed.insert((i, j), ());
                }
            }
        }
    }
    allowed
}

fn family_anchor(subspace: Subspace, family: Family, sign: Sign) -> &'static str {
    use Family::*;
    use Sign::*;
    match (subspace, family, sign) {
        (Subspace::Odd, Alpha, Plus) => "alpha+(k) = (2nu2 + N - k)(2nu123 + 2N - k)/(nu12 + N - k)",
        (Subspace::Odd, Alpha, Minus) => "alpha-(k) = 2(2nu1 + N - k + 1)(2nu12 + N - k)/(2nu12 + 2N - 2k + 1)",
        (Subspace::Odd, Gamma, Plus) => "gamma+(k) = 2(N - k)(k + 1)(2nu12 + 2N - k)/((2nu1 + N - k)(2nu12 + 2N - 2k - 1))",
        (Subspace::Odd, Gamma, Minus) => "gamma-(k) = (2nu3 + k)(2nu1 + N - k)/(nu12 + N - k)",
        (Subspace::Odd, Beta, _) => "beta(k) = +-(nu1 - nu2)(nu12 + 2nu3 + N)/(nu12 + N - k) -+ (2nu12 - 1)(2nu12 + 2N + 1)/(2(2nu12 + 2N - 2k -+ 1))",
        (Subspace::Even, Alpha, Plus) => "alpha+(k) = (2nu1 + N - k)(2nu2 + N - k)/(nu12 + N - k)",
        (Subspace::Even, Alpha, Minus) => "alpha-(k) = 2(2nu12 + N - k - 1)(2nu123 + 2N - k - 1)/(2nu12 + 2N - 2k - 1)",
        (Subspace::Even, Gamma, Plus) => "gamma+(k) = 2(2nu3 + k)(N - k)/(2nu12 + 2N - 2k - 1)",
        (Subspace::Even, Gamma, Minus) => "gamma-(k) = k(2nu12 + 2N - k)/(nu12 + N - k)",
        (Subspace::Even, Beta, _) => "beta(k) = -+(nu1 - nu2)(nu12 + N)/(nu12 + N - k) +- (2nu12 - 1)(2nu12 + 4nu3 + 2N - 1)/(2(2nu12 + 2N - 2k -+ 1))",
    }
}

/// Range of `k` for which the coefficient sits inside the block.
fn k_range(subspace: Subspace, family: Family, sign: Sign, n: u32) -> std::ops::RangeInclusive<i64> {
    let n = i64::from(n);
    use Family::*;
    use Sign::*;
    match (subspace, family, sign) {
        (Subspace::Odd, Gamma, Plus) => 0..=n - 1,
        (Subspace::Odd, Alpha, Minus) => 1..=n,
        (Subspace::Odd, _, _) => 0..=n,
        (Subspace::Even, Alpha, Plus) => 1..=n,
        (Subspace::Even, Gamma, Plus) | (Subspace::Even, Alpha, Minus) => 0..=n - 1,
        (Subspace::Even, Beta, Plus) => 0..=n,
        (Subspace::Even, Beta, Minus) | (Subspace::Even, Gamma, Minus) => 1..=n,
    }
}

/// Product constraints: `(name, anchor, lhs families, rhs)`.
fn product_constraints(model: &Model, subspace: Subspace, n: u32, k: i64) -> Vec<(String, &'static str, ParamScalar, ParamScalar)> {
    let exp = |fam, sign, kk| (fam, sign, kk);
    let nu = |j| model.nu(j).scale(&int(2));
    let s12 = &nu(1) + &nu(2);
    let s123 = &s12 + &nu(3);
    let h12 = model.nu_sum(&[1, 2]);
    let ni = i64::from(n);
    let lin = |base: &ParamScalar, m: i64| base + &c(m);
    let sq = |x: ParamScalar| &x * &x;
    match subspace {
        Subspace::Odd => vec![
            (
                format!("alpha-gamma/k{k}"),
                "alpha-(k+1) gamma+(k) = 4(k+1)(N-k)(2nu12+2N-k)(2nu12+N-k-1)/(2nu12+2N-2k-1)^2",
                prod_of(exp(Family::Alpha, Sign::Minus, k + 1), exp(Family::Gamma, Sign::Plus, k)),
                div(
                    prod(&[c(4 * (k + 1) * (ni - k)), lin(&s12, 2 * ni - k), lin(&s12, ni - k - 1)]),
                    sq(lin(&s12, 2 * ni - 2 * k - 1)),
                ),
            ),
            (
                format!("alpha+gamma-/k{k}"),
                "alpha+(k) gamma-(k) = (2nu1+N-k)(2nu2+N-k)(2nu3+k)(2nu123+2N-k)/(nu12+N-k)^2",
                prod_of(exp(Family::Alpha, Sign::Plus, k), exp(Family::Gamma, Sign::Minus, k)),
                div(
                    prod(&[lin(&nu(1), ni - k), lin(&nu(2), ni - k), lin(&nu(3), k), lin(&s123, 2 * ni - k)]),
                    sq(lin(&h12, ni - k)),
                ),
            ),
        ],
        Subspace::Even => vec![
            (
                format!("alpha+gamma-/k{k}"),
                "alpha+(k) gamma-(k) = k(2nu1+N-k)(2nu2+N-k)(2nu12+2N-k)/(nu12+N-k)^2",
                prod_of(exp(Family::Alpha, Sign::Plus, k), exp(Family::Gamma, Sign::Minus, k)),
                div(
                    prod(&[c(k), lin(&nu(1), ni - k), lin(&nu(2), ni - k), lin(&s12, 2 * ni - k)]),
                    sq(lin(&h12, ni - k)),
                ),
            ),
            (
                format!("alpha-gamma+/k{k}"),
                "alpha-(k) gamma+(k) = 4(2nu3+k)(N-k)(2nu12+N-k-1)(2nu123+2N-k-1)/(2nu12+2N-2k-1)^2",
                prod_of(exp(Family::Alpha, Sign::Minus, k), exp(Family::Gamma, Sign::Plus, k)),
                div(
                    prod(&[c(4 * (ni - k)), lin(&nu(3), k), lin(&s12, ni - k - 1), lin(&s123, 2 * ni - k - 1)]),
                    sq(lin(&s12, 2 * ni - 2 * k - 1)),
                ),
            ),
        ],
    }
    .into_iter()
    .map(|(id, anchor, (a, b), rhs)| {
        let lhs = &closed_form(model, subspace, a.0, a.1, a.2, n) * &closed_form(model, subspace, b.0, b.1, b.2, n);
        (id, anchor, lhs, rhs)
    })
    .collect()
}

type Coef = (Family, Sign, i64);

fn prod_of(a: Coef, b: Coef) -> (Coef, Coef) {
    (a, b)
}

/// Expands `Q(23)` at every `N <= max_n` and checks the coefficients against
/// the closed forms, the tridiagonal support, the product constraints, and
/// that the predicted three-term combination reproduces `Q(23) f` exactly.
pub fn verify_tridiagonal(model: &Model, subspaces: &[Subspace], max_n: u32) -> VerificationReport {
    let mut checks = Vec::new();
    for &subspace in subspaces {
        for n in 0..=max_n {
            let prefix = format!("{subspace}-N{n}");
            checks.push(PendingCheck::fallible(
                format!("{prefix}/expansion"),
                "Q(23) f(k) lies in span{f(k-1), f(k), f(k+1)} with closed-form coefficients",
                move || -> Result<Mismatches, TridiagonalError> {
                    let expansion = expand_q23(model, subspace, n)?;
                    let mut m = Mismatches::default();
                    let allowed = allowed_positions(&expansion);
                    for i in 0..expansion.labels.len() {
                        for j in 0..expansion.labels.len() {
                            if !allowed.contains_key(&(i, j)) && !expansion.matrix[(i, j)].is_zero() {
                                m.push(format!(
                                    "off-pattern entry f({}) in Q(23) f({}): {}",
                                    expansion.labels[i], expansion.labels[j], expansion.matrix[(i, j)]
                                ));
                            }
                        }
                    }
                    for family in [Family::Alpha, Family::Beta, Family::Gamma] {
                        for sign in [Sign::Plus, Sign::Minus] {
                            for k in k_range(subspace, family, sign, n) {
                                let got = extracted(&expansion, family, sign, k);
                                let want = closed_form(model, subspace, family, sign, k, n);
                                m.merge(
                                    &format!("{family}{sign}({k}) [{}]", family_anchor(subspace, family, sign)),
                                    &(&got - &want),
                                );
                            }
                        }
                    }
                    Ok(m)
                },
            ));
            for k in 0..=i64::from(n) {
                for (id, anchor, lhs, rhs) in product_constraints(model, subspace, n, k) {
                    checks.push(PendingCheck::new(format!("{prefix}/{id}"), anchor, move || &lhs - &rhs));
                }
            }
        }
    }
    run_checks("tridiag", model.mode().clone(), checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_example() {
        let m = Model::symbolic();
        // odd alpha+(0) = (2nu2 + N)(2nu123 + 2N)/(nu12 + N) at N = 2
        let nu = |j| m.nu(j);
        let num = &(&nu(2).scale(&int(2)) + &c(2))
            * &(&m.nu_sum(&[1, 2, 3]).scale(&int(2)) + &c(4));
        let want = div(num, &m.nu_sum(&[1, 2]) + &c(2));
        assert_eq!(closed_form(&m, Subspace::Odd, Family::Alpha, Sign::Plus, 0, 2), want);
    }

    #[test]
    fn small_blocks_match() {
        let m = Model::symbolic();
        let r = verify_tridiagonal(&m, &Subspace::ALL, 2);
        for f in r.failures() {
            eprintln!("{}: {}", f.id, f.residual);
        }
        assert!(r.all_passed());
    }
}
