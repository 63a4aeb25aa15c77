//! Univariate polynomials over the parameter field and Jacobi polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::osp::Model;
use crate::report::{run_checks, PendingCheck, Residual, VerificationReport};
use crate::scalars::{int, ParamScalar};
use crate::superspace::{insert_term, UVPolynomial};

/// Polynomial in one formal variable with [`ParamScalar`] coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ParamUnivariate {
    coeffs: BTreeMap<u32, ParamScalar>,
}

impl ParamUnivariate {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(ParamScalar::one())
    }

    pub fn constant(c: ParamScalar) -> Self {
        Self::monomial(0, c)
    }

    /// The variable itself.
    pub fn var() -> Self {
        Self::monomial(1, ParamScalar::one())
    }

    pub fn monomial(degree: u32, c: ParamScalar) -> Self {
        let mut p = Self::zero();
        p.add_term(degree, c);
        p
    }

    pub fn add_term(&mut self, degree: u32, c: ParamScalar) {
        insert_term(&mut self.coeffs, degree, c);
    }

    pub fn coefficient(&self, degree: u32) -> ParamScalar {
        self.coeffs.get(&degree).cloned().unwrap_or_default()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&u32, &ParamScalar)> {
        self.coeffs.iter()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn scale(&self, c: &ParamScalar) -> Self {
        let mut out = Self::zero();
        for (d, v) in &self.coeffs {
            out.add_term(*d, v * c);
        }
        out
    }

    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (d, v) in &self.coeffs {
            if *d > 0 {
                out.add_term(d - 1, v.scale(&int(*d as i64)));
            }
        }
        out
    }

    /// Multiplication by `var^k`.
    pub fn shift(&self, k: u32) -> Self {
        ParamUnivariate {
            coeffs: self.coeffs.iter().map(|(d, c)| (d + k, c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `p(a + b * var)`.
    pub fn compose_affine(&self, a: &ParamScalar, b: &ParamScalar) -> Self {
        let mut lin = Self::constant(a.clone());
        lin.add_term(1, b.clone());
        // Horner
        let Some(top) = self.degree() else {
            return Self::zero();
        };
        let mut acc = Self::zero();
        for d in (0..=top).rev() {
            acc = &(&acc * &lin) + &Self::constant(self.coefficient(d));
        }
        acc
    }

    /// `u^n * p(v / u)`; requires `deg p <= n`.
    pub fn homogenize(&self, n: u32) -> UVPolynomial {
        let mut out = UVPolynomial::zero();
        for (d, c) in &self.coeffs {
            assert!(*d <= n, "degree {d} exceeds homogenization degree {n}");
            out.add_term(n - d, *d, c.clone());
        }
        out
    }

    /// `u^n * p(1 + 2 v / u)`, expanded as `sum_i p_i (u + 2v)^i u^(n - i)`
    /// so that no division by `u` ever occurs; requires `deg p <= n`.
    pub fn homogenized_shifted(&self, n: u32) -> UVPolynomial {
        let u_plus_2v = &UVPolynomial::u() + &UVPolynomial::v().scale(&ParamScalar::from_int(2));
        let mut out = UVPolynomial::zero();
        let mut power = UVPolynomial::one();
        let top = self.degree().unwrap_or(0);
        for d in 0..=top {
            assert!(d <= n, "degree {d} exceeds homogenization degree {n}");
            let c = self.coefficient(d);
            if !c.is_zero() {
                out = &out + &power.shift(n - d, 0).scale(&c);
            }
            power = &power * &u_plus_2v;
        }
        out
    }
}

impl fmt::Display for ParamUnivariate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(d, c)| match d {
                0 => format!("({c})"),
                1 => format!("({c})*z"),
                _ => format!("({c})*z^{d}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for ParamUnivariate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamUnivariate({self})")
    }
}

impl Residual for ParamUnivariate {
    fn term_count(&self) -> usize {
        self.term_count()
    }
    fn summary(&self) -> String {
        self.to_string()
    }
}

impl Add for &ParamUnivariate {
    type Output = ParamUnivariate;
    fn add(self, rhs: &ParamUnivariate) -> ParamUnivariate {
        let mut out = self.clone();
        for (d, c) in &rhs.coeffs {
            out.add_term(*d, c.clone());
        }
        out
    }
}

impl Sub for &ParamUnivariate {
    type Output = ParamUnivariate;
    fn sub(self, rhs: &ParamUnivariate) -> ParamUnivariate {
        self + &(-rhs)
    }
}

impl Neg for &ParamUnivariate {
    type Output = ParamUnivariate;
    fn neg(self) -> ParamUnivariate {
        ParamUnivariate {
            coeffs: self.coeffs.iter().map(|(d, c)| (*d, -c)).collect(),
        }
    }
}

impl Mul for &ParamUnivariate {
    type Output = ParamUnivariate;
    fn mul(self, rhs: &ParamUnivariate) -> ParamUnivariate {
        let mut out = ParamUnivariate::zero();
        for (da, a) in &self.coeffs {
            for (db, b) in &rhs.coeffs {
                out.add_term(da + db, a * b);
            }
        }
        out
    }
}

/// Rising factorial `(a)_n`.
pub fn pochhammer(a: &ParamScalar, n: u32) -> ParamScalar {
    (0..n).fold(ParamScalar::one(), |acc, i| {
        &acc * &(a + &ParamScalar::from_int(i as i64))
    })
}

fn factorial(n: u32) -> ParamScalar {
    (1..=n as i64).fold(ParamScalar::one(), |acc, i| acc.scale(&int(i)))
}

/// Jacobi polynomial `P_k^(alpha,beta)(x)` from the terminating
/// hypergeometric sum
///
/// `P_k(x) = sum_j (alpha+j+1)_(k-j) (-k)_j (k+alpha+beta+1)_j / (k! j!) * ((1-x)/2)^j`,
///
/// where `(alpha+1)_k / (alpha+1)_j = (alpha+j+1)_(k-j)` keeps every
/// coefficient a polynomial in `alpha, beta`. `k = -1` gives the zero
/// polynomial (empty sum), which the eigenbasis formulas rely on.
pub fn jacobi(k: i64, alpha: &ParamScalar, beta: &ParamScalar) -> ParamUnivariate {
    assert!(k >= -1, "Jacobi degree must be at least -1");
    if k < 0 {
        return ParamUnivariate::zero();
    }
    let k = k as u32;
    let mut half_one_minus_x = ParamUnivariate::constant(ParamScalar::from_ratio(1, 2));
    half_one_minus_x.add_term(1, ParamScalar::from_ratio(-1, 2));
    let minus_k = ParamScalar::from_int(-(k as i64));
    let shifted = &(alpha + beta) + &ParamScalar::from_int(k as i64 + 1);
    let kfact = factorial(k);
    let mut out = ParamUnivariate::zero();
    let mut power = ParamUnivariate::one();
    for j in 0..=k {
        let a_ratio = pochhammer(&(alpha + &ParamScalar::from_int(j as i64 + 1)), k - j);
        let c = &(&a_ratio * &pochhammer(&minus_k, j)) * &pochhammer(&shifted, j);
        let c = c
            .checked_div(&(&kfact * &factorial(j)))
            .expect("factorials are nonzero");
        out = &out + &power.scale(&c);
        power = &power * &half_one_minus_x;
    }
    out
}

/// `P_k^(alpha,beta)(1 + 2t)` as a polynomial in `t`.
pub fn jacobi_shifted(k: i64, alpha: &ParamScalar, beta: &ParamScalar) -> ParamUnivariate {
    jacobi(k, alpha, beta).compose_affine(&ParamScalar::one(), &ParamScalar::from_int(2))
}

/// Applies `z(1+z) d^2 - (slope z + offset) d + constant`.
pub fn hypergeometric_operator(
    phi: &ParamUnivariate,
    slope: &ParamScalar,
    offset: &ParamScalar,
    constant: &ParamScalar,
) -> ParamUnivariate {
    let d1 = phi.derivative();
    let d2 = d1.derivative();
    let second = &d2.shift(1) + &d2.shift(2);
    let first = &d1.shift(1).scale(slope) + &d1.scale(offset);
    &(&second - &first) + &phi.scale(constant)
}

/// Odd-sector ODE coefficients `(slope, offset, constant)` for `(k, N)`:
/// `z(1+z) phi'' - ((2 nu12 + 2N - 1) z + 2 nu1 + N) phi' + k(2N + 2 nu12 - k) phi`.
pub fn odd_ode(model: &Model, k: u32, n: u32) -> (ParamScalar, ParamScalar, ParamScalar) {
    let nu12 = model.nu_sum(&[1, 2]);
    let (k, n) = (k as i64, n as i64);
    let slope = &nu12.scale(&int(2)) + &ParamScalar::from_int(2 * n - 1);
    let offset = &model.nu(1).scale(&int(2)) + &ParamScalar::from_int(n);
    let constant = (&nu12.scale(&int(2)) + &ParamScalar::from_int(2 * n - k)).scale(&int(k));
    (slope, offset, constant)
}

/// Even-sector ODE coefficients:
/// `z(1+z) phi'' - (2(nu12 + N - 1) z + 2 nu1 + N - 1) phi' + k(2N + 2 nu12 - k - 1) phi`.
pub fn even_ode(model: &Model, k: u32, n: u32) -> (ParamScalar, ParamScalar, ParamScalar) {
    let nu12 = model.nu_sum(&[1, 2]);
    let (k, n) = (k as i64, n as i64);
    let slope = (&nu12 + &ParamScalar::from_int(n - 1)).scale(&int(2));
    let offset = &model.nu(1).scale(&int(2)) + &ParamScalar::from_int(n - 1);
    let constant = (&nu12.scale(&int(2)) + &ParamScalar::from_int(2 * n - k - 1)).scale(&int(k));
    (slope, offset, constant)
}

/// Jacobi parameters `(alpha, beta) = (-N - 2 nu1 + da, -N - 2 nu2 + db)`.
pub fn eigen_jacobi_params(model: &Model, n: u32, da: i64, db: i64) -> (ParamScalar, ParamScalar) {
    let n = n as i64;
    let alpha = &model.nu(1).scale(&int(-2)) + &ParamScalar::from_int(da - n);
    let beta = &model.nu(2).scale(&int(-2)) + &ParamScalar::from_int(db - n);
    (alpha, beta)
}

/// Contiguity identities for `0 <= k <= max_k` with `alpha = nu1`,
/// `beta = nu2` as free symbols, and the polynomial solutions of the odd and
/// even hypergeometric equations for `k <= N <= max_k`.
pub fn verify_jacobi_identities(model: &Model, max_k: u32) -> VerificationReport {
    let mut checks = Vec::new();
    for k in 0..=max_k {
        let ki = k as i64;
        checks.push(PendingCheck::new(
            format!("contiguity-a/k{k:02}"),
            "(-k+(t+1)d/dt) P_k^(a,b)(1+2t) = (k+b) P_(k-1)^(a+1,b)(1+2t)",
            move || {
                let (a, b) = (model.nu(1), model.nu(2));
                let p = jacobi_shifted(ki, &a, &b);
                let lhs = &(&p.derivative().shift(1) + &p.derivative()) - &p.scale(&ParamScalar::from_int(ki));
                let a1 = &a + &ParamScalar::one();
                let rhs = jacobi_shifted(ki - 1, &a1, &b).scale(&(&b + &ParamScalar::from_int(ki)));
                &lhs - &rhs
            },
        ));
        checks.push(PendingCheck::new(
            format!("contiguity-b/k{k:02}"),
            "(k - t d/dt) P_k^(a,b)(1+2t) = (a+k) P_(k-1)^(a,b+1)(1+2t)",
            move || {
                let (a, b) = (model.nu(1), model.nu(2));
                let p = jacobi_shifted(ki, &a, &b);
                let lhs = &p.scale(&ParamScalar::from_int(ki)) - &p.derivative().shift(1);
                let b1 = &b + &ParamScalar::one();
                let rhs = jacobi_shifted(ki - 1, &a, &b1).scale(&(&a + &ParamScalar::from_int(ki)));
                &lhs - &rhs
            },
        ));
        for n in k..=max_k {
            checks.push(PendingCheck::new(
                format!("ode-odd/N{n}-k{k}"),
                "odd hypergeometric equation annihilates P_k^(-N-2nu1-1,-N-2nu2)(1+2z)",
                move || {
                    let (a, b) = eigen_jacobi_params(model, n, -1, 0);
                    let phi = jacobi_shifted(k as i64, &a, &b);
                    let (s, o, c) = odd_ode(model, k, n);
                    hypergeometric_operator(&phi, &s, &o, &c)
                },
            ));
            checks.push(PendingCheck::new(
                format!("ode-even/N{n}-k{k}"),
                "even hypergeometric equation annihilates P_k^(-N-2nu1,-N-2nu2)(1+2z)",
                move || {
                    let (a, b) = eigen_jacobi_params(model, n, 0, 0);
                    let phi = jacobi_shifted(k as i64, &a, &b);
                    let (s, o, c) = even_ode(model, k, n);
                    hypergeometric_operator(&phi, &s, &o, &c)
                },
            ));
        }
    }
    run_checks("jacobi", model.mode().clone(), checks)
}
