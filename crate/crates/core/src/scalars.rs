//! Exact scalars.
//!
//! Everything in the crate computes over [`ParamScalar`], the field of
//! rational functions in the three representation parameters `nu1, nu2, nu3`
//! with arbitrary-precision rational coefficients. Values are kept in a
//! canonical form (reduced fraction, normalized denominator) so that
//! structural equality coincides with mathematical equality.
//!
//! Monomials in the parameters are ordered graded-lexicographically with
//! `nu1 > nu2 > nu3`; the leading term of a polynomial is its largest term
//! under that order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, always stored reduced with a
/// positive denominator.
pub type Rational = BigRational;

/// A point at which the three parameters can be evaluated.
pub type ParamPoint = [Rational; 3];

/// Number of parameter symbols.
pub const PARAM_COUNT: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by the zero scalar")]
    DivisionByZero,
    #[error("denominator `{denominator}` vanishes at the evaluation point")]
    VanishingDenominator { denominator: String },
}

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exponent vector of a parameter monomial `nu1^e1 nu2^e2 nu3^e3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Exponents(pub [u32; PARAM_COUNT]);

impl Exponents {
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    fn divides(&self, other: &Exponents) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    fn plus(&self, other: &Exponents) -> Exponents {
        Exponents([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    fn minus(&self, other: &Exponents) -> Exponents {
        Exponents([
            self.0[0] - other.0[0],
            self.0[1] - other.0[1],
            self.0[2] - other.0[2],
        ])
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in `nu1, nu2, nu3` with rational coefficients.
///
/// No stored coefficient is zero; the zero polynomial has no terms.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ParamPolynomial {
    terms: BTreeMap<Exponents, Rational>,
}

impl ParamPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Exponents::default(), c);
        }
        Self { terms }
    }

    /// The parameter `nu_{index+1}`; `index` is zero-based.
    pub fn var(index: usize) -> Self {
        assert!(index < PARAM_COUNT, "parameter index {index} out of range");
        let mut e = [0; PARAM_COUNT];
        e[index] = 1;
        Self::monomial(Exponents(e), Rational::one())
    }

    pub fn monomial(exp: Exponents, coeff: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        Self { terms }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I: IntoIterator<Item = (Exponents, Rational)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in iter {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: Exponents, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// The value of a constant polynomial (`Some(0)` is never returned; the
    /// zero polynomial yields `None` too, check [`is_zero`](Self::is_zero)).
    pub fn constant_value(&self) -> Option<&Rational> {
        if self.terms.len() == 1 {
            self.terms.get(&Exponents::default())
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || self.constant_value().is_some()
    }

    pub fn leading(&self) -> Option<(&Exponents, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Exponents::total).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e.0[var]).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    fn mul_term(&self, exp: &Exponents, coeff: &Rational) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.plus(exp), v * coeff))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Coefficients with respect to one parameter: `self = sum_i c_i * nu_var^i`,
    /// where no `c_i` involves `nu_var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<ParamPolynomial> {
        let mut out = vec![ParamPolynomial::zero(); self.degree_in(var) as usize + 1];
        for (e, c) in &self.terms {
            let mut stripped = *e;
            let d = stripped.0[var] as usize;
            stripped.0[var] = 0;
            out[d].terms.insert(stripped, c.clone());
        }
        out
    }

    fn leading_coefficient_in(&self, var: usize) -> ParamPolynomial {
        let d = self.degree_in(var);
        let mut out = ParamPolynomial::zero();
        for (e, c) in &self.terms {
            if e.0[var] == d {
                let mut stripped = *e;
                stripped.0[var] = 0;
                out.terms.insert(stripped, c.clone());
            }
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &ParamPolynomial) -> Option<ParamPolynomial> {
        let (dexp, dcoeff) = divisor.leading()?;
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let mut rem = self.clone();
        let mut quot = ParamPolynomial::zero();
        while let Some((rexp, rcoeff)) = rem.leading() {
            if !dexp.divides(rexp) {
                return None;
            }
            let texp = rexp.minus(dexp);
            let tcoeff = rcoeff / dcoeff;
            rem = &rem - &divisor.mul_term(&texp, &tcoeff);
            quot.add_term(texp, tcoeff);
        }
        Some(quot)
    }

    /// Splits `self = unit * primitive`, where `primitive` has coprime integer
    /// coefficients and a positive leading coefficient. The zero polynomial
    /// gives `(1, 0)`.
    pub fn unit_and_primitive(&self) -> (Rational, ParamPolynomial) {
        if self.is_zero() {
            return (Rational::one(), Self::zero());
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        let mut unit = Rational::new(num_gcd, den_lcm);
        if self.leading().is_some_and(|(_, c)| c.is_negative()) {
            unit = -unit;
        }
        let inv = unit.recip();
        (unit, self.scale(&inv))
    }

    pub fn normalized(&self) -> ParamPolynomial {
        self.unit_and_primitive().1
    }

    /// Exact substitution of the parameters.
    pub fn eval(&self, point: &ParamPoint) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e.0.iter()) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Greatest common divisor, normalized as in [`unit_and_primitive`](Self::unit_and_primitive).
    ///
    /// Content and primitive part are split off one parameter at a time and
    /// the primitive parts are combined with a primitive pseudo-remainder
    /// sequence.
    pub fn gcd(&self, other: &ParamPolynomial) -> ParamPolynomial {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        if self.is_constant() || other.is_constant() {
            return Self::one();
        }
        if self == other {
            return self.normalized();
        }
        // A linear polynomial is irreducible, so the gcd is it or 1.
        for (a, b) in [(self, other), (other, self)] {
            if b.total_degree() == 1 {
                return if a.div_exact(b).is_some() {
                    b.normalized()
                } else {
                    Self::one()
                };
            }
        }
        let mut bounds = [0; PARAM_COUNT];
        let mut best: Option<(u32, usize)> = None;
        for v in (0..PARAM_COUNT).filter(|&v| self.degree_in(v) > 0 || other.degree_in(v) > 0) {
            let bound = gcd_degree_bound(self, other, v);
            if bound == 0 {
                let ca = if self.degree_in(v) == 0 { self.clone() } else { self.content_in(v) };
                let cb = if other.degree_in(v) == 0 { other.clone() } else { other.content_in(v) };
                return ca.gcd(&cb);
            }
            bounds[v] = bound;
            if best.is_none_or(|(b, _)| bound < b) {
                best = Some((bound, v));
            }
        }
        let Some((_, var)) = best else {
            return Self::one();
        };
        // A common divisor reaching every degree bound is the gcd itself.
        if let Some(h) = heuristic_gcd(&self.normalized(), &other.normalized()) {
            if (0..PARAM_COUNT).all(|v| h.degree_in(v) == bounds[v]) {
                return h.normalized();
            }
        }
        let ca = self.content_in(var);
        let cb = other.content_in(var);
        let pa = self.div_exact(&ca).expect("content divides its polynomial");
        let pb = other.div_exact(&cb).expect("content divides its polynomial");
        let content = ca.gcd(&cb);
        let prim = primitive_prs_gcd(pa, pb, var);
        (&content * &prim).normalized()
    }

    /// Gcd of the coefficients with respect to `var`.
    fn content_in(&self, var: usize) -> ParamPolynomial {
        let mut g = ParamPolynomial::zero();
        for c in self.coefficients_in(var) {
            if c.is_zero() {
                continue;
            }
            g = g.gcd(&c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn primitive_part_in(&self, var: usize) -> ParamPolynomial {
        let c = self.content_in(var);
        self.div_exact(&c)
            .expect("content divides its polynomial")
            .normalized()
    }

    fn mul_var_pow(&self, var: usize, k: u32) -> ParamPolynomial {
        let mut e = [0; PARAM_COUNT];
        e[var] = k;
        self.mul_term(&Exponents(e), &Rational::one())
    }

    fn pseudo_remainder(&self, divisor: &ParamPolynomial, var: usize) -> ParamPolynomial {
        let db = divisor.degree_in(var);
        let lb = divisor.leading_coefficient_in(var);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(var) >= db {
            let dr = r.degree_in(var);
            let lr = r.leading_coefficient_in(var);
            r = &(&r * &lb) - &(&lr.mul_var_pow(var, dr - db) * divisor);
        }
        r
    }

    fn fmt_with_names(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let is_const = e.total() == 0;
            if is_const || !abs.is_one() {
                write!(f, "{}", abs)?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for (v, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "nu{}", v + 1)?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}

/// Heuristic gcd of two polynomials with integer coefficients: evaluate one
/// parameter at a large integer, recurse, and read the gcd back off the
/// balanced digits of the result. `None` if no candidate divides both inputs.
fn heuristic_gcd(f: &ParamPolynomial, g: &ParamPolynomial) -> Option<ParamPolynomial> {
    let common = integer_content(f).gcd(&integer_content(g));
    let Some(var) = (0..PARAM_COUNT).find(|&v| f.degree_in(v) > 0 || g.degree_in(v) > 0) else {
        return Some(ParamPolynomial::constant(Rational::from_integer(common)));
    };
    let unscale = Rational::new(BigInt::one(), common.clone());
    let (f, g) = (f.scale(&unscale), g.scale(&unscale));
    let (nf, ng) = (max_norm(&f), max_norm(&g));
    let bound = BigInt::from(2) * (&nf).min(&ng) + BigInt::from(29);
    let ratio = |p: &ParamPolynomial, norm: &BigInt| {
        let lead = p.leading().map_or_else(BigInt::one, |(_, c)| c.numer().abs());
        norm / lead
    };
    let mut xi = bound
        .clone()
        .min(BigInt::from(99) * bound.sqrt())
        .max(BigInt::from(2) * ratio(&f, &nf).min(ratio(&g, &ng)) + BigInt::from(2));
    for _ in 0..6 {
        let (ff, gg) = (evaluate_at(&f, var, &xi), evaluate_at(&g, var, &xi));
        if !ff.is_zero() && !gg.is_zero() {
            if let Some(image) = heuristic_gcd(&ff, &gg) {
                let candidate = interpolate(image, var, &xi).normalized();
                if !candidate.is_zero()
                    && f.div_exact(&candidate).is_some()
                    && g.div_exact(&candidate).is_some()
                {
                    return Some(candidate.scale(&Rational::from_integer(common)));
                }
            }
        }
        xi = BigInt::from(73794) * &xi * xi.sqrt().sqrt() / BigInt::from(27011);
    }
    None
}

fn integer_content(p: &ParamPolynomial) -> BigInt {
    p.terms.values().fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
}

fn max_norm(p: &ParamPolynomial) -> BigInt {
    p.terms.values().map(|c| c.numer().abs()).max().unwrap_or_default()
}

fn evaluate_at(p: &ParamPolynomial, var: usize, x: &BigInt) -> ParamPolynomial {
    let x = Rational::from_integer(x.clone());
    p.coefficients_in(var)
        .iter()
        .rev()
        .fold(ParamPolynomial::zero(), |acc, c| &acc.scale(&x) + c)
}

/// Inverts [`evaluate_at`] for polynomials whose coefficients are smaller
/// than `x / 2` in absolute value.
fn interpolate(mut image: ParamPolynomial, var: usize, x: &BigInt) -> ParamPolynomial {
    let half = x / BigInt::from(2);
    let inv = Rational::new(BigInt::one(), x.clone());
    let mut out = ParamPolynomial::zero();
    let mut power = 0;
    while !image.is_zero() {
        let mut digit = ParamPolynomial::zero();
        for (e, c) in &image.terms {
            let mut r = c.numer().mod_floor(x);
            if r > half {
                r -= x;
            }
            if !r.is_zero() {
                digit.add_term(*e, Rational::from_integer(r));
            }
        }
        image = (&image - &digit).scale(&inv);
        out = &out + &digit.mul_var_pow(var, power);
        power += 1;
    }
    out
}

/// Upper bound on the degree in `var` of `gcd(a, b)`, from the univariate gcd
/// of the images at a point where neither leading coefficient vanishes.
fn gcd_degree_bound(a: &ParamPolynomial, b: &ParamPolynomial, var: usize) -> u32 {
    let fallback = a.degree_in(var).min(b.degree_in(var));
    const SAMPLES: [[i64; PARAM_COUNT]; 4] = [[3, 7, 13], [-5, 11, 2], [17, -3, 19], [23, 29, -31]];
    for sample in SAMPLES {
        let point: ParamPoint = sample.map(|x| Rational::from_integer(BigInt::from(x)));
        let image = |p: &ParamPolynomial| -> Vec<Rational> {
            p.coefficients_in(var).iter().map(|c| c.eval(&point)).collect()
        };
        let (ia, ib) = (image(a), image(b));
        if ia.last().is_some_and(Zero::is_zero) || ib.last().is_some_and(Zero::is_zero) {
            continue;
        }
        return univariate_gcd_degree(ia, ib);
    }
    fallback
}

/// Degree of the gcd of two dense univariate polynomials over the rationals
/// (coefficients listed from the constant term up, leading one nonzero).
fn univariate_gcd_degree(mut a: Vec<Rational>, mut b: Vec<Rational>) -> u32 {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while b.len() > 1 {
        let lead = b.last().expect("nonempty").clone();
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let factor = a.last().expect("nonempty") / &lead;
            for (i, c) in b.iter().enumerate() {
                a[i + shift] -= &factor * c;
            }
            a.pop();
            while a.last().is_some_and(Zero::is_zero) {
                a.pop();
            }
        }
        if a.is_empty() {
            return (b.len() - 1) as u32;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if b.is_empty() {
        a.len().saturating_sub(1) as u32
    } else {
        0
    }
}

fn primitive_prs_gcd(a: ParamPolynomial, b: ParamPolynomial, var: usize) -> ParamPolynomial {
    let (mut a, mut b) = if a.degree_in(var) >= b.degree_in(var) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        let r = a.pseudo_remainder(&b, var);
        if r.is_zero() {
            return b.primitive_part_in(var);
        }
        if r.degree_in(var) == 0 {
            return ParamPolynomial::one();
        }
        a = b;
        b = r.primitive_part_in(var);
    }
}

impl fmt::Display for ParamPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with_names(f)
    }
}

impl fmt::Debug for ParamPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamPolynomial({self})")
    }
}

impl Add for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn add(self, rhs: &ParamPolynomial) -> ParamPolynomial {
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (e, c) in &small.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn sub(self, rhs: &ParamPolynomial) -> ParamPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn mul(self, rhs: &ParamPolynomial) -> ParamPolynomial {
        let mut out = ParamPolynomial::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea.plus(eb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &ParamPolynomial {
    type Output = ParamPolynomial;
    fn neg(self) -> ParamPolynomial {
        ParamPolynomial {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

/// Element of the field `Q(nu1, nu2, nu3)` in canonical form.
///
/// The fraction is reduced and the denominator is an integer-primitive
/// polynomial with positive leading coefficient (constant denominators are
/// always `1`), so two scalars are equal exactly when their fields are.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParamScalar {
    num: ParamPolynomial,
    den: ParamPolynomial,
}

impl Default for ParamScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl ParamScalar {
    pub fn zero() -> Self {
        Self {
            num: ParamPolynomial::zero(),
            den: ParamPolynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Self {
            num: ParamPolynomial::constant(r),
            den: ParamPolynomial::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(rat(n, d))
    }

    /// The parameter `nu_j` for `j` in `1..=3`.
    pub fn nu(j: usize) -> Self {
        assert!((1..=PARAM_COUNT).contains(&j), "parameter nu{j} out of range");
        Self::from_polynomial(ParamPolynomial::var(j - 1))
    }

    pub fn from_polynomial(p: ParamPolynomial) -> Self {
        Self {
            num: p,
            den: ParamPolynomial::one(),
        }
    }

    /// `num / den` brought into canonical form.
    pub fn from_fraction(num: ParamPolynomial, den: ParamPolynomial) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: ParamPolynomial, den: ParamPolynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.constant_value() {
            return Self::from_polynomial(num.scale(&c.recip()));
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let (unit, den) = den.unit_and_primitive();
        let num = if unit.is_one() {
            num
        } else {
            num.scale(&unit.recip())
        };
        if den.is_one() {
            Self::from_polynomial(num)
        } else {
            Self { num, den }
        }
    }

    pub fn numerator(&self) -> &ParamPolynomial {
        &self.num
    }

    pub fn denominator(&self) -> &ParamPolynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The value if this scalar does not depend on the parameters.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.num.is_zero() {
            return Some(Rational::zero());
        }
        if self.den.is_one() {
            self.num.constant_value().cloned()
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &ParamScalar) -> Result<Self, ScalarError> {
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact substitution `nu_i <- point[i]`.
    pub fn eval(&self, point: &ParamPoint) -> Result<Rational, ScalarError> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(ScalarError::VanishingDenominator {
                denominator: self.den.to_string(),
            });
        }
        Ok(self.num.eval(point) / d)
    }

    /// Substitution returning a constant scalar.
    pub fn specialize(&self, point: &ParamPoint) -> Result<Self, ScalarError> {
        self.eval(point).map(Self::from_rational)
    }

    /// Number of polynomial terms in numerator and denominator, a rough size measure.
    pub fn size(&self) -> usize {
        self.num.term_count() + if self.den.is_one() { 0 } else { self.den.term_count() }
    }

    /// Whether the rendering needs parentheses when used as a factor.
    pub fn is_simple_factor(&self) -> bool {
        self.den.is_one()
            && self.num.term_count() == 1
            && self.num.leading().is_some_and(|(_, c)| c.is_positive() && c.is_integer())
    }
}

impl fmt::Display for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamScalar({self})")
    }
}

impl From<Rational> for ParamScalar {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for ParamScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<ParamPolynomial> for ParamScalar {
    fn from(p: ParamPolynomial) -> Self {
        Self::from_polynomial(p)
    }
}

impl Add for &ParamScalar {
    type Output = ParamScalar;
    fn add(self, rhs: &ParamScalar) -> ParamScalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        match (self.den.is_one(), rhs.den.is_one()) {
            (true, true) => ParamScalar::from_polynomial(&self.num + &rhs.num),
            // a/b + c = (a + c b)/b is already in lowest terms.
            (false, true) => ParamScalar {
                num: &self.num + &(&rhs.num * &self.den),
                den: self.den.clone(),
            }
            .zero_checked(),
            (true, false) => ParamScalar {
                num: &rhs.num + &(&self.num * &rhs.den),
                den: rhs.den.clone(),
            }
            .zero_checked(),
            (false, false) if self.den == rhs.den => {
                ParamScalar::canonical(&self.num + &rhs.num, self.den.clone())
            }
            (false, false) => ParamScalar::canonical(
                &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
                &self.den * &rhs.den,
            ),
        }
    }
}

impl ParamScalar {
    fn zero_checked(self) -> Self {
        if self.num.is_zero() {
            Self::zero()
        } else {
            self
        }
    }
}

impl Sub for &ParamScalar {
    type Output = ParamScalar;
    fn sub(self, rhs: &ParamScalar) -> ParamScalar {
        self + &(-rhs)
    }
}

impl Neg for &ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        ParamScalar {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &ParamScalar {
    type Output = ParamScalar;
    fn mul(self, rhs: &ParamScalar) -> ParamScalar {
        if self.is_zero() || rhs.is_zero() {
            return ParamScalar::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return ParamScalar::from_polynomial(&self.num * &rhs.num);
        }
        if let Some(c) = self.as_rational() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_rational() {
            return self.scale(&c);
        }
        // Cross-cancel before multiplying so the result is already reduced.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let quo = |p: &ParamPolynomial, g: &ParamPolynomial| {
            if g.is_one() {
                p.clone()
            } else {
                p.div_exact(g).expect("gcd divides")
            }
        };
        let num = &quo(&self.num, &g1) * &quo(&rhs.num, &g2);
        let den = &quo(&self.den, &g2) * &quo(&rhs.den, &g1);
        let (unit, den) = den.unit_and_primitive();
        let num = num.scale(&unit.recip());
        if den.is_one() {
            ParamScalar::from_polynomial(num)
        } else {
            ParamScalar { num, den }
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<ParamScalar> for ParamScalar {
            type Output = ParamScalar;
            fn $m(self, rhs: ParamScalar) -> ParamScalar { (&self).$m(&rhs) }
        }
        impl $tr<&ParamScalar> for ParamScalar {
            type Output = ParamScalar;
            fn $m(self, rhs: &ParamScalar) -> ParamScalar { (&self).$m(rhs) }
        }
        impl $tr<ParamScalar> for &ParamScalar {
            type Output = ParamScalar;
            fn $m(self, rhs: ParamScalar) -> ParamScalar { self.$m(&rhs) }
        }
        impl $tr<ParamPolynomial> for ParamPolynomial {
            type Output = ParamPolynomial;
            fn $m(self, rhs: ParamPolynomial) -> ParamPolynomial { (&self).$m(&rhs) }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        -&self
    }
}

impl AddAssign<&ParamScalar> for ParamScalar {
    fn add_assign(&mut self, rhs: &ParamScalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&ParamScalar> for ParamScalar {
    fn sub_assign(&mut self, rhs: &ParamScalar) {
        *self = &*self - rhs;
    }
}

/// Sum of the listed parameters, e.g. `nu_sum(&[1, 2])` is `nu1 + nu2`.
pub fn nu_sum(indices: &[usize]) -> ParamScalar {
    indices
        .iter()
        .fold(ParamScalar::zero(), |acc, &j| acc + ParamScalar::nu(j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nu(j: usize) -> ParamScalar {
        ParamScalar::nu(j)
    }

    fn poly(j: usize) -> ParamPolynomial {
        ParamPolynomial::var(j - 1)
    }

    #[test]
    fn difference_of_squares_divides() {
        let a = &(&nu(1) * &nu(1)) - &(&nu(2) * &nu(2));
        let b = &nu(1) - &nu(2);
        assert_eq!(a.checked_div(&b).unwrap(), &nu(1) + &nu(2));
    }

    #[test]
    fn identities() {
        let a = &nu(1).scale(&int(2)) - &ParamScalar::from_ratio(1, 2);
        assert_eq!(&a + &ParamScalar::zero(), a);
        assert_eq!(&a * &ParamScalar::one(), a);
        assert_eq!(a.to_string(), "2*nu1 - 1/2");
    }

    #[test]
    fn division_by_zero_is_error() {
        assert_eq!(
            nu(1).checked_div(&ParamScalar::zero()),
            Err(ScalarError::DivisionByZero)
        );
        assert!(ParamScalar::from_fraction(poly(1), ParamPolynomial::zero()).is_err());
    }

    #[test]
    fn gcd_examples() {
        let sq = &(&poly(1) * &poly(1)) - &(&poly(2) * &poly(2));
        let s = &poly(1) + &poly(2);
        assert_eq!(sq.gcd(&s), s);
        assert_eq!(sq.gcd(&ParamPolynomial::one()), ParamPolynomial::one());
        assert_eq!((&poly(1) * &poly(2)).gcd(&(&poly(1) * &poly(3))), poly(1));
        assert_eq!(ParamPolynomial::zero().gcd(&s.scale(&int(-3))), s);
    }

    #[test]
    fn gcd_nontrivial_multivariate() {
        // (nu1 nu2 + nu3^2 - 1)(nu1 - 2 nu3) and (nu1 nu2 + nu3^2 - 1)(nu2 + nu3 + 1)^2
        let common = &(&(&poly(1) * &poly(2)) + &(&poly(3) * &poly(3))) - &ParamPolynomial::one();
        let a = &common * &(&poly(1) - &poly(3).scale(&int(2)));
        let l = &(&poly(2) + &poly(3)) + &ParamPolynomial::one();
        let b = &common * &(&l * &l);
        assert_eq!(a.gcd(&b), common.normalized());
    }

    #[test]
    fn eval_examples() {
        let a = &nu(1).scale(&int(2)) - &ParamScalar::from_ratio(1, 2);
        let p = [rat(1, 2), rat(7, 3), rat(0, 1)];
        assert_eq!(a.eval(&p).unwrap(), rat(1, 2));

        let n = 2;
        let k = 1;
        let e = &(&nu(1) + &nu(2)) + &ParamScalar::from_int(n - k);
        assert_eq!(e.eval(&[rat(1, 3), rat(1, 5), rat(9, 7)]).unwrap(), rat(23, 15));

        let bad = ParamScalar::one().checked_div(&(&nu(1) - &nu(2))).unwrap();
        assert!(matches!(
            bad.eval(&[rat(1, 2), rat(1, 2), rat(0, 1)]),
            Err(ScalarError::VanishingDenominator { .. })
        ));
    }

    #[test]
    fn canonical_denominator_is_integer_primitive() {
        let s = ParamScalar::one()
            .checked_div(&(&nu(1).scale(&rat(-2, 3)) + &ParamScalar::from_int(4)))
            .unwrap();
        // 1 / (-2/3 nu1 + 4) = (-3/2) / (nu1 - 6)
        assert_eq!(s.denominator(), &(&poly(1) - &ParamPolynomial::constant(int(6))));
        assert_eq!(s.numerator(), &ParamPolynomial::constant(rat(-3, 2)));
    }

    #[test]
    fn grlex_order_and_display() {
        let p = &(&(&poly(3) * &poly(3)) + &poly(1).scale(&int(-1))) + &(&poly(1) * &poly(2));
        assert_eq!(p.to_string(), "nu1*nu2 + nu3^2 - nu1");
        let s = ParamScalar::one().checked_div(&(&nu(1) + &nu(2))).unwrap();
        assert_eq!(s.to_string(), "(1)/(nu1 + nu2)");
    }
}
