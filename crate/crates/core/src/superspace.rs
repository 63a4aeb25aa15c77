//! The superspace `C[x1,x2,x3]<t1,t2,t3>` with its Z2 grading, and the
//! reduced ring `C[u,v]` of translation-invariant polynomials
//! (`u = x1 - x2`, `v = x2 - x3`).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use crate::scalars::{ParamPoint, ParamScalar, Rational, ScalarError};

/// Number of bosonic (and of fermionic) variables.
pub const VARS: usize = 3;

/// Subset of `{1,2,3}` naming a product of Grassmann factors in ascending order.
///
/// Bit `i` stands for index `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ThetaSet(u8);

impl ThetaSet {
    pub const EMPTY: ThetaSet = ThetaSet(0);
    pub const FULL: ThetaSet = ThetaSet(0b111);

    pub fn from_bits(bits: u8) -> Self {
        assert!(bits < 8, "theta set bits out of range");
        ThetaSet(bits)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn single(index: usize) -> Self {
        assert!((1..=VARS).contains(&index), "theta index {index} out of range");
        ThetaSet(1 << (index - 1))
    }

    /// Canonicalizes a product `t_{i1} t_{i2} ...` given in any order.
    ///
    /// Returns `None` when an index repeats (the product vanishes), else the
    /// sign `(-1)^inversions` and the sorted set.
    pub fn from_product(indices: &[usize]) -> Option<(i32, ThetaSet)> {
        let mut set = ThetaSet::EMPTY;
        let mut sign = 1;
        for &i in indices {
            let (s, merged) = set.merge(ThetaSet::single(i))?;
            sign *= s;
            set = merged;
        }
        Some((sign, set))
    }

    pub fn contains(self, index: usize) -> bool {
        self.0 & (1 << (index - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn parity(self) -> Parity {
        Parity::from_count(self.len())
    }

    pub fn indices(self) -> impl DoubleEndedIterator<Item = usize> {
        (1..=VARS).filter(move |&i| self.contains(i))
    }

    /// Number of elements of `self` strictly below `index`.
    pub fn count_below(self, index: usize) -> usize {
        (self.0 & ((1 << (index - 1)) - 1)).count_ones() as usize
    }

    /// Product `t_self * t_other` as `(sign, set)`, or `None` if they overlap.
    pub fn merge(self, other: ThetaSet) -> Option<(i32, ThetaSet)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let inversions: usize = other.indices().map(|j| self.len() - self.count_below(j)).sum();
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        Some((sign, ThetaSet(self.0 | other.0)))
    }

    /// Left derivative `d/dt_index` of `t_self`: `(sign, remaining)` or `None`.
    pub fn left_derivative(self, index: usize) -> Option<(i32, ThetaSet)> {
        if !self.contains(index) {
            return None;
        }
        let sign = if self.count_below(index).is_multiple_of(2) { 1 } else { -1 };
        Some((sign, ThetaSet(self.0 & !(1 << (index - 1)))))
    }

    pub(crate) fn write_factors(self, prefix: &str, out: &mut Vec<String>) {
        for i in self.indices() {
            out.push(format!("{prefix}{i}"));
        }
    }
}

/// Z2 degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_count(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

impl std::ops::Add for Parity {
    type Output = Parity;
    fn add(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// `x1^a1 x2^a2 x3^a3 * t_S` with `S` in canonical ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SuperMonomial {
    pub xexp: [u32; VARS],
    pub theta: ThetaSet,
}

impl SuperMonomial {
    pub fn new(xexp: [u32; VARS], theta: ThetaSet) -> Self {
        Self { xexp, theta }
    }

    pub fn x_degree(&self) -> u32 {
        self.xexp.iter().sum()
    }

    pub(crate) fn factors(&self) -> Vec<String> {
        let mut out = Vec::new();
        write_powers("x", &self.xexp, &mut out);
        self.theta.write_factors("t", &mut out);
        out
    }
}

pub(crate) fn write_powers(prefix: &str, exps: &[u32; VARS], out: &mut Vec<String>) {
    for (i, &e) in exps.iter().enumerate() {
        match e {
            0 => {}
            1 => out.push(format!("{prefix}{}", i + 1)),
            _ => out.push(format!("{prefix}{}^{e}", i + 1)),
        }
    }
}

/// Renders `coeff * factors` in the crate's plain-text style.
pub(crate) fn render_term(coeff: &ParamScalar, factors: &[String]) -> String {
    let word = factors.join("*");
    match (factors.is_empty(), coeff.is_one()) {
        (true, _) => format!("({coeff})"),
        (false, true) => word,
        (false, false) => format!("({coeff})*{word}"),
    }
}

pub(crate) fn insert_term<K: Ord>(map: &mut BTreeMap<K, ParamScalar>, key: K, coeff: ParamScalar) {
    if coeff.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(coeff);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = o.get() + &coeff;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

/// Element of the superspace: a finite sum of [`SuperMonomial`]s with
/// [`ParamScalar`] coefficients. No zero coefficient is stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SuperElement {
    terms: BTreeMap<SuperMonomial, ParamScalar>,
}

impl SuperElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(ParamScalar::one())
    }

    pub fn scalar(c: ParamScalar) -> Self {
        Self::monomial(SuperMonomial::default(), c)
    }

    pub fn monomial(m: SuperMonomial, c: ParamScalar) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn x(i: usize) -> Self {
        let mut xexp = [0; VARS];
        xexp[i - 1] = 1;
        Self::monomial(SuperMonomial::new(xexp, ThetaSet::EMPTY), ParamScalar::one())
    }

    pub fn theta(i: usize) -> Self {
        Self::monomial(
            SuperMonomial::new([0; VARS], ThetaSet::single(i)),
            ParamScalar::one(),
        )
    }

    /// `t_{i1} t_{i2} ...` in the given (arbitrary) order.
    pub fn theta_product(indices: &[usize]) -> Self {
        match ThetaSet::from_product(indices) {
            None => Self::zero(),
            Some((sign, set)) => Self::monomial(
                SuperMonomial::new([0; VARS], set),
                ParamScalar::from_int(sign as i64),
            ),
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (SuperMonomial, ParamScalar)>>(iter: I) -> Self {
        let mut e = Self::zero();
        for (m, c) in iter {
            e.add_term(m, c);
        }
        e
    }

    pub fn add_term(&mut self, m: SuperMonomial, c: ParamScalar) {
        insert_term(&mut self.terms, m, c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SuperMonomial, &ParamScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &SuperMonomial) -> ParamScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &ParamScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_terms(self.terms.iter().map(|(m, v)| (*m, v * c)))
    }

    /// Graded product; x's are central, thetas anticommute and square to zero.
    pub fn super_mul(&self, other: &SuperElement) -> SuperElement {
        let mut out = SuperElement::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let Some((sign, theta)) = ma.theta.merge(mb.theta) else {
                    continue;
                };
                let xexp = [
                    ma.xexp[0] + mb.xexp[0],
                    ma.xexp[1] + mb.xexp[1],
                    ma.xexp[2] + mb.xexp[2],
                ];
                let c = ca * cb;
                let c = if sign < 0 { -c } else { c };
                out.add_term(SuperMonomial::new(xexp, theta), c);
            }
        }
        out
    }

    /// Common parity of all monomials, or `None` if mixed. Zero is even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|m| m.theta.parity());
        let first = it.next().unwrap_or(Parity::Even);
        it.all(|p| p == first).then_some(first)
    }

    /// `(even, odd)` parts by number of Grassmann factors.
    pub fn grade_split(&self) -> (SuperElement, SuperElement) {
        let mut even = SuperElement::zero();
        let mut odd = SuperElement::zero();
        for (m, c) in &self.terms {
            let target = if m.theta.parity().is_odd() {
                &mut odd
            } else {
                &mut even
            };
            target.terms.insert(*m, c.clone());
        }
        (even, odd)
    }

    /// Terms of total x-degree `d`.
    pub fn x_homogeneous_component(&self, d: u32) -> SuperElement {
        SuperElement {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.x_degree() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Coefficient polynomial (in x) of one Grassmann sector.
    pub fn theta_sector(&self, theta: ThetaSet) -> BTreeMap<[u32; VARS], ParamScalar> {
        self.terms
            .iter()
            .filter(|(m, _)| m.theta == theta)
            .map(|(m, c)| (m.xexp, c.clone()))
            .collect()
    }

    pub fn try_map_scalars<E>(
        &self,
        mut f: impl FnMut(&ParamScalar) -> Result<ParamScalar, E>,
    ) -> Result<SuperElement, E> {
        let mut out = SuperElement::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, f(c)?);
        }
        Ok(out)
    }

    pub fn specialize(&self, point: &ParamPoint) -> Result<SuperElement, ScalarError> {
        self.try_map_scalars(|c| c.specialize(point))
    }
}

impl fmt::Display for SuperElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| render_term(c, &m.factors()))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for SuperElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SuperElement({self})")
    }
}

impl Add for &SuperElement {
    type Output = SuperElement;
    fn add(self, rhs: &SuperElement) -> SuperElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &SuperElement {
    type Output = SuperElement;
    fn sub(self, rhs: &SuperElement) -> SuperElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Neg for &SuperElement {
    type Output = SuperElement;
    fn neg(self) -> SuperElement {
        SuperElement {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Mul for &SuperElement {
    type Output = SuperElement;
    fn mul(self, rhs: &SuperElement) -> SuperElement {
        self.super_mul(rhs)
    }
}

/// Polynomial in `u, v` with [`ParamScalar`] coefficients; key `(i, j)` is `u^i v^j`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UVPolynomial {
    terms: BTreeMap<(u32, u32), ParamScalar>,
}

impl UVPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(ParamScalar::one())
    }

    pub fn constant(c: ParamScalar) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn u() -> Self {
        Self::monomial(1, 0, ParamScalar::one())
    }

    pub fn v() -> Self {
        Self::monomial(0, 1, ParamScalar::one())
    }

    pub fn monomial(i: u32, j: u32, c: ParamScalar) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), ParamScalar)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for ((i, j), c) in iter {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: ParamScalar) {
        insert_term(&mut self.terms, (i, j), c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &ParamScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, i: u32, j: u32) -> ParamScalar {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    /// `Some(d)` if every term has total degree `d`; zero is homogeneous of any degree.
    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|(i, j)| i + j == d)
    }

    pub fn scale(&self, c: &ParamScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_terms(self.terms.iter().map(|(k, v)| (*k, v * c)))
    }

    /// Multiplication by `u^a v^b`.
    pub fn shift(&self, a: u32, b: u32) -> Self {
        UVPolynomial {
            terms: self
                .terms
                .iter()
                .map(|((i, j), c)| ((i + a, j + b), c.clone()))
                .collect(),
        }
    }

    pub fn partial_u(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((i, _), _)| *i > 0)
                .map(|((i, j), c)| ((i - 1, *j), c.scale(&Rational::from_integer(BigInt::from(*i))))),
        )
    }

    pub fn partial_v(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((_, j), _)| *j > 0)
                .map(|((i, j), c)| ((*i, j - 1), c.scale(&Rational::from_integer(BigInt::from(*j))))),
        )
    }

    /// Substitutes `u <- x1 - x2`, `v <- x2 - x3` and expands.
    pub fn lift(&self) -> SuperElement {
        let u = &SuperElement::x(1) - &SuperElement::x(2);
        let v = &SuperElement::x(2) - &SuperElement::x(3);
        let max_i = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        let max_j = self.terms.keys().map(|k| k.1).max().unwrap_or(0);
        let powers = |base: &SuperElement, n: u32| {
            let mut out = vec![SuperElement::one()];
            for k in 1..=n as usize {
                let next = out[k - 1].super_mul(base);
                out.push(next);
            }
            out
        };
        let upow = powers(&u, max_i);
        let vpow = powers(&v, max_j);
        let mut out = SuperElement::zero();
        for ((i, j), c) in &self.terms {
            let t = upow[*i as usize].super_mul(&vpow[*j as usize]).scale(c);
            out = &out + &t;
        }
        out
    }

    pub fn try_map_scalars<E>(
        &self,
        mut f: impl FnMut(&ParamScalar) -> Result<ParamScalar, E>,
    ) -> Result<UVPolynomial, E> {
        let mut out = UVPolynomial::zero();
        for ((i, j), c) in &self.terms {
            out.add_term(*i, *j, f(c)?);
        }
        Ok(out)
    }
}

impl fmt::Display for UVPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((i, j), c)| {
                let mut factors = Vec::new();
                for (name, e) in [("u", *i), ("v", *j)] {
                    match e {
                        0 => {}
                        1 => factors.push(name.to_string()),
                        _ => factors.push(format!("{name}^{e}")),
                    }
                }
                render_term(c, &factors)
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for UVPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UVPolynomial({self})")
    }
}

impl Add for &UVPolynomial {
    type Output = UVPolynomial;
    fn add(self, rhs: &UVPolynomial) -> UVPolynomial {
        let mut out = self.clone();
        for ((i, j), c) in &rhs.terms {
            out.add_term(*i, *j, c.clone());
        }
        out
    }
}

impl Sub for &UVPolynomial {
    type Output = UVPolynomial;
    fn sub(self, rhs: &UVPolynomial) -> UVPolynomial {
        let mut out = self.clone();
        for ((i, j), c) in &rhs.terms {
            out.add_term(*i, *j, -c);
        }
        out
    }
}

impl Neg for &UVPolynomial {
    type Output = UVPolynomial;
    fn neg(self) -> UVPolynomial {
        UVPolynomial {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Mul for &UVPolynomial {
    type Output = UVPolynomial;
    fn mul(self, rhs: &UVPolynomial) -> UVPolynomial {
        let mut out = UVPolynomial::zero();
        for ((i, j), a) in &self.terms {
            for ((k, l), b) in &rhs.terms {
                out.add_term(i + k, j + l, a * b);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> SuperElement {
        SuperElement::x(i)
    }
    fn t(i: usize) -> SuperElement {
        SuperElement::theta(i)
    }

    #[test]
    fn grassmann_products() {
        assert_eq!(&t(1) * &t(2), SuperElement::theta_product(&[1, 2]));
        assert_eq!(&t(2) * &t(1), -&SuperElement::theta_product(&[1, 2]));
        assert!((&t(1) * &t(1)).is_zero());
        assert_eq!(
            SuperElement::theta_product(&[3, 1, 2]),
            SuperElement::theta_product(&[1, 2, 3])
        );
        assert_eq!(
            SuperElement::theta_product(&[2, 1, 3]),
            -&SuperElement::theta_product(&[1, 2, 3])
        );
    }

    #[test]
    fn left_derivative_signs() {
        let full = ThetaSet::FULL;
        assert_eq!(full.left_derivative(1), Some((1, ThetaSet::from_bits(0b110))));
        assert_eq!(full.left_derivative(2), Some((-1, ThetaSet::from_bits(0b101))));
        assert_eq!(full.left_derivative(3), Some((1, ThetaSet::from_bits(0b011))));
        assert_eq!(ThetaSet::single(2).left_derivative(1), None);
    }

    #[test]
    fn lift_examples() {
        assert_eq!(UVPolynomial::u().lift(), &x(1) - &x(2));
        assert_eq!(UVPolynomial::one().lift(), SuperElement::one());
        // (x1 - x2)(x2 - x3), expanded term by term
        let naive = &(&(&(&x(1) * &x(2)) - &(&x(1) * &x(3))) - &(&x(2) * &x(2))) + &(&x(2) * &x(3));
        let uv = &UVPolynomial::u() * &UVPolynomial::v();
        assert_eq!(uv.lift(), naive);
        assert_eq!(uv.lift().x_homogeneous_component(2), naive);
    }

    #[test]
    fn grade_split_examples() {
        let f = &t(1) + &(&t(1) * &t(2));
        let (e, o) = f.grade_split();
        assert_eq!(e, &t(1) * &t(2));
        assert_eq!(o, t(1));

        let g = &x(1) * &x(3);
        assert_eq!(g.grade_split(), (g.clone(), SuperElement::zero()));

        let h = SuperElement::theta_product(&[1, 2, 3]);
        assert_eq!(h.grade_split(), (SuperElement::zero(), h.clone()));
        assert_eq!(h.parity(), Some(Parity::Odd));
        assert_eq!(f.parity(), None);
    }

    #[test]
    fn homogeneous_components() {
        let f = &x(1) + &(&x(2) * &x(2));
        assert_eq!(f.x_homogeneous_component(2), &x(2) * &x(2));
        assert_eq!(t(1).x_homogeneous_component(0), t(1));
    }

    #[test]
    fn rendering() {
        let c = &ParamScalar::nu(1).scale(&crate::scalars::int(2)) - &ParamScalar::from_ratio(1, 2);
        let m = SuperMonomial::new([2, 0, 0], ThetaSet::from_bits(0b101));
        assert_eq!(
            SuperElement::monomial(m, c).to_string(),
            "(2*nu1 - 1/2)*x1^2*t1*t3"
        );
    }
}
