//! Normal-ordered super-Weyl algebra.
//!
//! Operators are finite sums of normal words `x^a t_S dx^b dt_T` (in that
//! order, Grassmann factors ascending) with [`ParamScalar`] coefficients.
//! Every constructor and every product reduces to this normal form, so an
//! operator is zero exactly when its term map is empty.
//!
//! `dt_i` is the left Grassmann derivative: it anticommutes `t_i` to the
//! front of a monomial and then removes it.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::scalars::{ParamPoint, ParamScalar, ScalarError};
use crate::superspace::{
    insert_term, render_term, write_powers, Parity, SuperElement, SuperMonomial, ThetaSet, VARS,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("super bracket needs parity-homogeneous operands")]
    MixedParity,
}

/// `x^xexp * t_theta * dx^dxexp * dt_dtheta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NormalWord {
    pub xexp: [u32; VARS],
    pub theta: ThetaSet,
    pub dxexp: [u32; VARS],
    pub dtheta: ThetaSet,
}

impl NormalWord {
    pub const IDENTITY: NormalWord = NormalWord {
        xexp: [0; VARS],
        theta: ThetaSet::EMPTY,
        dxexp: [0; VARS],
        dtheta: ThetaSet::EMPTY,
    };

    pub fn parity(&self) -> Parity {
        Parity::from_count(self.theta.len() + self.dtheta.len())
    }

    fn factors(&self) -> Vec<String> {
        let mut out = Vec::new();
        write_powers("x", &self.xexp, &mut out);
        self.theta.write_factors("t", &mut out);
        write_powers("dx", &self.dxexp, &mut out);
        self.dtheta.write_factors("dt", &mut out);
        out
    }

    /// Action on one monomial: `Some((sign * integer factor, result))` or `None` if it vanishes.
    fn act(&self, m: &SuperMonomial) -> Option<(i32, BigUint, SuperMonomial)> {
        let mut sign = 1;
        let mut theta = m.theta;
        for i in self.dtheta.indices().rev() {
            let (s, rest) = theta.left_derivative(i)?;
            sign *= s;
            theta = rest;
        }
        let mut factor = BigUint::one();
        let mut xexp = m.xexp;
        for (x, &d) in xexp.iter_mut().zip(&self.dxexp) {
            if d > *x {
                return None;
            }
            factor *= falling_factorial(*x, d);
            *x -= d;
        }
        let (s, theta) = self.theta.merge(theta)?;
        sign *= s;
        for (x, &a) in xexp.iter_mut().zip(&self.xexp) {
            *x += a;
        }
        Some((sign, factor, SuperMonomial::new(xexp, theta)))
    }
}

fn falling_factorial(n: u32, k: u32) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i))
}

fn binomial(n: u32, k: u32) -> BigUint {
    falling_factorial(n, k) / falling_factorial(k, k)
}

/// Normal-ordered product of two fermionic words `(t_S1 dt_T1)(t_S2 dt_T2)`.
type FermionTerm = (i32, ThetaSet, ThetaSet);

#[derive(Clone, Copy, PartialEq, Eq)]
enum Letter {
    Theta(usize),
    Dtheta(usize),
}

/// Reduces a sequence of Grassmann letters with the Clifford rewrite rules.
fn normal_order_letters(word: Vec<Letter>, coeff: i32, out: &mut BTreeMap<(ThetaSet, ThetaSet), i32>) {
    for p in 0..word.len().saturating_sub(1) {
        let (a, b) = (word[p], word[p + 1]);
        let swapped = |w: &[Letter]| {
            let mut w = w.to_vec();
            w.swap(p, p + 1);
            w
        };
        match (a, b) {
            (Letter::Theta(i), Letter::Theta(j)) | (Letter::Dtheta(i), Letter::Dtheta(j)) => {
                if i == j {
                    return;
                }
                if i > j {
                    normal_order_letters(swapped(&word), -coeff, out);
                    return;
                }
            }
            (Letter::Dtheta(i), Letter::Theta(j)) => {
                if i == j {
                    let mut contracted = word.clone();
                    contracted.drain(p..p + 2);
                    normal_order_letters(contracted, coeff, out);
                }
                normal_order_letters(swapped(&word), -coeff, out);
                return;
            }
            (Letter::Theta(_), Letter::Dtheta(_)) => {}
        }
    }
    let mut theta = 0u8;
    let mut dtheta = 0u8;
    for l in word {
        match l {
            Letter::Theta(i) => theta |= 1 << (i - 1),
            Letter::Dtheta(i) => dtheta |= 1 << (i - 1),
        }
    }
    let key = (ThetaSet::from_bits(theta), ThetaSet::from_bits(dtheta));
    let e = out.entry(key).or_insert(0);
    *e += coeff;
    if *e == 0 {
        out.remove(&key);
    }
}

fn fermion_table() -> &'static Vec<Vec<FermionTerm>> {
    static TABLE: OnceLock<Vec<Vec<FermionTerm>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(4096);
        for left in 0..64u8 {
            for right in 0..64u8 {
                let mut letters = Vec::new();
                for (bits, ctor) in [
                    (left & 7, Letter::Theta as fn(usize) -> Letter),
                    (left >> 3, Letter::Dtheta as fn(usize) -> Letter),
                    (right & 7, Letter::Theta as fn(usize) -> Letter),
                    (right >> 3, Letter::Dtheta as fn(usize) -> Letter),
                ] {
                    for i in ThetaSet::from_bits(bits).indices() {
                        letters.push(ctor(i));
                    }
                }
                let mut out = BTreeMap::new();
                normal_order_letters(letters, 1, &mut out);
                table.push(out.into_iter().map(|((s, t), c)| (c, s, t)).collect());
            }
        }
        table
    })
}

fn fermion_product(s1: ThetaSet, t1: ThetaSet, s2: ThetaSet, t2: ThetaSet) -> &'static [FermionTerm] {
    let left = (s1.bits() | (t1.bits() << 3)) as usize;
    let right = (s2.bits() | (t2.bits() << 3)) as usize;
    &fermion_table()[left * 64 + right]
}

/// Bosonic reordering `dx^b x^c = sum_k C(b,k) c!/(c-k)! x^(c-k) dx^(b-k)`, per variable.
fn boson_reorder(dx: &[u32; VARS], x: &[u32; VARS]) -> Vec<(BigUint, [u32; VARS], [u32; VARS])> {
    let mut out = vec![(BigUint::one(), [0u32; VARS], [0u32; VARS])];
    for v in 0..VARS {
        let (b, c) = (dx[v], x[v]);
        let mut next = Vec::new();
        for (coeff, xs, ds) in &out {
            for k in 0..=b.min(c) {
                let f = binomial(b, k) * falling_factorial(c, k);
                let mut xs = *xs;
                let mut ds = *ds;
                xs[v] = c - k;
                ds[v] = b - k;
                next.push((coeff * f, xs, ds));
            }
        }
        out = next;
    }
    out
}

/// Element of the super-Weyl algebra in normal form.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct OperatorElement {
    terms: BTreeMap<NormalWord, ParamScalar>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketKind {
    Commutator,
    Anticommutator,
    /// `ab - (-1)^{|a||b|} ba`.
    Super,
}

impl OperatorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::scalar(ParamScalar::one())
    }

    pub fn scalar(c: ParamScalar) -> Self {
        Self::word(NormalWord::IDENTITY, c)
    }

    pub fn word(w: NormalWord, c: ParamScalar) -> Self {
        let mut op = Self::zero();
        op.add_term(w, c);
        op
    }

    pub fn x(i: usize) -> Self {
        let mut w = NormalWord::IDENTITY;
        w.xexp[i - 1] = 1;
        Self::word(w, ParamScalar::one())
    }

    pub fn dx(i: usize) -> Self {
        let mut w = NormalWord::IDENTITY;
        w.dxexp[i - 1] = 1;
        Self::word(w, ParamScalar::one())
    }

    pub fn theta(i: usize) -> Self {
        let mut w = NormalWord::IDENTITY;
        w.theta = ThetaSet::single(i);
        Self::word(w, ParamScalar::one())
    }

    pub fn dtheta(i: usize) -> Self {
        let mut w = NormalWord::IDENTITY;
        w.dtheta = ThetaSet::single(i);
        Self::word(w, ParamScalar::one())
    }

    /// Multiplication operator by a superspace element.
    pub fn multiplication(f: &SuperElement) -> Self {
        let mut op = Self::zero();
        for (m, c) in f.terms() {
            let mut w = NormalWord::IDENTITY;
            w.xexp = m.xexp;
            w.theta = m.theta;
            op.add_term(w, c.clone());
        }
        op
    }

    pub fn from_terms<I: IntoIterator<Item = (NormalWord, ParamScalar)>>(iter: I) -> Self {
        let mut op = Self::zero();
        for (w, c) in iter {
            op.add_term(w, c);
        }
        op
    }

    pub fn add_term(&mut self, w: NormalWord, c: ParamScalar) {
        insert_term(&mut self.terms, w, c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NormalWord, &ParamScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &NormalWord) -> ParamScalar {
        self.terms.get(w).cloned().unwrap_or_default()
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
        Self::from_terms(self.terms.iter().map(|(w, v)| (*w, v * c)))
    }

    /// Common word parity, `None` if mixed. The zero operator is even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(NormalWord::parity);
        let first = it.next().unwrap_or(Parity::Even);
        it.all(|p| p == first).then_some(first)
    }

    /// Composition `self ∘ other`, reduced to normal form.
    pub fn compose(&self, other: &OperatorElement) -> OperatorElement {
        let mut acc: BTreeMap<NormalWord, ParamScalar> = BTreeMap::new();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let ferm = fermion_product(w1.theta, w1.dtheta, w2.theta, w2.dtheta);
                if ferm.is_empty() {
                    continue;
                }
                let c = c1 * c2;
                for (bcoef, xs, ds) in boson_reorder(&w1.dxexp, &w2.xexp) {
                    let mut xexp = xs;
                    let mut dxexp = ds;
                    for v in 0..VARS {
                        xexp[v] += w1.xexp[v];
                        dxexp[v] += w2.dxexp[v];
                    }
                    for &(sign, theta, dtheta) in ferm {
                        let k = BigRational::from_integer(bcoef.clone().into()) * BigRational::from_integer(sign.into());
                        let word = NormalWord {
                            xexp,
                            theta,
                            dxexp,
                            dtheta,
                        };
                        insert_term(&mut acc, word, c.scale(&k));
                    }
                }
            }
        }
        OperatorElement { terms: acc }
    }

    pub fn pow(&self, n: u32) -> OperatorElement {
        let mut acc = OperatorElement::identity();
        for _ in 0..n {
            acc = acc.compose(self);
        }
        acc
    }

    pub fn bracket(&self, other: &OperatorElement, kind: BracketKind) -> Result<OperatorElement, OperatorError> {
        let ab = self.compose(other);
        let ba = other.compose(self);
        Ok(match kind {
            BracketKind::Commutator => &ab - &ba,
            BracketKind::Anticommutator => &ab + &ba,
            BracketKind::Super => {
                let pa = self.parity().ok_or(OperatorError::MixedParity)?;
                let pb = other.parity().ok_or(OperatorError::MixedParity)?;
                if pa.is_odd() && pb.is_odd() {
                    &ab + &ba
                } else {
                    &ab - &ba
                }
            }
        })
    }

    pub fn commutator(&self, other: &OperatorElement) -> OperatorElement {
        &self.compose(other) - &other.compose(self)
    }

    pub fn anticommutator(&self, other: &OperatorElement) -> OperatorElement {
        &self.compose(other) + &other.compose(self)
    }

    /// Linear action on the superspace.
    pub fn apply(&self, f: &SuperElement) -> SuperElement {
        let mut out = SuperElement::zero();
        for (w, c) in &self.terms {
            for (m, d) in f.terms() {
                if let Some((sign, factor, monomial)) = w.act(m) {
                    let k = BigRational::from_integer(factor.into()) * BigRational::from_integer(sign.into());
                    out.add_term(monomial, (c * d).scale(&k));
                }
            }
        }
        out
    }

    pub fn try_map_scalars<E>(
        &self,
        mut f: impl FnMut(&ParamScalar) -> Result<ParamScalar, E>,
    ) -> Result<OperatorElement, E> {
        let mut out = OperatorElement::zero();
        for (w, c) in &self.terms {
            out.add_term(*w, f(c)?);
        }
        Ok(out)
    }

    pub fn specialize(&self, point: &ParamPoint) -> Result<OperatorElement, ScalarError> {
        self.try_map_scalars(|c| c.specialize(point))
    }
}

/// `true` iff the operator's normal form has no terms.
pub fn is_zero_operator(op: &OperatorElement) -> bool {
    op.is_zero()
}

impl fmt::Display for OperatorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| render_term(c, &w.factors()))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for OperatorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OperatorElement({self})")
    }
}

impl Add for &OperatorElement {
    type Output = OperatorElement;
    fn add(self, rhs: &OperatorElement) -> OperatorElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(*w, c.clone());
        }
        out
    }
}

impl Sub for &OperatorElement {
    type Output = OperatorElement;
    fn sub(self, rhs: &OperatorElement) -> OperatorElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(*w, -c);
        }
        out
    }
}

impl Neg for &OperatorElement {
    type Output = OperatorElement;
    fn neg(self) -> OperatorElement {
        OperatorElement {
            terms: self.terms.iter().map(|(w, c)| (*w, -c)).collect(),
        }
    }
}

impl Mul for &OperatorElement {
    type Output = OperatorElement;
    fn mul(self, rhs: &OperatorElement) -> OperatorElement {
        self.compose(rhs)
    }
}

impl Add for OperatorElement {
    type Output = OperatorElement;
    fn add(self, rhs: OperatorElement) -> OperatorElement {
        &self + &rhs
    }
}

impl Sub for OperatorElement {
    type Output = OperatorElement;
    fn sub(self, rhs: OperatorElement) -> OperatorElement {
        &self - &rhs
    }
}

impl Mul for OperatorElement {
    type Output = OperatorElement;
    fn mul(self, rhs: OperatorElement) -> OperatorElement {
        self.compose(&rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> OperatorElement {
        OperatorElement::x(i)
    }
    fn dx(i: usize) -> OperatorElement {
        OperatorElement::dx(i)
    }
    fn t(i: usize) -> OperatorElement {
        OperatorElement::theta(i)
    }
    fn dt(i: usize) -> OperatorElement {
        OperatorElement::dtheta(i)
    }
    fn one() -> OperatorElement {
        OperatorElement::identity()
    }

    #[test]
    fn rewrite_rules() {
        assert_eq!(&dt(1) * &t(1), &one() - &(&t(1) * &dt(1)));
        assert_eq!(&dx(1) * &x(1), &(&x(1) * &dx(1)) + &one());
        assert_eq!(&dt(1) * &t(2), -&(&t(2) * &dt(1)));
        assert_eq!(&t(2) * &t(1), -&(&t(1) * &t(2)));
        assert_eq!(&dt(3) * &dt(1), -&(&dt(1) * &dt(3)));
        assert!((&t(1) * &t(1)).is_zero());
        assert!((&dt(2) * &dt(2)).is_zero());
        assert_eq!(&dx(2) * &t(3), &t(3) * &dx(2));
    }

    #[test]
    fn aminus_squares_to_dx() {
        let am = &(&t(1) * &dx(1)) + &dt(1);
        assert_eq!(&am * &am, dx(1));
        assert!(is_zero_operator(&(&(&am * &am) - &dx(1))));
        assert!(!is_zero_operator(&am));
    }

    #[test]
    fn apply_basics() {
        let am = &(&t(1) * &dx(1)) + &dt(1);
        assert_eq!(am.apply(&SuperElement::theta(1)), SuperElement::one());
        assert_eq!(am.apply(&SuperElement::x(1)), SuperElement::theta(1));
        // dt2 (t1 t2) = -t1
        assert_eq!(
            dt(2).apply(&SuperElement::theta_product(&[1, 2])),
            -&SuperElement::theta(1)
        );
    }

    #[test]
    fn super_bracket_parity() {
        let even = &x(1) * &dx(1);
        let odd = t(1);
        assert_eq!(odd.bracket(&odd, BracketKind::Super).unwrap(), OperatorElement::zero());
        assert_eq!(
            dt(1).bracket(&t(1), BracketKind::Super).unwrap(),
            one()
        );
        assert_eq!(
            even.bracket(&x(1), BracketKind::Super).unwrap(),
            x(1)
        );
        let mixed = &t(1) + &one();
        assert_eq!(mixed.bracket(&odd, BracketKind::Super), Err(OperatorError::MixedParity));
        assert_eq!(mixed.parity(), None);
        assert_eq!((&t(1) * &dt(2)).parity(), Some(Parity::Even));
    }

    #[test]
    fn rendering() {
        let op = &(&(&x(1) * &t(2)) * &dx(1)) + &t(1).scale(&ParamScalar::nu(1).scale(&crate::scalars::int(2)));
        assert_eq!(op.to_string(), "(2*nu1)*t1 + x1*t2*dx1");
    }
}
