use proptest::prelude::*;

use superbi_core::kernel::{kernel_decompose, total_lowering, EmbeddingKind, KernelComponents};
use superbi_core::kernel::embed;
use superbi_core::scalars::{rat, ParamPoint};
use superbi_core::superspace::Parity;
use superbi_core::{
    NormalWord, OperatorElement, ParamPolynomial, ParamScalar, SuperElement, SuperMonomial,
    ThetaSet, UVPolynomial,
};

fn nu_monomial(exps: [u32; 3]) -> ParamScalar {
    (0..3).fold(ParamScalar::one(), |acc, j| &acc * &ParamScalar::nu(j + 1).pow(exps[j]))
}

fn polynomial() -> impl Strategy<Value = ParamScalar> {
    prop::collection::vec(([0u32..3, 0u32..2, 0u32..2], -4i64..=4), 0..4).prop_map(|terms| {
        terms.into_iter().fold(ParamScalar::zero(), |acc, (e, c)| {
            &acc + &nu_monomial(e).scale(&rat(c, 1))
        })
    })
}

fn nonzero_polynomial() -> impl Strategy<Value = ParamScalar> {
    polynomial().prop_filter("nonzero", |p| !p.is_zero())
}

fn scalar() -> impl Strategy<Value = ParamScalar> {
    (polynomial(), nonzero_polynomial()).prop_map(|(a, b)| a.checked_div(&b).unwrap())
}

fn point() -> impl Strategy<Value = ParamPoint> {
    [(-9i64..=9, 1i64..=5), (-9i64..=9, 1i64..=5), (-9i64..=9, 1i64..=5)]
        .prop_map(|p| p.map(|(n, d)| rat(n, d)))
}

fn small_coefficient() -> impl Strategy<Value = ParamScalar> {
    prop_oneof![
        (-3i64..=3).prop_filter("nonzero", |c| *c != 0).prop_map(ParamScalar::from_int),
        (1usize..=3).prop_map(ParamScalar::nu),
    ]
}

fn super_element() -> impl Strategy<Value = SuperElement> {
    prop::collection::vec(([0u32..3, 0u32..3, 0u32..3], 0u8..8, small_coefficient()), 0..4).prop_map(
        |terms| {
            SuperElement::from_terms(
                terms
                    .into_iter()
                    .map(|(x, t, c)| (SuperMonomial::new(x, ThetaSet::from_bits(t)), c)),
            )
        },
    )
}

fn homogeneous_element() -> impl Strategy<Value = SuperElement> {
    (super_element(), any::<bool>()).prop_map(|(f, odd)| {
        let (even, odd_part) = f.grade_split();
        if odd {
            odd_part
        } else {
            even
        }
    })
}

fn word() -> impl Strategy<Value = NormalWord> {
    ([0u32..3, 0u32..2, 0u32..2], 0u8..8, [0u32..2, 0u32..3, 0u32..2], 0u8..8).prop_map(
        |(xexp, t, dxexp, dt)| NormalWord {
            xexp,
            theta: ThetaSet::from_bits(t),
            dxexp,
            dtheta: ThetaSet::from_bits(dt),
        },
    )
}

fn operator() -> impl Strategy<Value = OperatorElement> {
    prop::collection::vec((word(), small_coefficient()), 0..3)
        .prop_map(OperatorElement::from_terms)
}

#[derive(Debug, Clone, Copy)]
enum Letter {
    X(usize),
    Dx(usize),
    T(usize),
    Dt(usize),
}

impl Letter {
    fn operator(self) -> OperatorElement {
        match self {
            Letter::X(i) => OperatorElement::x(i),
            Letter::Dx(i) => OperatorElement::dx(i),
            Letter::T(i) => OperatorElement::theta(i),
            Letter::Dt(i) => OperatorElement::dtheta(i),
        }
    }

    /// Direct action on a superspace element, without the operator algebra.
    fn act(self, f: &SuperElement) -> SuperElement {
        let mut out = SuperElement::zero();
        for (m, c) in f.terms() {
            match self {
                Letter::X(i) => {
                    let mut x = m.xexp;
                    x[i - 1] += 1;
                    out.add_term(SuperMonomial::new(x, m.theta), c.clone());
                }
                Letter::Dx(i) => {
                    let k = m.xexp[i - 1];
                    if k > 0 {
                        let mut x = m.xexp;
                        x[i - 1] -= 1;
                        out.add_term(SuperMonomial::new(x, m.theta), c.scale(&rat(i64::from(k), 1)));
                    }
                }
                Letter::T(i) => {
                    if !m.theta.contains(i) {
                        // moving t_i past the smaller thetas already present
                        let sign = if m.theta.count_below(i) % 2 == 0 { 1 } else { -1 };
                        let t = ThetaSet::from_bits(m.theta.bits() | (1 << (i - 1)));
                        out.add_term(SuperMonomial::new(m.xexp, t), c.scale(&rat(sign, 1)));
                    }
                }
                Letter::Dt(i) => {
                    if m.theta.contains(i) {
                        let sign = if m.theta.count_below(i) % 2 == 0 { 1 } else { -1 };
                        let t = ThetaSet::from_bits(m.theta.bits() & !(1 << (i - 1)));
                        out.add_term(SuperMonomial::new(m.xexp, t), c.scale(&rat(sign, 1)));
                    }
                }
            }
        }
        out
    }
}

fn letter() -> impl Strategy<Value = Letter> {
    (0usize..4, 1usize..=3).prop_map(|(kind, i)| match kind {
        0 => Letter::X(i),
        1 => Letter::Dx(i),
        2 => Letter::T(i),
        _ => Letter::Dt(i),
    })
}

fn uv_polynomial(max_degree: u32) -> impl Strategy<Value = UVPolynomial> {
    prop::collection::vec((0..=max_degree, 0..=max_degree, small_coefficient()), 0..5).prop_map(
        move |terms| {
            UVPolynomial::from_terms(
                terms
                    .into_iter()
                    .filter(|(i, j, _)| i + j <= max_degree)
                    .map(|(i, j, c)| ((i, j), c)),
            )
        },
    )
}

proptest! {
    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.recip().unwrap()).is_one());
        }
    }

    #[test]
    fn canonical_form_is_unique(num in polynomial(), den in nonzero_polynomial(), k in nonzero_polynomial()) {
        let plain = ParamScalar::from_fraction(num.numerator().clone(), den.numerator().clone()).unwrap();
        let scaled = ParamScalar::from_fraction(
            &num.numerator().clone() * k.numerator(),
            &den.numerator().clone() * k.numerator(),
        ).unwrap();
        prop_assert_eq!(&plain, &scaled);
        // constant denominators are absorbed, nonconstant ones are primitive
        let d = plain.denominator();
        prop_assert!(d.is_one() || !d.is_constant());
        let (_, primitive) = d.unit_and_primitive();
        prop_assert_eq!(&primitive, d);
    }

    #[test]
    fn gcd_extracts_common_factors(a in polynomial(), b in polynomial(), c in nonzero_polynomial()) {
        let (a, b, c) = (a.numerator().clone(), b.numerator().clone(), c.numerator().clone());
        let (ac, bc) = (&a * &c, &b * &c);
        let g = ac.gcd(&bc);
        if !ac.is_zero() {
            prop_assert!(ac.div_exact(&g).is_some());
        }
        if !bc.is_zero() {
            prop_assert!(bc.div_exact(&g).is_some());
        }
        prop_assert!(g.div_exact(&c).is_some());
        let (ga, gb) = (g.div_exact(&c).unwrap(), a.gcd(&b));
        prop_assert_eq!(ga.normalized(), gb);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in scalar(), b in scalar(), p in point()) {
        let (Ok(ea), Ok(eb)) = (a.eval(&p), b.eval(&p)) else { return Ok(()) };
        if let Ok(s) = (&a + &b).eval(&p) {
            prop_assert_eq!(s, &ea + &eb);
        }
        if let Ok(m) = (&a * &b).eval(&p) {
            prop_assert_eq!(m, &ea * &eb);
        }
    }

    #[test]
    fn super_mul_is_associative(a in super_element(), b in super_element(), c in super_element()) {
        prop_assert_eq!(a.super_mul(&b).super_mul(&c), a.super_mul(&b.super_mul(&c)));
    }

    #[test]
    fn super_mul_is_graded_commutative(a in homogeneous_element(), b in homogeneous_element()) {
        let ab = a.super_mul(&b);
        let ba = b.super_mul(&a);
        let both_odd = a.parity() == Some(Parity::Odd) && b.parity() == Some(Parity::Odd);
        if both_odd {
            prop_assert_eq!(ab, -&ba);
        } else {
            prop_assert_eq!(ab, ba);
        }
    }

    #[test]
    fn lift_is_a_ring_homomorphism(p in uv_polynomial(3), q in uv_polynomial(3)) {
        prop_assert_eq!((&p * &q).lift(), p.lift().super_mul(&q.lift()));
        prop_assert_eq!((&p + &q).lift(), &p.lift() + &q.lift());
    }

    #[test]
    fn lifts_are_translation_invariant(p in uv_polynomial(4)) {
        let d = &(&OperatorElement::dx(1) + &OperatorElement::dx(2)) + &OperatorElement::dx(3);
        prop_assert!(d.apply(&p.lift()).is_zero());
    }

    #[test]
    fn composition_is_associative(a in operator(), b in operator(), c in operator()) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn parity_is_additive(a in word(), b in word()) {
        let ab = OperatorElement::word(a, ParamScalar::one())
            .compose(&OperatorElement::word(b, ParamScalar::one()));
        if !ab.is_zero() {
            prop_assert_eq!(ab.parity(), Some(a.parity() + b.parity()));
        }
    }

    #[test]
    fn kernel_round_trip(
        h1 in uv_polynomial(6), h2 in uv_polynomial(6), g1 in uv_polynomial(6), g2 in uv_polynomial(6),
    ) {
        let comps = KernelComponents { h1, h2, g1, g2 };
        let f = comps.assemble();
        prop_assert!(total_lowering().apply(&f).is_zero());
        prop_assert_eq!(kernel_decompose(&f).unwrap(), comps);
    }

    #[test]
    fn embeddings_have_pure_parity(h in uv_polynomial(4)) {
        prop_assume!(!h.is_zero());
        for (kind, parity) in [
            (EmbeddingKind::O1, Parity::Odd),
            (EmbeddingKind::O2, Parity::Odd),
            (EmbeddingKind::E1, Parity::Even),
            (EmbeddingKind::E2, Parity::Even),
        ] {
            prop_assert_eq!(embed(kind, &h).parity(), Some(parity));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// A product of letters composed in the operator algebra acts like the
    /// letters applied one after another, right to left.
    #[test]
    fn composition_matches_letter_by_letter_action(
        letters in prop::collection::vec(letter(), 1..7),
        f in super_element(),
    ) {
        let composed = letters
            .iter()
            .fold(OperatorElement::identity(), |acc, l| acc.compose(&l.operator()));
        let direct = letters.iter().rev().fold(f.clone(), |g, l| l.act(&g));
        prop_assert_eq!(composed.apply(&f), direct);
    }

    #[test]
    fn composition_matches_sequential_application(a in operator(), b in operator(), f in super_element()) {
        prop_assert_eq!(a.compose(&b).apply(&f), a.apply(&b.apply(&f)));
    }
}

#[test]
fn scalar_polynomials_round_trip_through_display() {
    let p = ParamPolynomial::var(0);
    assert_eq!(ParamScalar::from_polynomial(p).to_string(), "nu1");
}
