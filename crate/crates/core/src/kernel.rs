//! The kernel of the total lowering operator `A-(123)`.
//!
//! Every kernel element is `O1(h1) + O2(h2) + E1(g1) + E2(g2)` for unique
//! `h1, h2, g1, g2` in `C[u,v]`; this module builds those embeddings, inverts
//! them, and checks how the intermediate Casimirs act through them.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::binomial;
use thiserror::Error;

use crate::osp::{GeneratorKind, Model, SubsetLabel};
use crate::report::{run_checks, Mismatches, PendingCheck, VerificationReport};
use crate::scalars::{int, ParamScalar};
use crate::superspace::{SuperElement, ThetaSet, UVPolynomial, VARS};
use crate::superweyl::OperatorElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("element is not annihilated by A-(123); image: {image}")]
    NotInKernel { image: String },
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EmbeddingKind {
    O1,
    O2,
    E1,
    E2,
}

impl EmbeddingKind {
    pub const ALL: [EmbeddingKind; 4] = [
        EmbeddingKind::O1,
        EmbeddingKind::O2,
        EmbeddingKind::E1,
        EmbeddingKind::E2,
    ];
}

impl fmt::Display for EmbeddingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

fn thetas(indices: &[usize]) -> SuperElement {
    SuperElement::theta_product(indices)
}

/// The linear maps `C[u,v] -> ker A-(123)`:
///
/// - `O1(h) = h (t1 - t2) + h_v t1 t2 t3`
/// - `O2(h) = h (t2 - t3) - h_u t1 t2 t3`
/// - `E1(h) = h (t1 t2 - t1 t3 + t2 t3)`
/// - `E2(h) = h + h_u t1 t2 + h_v t2 t3`
pub fn embed(kind: EmbeddingKind, h: &UVPolynomial) -> SuperElement {
    if h.is_zero() {
        return SuperElement::zero();
    }
    let lift = h.lift();
    match kind {
        EmbeddingKind::O1 => {
            &lift.super_mul(&(&thetas(&[1]) - &thetas(&[2])))
                + &h.partial_v().lift().super_mul(&thetas(&[1, 2, 3]))
        }
        EmbeddingKind::O2 => {
            &lift.super_mul(&(&thetas(&[2]) - &thetas(&[3])))
                - &h.partial_u().lift().super_mul(&thetas(&[1, 2, 3]))
        }
        EmbeddingKind::E1 => {
            lift.super_mul(&(&(&thetas(&[1, 2]) - &thetas(&[1, 3])) + &thetas(&[2, 3])))
        }
        EmbeddingKind::E2 => {
            &(&lift + &h.partial_u().lift().super_mul(&thetas(&[1, 2])))
                + &h.partial_v().lift().super_mul(&thetas(&[2, 3]))
        }
    }
}

/// The four `C[u,v]` components of a kernel element.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KernelComponents {
    pub h1: UVPolynomial,
    pub h2: UVPolynomial,
    pub g1: UVPolynomial,
    pub g2: UVPolynomial,
}

impl KernelComponents {
    pub fn get(&self, kind: EmbeddingKind) -> &UVPolynomial {
        match kind {
            EmbeddingKind::O1 => &self.h1,
            EmbeddingKind::O2 => &self.h2,
            EmbeddingKind::E1 => &self.g1,
            EmbeddingKind::E2 => &self.g2,
        }
    }

    /// `O1(h1) + O2(h2) + E1(g1) + E2(g2)`.
    pub fn assemble(&self) -> SuperElement {
        EmbeddingKind::ALL
            .iter()
            .fold(SuperElement::zero(), |acc, &k| &acc + &embed(k, self.get(k)))
    }
}

/// `A-(123) = sum_j (t_j dx_j + dt_j)`; independent of the parameters.
pub fn total_lowering() -> OperatorElement {
    Model::symbolic().aggregate(GeneratorKind::Aminus, SubsetLabel::FULL)
}

/// Rewrites a translation-invariant polynomial `G(x1,x2,x3) = H(x1-x2, x2-x3)`
/// as `H(u,v) = G(u+v, v, 0)`, then checks the lift reproduces `G`.
fn restrict_to_uv(sector: &BTreeMap<[u32; VARS], ParamScalar>) -> Result<UVPolynomial, KernelError> {
    let mut h = UVPolynomial::zero();
    for (xexp, c) in sector {
        if xexp[2] > 0 {
            continue;
        }
        // (u+v)^a1 v^a2
        let (a1, a2) = (xexp[0], xexp[1]);
        for i in 0..=a1 {
            let b = binomial(a1 as i64, i as i64);
            h.add_term(i, a1 - i + a2, c.scale(&int(b)));
        }
    }
    let lifted = h.lift();
    let original = SuperElement::from_terms(
        sector
            .iter()
            .map(|(x, c)| (crate::superspace::SuperMonomial::new(*x, ThetaSet::EMPTY), c.clone())),
    );
    if lifted != original {
        return Err(KernelError::InvariantViolation(format!(
            "theta sector is not a polynomial in u, v: {original}"
        )));
    }
    Ok(h)
}

/// Recovers `(h1, h2, g1, g2)` from a kernel element by reading off the
/// `t1`, `t3`, `1` and `t1 t3` sectors.
pub fn kernel_decompose(f: &SuperElement) -> Result<KernelComponents, KernelError> {
    let image = total_lowering().apply(f);
    if !image.is_zero() {
        return Err(KernelError::NotInKernel {
            image: image.to_string(),
        });
    }
    let sector = |bits: u8| f.theta_sector(ThetaSet::from_bits(bits));
    let neg = |p: UVPolynomial| -&p;
    let comps = KernelComponents {
        h1: restrict_to_uv(&sector(0b001))?,
        h2: neg(restrict_to_uv(&sector(0b100))?),
        g1: neg(restrict_to_uv(&sector(0b101))?),
        g2: restrict_to_uv(&sector(0b000))?,
    };
    if &comps.assemble() != f {
        return Err(KernelError::InvariantViolation(
            "kernel element differs from its reassembled components".into(),
        ));
    }
    Ok(comps)
}

/// Differential operator on `C[u,v]`: sum of `c * u^a v^b d_u^m d_v^n`.
#[derive(Debug, Clone, Default)]
pub struct UvOperator {
    terms: Vec<(ParamScalar, [u32; 4])>,
}

impl UvOperator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `c * u^a v^b d_u^m d_v^n`.
    pub fn term(mut self, c: ParamScalar, [a, b, m, n]: [u32; 4]) -> Self {
        self.terms.push((c, [a, b, m, n]));
        self
    }

    pub fn constant(c: ParamScalar) -> Self {
        Self::new().term(c, [0, 0, 0, 0])
    }

    pub fn negate(self) -> Self {
        Self {
            terms: self.terms.into_iter().map(|(c, e)| (-c, e)).collect(),
        }
    }

    pub fn apply(&self, h: &UVPolynomial) -> UVPolynomial {
        let mut out = UVPolynomial::zero();
        for (c, [a, b, m, n]) in &self.terms {
            let mut d = h.clone();
            for _ in 0..*m {
                d = d.partial_u();
            }
            for _ in 0..*n {
                d = d.partial_v();
            }
            out = &out + &d.shift(*a, *b).scale(c);
        }
        out
    }
}

/// One action identity: `Q(subset) ∘ source = sum_i target_i ∘ op_i`.
pub struct ActionIdentity {
    pub subset: SubsetLabel,
    pub source: EmbeddingKind,
    pub rhs: Vec<(EmbeddingKind, UvOperator)>,
    pub anchor: &'static str,
}

impl ActionIdentity {
    pub fn lhs(&self, model: &Model, h: &UVPolynomial) -> SuperElement {
        model.casimir(self.subset).apply(&embed(self.source, h))
    }

    pub fn rhs(&self, h: &UVPolynomial) -> SuperElement {
        self.rhs
            .iter()
            .fold(SuperElement::zero(), |acc, (k, op)| &acc + &embed(*k, &op.apply(h)))
    }
}

/// The twelve identities for `Q(12)`, `Q(13)`, `Q(23)` composed with `O1, O2, E1, E2`.
pub fn action_identities(model: &Model) -> Vec<ActionIdentity> {
    use EmbeddingKind::*;
    let c = |n: i64| ParamScalar::from_int(n);
    let half = ParamScalar::from_ratio(1, 2);
    let nu = |j| model.nu(j);
    let two = |s: ParamScalar| s.scale(&int(2));
    let four = |s: ParamScalar| s.scale(&int(4));
    let nu12 = model.nu_sum(&[1, 2]);
    let nu13 = model.nu_sum(&[1, 3]);
    let nu23 = model.nu_sum(&[2, 3]);
    let s = |d: &str| d.parse::<SubsetLabel>().expect("subset literal");
    // shorthands for u^a v^b d_u^m d_v^n
    const U_DU: [u32; 4] = [1, 0, 1, 0];
    const U_DV: [u32; 4] = [1, 0, 0, 1];
    const V_DU: [u32; 4] = [0, 1, 1, 0];
    const V_DV: [u32; 4] = [0, 1, 0, 1];
    const ONE: [u32; 4] = [0, 0, 0, 0];
    const U: [u32; 4] = [1, 0, 0, 0];
    const V: [u32; 4] = [0, 1, 0, 0];
    const DU: [u32; 4] = [0, 0, 1, 0];
    const DV: [u32; 4] = [0, 0, 0, 1];
    const U_DUDV: [u32; 4] = [1, 0, 1, 1];
    const V_DUDV: [u32; 4] = [0, 1, 1, 1];
    let op = UvOperator::new;

    vec![
        ActionIdentity {
            subset: s("12"),
            source: O1,
            anchor: "Q(12) O1 = -O1 (2u du + 2nu12 + 1/2) - O2 (2u dv)",
            rhs: vec![
                (O1, op().term(c(2), U_DU).term(&two(nu12.clone()) + &half, ONE).negate()),
                (O2, op().term(c(2), U_DV).negate()),
            ],
        },
        ActionIdentity {
            subset: s("12"),
            source: O2,
            anchor: "Q(12) O2 = O1 (2u du + 4nu1) + O2 (2u du + 2nu12 - 1/2)",
            rhs: vec![
                (O1, op().term(c(2), U_DU).term(four(nu(1)), ONE)),
                (O2, op().term(c(2), U_DU).term(&two(nu12.clone()) - &half, ONE)),
            ],
        },
        ActionIdentity {
            subset: s("12"),
            source: E1,
            anchor: "Q(12) E1 = -E1 (2u du + 2nu12 + 1/2) + E2 (2u)",
            rhs: vec![
                (E1, op().term(c(2), U_DU).term(&two(nu12.clone()) + &half, ONE).negate()),
                (E2, op().term(c(2), U)),
            ],
        },
        ActionIdentity {
            subset: s("12"),
            source: E2,
            anchor: "Q(12) E2 = -E1 (2u du dv + 4nu1 dv) + E2 (2u du + 2nu12 - 1/2)",
            rhs: vec![
                (E1, op().term(c(2), U_DUDV).term(four(nu(1)), DV).negate()),
                (E2, op().term(c(2), U_DU).term(&two(nu12.clone()) - &half, ONE)),
            ],
        },
        ActionIdentity {
            subset: s("13"),
            source: O1,
            anchor: "Q(13) O1 = O1 (2nu1 - 2nu3 - 1/2) - O2 (2(u+v) dv + 4nu3)",
            rhs: vec![
                (O1, UvOperator::constant(&(&two(nu(1)) - &two(nu(3))) - &half)),
                (O2, op().term(c(2), U_DV).term(c(2), V_DV).term(four(nu(3)), ONE).negate()),
            ],
        },
        ActionIdentity {
            subset: s("13"),
            source: O2,
            anchor: "Q(13) O2 = -O1 (2(u+v) du + 4nu1) - O2 (2nu1 - 2nu3 + 1/2)",
            rhs: vec![
                (O1, op().term(c(2), U_DU).term(c(2), V_DU).term(four(nu(1)), ONE).negate()),
                (O2, UvOperator::constant(&(&two(nu(1)) - &two(nu(3))) + &half).negate()),
            ],
        },
        ActionIdentity {
            subset: s("13"),
            source: E1,
            anchor: "Q(13) E1 = -E1 (2nu13 - 3/2) - E2 (2u + 2v)",
            rhs: vec![
                (E1, UvOperator::constant(&two(nu13.clone()) - &ParamScalar::from_ratio(3, 2)).negate()),
                (E2, op().term(c(2), U).term(c(2), V).negate()),
            ],
        },
        ActionIdentity {
            subset: s("13"),
            source: E2,
            anchor: "Q(13) E2 = -E1 (2(u+v) du dv + 4nu3 du + 4nu1 dv) + E2 (2nu13 - 1/2)",
            rhs: vec![
                (
                    E1,
                    op().term(c(2), U_DUDV)
                        .term(c(2), V_DUDV)
                        .term(four(nu(3)), DU)
                        .term(four(nu(1)), DV)
                        .negate(),
                ),
                (E2, UvOperator::constant(&two(nu13) - &half)),
            ],
        },
        ActionIdentity {
            subset: s("23"),
            source: O1,
            anchor: "Q(23) O1 = O1 (2v dv + 2nu23 - 1/2) + O2 (2v dv + 4nu3)",
            rhs: vec![
                (O1, op().term(c(2), V_DV).term(&two(nu23.clone()) - &half, ONE)),
                (O2, op().term(c(2), V_DV).term(four(nu(3)), ONE)),
            ],
        },
        ActionIdentity {
            subset: s("23"),
            source: O2,
            anchor: "Q(23) O2 = -O1 (2v du) - O2 (2v dv + 2nu23 + 1/2)",
            rhs: vec![
                (O1, op().term(c(2), V_DU).negate()),
                (O2, op().term(c(2), V_DV).term(&two(nu23.clone()) + &half, ONE).negate()),
            ],
        },
        ActionIdentity {
            subset: s("23"),
            source: E1,
            anchor: "Q(23) E1 = -E1 (2v dv + 2nu23 + 1/2) + E2 (2v)",
            rhs: vec![
                (E1, op().term(c(2), V_DV).term(&two(nu23.clone()) + &half, ONE).negate()),
                (E2, op().term(c(2), V)),
            ],
        },
        ActionIdentity {
            subset: s("23"),
            source: E2,
            anchor: "Q(23) E2 = -E1 (2v du dv + 4nu3 du) + E2 (2v dv + 2nu23 - 1/2)",
            rhs: vec![
                (E1, op().term(c(2), V_DUDV).term(four(nu(3)), DU).negate()),
                (E2, op().term(c(2), V_DV).term(&two(nu23) - &half, ONE)),
            ],
        },
    ]
}

/// Checks every action identity on all monomials `u^a v^b` with `a + b <= max_degree`.
pub fn check_action_identities(model: &Model, max_degree: u32) -> VerificationReport {
    let identities = action_identities(model);
    let mut checks = Vec::new();
    for (idx, identity) in identities.into_iter().enumerate() {
        checks.push(PendingCheck::new(
            format!("{:02}-Q{}-{}", idx + 1, identity.subset, identity.source),
            identity.anchor,
            move || {
                let mut m = Mismatches::default();
                for d in 0..=max_degree {
                    for a in 0..=d {
                        let h = UVPolynomial::monomial(a, d - a, ParamScalar::one());
                        let residual = &identity.lhs(model, &h) - &identity.rhs(&h);
                        m.merge(&format!("u^{a} v^{}", d - a), &residual);
                    }
                }
                m
            },
        ));
    }
    run_checks("actions", model.mode().clone(), checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u() -> UVPolynomial {
        UVPolynomial::u()
    }
    fn v() -> UVPolynomial {
        UVPolynomial::v()
    }
    fn t(i: usize) -> SuperElement {
        SuperElement::theta(i)
    }
    fn x(i: usize) -> SuperElement {
        SuperElement::x(i)
    }

    #[test]
    fn embedding_examples() {
        assert_eq!(embed(EmbeddingKind::O1, &UVPolynomial::one()), &t(1) - &t(2));
        assert_eq!(
            embed(EmbeddingKind::E2, &u()),
            &(&x(1) - &x(2)) + &SuperElement::theta_product(&[1, 2])
        );
        let e1 = &(&SuperElement::theta_product(&[1, 2]) - &SuperElement::theta_product(&[1, 3]))
            + &SuperElement::theta_product(&[2, 3]);
        assert_eq!(embed(EmbeddingKind::E1, &v()), (&x(2) - &x(3)).super_mul(&e1));
    }

    #[test]
    fn embeddings_land_in_kernel() {
        let am = total_lowering();
        let h = &(&(&u() * &u()) * &v()) + &v().scale(&ParamScalar::nu(3));
        for k in EmbeddingKind::ALL {
            assert!(am.apply(&embed(k, &h)).is_zero(), "{k}");
        }
    }

    #[test]
    fn decompose_examples() {
        let c = kernel_decompose(&(&t(1) - &t(2))).unwrap();
        assert_eq!(c.h1, UVPolynomial::one());
        assert!(c.h2.is_zero() && c.g1.is_zero() && c.g2.is_zero());

        let f = &(&x(1) - &x(2)) + &SuperElement::theta_product(&[1, 2]);
        let c = kernel_decompose(&f).unwrap();
        assert_eq!(c.g2, u());
        assert!(c.h1.is_zero() && c.h2.is_zero() && c.g1.is_zero());

        match kernel_decompose(&t(1)) {
            Err(KernelError::NotInKernel { image }) => assert_eq!(image, "(1)"),
            other => panic!("expected NotInKernel, got {other:?}"),
        }
    }

    #[test]
    fn action_spot_checks() {
        let model = Model::symbolic();
        let ids = action_identities(&model);
        // Q(12) E1 at h = 1 is -(2nu12 + 1/2) E1(1) + E2(2u)
        let id = &ids[2];
        let one = UVPolynomial::one();
        let expected = &embed(EmbeddingKind::E1, &one).scale(
            &-&(&model.nu_sum(&[1, 2]).scale(&int(2)) + &ParamScalar::from_ratio(1, 2)),
        ) + &embed(EmbeddingKind::E2, &u().scale(&ParamScalar::from_int(2)));
        assert_eq!(id.lhs(&model, &one), expected);
        assert_eq!(id.rhs(&one), expected);
    }
}
