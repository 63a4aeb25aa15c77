//! The osp(1|2) superspace realization, its three commuting copies, the
//! intermediate Casimirs `Q(S)` and the Bannai-Ito relations they satisfy.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::report::{run_checks, Mismatches, ParamMode, PendingCheck, VerificationReport};
use crate::scalars::{ParamPoint, ParamScalar, ScalarError};
use crate::superweyl::OperatorElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("copy index {0} is not in 1..=3")]
    CopyOutOfRange(usize),
    #[error("subset `{0}` must be a nonempty set of distinct digits from 1..=3")]
    BadSubset(String),
}

/// One of the three tensor factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CopyIndex(usize);

impl CopyIndex {
    pub const ALL: [CopyIndex; 3] = [CopyIndex(1), CopyIndex(2), CopyIndex(3)];

    pub fn new(j: usize) -> Result<Self, LabelError> {
        if (1..=3).contains(&j) {
            Ok(CopyIndex(j))
        } else {
            Err(LabelError::CopyOutOfRange(j))
        }
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl fmt::Display for CopyIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Nonempty subset of `{1,2,3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetLabel(u8);

impl SubsetLabel {
    pub const FULL: SubsetLabel = SubsetLabel(0b111);

    pub fn from_bits(bits: u8) -> Result<Self, LabelError> {
        if bits == 0 || bits > 7 {
            return Err(LabelError::BadSubset(format!("bits {bits}")));
        }
        Ok(SubsetLabel(bits))
    }

    pub fn from_indices(indices: &[usize]) -> Result<Self, LabelError> {
        let mut bits = 0u8;
        for &i in indices {
            let bad = || LabelError::BadSubset(indices.iter().map(|i| i.to_string()).collect());
            if !(1..=3).contains(&i) || bits & (1 << (i - 1)) != 0 {
                return Err(bad());
            }
            bits |= 1 << (i - 1);
        }
        Self::from_bits(bits)
    }

    pub fn single(j: CopyIndex) -> Self {
        SubsetLabel(1 << (j.0 - 1))
    }

    /// All seven nonempty subsets, singletons first.
    pub fn all() -> Vec<SubsetLabel> {
        let mut v: Vec<_> = (1..8u8).map(SubsetLabel).collect();
        v.sort_by_key(|s| (s.len(), s.0));
        v
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn copies(self) -> impl Iterator<Item = CopyIndex> {
        CopyIndex::ALL.into_iter().filter(move |j| self.contains(*j))
    }

    pub fn contains(self, j: CopyIndex) -> bool {
        self.0 & (1 << (j.0 - 1)) != 0
    }

    pub fn is_subset_of(self, other: SubsetLabel) -> bool {
        self.0 & !other.0 == 0
    }
}

impl FromStr for SubsetLabel {
    type Err = LabelError;

    fn from_str(s: &str) -> Result<Self, LabelError> {
        let digits: Option<Vec<usize>> = s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect();
        match digits {
            Some(d) if !d.is_empty() => {
                Self::from_indices(&d).map_err(|_| LabelError::BadSubset(s.to_string()))
            }
            _ => Err(LabelError::BadSubset(s.to_string())),
        }
    }
}

impl fmt::Display for SubsetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in self.copies() {
            write!(f, "{j}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    Aminus,
    Azero,
    Aplus,
    P,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 4] = [
        GeneratorKind::Azero,
        GeneratorKind::Aplus,
        GeneratorKind::Aminus,
        GeneratorKind::P,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::Aminus => "A-",
            GeneratorKind::Azero => "A0",
            GeneratorKind::Aplus => "A+",
            GeneratorKind::P => "P",
        }
    }
}

/// Builds generators and Casimirs, with the parameters either kept symbolic
/// or bound to a rational point.
///
/// Casimirs are expanded once and cached.
pub struct Model {
    mode: ParamMode,
    casimirs: [OnceLock<OperatorElement>; 7],
}

impl Model {
    pub fn symbolic() -> Self {
        Self::with_mode(ParamMode::Symbolic)
    }

    pub fn evaluated(point: ParamPoint) -> Self {
        Self::with_mode(ParamMode::Evaluated(point))
    }

    pub fn with_mode(mode: ParamMode) -> Self {
        Self {
            mode,
            casimirs: Default::default(),
        }
    }

    pub fn mode(&self) -> &ParamMode {
        &self.mode
    }

    /// `nu_j`, or its bound value.
    pub fn nu(&self, j: usize) -> ParamScalar {
        match &self.mode {
            ParamMode::Symbolic => ParamScalar::nu(j),
            ParamMode::Evaluated(p) => ParamScalar::from_rational(p[j - 1].clone()),
        }
    }

    /// Sum of the listed `nu`s.
    pub fn nu_sum(&self, indices: &[usize]) -> ParamScalar {
        indices.iter().fold(ParamScalar::zero(), |acc, &j| acc + self.nu(j))
    }

    /// Binds a symbolic expression to the model's point (identity when symbolic).
    pub fn specialize(&self, s: &ParamScalar) -> Result<ParamScalar, ScalarError> {
        match &self.mode {
            ParamMode::Symbolic => Ok(s.clone()),
            ParamMode::Evaluated(p) => s.specialize(p),
        }
    }

    pub fn generator(&self, kind: GeneratorKind, j: CopyIndex) -> OperatorElement {
        let i = j.get();
        let x = OperatorElement::x(i);
        let t = OperatorElement::theta(i);
        let dx = OperatorElement::dx(i);
        let dt = OperatorElement::dtheta(i);
        let two_nu = self.nu(i).scale(&crate::scalars::int(2));
        match kind {
            GeneratorKind::Aminus => &(&t * &dx) + &dt,
            GeneratorKind::Azero => {
                let a = (&x * &dx).scale(&ParamScalar::from_int(2));
                &(&a + &(&t * &dt)) + &OperatorElement::scalar(two_nu)
            }
            GeneratorKind::Aplus => {
                let a = &(&x * &t) * &dx;
                &(&a + &(&x * &dt)) + &t.scale(&two_nu)
            }
            GeneratorKind::P => &OperatorElement::identity() - &(&t * &dt).scale(&ParamScalar::from_int(2)),
        }
    }

    /// Sum over `S` for the `A` generators, ordered product for `P`.
    pub fn aggregate(&self, kind: GeneratorKind, s: SubsetLabel) -> OperatorElement {
        match kind {
            GeneratorKind::P => s
                .copies()
                .fold(OperatorElement::identity(), |acc, j| acc.compose(&self.generator(kind, j))),
            _ => s
                .copies()
                .fold(OperatorElement::zero(), |acc, j| &acc + &self.generator(kind, j)),
        }
    }

    /// `Q(S) = (A0(S) - 2 A+(S) A-(S) - 1/2) P(S)`, fully normal-ordered.
    pub fn casimir(&self, s: SubsetLabel) -> &OperatorElement {
        self.casimirs[s.bits() as usize - 1].get_or_init(|| {
            casimir_from(
                &self.aggregate(GeneratorKind::Azero, s),
                &self.aggregate(GeneratorKind::Aplus, s),
                &self.aggregate(GeneratorKind::Aminus, s),
                &self.aggregate(GeneratorKind::P, s),
            )
        })
    }

    /// `2 nu_j - 1/2`, the value of a single-copy Casimir.
    pub fn casimir_value(&self, j: CopyIndex) -> ParamScalar {
        &self.nu(j.get()).scale(&crate::scalars::int(2)) - &ParamScalar::from_ratio(1, 2)
    }

    fn q(&self, digits: &str) -> &OperatorElement {
        self.casimir(digits.parse().expect("valid subset literal"))
    }
}

fn casimir_from(
    a0: &OperatorElement,
    ap: &OperatorElement,
    am: &OperatorElement,
    p: &OperatorElement,
) -> OperatorElement {
    let inner = &(a0 - &ap.compose(am).scale(&ParamScalar::from_int(2)))
        - &OperatorElement::scalar(ParamScalar::from_ratio(1, 2));
    inner.compose(p)
}

fn op_scalar(c: ParamScalar) -> OperatorElement {
    OperatorElement::scalar(c)
}

/// Per-copy relations, Casimir centrality and value, and the cross-copy relations.
pub fn check_fundamental_relations(model: &Model) -> VerificationReport {
    check_fundamental_relations_with(model, &|kind, j| model.generator(kind, j))
}

/// As [`check_fundamental_relations`] but with caller-supplied generators,
/// which lets the relation battery be pointed at modified realizations.
pub fn check_fundamental_relations_with(
    model: &Model,
    generators: &(dyn Fn(GeneratorKind, CopyIndex) -> OperatorElement + Sync),
) -> VerificationReport {
    let mut checks = Vec::new();
    for j in CopyIndex::ALL {
        let a0 = generators(GeneratorKind::Azero, j);
        let ap = generators(GeneratorKind::Aplus, j);
        let am = generators(GeneratorKind::Aminus, j);
        let p = generators(GeneratorKind::P, j);
        let dx = OperatorElement::dx(j.get());
        let q = casimir_from(&a0, &ap, &am, &p);
        let one = OperatorElement::identity();
        let value = op_scalar(model.casimir_value(j));

        type Rel = (&'static str, &'static str, OperatorElement);
        let relations: Vec<Rel> = vec![
            ("01", "[A0,A+] = A+", &a0.commutator(&ap) - &ap),
            ("02", "[A0,A-] = -A-", &a0.commutator(&am) + &am),
            ("03", "{A+,A-} = A0", &ap.anticommutator(&am) - &a0),
            ("04", "A-^2 = dx", &am.compose(&am) - &dx),
            ("05", "P^2 = 1", &p.compose(&p) - &one),
            ("06", "[P,A0] = 0", p.commutator(&a0)),
            ("07", "{P,A+} = 0", p.anticommutator(&ap)),
            ("08", "{P,A-} = 0", p.anticommutator(&am)),
        ];
        let casimir: Vec<Rel> = vec![
            ("1", "[Q,A0] = 0", q.commutator(&a0)),
            ("2", "[Q,A+] = 0", q.commutator(&ap)),
            ("3", "[Q,A-] = 0", q.commutator(&am)),
            ("4", "[Q,P] = 0", q.commutator(&p)),
            ("5", "Q = 2nu - 1/2", &q - &value),
        ];
        for (n, anchor, residual) in relations {
            checks.push(PendingCheck::new(
                format!("copy{j}/{n}"),
                anchor.replace("A0", &format!("A0({j})")).replace("A+", &format!("A+({j})")).replace("A-", &format!("A-({j})")).replace('P', &format!("P({j})")),
                move || residual.clone(),
            ));
        }
        for (n, anchor, residual) in casimir {
            checks.push(PendingCheck::new(
                format!("copy{j}/casimir{n}"),
                format!("{anchor} (copy {j})"),
                move || residual.clone(),
            ));
        }
    }

    for (i, j) in [(1, 2), (1, 3), (2, 3)] {
        let (i, j) = (CopyIndex(i), CopyIndex(j));
        let g = |k, c| generators(k, c);
        let families: Vec<(&str, &str, Vec<OperatorElement>)> = vec![
            (
                "1",
                "[A0(i),A0(j)] = 0",
                vec![g(GeneratorKind::Azero, i).commutator(&g(GeneratorKind::Azero, j))],
            ),
            (
                "2",
                "[A0(i),A±(j)] = 0",
                [(i, j), (j, i)]
                    .into_iter()
                    .flat_map(|(a, b)| {
                        [GeneratorKind::Aplus, GeneratorKind::Aminus]
                            .into_iter()
                            .map(move |k| (a, b, k))
                    })
                    .map(|(a, b, k)| g(GeneratorKind::Azero, a).commutator(&g(k, b)))
                    .collect(),
            ),
            (
                "3",
                "{A±(i),A±(j)} = 0",
                [GeneratorKind::Aplus, GeneratorKind::Aminus]
                    .into_iter()
                    .map(|k| g(k, i).anticommutator(&g(k, j)))
                    .collect(),
            ),
            (
                "4",
                "{A±(i),A∓(j)} = 0",
                [
                    (GeneratorKind::Aplus, GeneratorKind::Aminus),
                    (GeneratorKind::Aminus, GeneratorKind::Aplus),
                ]
                .into_iter()
                .map(|(a, b)| g(a, i).anticommutator(&g(b, j)))
                .collect(),
            ),
        ];
        for (n, anchor, residuals) in families {
            let anchor = anchor.replace("(i)", &format!("({i})")).replace("(j)", &format!("({j})"));
            checks.push(PendingCheck::new(format!("pair{i}{j}/{n}"), anchor, move || {
                let mut m = Mismatches::default();
                for (k, r) in residuals.iter().enumerate() {
                    m.merge(&format!("variant {k}"), r);
                }
                m
            }));
        }
    }
    run_checks("osp", model.mode().clone(), checks)
}

/// `[Q(S), X(T)] = 0` for every `S ⊆ T` and `X ∈ {A0, A+, A-, P}`.
pub fn check_centrality(model: &Model) -> VerificationReport {
    let mut checks = Vec::new();
    for t in SubsetLabel::all() {
        for s in SubsetLabel::all() {
            if !s.is_subset_of(t) {
                continue;
            }
            for kind in GeneratorKind::ALL {
                checks.push(PendingCheck::new(
                    format!("S{s}-T{t}-{}", kind.name()),
                    format!("[Q({s}),{}({t})] = 0", kind.name()),
                    move || model.casimir(s).commutator(&model.aggregate(kind, t)),
                ));
            }
        }
    }
    run_checks("centrality", model.mode().clone(), checks)
}

/// The three anticommutation relations of the Bannai-Ito algebra and the
/// sum-of-squares relation between the Casimirs.
pub fn check_bannai_ito(model: &Model) -> VerificationReport {
    let two = ParamScalar::from_int(2);
    // {Q(a),Q(b)} = Q(c) + 2 Q(x) Q(y) + 2 Q(z) Q(123)
    let relation = move |a: &'static str, b: &'static str, c: &'static str, x: &'static str, y: &'static str, z: &'static str| {
        let two = two.clone();
        move || {
            let lhs = model.q(a).anticommutator(model.q(b));
            let rhs = &(model.q(c) + &model.q(x).compose(model.q(y)).scale(&two))
                + &model.q(z).compose(model.q("123")).scale(&two);
            &lhs - &rhs
        }
    };
    let checks = vec![
        PendingCheck::new(
            "1",
            "{Q(12),Q(23)} = Q(13) + 2Q(1)Q(3) + 2Q(2)Q(123)",
            relation("12", "23", "13", "1", "3", "2"),
        ),
        PendingCheck::new(
            "2",
            "{Q(12),Q(13)} = Q(23) + 2Q(2)Q(3) + 2Q(1)Q(123)",
            relation("12", "13", "23", "2", "3", "1"),
        ),
        PendingCheck::new(
            "3",
            "{Q(13),Q(23)} = Q(12) + 2Q(1)Q(2) + 2Q(3)Q(123)",
            relation("13", "23", "12", "1", "2", "3"),
        ),
        PendingCheck::new(
            "4",
            "Q(12)^2 + Q(13)^2 + Q(23)^2 + 1/4 = Q(123)^2 + Q(1)^2 + Q(2)^2 + Q(3)^2",
            move || {
                let sq = |d: &str| model.q(d).compose(model.q(d));
                let lhs = &(&(&sq("12") + &sq("13")) + &sq("23"))
                    + &op_scalar(ParamScalar::from_ratio(1, 4));
                let rhs = &(&(&sq("123") + &sq("1")) + &sq("2")) + &sq("3");
                &lhs - &rhs
            },
        ),
    ];
    run_checks("bannai-ito", model.mode().clone(), checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn j(i: usize) -> CopyIndex {
        CopyIndex::new(i).unwrap()
    }

    #[test]
    fn labels() {
        assert!(CopyIndex::new(0).is_err());
        assert!(CopyIndex::new(4).is_err());
        assert_eq!("123".parse::<SubsetLabel>().unwrap(), SubsetLabel::FULL);
        assert_eq!("31".parse::<SubsetLabel>().unwrap().to_string(), "13");
        assert!("11".parse::<SubsetLabel>().is_err());
        assert!("4".parse::<SubsetLabel>().is_err());
        assert!("".parse::<SubsetLabel>().is_err());
        assert_eq!(SubsetLabel::all().len(), 7);
    }

    #[test]
    fn generator_examples() {
        let m = Model::symbolic();
        let am = m.generator(GeneratorKind::Aminus, j(1));
        assert_eq!(am, &(&OperatorElement::theta(1) * &OperatorElement::dx(1)) + &OperatorElement::dtheta(1));
        let p = m.generator(GeneratorKind::P, j(2));
        assert_eq!(
            p,
            &OperatorElement::identity() - &(&OperatorElement::theta(2) * &OperatorElement::dtheta(2)).scale(&ParamScalar::from_int(2))
        );
        let a0 = m.generator(GeneratorKind::Azero, j(1));
        assert_eq!(
            a0.apply(&crate::superspace::SuperElement::one()),
            crate::superspace::SuperElement::scalar(ParamScalar::nu(1).scale(&crate::scalars::int(2)))
        );
    }

    #[test]
    fn aggregate_examples() {
        let m = Model::symbolic();
        let full = m.aggregate(GeneratorKind::Aminus, SubsetLabel::FULL);
        let manual = CopyIndex::ALL
            .iter()
            .fold(OperatorElement::zero(), |acc, &c| &acc + &m.generator(GeneratorKind::Aminus, c));
        assert_eq!(full, manual);
        assert_eq!(
            m.aggregate(GeneratorKind::P, SubsetLabel::single(j(1))),
            m.generator(GeneratorKind::P, j(1))
        );
        let dsum = &(&OperatorElement::dx(1) + &OperatorElement::dx(2)) + &OperatorElement::dx(3);
        assert_eq!(full.compose(&full), dsum);
    }

    #[test]
    fn casimir_examples() {
        let m = Model::symbolic();
        assert_eq!(
            m.casimir(SubsetLabel::single(j(1))),
            &op_scalar(m.casimir_value(j(1)))
        );
        let q12 = m.casimir("12".parse().unwrap());
        assert!(q12.commutator(&m.aggregate(GeneratorKind::Azero, SubsetLabel::FULL)).is_zero());
        assert!(q12.commutator(m.casimir(SubsetLabel::FULL)).is_zero());
    }

    #[test]
    fn corrupted_aplus_is_caught() {
        let m = Model::symbolic();
        let report = check_fundamental_relations_with(&m, &|kind, c| match kind {
            // drop the 2 nu t term
            GeneratorKind::Aplus => {
                let i = c.get();
                &(&(&OperatorElement::x(i) * &OperatorElement::theta(i)) * &OperatorElement::dx(i))
                    + &(&OperatorElement::x(i) * &OperatorElement::dtheta(i))
            }
            _ => m.generator(kind, c),
        });
        let anti = report.get("copy1/03").unwrap();
        assert!(!anti.passed());
        assert!(anti.residual.contains("nu1"));
        // relations not involving A+ survive
        assert!(report.get("copy1/05").unwrap().passed());
        assert!(report.get("copy1/04").unwrap().passed());
    }
}
