use proptest::prelude::*;

use superbi_cli::expr::{GenName, RawWord};
use superbi_cli::{eval_expr, interpret, parse_expr, ExprAst};
use superbi_core::scalars::rat;
use superbi_core::{Model, OperatorElement, ParamScalar, SubsetLabel, SuperElement, SuperMonomial, ThetaSet};

fn eval(text: &str) -> OperatorElement {
    eval_expr(&parse_expr(text).unwrap(), None).unwrap()
}

#[test]
fn bannai_ito_relation_evaluates_to_zero() {
    assert!(eval("{Q(12),Q(23)} - Q(13) - 2*Q(1)*Q(3) - 2*Q(2)*Q(123)").is_zero());
}

#[test]
fn lowering_squares_to_translation() {
    assert_eq!(eval("A-(123)^2"), eval("dx1 + dx2 + dx3"));
}

#[test]
fn weight_relation() {
    assert!(eval("[A0(1), A+(1)] - A+(1)").is_zero());
}

#[test]
fn single_copy_casimir_is_a_scalar() {
    let want = &ParamScalar::nu(1).scale(&rat(2, 1)) - &ParamScalar::from_ratio(1, 2);
    assert_eq!(eval("Q(1)"), OperatorElement::scalar(want));
    assert_eq!(eval("Q(1)"), eval("2*nu1 - 1/2"));
}

#[test]
fn grade_involution_squares_to_one() {
    assert!(eval("P(1)*P(1) - 1").is_zero());
}

#[test]
fn parameter_binding_leaves_raw_words_alone() {
    let ast = parse_expr("x1*dx1").unwrap();
    let point = [rat(1, 2), rat(1, 3), rat(1, 5)];
    assert_eq!(eval_expr(&ast, Some(&point)).unwrap(), OperatorElement::x(1).compose(&OperatorElement::dx(1)));
    let q = eval_expr(&parse_expr("Q(2)").unwrap(), Some(&point)).unwrap();
    assert_eq!(q, OperatorElement::scalar(ParamScalar::from_ratio(1, 6)));
}

fn subset() -> impl Strategy<Value = SubsetLabel> {
    (1u8..8).prop_map(|b| SubsetLabel::from_bits(b).unwrap())
}

fn leaf(max_subset: usize) -> impl Strategy<Value = ExprAst> {
    prop_oneof![
        (0i64..6, 1i64..4).prop_map(|(n, d)| ExprAst::Number(rat(n, d))),
        (1usize..=3).prop_map(ExprAst::Param),
        (prop::sample::select(GenName::ALL.to_vec()), subset())
            .prop_filter("subset size", move |(_, s)| s.len() <= max_subset)
            .prop_map(|(g, s)| ExprAst::Generator(g, s)),
        (0usize..4, 1usize..=3).prop_map(|(k, i)| ExprAst::Raw(match k {
            0 => RawWord::X(i),
            1 => RawWord::T(i),
            2 => RawWord::Dx(i),
            _ => RawWord::Dt(i),
        })),
    ]
}

fn ast(max_subset: usize, depth: u32) -> impl Strategy<Value = ExprAst> {
    leaf(max_subset).prop_recursive(depth, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ExprAst::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ExprAst::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ExprAst::product(a, b)),
            (inner.clone(), 0u32..3).prop_map(|(a, n)| ExprAst::Power(Box::new(a), n)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ExprAst::Commutator(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| ExprAst::Anticommutator(Box::new(a), Box::new(b))),
        ]
    })
}

fn test_element() -> impl Strategy<Value = SuperElement> {
    prop::collection::vec(([0u32..3, 0u32..3, 0u32..3], 0u8..8, -3i64..=3), 1..4).prop_map(|terms| {
        SuperElement::from_terms(terms.into_iter().filter(|&(x, _, _)| x.iter().sum::<u32>() <= 4).map(
            |(x, t, c)| (SuperMonomial::new(x, ThetaSet::from_bits(t)), ParamScalar::from_int(c)),
        ))
    })
}

proptest! {
    #[test]
    fn parse_inverts_render(e in ast(3, 4)) {
        let text = e.to_string();
        prop_assert_eq!(parse_expr(&text).unwrap(), e);
    }

    #[test]
    fn evaluation_matches_direct_application(e in ast(2, 3), f in test_element()) {
        let model = Model::symbolic();
        let op = eval_expr(&e, None).unwrap();
        prop_assert_eq!(op.apply(&f), interpret(&e, &model, &f));
    }
}

mod binary {
    use std::process::Command;

    fn superbi(args: &[&str]) -> (i32, String) {
        let out = Command::new(env!("CARGO_BIN_EXE_superbi"))
            .args(args)
            .env_remove("SUPERBI_SEED")
            .output()
            .expect("binary runs");
        (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
    }

    #[test]
    fn expression_mode_prints_normal_form() {
        let (code, out) = superbi(&["--expr", "P(1)*P(1) - 1"]);
        assert_eq!(code, 0);
        assert_eq!(out, "0\nzero: true\n");
        let (code, out) = superbi(&["--expr", "A-(1)^2"]);
        assert_eq!(code, 0);
        assert!(out.ends_with("zero: false\n"));
    }

    #[test]
    fn usage_errors_exit_with_two() {
        assert_eq!(superbi(&["--expr", "Q(44)"]).0, 2);
        assert_eq!(superbi(&["--expr", "x1 +"]).0, 2);
        assert_eq!(superbi(&["--suite", "osp", "--max-N", "9"]).0, 2);
        assert_eq!(superbi(&["--suite", "osp", "--max-degree", "13"]).0, 2);
        assert_eq!(superbi(&["--suite", "osp", "--params", "nu1=1/2"]).0, 2);
        assert_eq!(superbi(&[]).0, 2);
    }

    #[test]
    fn json_lines_carry_the_fixed_fields() {
        let (code, out) = superbi(&["--suite", "bannai-ito", "--format", "json"]);
        assert_eq!(code, 0);
        let lines: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines.len(), 4);
        for v in lines {
            let obj = v.as_object().unwrap();
            let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
            keys.sort_unstable();
            assert_eq!(keys, ["anchor", "check_id", "micros", "residual_terms", "status", "suite"]);
            assert_eq!(obj["status"], "pass");
            assert_eq!(obj["suite"], "bannai-ito");
        }
    }
}
