mod common;

use std::process::{Command, Output};

use common::*;
use hexacomplex::cli::parser;
use hexacomplex::{HexaNumber, Variant};
use proptest::prelude::*;

const TABLE_G: &str = include_str!("fixtures/table_g.csv");
const TABLE_F: &str = include_str!("fixtures/table_f.csv");

fn hexa_cmd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hexa")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn eval_ok(args: &[&str]) -> HexaNumber {
    let out = hexa_cmd(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stderr(&out));
    let variant = if args.contains(&"--planar") { Variant::Planar } else { Variant::Polar };
    hexa(variant, stdout(&out).trim())
}

#[test]
fn golden_tables() {
    let g = hexa_cmd(&["table", "g"]);
    assert_eq!(g.status.code(), Some(0));
    assert!(stdout(&g) == TABLE_G, "table g differs from fixture");
    let f = hexa_cmd(&["table", "f"]);
    assert!(stdout(&f) == TABLE_F, "table f differs from fixture");
}

#[test]
fn table_rows() {
    for table in [TABLE_G, TABLE_F] {
        let zero_row = table.lines().find(|l| l.starts_with("0.0000000000000000e0,")).unwrap();
        let values: Vec<f64> = zero_row.split(',').skip(1).map(|v| v.parse().unwrap()).collect();
        assert_eq!(values, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }
    let out = stdout(&hexa_cmd(&["--range", "1:1:0.1", "table", "g"]));
    let row: Vec<f64> = out.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(row[0], 1.0);
    assert!((row[1..].iter().sum::<f64>() - std::f64::consts::E).abs() < 1e-14);
    let bad = hexa_cmd(&["--range", "0:1:0", "table", "g"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn parse_examples() {
    let u = eval_ok(&["eval", "1 + 2h1 - 0.5h3"]);
    assert_eq!(u.components(), [1.0, 2.0, 0.0, -0.5, 0.0, 0.0]);
    assert_eq!(eval_ok(&["eval", "h1*h5"]), HexaNumber::one(Variant::Polar));
    assert_eq!(eval_ok(&["--planar", "eval", "h1*h5"]), -HexaNumber::one(Variant::Planar));
    // 1 + h2 is a planar zero divisor, so its logarithm does not exist
    let out = hexa_cmd(&["--planar", "eval", "exp(ln(1 + h2))"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("rho2"));
    let u = eval_ok(&["--planar", "eval", "exp(ln(1 + h1))"]);
    assert!(u.max_abs_diff(&hexa(Variant::Planar, "1 + h1")) < 1e-10);
    let u = eval_ok(&["eval", "exp(ln(1 + h2))"]);
    assert!(u.max_abs_diff(&hexa(Variant::Polar, "1 + h2")) < 1e-10);
}

#[test]
fn exit_codes_and_streams() {
    let parse = hexa_cmd(&["eval", "1 +* 2"]);
    assert_eq!(parse.status.code(), Some(2));
    assert!(stdout(&parse).is_empty());
    let msg = stderr(&parse);
    assert!(msg.contains("line 1, column 4") && msg.contains("expected"), "{msg}");

    let domain = hexa_cmd(&["eval", "1/(1+h3)"]);
    assert_eq!(domain.status.code(), Some(1));
    assert!(stdout(&domain).is_empty());
    assert!(stderr(&domain).contains("v-"));

    assert_eq!(hexa_cmd(&["eval", "h7"]).status.code(), Some(2));
    assert_eq!(hexa_cmd(&["eval", "foo(1)"]).status.code(), Some(2));
    assert_eq!(hexa_cmd(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hexa_cmd(&["integrate", "exp", "--planes", "3"]).status.code(), Some(2));
    assert_eq!(hexa_cmd(&["eval", "ln(h3)"]).status.code(), Some(1));
}

#[test]
fn factor_command() {
    let out = hexa_cmd(&["--all", "20", "factor", "0", "-1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 8);
    assert!(text.lines().all(|l| l.starts_with("u^2 - 1 = [")));
    assert!(text.lines().next().unwrap().ends_with("[u - 1][u + 1]"));
    let planar = stdout(&hexa_cmd(&["--planar", "--all", "20", "factor", "0", "1"]));
    assert_eq!(planar.lines().count(), 4);
    let single = stdout(&hexa_cmd(&["factor", "0", "1"]));
    assert_eq!(single.trim(), "u^2 + 1 = [u^2 + 1]");
}

#[test]
fn canon_and_repr() {
    let text = stdout(&hexa_cmd(&["canon", "1+h1"]));
    let field = |name: &str| -> f64 {
        let line = text.lines().find(|l| l.starts_with(&format!("{name}="))).unwrap();
        line.split('=').nth(1).unwrap().parse().unwrap()
    };
    assert_eq!(field("v+"), 2.0);
    assert_eq!(field("v-"), 0.0);
    assert!((field("d") - 2f64.sqrt()).abs() < 1e-11);
    let repr = stdout(&hexa_cmd(&["--planar", "repr", "h1"]));
    let off = repr.lines().find(|l| l.starts_with("off_block_max=")).unwrap();
    let value: f64 = off.trim_start_matches("off_block_max=").parse().unwrap();
    assert!(value < 1e-12);
}

#[test]
fn integrate_demos() {
    for args in [
        &["integrate", "one", "--planes", "1,2"][..],
        &["integrate", "exp", "--planes", "2"][..],
        &["--planar", "integrate", "exp", "--planes", "1,3"][..],
    ] {
        let out = hexa_cmd(args);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        let text = stdout(&out);
        let error: f64 = text.lines().find_map(|l| l.strip_prefix("error=")).unwrap().parse().unwrap();
        assert!(error <= 1e-5, "{args:?}: {text}");
    }
}

fn expr_text() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (0u32..100, 0u32..100).prop_map(|(a, b)| format!("{a}.{b}")),
        (1usize..6).prop_map(|k| format!("h{k}")),
        (1u32..9, 1usize..6).prop_map(|(a, k)| format!("{a}h{k}")),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), prop::sample::select(vec!["+", "-", "*", "/"]), inner.clone())
                .prop_map(|(a, op, b)| format!("{a} {op} {b}")),
            inner.clone().prop_map(|a| format!("-({a})")),
            (inner.clone(), -3i32..4).prop_map(|(a, n)| format!("({a})^{n}")),
            (prop::sample::select(vec!["exp", "sin", "cos", "sinh", "cosh", "inv", "ln"]), inner.clone())
                .prop_map(|(f, a)| format!("{f}({a})")),
            (inner.clone(), -2i32..3).prop_map(|(a, m)| format!("pow({a}, {m}.5)")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn print_parse_fixed_point(text in expr_text()) {
        let first = parser::parse(&text).unwrap();
        let printed = first.to_string();
        let second = parser::parse(&printed).unwrap();
        prop_assert!(first.same_tree(&second), "{} -> {}", text, printed);
        prop_assert_eq!(second.to_string(), printed);
    }

    #[test]
    fn garbage_never_panics(text in "[-+*/^()a-z0-9h. ]{0,24}") {
        let _ = parser::parse(&text);
    }
}
