use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use iotacurve::iota::{acyclic_pair, build_standard, direct_sum, lift_to_r, reduce, StandardParams};
use iotacurve::precurve::{rcomplex_from_edges, run_pipeline};
use iotacurve::Multicurve;
use iotacurve_cli::input::parse_complex;
use iotacurve_cli::render::{render_svg, RenderOptions};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_iotacurve"));
    c.env("NO_COLOR", "1");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Compares against a checked-in file; `UPDATE_GOLDEN=1` rewrites it instead.
fn golden(name: &str, actual: &str) {
    let path = golden_dir().join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert!(expected == actual, "{} differs from the rendered output", name);
}

fn standard_curve(p: &str) -> Multicurve {
    let c = build_standard(&p.parse::<StandardParams>().unwrap());
    run_pipeline(&lift_to_r(&c).unwrap()).unwrap().multicurve
}

#[test]
fn golden_standard_curve() {
    let mc = standard_curve("C(+,-2)");
    assert_eq!(mc.components.len(), 1);
    golden("c_plus_minus_two.svg", &render_svg(&mc, &RenderOptions::default()));
}

#[test]
fn golden_two_curves() {
    let m = rcomplex_from_edges(&["x", "y", "w", "z"], &[("x", "y", "U"), ("x", "w", "U"), ("y", "z", "Q"), ("w", "z", "Q")])
        .unwrap();
    let mc = run_pipeline(&m).unwrap().multicurve;
    assert_eq!(mc.components.len(), 2);
    golden("two_curves.svg", &render_svg(&mc, &RenderOptions::default()));
}

#[test]
fn golden_with_acyclic_summand() {
    let c = direct_sum(&build_standard(&"C(+,-2)".parse().unwrap()), &acyclic_pair(1, 0, ("x", "y"))).unwrap();
    let m = lift_to_r(&reduce(&c).unwrap().complex).unwrap();
    let mc = run_pipeline(&m).unwrap().multicurve;
    let o = RenderOptions { title: Some("C(+,-2) + acyclic".into()), ..RenderOptions::default() };
    golden("with_acyclic_summand.svg", &render_svg(&mc, &o));
}

#[test]
fn render_command_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.svg");
    let o = run(&["render", "C(+,1,-,-2)", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let written = std::fs::read_to_string(&out).unwrap();
    let o2 = RenderOptions { title: Some("C(+,1,-,-2)".into()), ..RenderOptions::default() };
    assert_eq!(written, render_svg(&standard_curve("C(+,1,-,-2)"), &o2));
}

#[test]
fn classify_and_invariants() {
    let o = run(&["classify", "C(+,1,-,-2)"]);
    assert_eq!(stdout(&o), "C(+,1,-,-2)\n");
    let o = run(&["invariants", "C(+,1,-,-2)", "--format", "json"]);
    assert_eq!(stdout(&o).trim(), r#"{"params":"C(+,1,-,-2)","P":2,"Pomega":0,"phi":{"1":1,"2":-1}}"#);
    let o = run(&["invariants", "C(-,-2)"]);
    assert!(stdout(&o).contains("P = 3\n"));
}

#[test]
fn classify_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let c = direct_sum(&build_standard(&"C(-,3)".parse().unwrap()), &acyclic_pair(2, 2, ("x", "y"))).unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(&path, c.to_json_string()).unwrap();
    let o = run(&["classify", "--file", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "C(-,3)\n");
}

#[test]
fn product_and_shift() {
    let o = run(&["product", "C(+,1)", "C()", "--classify"]);
    assert_eq!(stdout(&o), "C(+,1)\n");
    let o = run(&["product", "C(+,1)", "C(-,2)"]);
    let text = stdout(&o);
    assert!(parse_complex(&text).is_ok());
    let o = run(&["shift", "-n", "1", "C(+,-2)"]);
    assert_eq!(stdout(&o), "C(+,-3)\n");
    let o = run(&["shift", "-n", "0", "C(+,-2)"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    let o = run(&["classify", "C(+,0)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("b must be nonzero"));
    let o = run(&["classify", "C(+,"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position"));
    let o = run(&["classify", "{\"generators\": ["]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&o.stderr).contains('\x1b'));
}

#[test]
fn parse_print_identity() {
    for text in ["C()", "C(+,1)", "C(-,-4,+,2)", "C(+,1,+,-1,-,1,+,1)"] {
        let p = parse_complex(text).unwrap();
        assert_eq!(p.print(), text);
        assert_eq!(parse_complex(&p.print()).unwrap(), p);
    }
    let spaced = parse_complex(" C( +, -2 ) ").unwrap();
    assert_eq!(spaced.print(), "C(+,-2)");
    let json = parse_complex(&build_standard(&"C(+,1,-,-2)".parse().unwrap()).to_json_string()).unwrap();
    assert_eq!(parse_complex(&json.print()).unwrap(), json);
}

#[test]
fn verify_is_deterministic() {
    let a = run(&["verify", "--seed", "5", "--trials", "16", "--format", "json"]);
    let b = run(&["verify", "--seed", "5", "--trials", "16", "--format", "json"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["seed"], 5);
    assert_eq!(v["trials"], 16);
}
