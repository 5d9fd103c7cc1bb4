use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> (Value, i32, String) {
    let out: Output = Command::new(env!("CARGO_BIN_EXE_addilog")).args(args).output().expect("binary runs");
    let text = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(text.trim()).unwrap_or(Value::Null);
    (json, out.status.code().unwrap_or(-1), text)
}

#[test]
fn eval_pinned_value() {
    let (v, code, _) = run(&["eval", "li_23(1/2 + t)"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], "-8");
    assert_eq!(v["schema"], 1);
}

#[test]
fn eval_other_fields() {
    let (v, code, _) = run(&["eval", "trace(θ^3 + 1)", "--field", "Q[θ]/(θ^2-2)"]);
    assert_eq!((code, v["value"].as_str()), (0, Some("2")));
    let (v, _, _) = run(&["eval", "li_higher(2, 1/2, 1)", "--field", "Q(x)"]);
    assert_eq!(v["value"], "-8");
    let (a, _, _) = run(&["eval", "finite_log(θ)", "--field", "F25:θ^2+θ+1"]);
    let (b, _, _) = run(&["eval", "finite_log(1 - θ)", "--field", "F25:θ^2+θ+1"]);
    assert_eq!(a["value"], b["value"]);
}

#[test]
fn syntax_error_location() {
    let (v, code, _) = run(&["eval", "1/("]);
    assert_ne!(code, 0);
    assert_eq!(v["error"]["kind"], "SyntaxError");
    assert_eq!(v["error"]["line"], 1);
    assert_eq!(v["error"]["column"], 3);
}

#[test]
fn unknown_identifier() {
    let (v, code, _) = run(&["eval", "li_23(1/2 + s)"]);
    assert_ne!(code, 0);
    assert_eq!(v["error"]["kind"], "UnknownIdentifier");
    assert_eq!(v["error"]["column"], 13);
}

#[test]
fn core_errors_are_structured() {
    let (v, code, _) = run(&["eval", "li_23(1 + t)"]);
    assert_ne!(code, 0);
    assert_eq!(v["error"]["kind"], "NotFlat");
}

#[test]
fn rho_specializes() {
    let (v, code, _) = run(&["rho", "1-z", "z", "1 - (1/2 + t)/z", "--precision", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], "-8");
}

#[test]
fn cycle_file() {
    let dir = std::env::temp_dir().join(format!("addilog-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let product = dir.join("product.txt");
    std::fs::write(&product, "precision: 6\n(z - 1 - t)/(z + 2)\n3*(z - 1/3 - t)/(z - 2)\n5\n").unwrap();
    let (v, code, _) = run(&["cycle", product.to_str().unwrap()]);
    assert_eq!((code, v["value"].as_str()), (0, Some("0")));
    let broken = dir.join("broken.txt");
    std::fs::write(&broken, "precision: 6\nz\nz +\n5\n").unwrap();
    let (v, code, _) = run(&["cycle", broken.to_str().unwrap()]);
    assert_ne!(code, 0);
    assert_eq!(v["error"]["line"], 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_contract() {
    let (v, code, _) = run(&["verify", "five-term", "--trials", "50", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["failures"], Value::Array(vec![]));
    assert_eq!(v["trials"], 50);
    let (_, code, _) = run(&["verify", "charp-diagram", "--field", "F5", "--trials", "20"]);
    assert_eq!(code, 0);
}

#[test]
fn verify_is_deterministic() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v.to_string()
    };
    let a = run(&["verify", "beta-embed", "--trials", "30", "--seed", "3"]).0;
    let b = run(&["verify", "beta-embed", "--trials", "30", "--seed", "3"]).0;
    assert_eq!(strip(a), strip(b));
}

#[test]
fn verify_rejects_unsupported_field() {
    let (v, code, _) = run(&["verify", "charp-diagram", "--field", "Q"]);
    assert_ne!(code, 0);
    assert_eq!(v["error"]["kind"], "UnsupportedField");
    let (v, code, _) = run(&["verify", "no-such-suite"]);
    assert_ne!(code, 0);
    assert_eq!(v["error"]["kind"], "InvalidArgument");
}

#[test]
fn suites_listed() {
    let (v, code, _) = run(&["suites"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = v["suites"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
    assert_eq!(names.len(), 16);
    assert!(names.contains(&"homotopy-identity"));
    let (_, _, text) = run(&["suites", "--pretty"]);
    assert!(text.starts_with("suites"));
}
