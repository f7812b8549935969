use std::process::Command;

use serde_json::Value;
use subtele::ore::parse_op;

fn subtele(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_subtele")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let (code, out, err) = subtele(&a);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

#[test]
fn factored_output_and_verification() {
    let (code, out, _) = subtele(&["telescope", "--expr", "binomial(n,k)^3", "--verify", "12"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("telescoper = L_1 * R  (order 2)"), "{out}");
    assert!(out.contains("dropped component phi-"), "{out}");
    assert!(out.lines().filter(|l| l.starts_with("ok ")).count() == 2, "{out}");
}

#[test]
fn parse_errors_exit_two_with_position() {
    let (code, v) = json(&["telescope", "--expr", "binomial(n,k)^2+oops"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "parse");
    assert_eq!(v["error"]["position"], 16);
    let (code, _, err) = subtele(&["telescope", "--expr", "binomial(n,k)^2+oops"]);
    assert_eq!(code, 2);
    assert!(err.contains("position 16"), "{err}");
}

#[test]
fn unsupported_input_exits_two() {
    let (code, v) = json(&["telescope", "--expr", "binomial(n,k)/(n^2+k^2)"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "unsupported_denominator");
    assert_eq!(v["error"]["stage"], "reduction");
}

#[test]
fn usage_errors() {
    let (code, v) = json(&["telescope"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "invalid_input");
    let (code, v) = json(&["telescope", "--expr", "binomial(n,k)", "--bogus"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "usage");
    let (code, _, _) = subtele(&["telescope", "--expr", "binomial(n,k)", "--expanded", "--factored"]);
    assert_eq!(code, 2);
    let (code, out, _) = subtele(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["telescope", "verify", "reduce", "guess", "bench"] {
        assert!(out.contains(sub), "{out}");
    }
}

#[test]
fn cap_exhaustion_exits_three() {
    let (code, v) = json(&["telescope", "--expr", "binomial(n,k)^5/(2*n+3*k)", "--degree-cap", "2"]);
    assert_eq!(code, 3, "{v}");
    assert_eq!(v["error"]["kind"], "cap_exceeded");
}

#[test]
fn wrong_range_fails_verification() {
    // Dropping the last term breaks the recurrence of the full sum.
    let (code, v) = json(&["verify", "--expr", "binomial(n,k)^2", "--k-range", "0..n-1", "--verify", "10"]);
    assert_eq!(code, 1);
    assert_eq!(v["verified"], false);
    let first = &v["verification"]["checks"][0];
    assert_eq!(first["passed"], false);
    assert!(first["witness"]["n"].is_i64());
}

#[test]
fn json_operators_round_trip() {
    let (code, v) = json(&["telescope", "--expr", "binomial(n,k)^2/(n+k+1)", "--expanded", "--certificate"]);
    assert_eq!(code, 0);
    for key in ["R", "L_left", "L_min", "L_expanded"] {
        let text = v[key].as_str().unwrap();
        assert_eq!(parse_op(text).unwrap().normalize().to_text(), text, "{key}");
    }
    for c in v["components"].as_array().unwrap() {
        let text = c["L"].as_str().unwrap();
        assert_eq!(parse_op(text).unwrap().to_text(), text);
    }
    assert!(v["certificates"]["certificate"].is_string());
}

#[test]
fn symmetry_does_not_change_the_telescoper() {
    for e in ["binomial(n,k)^4", "binomial(n,k)^5", "binomial(n,k)^3/(2*n+3*k)", "binomial(3*n,3*k)^2*binomial(3*n,3*k+1)"] {
        let (_, a) = json(&["telescope", "--expr", e, "--expanded"]);
        let (_, b) = json(&["telescope", "--expr", e, "--expanded", "--no-symmetry"]);
        assert_eq!(a["L_expanded"], b["L_expanded"], "{e}");
        assert_eq!(b["components"].as_array().unwrap().len(), 1);
    }
}

#[test]
fn document_input_and_out_file() {
    let dir = std::env::temp_dir().join(format!("subtele-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let doc = dir.join("t.toml");
    std::fs::write(&doc, "[term]\nexpr = \"binomial(n,k)^4\"\n[sum]\nk_range = \"0..n\"\n[options]\nverify = 15\nminimal = true\n").unwrap();
    let out = dir.join("out.json");
    let (code, stdout, _) = subtele(&[
        "telescope",
        "--input",
        doc.to_str().unwrap(),
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["verified"], true);
    assert_eq!(v["orders"]["L_min"], 2);
    let (code, _, _) = subtele(&["telescope", "--input", dir.join("missing.toml").to_str().unwrap()]);
    assert_eq!(code, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reduce_guess_and_bench() {
    let (code, v) = json(&["reduce", "--expr", "binomial(n,k)^2/(n+k+1)", "--certificate"]);
    assert_eq!(code, 0);
    assert_eq!(v["dim"], 1);
    assert_eq!(v["R_certificate_ok"], true);
    assert_eq!(v["automorphisms"][0], "phi");

    let (code, v) = json(&["guess", "--expr", "binomial(n,k)^3", "--max-order", "3", "--max-degree", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["operator"], "(n^2+4*n+4)*S^2 - (7*n^2+21*n+16)*S - (8*n^2+16*n+8)");
    let (_, v) = json(&["guess", "--expr", "binomial(n,k)^3", "--max-order", "1", "--max-degree", "3"]);
    assert!(v["operator"].is_null());

    let (code, v) = json(&["bench", "--expr", "binomial(n,k)^5", "--timings"]);
    assert_eq!(code, 0);
    let run = &v["runs"][0];
    assert_eq!(run["orders"]["telescoper"], 3);
    assert!(run["timings"].as_array().unwrap().len() >= 5);
    assert!(run["size_ratio"].as_f64().unwrap() > 0.0);
}
