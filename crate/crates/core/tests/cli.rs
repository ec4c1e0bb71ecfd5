use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn eo(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_eo")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stdout).trim().to_string(),
        String::from_utf8_lossy(&out.stderr).trim().to_string(),
    )
}

/// Key structure with leaf types, so values may change but the layout may not.
fn shape(v: &Value) -> Value {
    match v {
        Value::Object(m) => Value::Object(m.iter().map(|(k, x)| (k.clone(), shape(x))).collect()),
        Value::Array(a) => Value::Array(a.first().map(shape).into_iter().collect()),
        Value::String(_) => "string".into(),
        Value::Number(_) => "number".into(),
        Value::Bool(_) => "bool".into(),
        Value::Null => "null".into(),
    }
}

fn golden(name: &str, report: &str) {
    let mut v: Value = serde_json::from_str(report).unwrap();
    v["elapsed_ms"] = Value::from(0);
    v["command"] = Value::Array(vec![]);
    let got = serde_json::to_string_pretty(&shape(&v)).unwrap();
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, format!("{got}\n")).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {}", path.display()));
    assert_eq!(got.trim(), want.trim(), "schema of {name} changed");
}

#[test]
fn eval_brute() {
    let f = fixture("deq4-closed.grid");
    let (code, out, _) = eo(&["eval", "--engine", "brute", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out, "Z = 2");
    let (_, json, _) = eo(&["eval", "--engine", "brute", "--json", f.to_str().unwrap()]);
    golden("eval", &json);
}

#[test]
fn engines_agree() {
    let f = fixture("deq4-closed.grid");
    for engine in ["brute", "affine", "product", "fpnp", "auto"] {
        let (code, out, _) = eo(&["eval", "--engine", engine, f.to_str().unwrap()]);
        assert_eq!((code, out.as_str()), (0, "Z = 2"), "{engine}");
    }
}

#[test]
fn classify_writes_document() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("verdict.json");
    let f = fixture("m-delta1.sigset");
    let (code, text, _) = eo(&["classify", f.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(text.contains("classes: [P]"), "{text}");
    assert!(text.contains("directions: [Up]"), "{text}");
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(matches!(doc["outcome"]["outcome"].as_str(), Some("FP" | "FPNP")));
    let (_, json, _) = eo(&["classify", "--json", f.to_str().unwrap()]);
    golden("classify", &json);
}

#[test]
fn generate_reports_group() {
    let dir = tempfile::tempdir().unwrap();
    let rec = dir.path().join("recipes.txt");
    let f = fixture("deq4-1i.sig");
    let (code, text, _) = eo(&["generate", f.to_str().unwrap(), "--recipes", rec.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(text.starts_with("FiniteGroup(4)"), "{text}");
    assert!(std::fs::read_to_string(&rec).unwrap().lines().count() > 0);
    let (_, json, _) = eo(&["generate", "--json", f.to_str().unwrap()]);
    golden("generate", &json);
}

#[test]
fn prune_writes_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pruned.grid");
    let f = fixture("deq4-closed.grid");
    let sat = format!("external:{}", env!("CARGO_BIN_EXE_eo-sat"));
    let (code, _, _) = eo(&["prune", f.to_str().unwrap(), "--backend", &sat, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, text, _) = eo(&["eval", "--engine", "brute", out.to_str().unwrap()]);
    assert_eq!((code, text.as_str()), (0, "Z = 2"));
    let (_, json, _) = eo(&["prune", "--json", f.to_str().unwrap()]);
    golden("prune", &json);
}

#[test]
fn interp_both_methods() {
    let f = fixture("looped-delta.grid");
    for extra in [&["--x", "2"][..], &["--x", "1/3"][..], &["--single"][..]] {
        let mut args = vec!["interp", f.to_str().unwrap()];
        args.extend_from_slice(extra);
        let (code, text, _) = eo(&args);
        assert_eq!((code, text.as_str()), (0, "Z = 1"), "{extra:?}");
    }
    let (code, _, err) = eo(&["interp", f.to_str().unwrap(), "--x", "-1"]);
    assert_eq!(code, 1);
    assert!(err.contains("root of unity"), "{err}");
    let (_, json, _) = eo(&["interp", "--json", f.to_str().unwrap()]);
    golden("interp", &json);
}

#[test]
fn transform_and_gate() {
    let (code, text, _) = eo(&["transform", "--op", "pad", fixture("m-delta1.sigset").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(text.starts_with("signature m arity 4"));
    let (code, text, _) = eo(&["gate", fixture("loop.gate").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(text.contains("01 1") && text.contains("10 2"), "{text}");
    let (_, json, _) = eo(&["gate", "--json", fixture("loop.gate").to_str().unwrap()]);
    golden("gate", &json);
}

#[test]
fn exit_codes() {
    assert_eq!(eo(&["bogus"]).0, 2);
    assert_eq!(eo(&["eval", "--engine", "warp", "x.grid"]).0, 2);
    assert_eq!(eo(&["eval", "/does/not/exist.grid"]).0, 2);
    // #P-hard signature set: the oracle pipeline refuses
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("hard.grid");
    std::fs::write(&f, "signature h arity 4\n0011 1\n0101 1\n1010 1\nvertex a h\nedge a.1 a.2\nedge a.3 a.4\n").unwrap();
    let (code, _, err) = eo(&["eval", "--engine", "fpnp", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("#P-hard"), "{err}");
    assert_eq!(eo(&["eval", f.to_str().unwrap()]).1, "Z = 2");
}

#[test]
fn deterministic_payload() {
    let f = fixture("m-delta1.sigset");
    let a: Value = serde_json::from_str(&eo(&["classify", "--json", f.to_str().unwrap()]).1).unwrap();
    let b: Value = serde_json::from_str(&eo(&["classify", "--json", f.to_str().unwrap()]).1).unwrap();
    assert_eq!(a["payload"], b["payload"]);
}
