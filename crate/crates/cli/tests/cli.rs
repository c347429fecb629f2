use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn koszulkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_koszulkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn numbers(v: &Value) -> Vec<u64> {
    v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect()
}

#[test]
fn ym_dims_golden() {
    let out = koszulkit(&["dims", "--preset", "ym", "--metric", "euclid4", "--cutoff", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(numbers(&v["results"]["dims"]), [1, 4, 16, 60, 225, 840]);
    assert_eq!(v["results"]["dims_match_closed_form"], true);
    assert_eq!(v["meta"]["command"]["verb"], "dims");
}

#[test]
fn ym_lie_dims_golden() {
    let out = koszulkit(&["lie-dims", "--preset", "ym", "--jmax", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(
        numbers(&v["results"]["lie_dims"]),
        [4, 6, 16, 45, 144, 440, 1440, 4680, 15600, 52344]
    );
    assert_eq!(v["results"]["closed_form_agrees"], true);
}

#[test]
fn dual_numbers_are_not_enveloping() {
    let out = koszulkit(&["lie-dims", "--preset", "dual-numbers", "--jmax", "6"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["results"]["enveloping"], false);
}

#[test]
fn self_duality_is_not_gorenstein() {
    let out = koszulkit(&["gorenstein", "--preset", "sd+", "--cutoff", "8"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    let cert = &v["certificates"][0];
    assert_eq!(cert["kind"], "gorenstein");
    assert_eq!(cert["verdict"], "fail");
    assert!(!cert["witness"].is_null());
}

#[test]
fn ym_certificates_pass() {
    for verb in ["koszul", "gorenstein", "dnzero", "euler"] {
        let out = koszulkit(&[verb, "--preset", "ym", "--cutoff", "6"]);
        assert_eq!(out.status.code(), Some(0), "{verb}");
        let v = json_of(&out);
        assert_eq!(v["certificates"][0]["verdict"], "pass", "{verb}");
    }
    let v = json_of(&koszulkit(&["gorenstein", "--preset", "ym", "--cutoff", "6"]));
    assert_eq!(v["certificates"][0]["top_degree"], -4);
    assert_eq!(v["certificates"][0]["global_dimension"], 3);
}

#[test]
fn bad_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        "{\n  \"generators\": [\"x\"],\n  \"degree\": 2,\n  \"relators\": [[{\"word\": [0, 0, 0], \"coeff\": 1}]]\n}\n",
    )
    .unwrap();
    let out = koszulkit(&["dims", "--file", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4"), "{err}");

    let missing = dir.path().join("missing.json");
    assert_eq!(
        koszulkit(&["dims", "--file", missing.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(koszulkit(&["dims", "--preset", "nonsense"]).status.code(), Some(2));
    assert_eq!(
        koszulkit(&["dims", "--preset", "sd+", "--metric", "euclid4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        koszulkit(&["dims", "--preset", "ym", "--metric", "diag:1,0,1,1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(koszulkit(&["dualcheck", "--preset", "poly:2"]).status.code(), Some(2));
    // ambient bound
    assert_eq!(
        koszulkit(&["dims", "--preset", "ym", "--cutoff", "12", "--max-ambient", "1000"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn fixture_matches_preset() {
    let file = fixture("ym4.json");
    let a = json_of(&koszulkit(&["dims", "--file", file.to_str().unwrap(), "--cutoff", "5"]));
    let b = json_of(&koszulkit(&["dims", "--preset", "ym", "--cutoff", "5"]));
    assert_eq!(a["input"]["fingerprint"], b["input"]["fingerprint"]);
    assert_eq!(a["results"]["dims"], b["results"]["dims"]);
}

#[test]
fn output_is_byte_identical() {
    for format in ["json", "csv", "text"] {
        let args = ["report", "--preset", "ym", "--cutoff", "5", "--format", format];
        let a = koszulkit(&args);
        let b = koszulkit(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{format}");
    }
}

#[test]
fn report_is_the_conjunction() {
    for preset in ["ym", "sd+", "heisenberg", "dual-numbers", "poly:2"] {
        let out = koszulkit(&["report", "--preset", preset, "--cutoff", "5"]);
        let v = json_of(&out);
        let mut all = true;
        for (_, x) in v["results"].as_object().unwrap() {
            if let Some(b) = x.as_bool() {
                all &= b;
            }
        }
        for c in v["certificates"].as_array().unwrap() {
            all &= c["verdict"] == "pass";
        }
        assert_eq!(v["meta"]["passed"], all, "{preset}");
        assert_eq!(out.status.code(), Some(if all { 0 } else { 1 }), "{preset}");
    }
}

#[test]
fn modular_and_exact_agree() {
    let a = json_of(&koszulkit(&[
        "dims", "--preset", "sd-", "--cutoff", "5", "--field", "exact",
    ]));
    let b = json_of(&koszulkit(&["dims", "--preset", "sd-", "--cutoff", "5"]));
    let c = json_of(&koszulkit(&[
        "dims", "--preset", "sd-", "--cutoff", "5", "--field", "verify",
    ]));
    assert_eq!(a["results"]["dims"], b["results"]["dims"]);
    assert_eq!(c["results"]["dims"], b["results"]["dims"]);
    assert_eq!(a["results"]["dims_computed_by"], "exact");
}

#[test]
fn csv_and_text_formats() {
    let out = koszulkit(&["dims", "--preset", "poly:2", "--cutoff", "3", "--format", "csv"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.starts_with("key,value\n"), "{s}");
    assert!(s.contains("results.dims,1 2 3 4\n"), "{s}");
    let out = koszulkit(&["koszul", "--preset", "sd+", "--cutoff", "4", "--format", "text"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("koszul: pass"), "{s}");
    assert!(s.ends_with("PASS\n"), "{s}");
}

#[test]
fn timing_is_opt_in() {
    let v = json_of(&koszulkit(&["dims", "--preset", "poly:2", "--cutoff", "3"]));
    assert!(v["meta"].get("timing_ms").is_none());
    let v = json_of(&koszulkit(&["dims", "--preset", "poly:2", "--cutoff", "3", "--timing"]));
    assert!(v["meta"]["timing_ms"].is_u64());
}

#[test]
fn repcheck_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(
        &good,
        r#"{"matrices": [[[0, 1, 0], [0, 0, 0], [0, 0, 0]], [[0, 0, 0], [0, 0, "1"], [0, 0, 0]]]}"#,
    )
    .unwrap();
    let out = koszulkit(&["repcheck", "--preset", "heisenberg", "--rep", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    // x = E12 + E21 breaks [x,[x,y]] = 0
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"matrices": [[[0, 1, 0], [1, 0, 0], [0, 0, 0]], [[0, 0, 0], [0, 0, "1/2"], [0, 0, 0]]]}"#,
    )
    .unwrap();
    let out = koszulkit(&["repcheck", "--preset", "heisenberg", "--rep", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["results"]["satisfies_relations"], false);
}

#[test]
fn builtin_representations() {
    let out = koszulkit(&["repcheck", "--preset", "ym"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let reps = v["results"]["representations"].as_array().unwrap();
    assert_eq!(reps.len(), 4);
    assert!(reps.iter().all(|r| r["satisfies_relations"] == true));
}
