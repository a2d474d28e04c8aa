use std::path::PathBuf;
use std::process::{Command, Output};

use ncl::{fixtures, parse_realization};
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn ncl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncl")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

#[test]
fn analyze_even_weight_verdicts() {
    let out = ncl(&["analyze", "--json", &fixture("even-weight.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["observable"], false);
    assert_eq!(v["controllable"], true);
    assert_eq!(v["reduced"], true);
    assert_eq!(v["behavior_dim"], 3);

    let text = ncl(&["analyze", &fixture("even-weight.json")]);
    let s = String::from_utf8(text.stdout).unwrap();
    assert!(s.contains("observable: false"));
    assert!(s.contains("controllable: true"));
}

#[test]
fn analyze_matches_library_on_golden_fixtures() {
    for (name, r) in [
        ("even-weight.json", fixtures::even_weight_tail_biting()),
        ("reed-muller.json", fixtures::reed_muller_parity_realization()),
        ("tail-biting-5-3.json", fixtures::unobservable_5_3_tail_biting()),
    ] {
        let v = json(&ncl(&["--json", "analyze", &fixture(name)]));
        assert_eq!(v, serde_json::to_value(r.analyze()).unwrap(), "{name}");
    }
}

#[test]
fn build_trellis_reproduces_even_weight_document() {
    let out = ncl(&[
        "build", "trellis", "--field", "2", "--n", "3", "--gens", "110,011,101", "--spans", "0:1,1:2,2:0", "--kind",
        "tail-biting",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let expected = std::fs::read_to_string(fixture("even-weight.json")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), expected);
}

#[test]
fn build_parity_check_reproduces_reed_muller() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("rm.json");
    let out = ncl(&[
        "build",
        "parity-check",
        "--field",
        "2",
        "--n",
        "8",
        "--checks",
        "11110000,00111100,00001111,11000011,01011010",
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let built = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(built, std::fs::read_to_string(fixture("reed-muller.json")).unwrap());
}

#[test]
fn components_of_even_weight_dual() {
    let out = ncl(&["components", &fixture("even-weight-dual.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("components: 2\n"));
    let v = json(&ncl(&["components", "--json", &fixture("reed-muller.json")]));
    assert_eq!(v["components"], 1);
    assert!(v["warning"].is_string());
}

#[test]
fn dual_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("d.json");
    let dd = dir.path().join("dd.json");
    assert_eq!(ncl(&["dual", &fixture("tail-biting-5-3.json"), d.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(
        std::fs::read_to_string(&d).unwrap(),
        std::fs::read_to_string(fixture("tail-biting-5-3-dual.json")).unwrap()
    );
    assert_eq!(ncl(&["dual", d.to_str().unwrap(), dd.to_str().unwrap()]).status.code(), Some(0));
    let back = parse_realization(&std::fs::read_to_string(&dd).unwrap()).unwrap();
    assert_eq!(back, fixtures::unobservable_5_3_tail_biting());
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("even.txt");
    std::fs::write(&good, "# even weight\n110\n011\n").unwrap();
    let bad = dir.path().join("rep.txt");
    std::fs::write(&bad, "111\n").unwrap();
    let even = fixture("even-weight.json");

    assert_eq!(ncl(&["verify", &even]).status.code(), Some(0));
    assert_eq!(ncl(&["verify", &even, "--expect", good.to_str().unwrap()]).status.code(), Some(0));
    let out = ncl(&["verify", "--json", &even, "--expect", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["ok"], false);
    assert_eq!(v["expected"]["counterexample"]["word"], serde_json::json!([1, 1, 0]));

    let out = ncl(&["verify", "--json", &fixture("reed-muller.json"), "--budget", "16"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "budget");
}

#[test]
fn invalid_input_exits_2_with_payload() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(
        &p,
        r#"{"field":2,"symbols":[{"id":"x","dim":1}],"states":[{"id":"s","dim":1,"left":"c0"}],"constraints":[]}"#,
    )
    .unwrap();
    let out = ncl(&["--json", "analyze", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "document");
    assert!(v["error"]["message"].as_str().unwrap().contains("`s`"));

    std::fs::write(&p, "{\"field\": 2,").unwrap();
    let out = ncl(&["analyze", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line"));
}

#[test]
fn minimize_and_reduce() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("min.json");
    let out = ncl(&[
        "--json",
        "minimize",
        &fixture("nonminimal-trellis.json"),
        out_path.to_str().unwrap(),
        "--steps",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["state_dims_after"], serde_json::json!([1, 1]));
    assert_eq!(v["steps"][0]["kind"], "merge");
    assert_eq!(v["minimal"], true);
    let m = parse_realization(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(m.state_dims(), vec![1, 1]);

    let out = ncl(&["minimize", &fixture("even-weight.json"), out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = ncl(&["--json", "reduce", &fixture("tail-biting-5-3.json"), out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["observable"], true);
    assert_eq!(v["controllable"], true);
    assert!(v["minimal"].is_null());
}

#[test]
fn behavior_and_dot() {
    let v = json(&ncl(&["--json", "behavior", &fixture("even-weight.json")]));
    assert_eq!(v["behavior_dim"], 3);
    assert_eq!(v["realized_code_generators"], serde_json::json!(["101", "011"]));

    let out = ncl(&["export-dot", &fixture("reed-muller.json")]);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert_eq!(dot.matches("\\ndim ").count(), 13);
    assert_eq!(dot.matches(" -- ").count(), 20 + 8);
}

#[test]
fn batch_analyze() {
    let v = json(&ncl(&["--json", "analyze", &fixture("even-weight.json"), &fixture("tail-biting-5-3.json")]));
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[1]["report"]["unobservable_dim"], 1);
}
