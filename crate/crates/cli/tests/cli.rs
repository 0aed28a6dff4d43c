use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qherm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qherm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/hermitian_q2_example.txt")
}

#[test]
fn deal_is_byte_identical_across_runs() {
    let args = [
        "sss",
        "deal",
        "--q",
        "2",
        "--r",
        "3",
        "--variety",
        "hermitian",
        "--secret",
        "1",
        "--seed",
        "7",
    ];
    let a = qherm(&args);
    let b = qherm(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["field"]["modulus"], serde_json::json!([1, 1]));
    assert_eq!(v["field"]["point_order"], "lex-normalized-v1");
    assert_eq!(v["result"]["shares"].as_array().unwrap().len(), 44);
    let other = qherm(&[
        "sss",
        "deal",
        "--q",
        "2",
        "--variety",
        "hermitian",
        "--secret",
        "1",
        "--seed",
        "8",
    ]);
    assert_ne!(json(&other)["result"]["shares"], v["result"]["shares"]);
}

#[test]
fn spectrum_with_explicit_parameters() {
    let auto = json(&qherm(&[
        "variety",
        "spectrum",
        "--q",
        "3",
        "--r",
        "3",
        "--auto-params",
    ]));
    let a = auto["result"]["variety"]["alpha"].as_u64().unwrap().to_string();
    let b = auto["result"]["variety"]["beta"].as_u64().unwrap().to_string();
    let out = qherm(&[
        "variety", "spectrum", "--q", "3", "--r", "3", "--alpha", &a, "--beta", &b,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["result"]["support"], serde_json::json!([19, 26, 28, 35, 37]));
    assert_eq!(v["result"]["standard_equations"], true);
}

#[test]
fn inadmissible_parameters_are_usage_errors() {
    let out = qherm(&["variety", "build", "--q", "2", "--r", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("even q > 2 required"));
    // beta = 1 lies in GF(3)
    let out = qherm(&["variety", "build", "--q", "3", "--alpha", "1", "--beta", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qherm(&["variety", "build", "--q", "3", "--r", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no valid"));
    let out = qherm(&["variety", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_refusal_exit_code() {
    let out = qherm(&["variety", "spectrum", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(3));
    let out = qherm(&["verify-all", "--budget", "0"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["verdict"], "SKIPPED");
    let criteria = v["result"]["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 10);
    assert!(criteria.iter().all(|c| c["status"] == "SKIPPED"));
}

#[test]
fn corrupted_modulus_fails_before_any_criterion() {
    // x^2 + 2 = (x - 1)(x + 1) over GF(3)
    let out = qherm(&["verify-all", "--q", "3", "--modulus", "2,0"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("reducible"), "{err}");
    assert!(!err.contains("PASS"));
}

#[test]
fn minimality_cross_check() {
    let v = json(&qherm(&["code", "minimality", "--q", "4", "--r", "3"]));
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["result"]["minimal"], false);
    let bf = &v["result"]["criteria"][2];
    assert_eq!(bf["method"], "brute-force");
    assert_eq!(bf["non_minimal_words"], 15);
    assert_eq!(bf["non_minimal_weights"], serde_json::json!([[1024, 15]]));
    let h = json(&qherm(&[
        "code",
        "minimality",
        "--variety",
        "hermitian",
        "--q",
        "2",
        "--r",
        "3",
    ]));
    assert_eq!(h["result"]["minimal"], true);
    assert!(h["result"]["criteria"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["verdict"] == "minimal"));
}

#[test]
fn weights_and_democracy_q3() {
    let w = json(&qherm(&["code", "weights", "--q", "3", "--r", "3"]));
    assert_eq!(w["result"]["methods_agree"], true);
    assert_eq!(
        w["result"]["distribution"],
        serde_json::json!([[0, 1], [225, 144], [227, 1944], [234, 576], [236, 3888], [243, 8]])
    );
    let d = json(&qherm(&["sss", "democracy", "--q", "3", "--r", "3"]));
    assert_eq!(d["verdict"], "PASS");
    assert_eq!(d["result"]["sets"], 729);
    assert_eq!(d["result"]["histogram"], serde_json::json!([[648, 261]]));
}

#[test]
fn verify_example_label_free_checks() {
    let out = qherm(&["sss", "verify-example"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["group_order"], 576);
    assert_eq!(v["result"]["count"], 64);
    assert_eq!(v["result"]["size_profile"], serde_json::json!([[31, 32], [35, 32]]));
    assert_eq!(v["result"]["antichain"], true);
    assert_eq!(v["result"]["generators_preserve"], true);
    // the same file passed explicitly
    let f = fixture();
    let out = qherm(&["sss", "develop", "--fixture", f.to_str().unwrap()]);
    assert_eq!(json(&out)["result"]["count"], 64);
}

#[test]
fn recover_roundtrip_and_refusal() {
    let deal = json(&qherm(&[
        "sss",
        "deal",
        "--q",
        "2",
        "--variety",
        "hermitian",
        "--secret",
        "3",
        "--seed",
        "1",
    ]));
    let shares: Vec<u64> = deal["result"]["shares"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    let access = json(&qherm(&["sss", "access", "--q", "2", "--variety", "hermitian"]));
    let set: Vec<u64> = access["result"]["sets"][0]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
    let picked: Vec<u64> = set.iter().map(|&i| shares[i as usize - 1]).collect();
    let ok = qherm(&[
        "sss",
        "recover",
        "--q",
        "2",
        "--variety",
        "hermitian",
        "--subset",
        &join(&set),
        "--shares",
        &join(&picked),
    ]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["result"]["secret"], 3);
    let short = qherm(&[
        "sss",
        "recover",
        "--q",
        "2",
        "--variety",
        "hermitian",
        "--subset",
        &join(&set[1..]),
        "--shares",
        &join(&picked[1..]),
    ]);
    assert_eq!(short.status.code(), Some(1));
}

#[test]
fn csv_output_has_header_and_fixed_columns() {
    let out = qherm(&["variety", "lines", "--q", "3", "--r", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("# schema=1 command=variety lines verdict=PASS"));
    assert!(lines.next().unwrap().contains("modulus=2 2"));
    assert!(lines.next().unwrap().starts_with("# config="));
    assert_eq!(lines.next(), Some("size,count,expected"));
    let total: u64 = lines
        .map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 7462);
}

#[test]
fn out_flag_writes_the_same_payload() {
    let dir = std::env::temp_dir().join(format!("qherm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("dk.json");
    let out = qherm(&[
        "code",
        "dk",
        "--q",
        "3",
        "--level",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let stdout = qherm(&["code", "dk", "--q", "3", "--level", "2"]).stdout;
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}
