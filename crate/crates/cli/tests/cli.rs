use std::process::{Command, Output};

use serde_json::Value;

fn mdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdist"))
        .args(args)
        .env_remove("MDIST_THREADS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = mdist(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn as_f64(v: &Value) -> f64 {
    v.to_string().parse().expect("numeric field")
}

fn ratio(v: &Value) -> (String, String) {
    (
        v["num"].as_str().expect("num").to_string(),
        v["den"].as_str().expect("den").to_string(),
    )
}

#[test]
fn eval_golden_ratio() {
    let v = json(&["eval", "--kind", "mahler", "--poly", "1,-1,-1"]);
    assert_eq!(v["schema"], 1);
    assert!((as_f64(&v["distance"]) - 1.618_033_988_749_895).abs() < 1e-12);
    assert_eq!(v["roots"].as_array().unwrap().len(), 2);
    let v = json(&["eval", "--kind", "reciprocal", "--poly", "1,0,-5"]);
    assert!((as_f64(&v["distance"]) - 2.618_033_988_749_895).abs() < 1e-12);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(mdist(&["eval", "--kind", "mahler", "--poly", "0"]).status.code(), Some(2));
    assert_eq!(mdist(&["eval", "--kind", "bogus", "--poly", "1,2"]).status.code(), Some(2));
    assert_eq!(mdist(&["eval", "--kind", "trec:3/2", "--poly", "1,2"]).status.code(), Some(2));
    assert_eq!(mdist(&["moment", "--type", "X", "--kind", "mahler", "--N", "1"]).status.code(), Some(2));
    assert_eq!(
        mdist(&["moment", "--type", "F", "--kind", "mahler", "--N", "2", "--route", "numeric"]).status.code(),
        Some(2)
    );
}

#[test]
fn closed_moments() {
    let v = json(&["moment", "--type", "F", "--kind", "reciprocal", "--N", "2"]);
    assert_eq!(ratio(&v["constant"]), ("32".into(), "3".into()));
    assert_eq!(v["pi_power"], 0);
    let v = json(&["moment", "--type", "H", "--kind", "trec:1/2", "--N", "1", "--s", "2"]);
    assert_eq!(v["pi_power"], 1);
    assert_eq!(ratio(&v["value_times_pi^-k"]), ("11".into(), "6".into()));
}

#[test]
fn numeric_moment_matches_det_route() {
    let v = json(&["moment", "--type", "F", "--kind", "trec:1/2", "--N", "2", "--route", "numeric", "--s", "3"]);
    let (pf, det) = (as_f64(&v["value"]), as_f64(&v["det_route"]));
    assert!(((pf - det) / det).abs() < 1e-8, "{pf} vs {det}");
}

#[test]
fn volumes() {
    let v = json(&["volume", "--kind", "reciprocal", "--N", "4", "--field", "real"]);
    assert_eq!(ratio(&v["value_times_pi^-k"]), ("655360".into(), "11907".into()));
    let v = json(&["volume", "--kind", "mahler", "--N", "1", "--field", "real"]);
    assert_eq!(ratio(&v["value_times_pi^-k"]), ("4".into(), "1".into()));
    let v = json(&["volume", "--kind", "mahler", "--N", "1", "--route", "mc", "--samples", "1e5", "--seed", "7"]);
    assert!((as_f64(&v["value"]) - 4.0).abs() <= 3.0 * as_f64(&v["std_error"]) + 1e-12);
}

#[test]
fn counts_and_budget() {
    let v = json(&["count", "--N", "1", "--T", "10"]);
    assert_eq!(v["exact"], 40);
    assert!((as_f64(&v["predicted"]) - 40.0).abs() < 1e-9);
    let v = json(&["count", "--N", "2", "--T", "40", "--threads", "2"]);
    let exact = v["exact"].as_u64().unwrap() as f64;
    assert!((exact / 8533.333 - 1.0).abs() < 0.15);
    assert_eq!(mdist(&["count", "--N", "6", "--T", "1000"]).status.code(), Some(4));
}

#[test]
fn h_trajectory_csv() {
    let out = mdist(&["trajectory", "--type", "H", "--N", "6", "--t", "0.05:0.95:0.05"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.starts_with('\u{feff}'));
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,feature,index,re_s,im_s");
    assert_eq!(lines.len(), 1 + 19 * 19);
    let row = lines
        .iter()
        .map(|l| l.split(',').collect::<Vec<_>>())
        .find(|c| c[1] == "zero" && c[2] == "1" && (c[0].parse::<f64>().unwrap() - 0.5).abs() < 1e-12)
        .expect("zero row at t = 1/2");
    assert!((row[3].parse::<f64>().unwrap() + 5.0 / 3.0).abs() < 1e-12);
}

#[test]
fn f_trajectory_zeros() {
    let out = mdist(&["trajectory", "--type", "F", "--N", "2", "--t", "0.1:0.9:0.2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let zeros: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect::<Vec<_>>())
        .filter(|c| c[1] == "zero" && c[2] == "1")
        .map(|c| c[3].parse().unwrap())
        .collect();
    assert_eq!(zeros.len(), 5);
    assert!(zeros.iter().all(|&z| z > -2.0 && z < 0.0), "{zeros:?}");
}

#[test]
fn identical_flags_give_identical_bytes() {
    let args = ["--json", "volume", "--kind", "reciprocal", "--N", "1", "--route", "mc", "--samples", "20000", "--seed", "3"];
    let a = mdist(&args);
    let mut threaded = vec!["--threads", "2"];
    threaded.extend_from_slice(&args);
    let b = mdist(&threaded);
    let c = mdist(&args);
    assert_eq!(a.stdout, c.stdout);
    assert!(a.status.success() && b.status.success());
    let va: Value = serde_json::from_slice(&a.stdout).unwrap();
    let vb: Value = serde_json::from_slice(&b.stdout).unwrap();
    assert_eq!(va["value"], vb["value"]);
}

#[test]
fn verify_table_suite() {
    let out = mdist(&["verify", "--suite", "table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("suite table: 13/13 checks passed"), "{text}");
    let v = json(&["verify", "--suite", "pfaffian", "--trials", "10"]);
    assert_eq!(v["passed"], true);
    assert_eq!(mdist(&["verify", "--suite", "nope"]).status.code(), Some(2));
}
