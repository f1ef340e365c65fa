use std::process::{Command, Output};

use serde_json::Value;

fn levref(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_levref")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = levref(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let v: Value = serde_json::from_str(&stdout(&all)).unwrap();
    assert_eq!(v["schema_version"], 1);
    v
}

fn method<'a>(doc: &'a Value, name: &str) -> &'a Value {
    doc["results"]["methods"].as_array().unwrap().iter().find(|m| m["method"] == name).unwrap_or_else(|| panic!("no {name}"))
}

#[test]
fn bound_reports_every_method() {
    let doc = json(&["bound", "--q", "4", "--n", "11", "--d", "7"]);
    assert_eq!(method(&doc, "refined")["value"]["exact"], "320");
    assert_eq!(method(&doc, "levenshtein")["value"]["exact"], "364");
    assert_eq!(method(&doc, "closed3")["value"]["exact"], "320");
    assert_eq!(method(&doc, "lp")["value"]["exact"], "320");
    let f = &method(&doc, "refined")["detail"]["polynomial"]["expansion"]["coeffs"];
    assert_eq!(f, &serde_json::json!(["63/5324", "117/484", "45/44", "1215/484"]));
    assert_eq!(method(&doc, "refined")["detail"]["polynomial"]["feasibility"]["verdict"], "feasible");
}

#[test]
fn bound_with_one_method_and_by_inner_product() {
    let doc = json(&["bound", "--q", "2", "--n", "12", "--d", "5", "--method", "closed3"]);
    assert_eq!(doc["results"]["methods"].as_array().unwrap().len(), 1);
    assert_eq!(method(&doc, "closed3")["value"]["exact"], "60");
    let doc = json(&["bound", "--q", "3", "--n", "14", "--s", "-1/7", "--method", "refined"]);
    assert_eq!(doc["results"]["d"], 8);
    assert_eq!(method(&doc, "refined")["value"]["exact"], "1188/5");
    assert_eq!(method(&doc, "refined")["value"]["floor"], "237");
}

#[test]
fn invalid_input_exits_with_two() {
    for args in [
        &["bound", "--q", "2", "--n", "12", "--d", "13"][..],
        &["bound", "--q", "3", "--n", "14", "--s", "0.1"],
        &["bound", "--q", "1", "--n", "5", "--d", "2"],
        &["bound", "--q", "4", "--n", "11", "--d", "3", "--method", "closed3"],
        &["scan", "--q", "3", "--n", "x..4"],
        &["bound", "--q", "3"],
    ] {
        let out = levref(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn off_grid_inner_products_need_the_flag() {
    let doc = json(&["bound", "--q", "3", "--n", "14", "--s", "1/10", "--allow-offgrid"]);
    let m = &doc["results"]["methods"];
    assert_eq!(m.as_array().unwrap().len(), 1);
    assert_eq!(m[0]["method"], "levenshtein");
    assert_eq!(m[0]["detail"]["on_grid"], false);
}

#[test]
fn scan_finds_the_ternary_row_and_handles_empty_ranges() {
    let csv = stdout(&["--format", "csv", "scan", "--q", "3", "--n", "10..16"]);
    assert!(csv.lines().any(|l| l == "3,14,8,-1/7,3,513/2,1188/5,237,true,false"));
    assert_eq!(csv.lines().count(), 1 + (10..=16).sum::<usize>());
    let empty = stdout(&["--format", "csv", "scan", "--q", "3", "--n", "9..8"]);
    assert_eq!(empty.lines().count(), 1);
    let doc = json(&["scan", "--q", "3", "--n", "9..8"]);
    assert_eq!(doc["results"], serde_json::json!([]));
}

#[test]
fn scan_by_degree_matches_the_range() {
    let csv = stdout(&["--format", "csv", "scan", "--q", "3", "--n", "40", "--m", "5"]);
    let ms: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').nth(4).unwrap()).collect();
    assert!(!ms.is_empty() && ms.iter().all(|&m| m == "5"));
}

#[test]
fn output_does_not_depend_on_workers() {
    let args = ["--format", "csv", "scan", "--q", "4", "--n", "8..20"];
    let one = Command::new(env!("CARGO_BIN_EXE_levref")).args(args).env("LEVREF_WORKERS", "1").output().unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_levref")).args(args).env("LEVREF_WORKERS", "4").output().unwrap();
    assert!(one.status.success() && many.status.success());
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn rates_decrease_at_short_length() {
    let doc = json(&["rate", "--n", "100", "--ratios", "0.2,0.3,0.4,0.5"]);
    let rows = doc["results"].as_array().unwrap();
    let rates: Vec<f64> = rows.iter().map(|r| r["refined_rate"].as_f64().unwrap()).collect();
    assert!(rates.windows(2).all(|w| w[1] < w[0]));
    assert!(rates[3] > 0.0);
    for r in rows {
        assert!(r["refined_rate"].as_f64().unwrap() <= r["levenshtein_rate"].as_f64().unwrap() + 1e-12);
    }
}

#[test]
fn binary_rate_table_flags_the_misprint() {
    let csv = stdout(&["--format", "csv", "rate", "--mode", "exact"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("0.250,250,0.386,0.386,0.387,0.386,true,"));
    assert!(lines[5].starts_with("0.450,450,0.048,0.048,0.505,0.047,true,"));
    assert!(lines[5].contains("suspected misprint"));
    assert!(lines[1..5].iter().all(|l| l.ends_with(",true,")));
}

#[test]
fn certify_finds_the_short_ternary_exception() {
    let csv = stdout(&["--format", "csv", "certify", "--q", "3", "--n", "7", "--all-d"]);
    assert!(csv.lines().any(|l| l.starts_with("3,7,4,3,54,not_optimal")));
    assert!(csv.lines().any(|l| l.contains("lp_optimal")));
}

#[test]
fn table2_matches_the_golden_file() {
    let csv = stdout(&["--format", "csv", "table2", "--q", "2..5", "--n-max", "100"]);
    assert_eq!(csv, include_str!("golden/table2.csv"));
}

#[test]
fn compare_and_sq() {
    let csv = stdout(&["--format", "csv", "compare", "--q", "2", "--n", "12", "--d", "5"]);
    assert_eq!(csv.lines().nth(1), Some("2,12,5,3,60,40,false,not_optimal"));
    let csv = stdout(&["--format", "csv", "sq", "--q", "3", "--n", "3..20"]);
    assert_eq!(csv.lines().next(), Some("q,n,sigma,sigma_approx,failure_found,certificate_only,scanned"));
    assert_eq!(csv.lines().count(), 19);
}
