use std::process::{Command, Output};

use serde_json::Value;
use tau3_core::special::SingularSeriesTerms;

fn tau3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tau3")).args(args).output().expect("spawn tau3")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report on stdout")
}

#[test]
fn compare_reports_exact_lhs_and_terms() {
    let out = tau3(&["compare", "--variant", "tau3-box", "--x", "10000", "--Q", "256"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let r = &v["reports"][0];
    assert_eq!(r["lhs"].as_u64(), Some(48_514_131));
    let (t1, t2, t3) = (r["t1"].as_f64().unwrap(), r["t2"].as_f64().unwrap(), r["t3"].as_f64().unwrap());
    assert_eq!(r["predicted"].as_f64().unwrap(), t1 + t2 + t3);
    assert!((r["ratio"].as_f64().unwrap() - 1.0).abs() < 0.05);
    assert_eq!(r["config"]["Q"].as_u64(), Some(256));
}

#[test]
fn compare_csv_has_the_eight_column_schema() {
    let out = tau3(&["compare", "--x", "100", "400", "--Q", "64", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,lhs,t1,t2,t3,predicted,ratio,Q");
    assert_eq!(lines.len(), 3);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 8));
}

#[test]
fn octant_integral_matches_its_oracle() {
    let out = tau3(&["integrals", "--kind", "K", "--ell", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["value"].as_f64().unwrap() - 0.523599).abs() < 1e-6);
    assert!(v["oracle_delta"].as_f64().unwrap() <= 1e-5);
}

#[test]
fn identity_sides_agree() {
    let left = json(&tau3(&["lhs", "--variant", "identity-1.5-left", "--x", "100"]));
    let right = json(&tau3(&["lhs", "--variant", "identity-1.5-right", "--x", "100"]));
    assert_eq!(left["lhs"], right["lhs"]);
    assert!(left["lhs"].as_u64().unwrap() > 0);
}

#[test]
fn series_value_round_trips_through_json() {
    let v = json(&tau3(&["constants", "--Q", "64"]));
    let c0 = v["series"][0]["value"].as_f64().unwrap();
    let want = SingularSeriesTerms::compute(64).partial(0, 64).re;
    assert_eq!(c0.to_bits(), want.to_bits());
}

#[test]
fn sampled_surveys_depend_only_on_the_seed() {
    let args = ["charsum", "--prime-max", "17", "--samples", "20", "--seed", "7"];
    let a = tau3(&args);
    let b = tau3(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = tau3(&["charsum", "--prime-max", "17", "--samples", "20", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn output_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sieve.csv");
    let out = tau3(&["sieve", "--limit", "10", "--format", "csv", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    // Σ_{n≤10} τ(n) = 27, Σ_{n≤10} τ₃(n) = 53
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "limit,sum_tau,sum_tau3,max_tau3\n10,27,53,10\n");
}

#[test]
fn cached_tables_are_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let first = tau3(&["sieve", "--limit", "1000", "--cache-dir", cache]);
    assert!(dir.path().join("divisor-tables-1000.bin").exists());
    let second = tau3(&["sieve", "--limit", "1000", "--cache-dir", cache]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn failure_classes_have_distinct_exit_codes() {
    assert_eq!(tau3(&["lhs", "--bogus"]).status.code(), Some(2));
    assert_eq!(tau3(&["lhs", "--variant", "nope", "--x", "10"]).status.code(), Some(2));
    assert_eq!(tau3(&["sieve", "--limit", "100000000000"]).status.code(), Some(4));
    assert_eq!(
        tau3(&["voronoi", "--q", "4", "--a", "2", "--X", "200"]).status.code(),
        Some(6)
    );
    assert_eq!(tau3(&["lhs", "--variant", "tau3-box", "--x", "0.5"]).status.code(), Some(6));
    assert_eq!(tau3(&["voronoi", "--q", "1", "--a", "1", "--M", "3"]).status.code(), Some(6));
}

#[test]
fn failed_assertion_still_writes_the_report() {
    // The printed main terms are half the residue, which leaves a residual near 1/2.
    let out = tau3(&["voronoi", "--q", "1", "--a", "1", "--X", "500", "--normalization", "printed"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert!(v["residual"].as_f64().unwrap() > 0.4);
    assert!(v["residual_residue"].as_f64().unwrap() < 1e-2);
}
