use std::process::{Command, Output};

use serde_json::Value;
use sphrect::accessory::{solve, SolverOptions};
use sphrect::constants::k_crit;

fn sphrect(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sphrect")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn num(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn constants_are_printed_to_twelve_digits() {
    let out = sphrect(&["constants"]);
    let v = json(&out);
    assert!((num(&v["lambda"]) - 0.1076539192).abs() < 1e-9);
    assert!((num(&v["kappa_prime_crit"]) - 0.9089085575).abs() < 1e-9);
    assert!((num(&v["k_crit"]) - 2.4305).abs() < 5e-5);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"lambda\": 1.07653919226e-1"), "{text}");
}

#[test]
fn solve_first_and_second_family() {
    let v = json(&sphrect(&["solve", "--k", "2"]));
    assert!((num(&v["alpha"]) - 0.5).abs() < 1e-6);
    assert!((num(&v["modulus"]) - 0.63963).abs() < 1e-5);
    assert_eq!(v["family"], "first");
    let v = json(&sphrect(&["solve", "--k", "3"]));
    assert_eq!(v["family"], "second");
    let c = num(&v["c"]);
    assert!(c > 1.0 && c < 3.0);
}

#[test]
fn solve_rejects_bad_k_with_usage_status() {
    for k in ["1", "0.5", "nan"] {
        assert_eq!(sphrect(&["solve", "--k", k]).status.code(), Some(2), "k = {k}");
    }
    let kc = format!("{:.17}", k_crit());
    let out = sphrect(&["solve", "--k", &kc]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("k_crit"));
    assert_eq!(sphrect(&["solve"]).status.code(), Some(2));
}

#[test]
fn solve_respects_tolerance_flags() {
    let v = json(&sphrect(&["--tol-quad", "1e-12", "--tol-root", "1e-14", "solve", "--k", "2"]));
    assert!((num(&v["c"]) - (3f64.sqrt() - 1.0)).abs() < 1e-12);
    assert_eq!(sphrect(&["--tol-quad", "0", "solve", "--k", "2"]).status.code(), Some(2));
}

#[test]
fn sweep_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = sphrect(&["sweep", "--k-min", "1.1", "--k-max", "2.4", "--steps", "14", "--out", path.to_str().unwrap()]);
    let summary = json(&out);
    assert_eq!(num(&summary["rows"]), 14.0);

    let mut reader = csv::Reader::from_path(&path).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["k", "c", "alpha", "modulus", "residual", "family"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 14);
    let opts = SolverOptions::default();
    let field = |r: &csv::StringRecord, i: usize| r[i].parse::<f64>().unwrap();
    for (i, r) in rows.iter().enumerate() {
        let k = field(r, 0);
        assert!((k - (1.1 + 0.1 * i as f64)).abs() < 1e-12);
        let s = solve(k, &opts).unwrap();
        let expected = [s.k(), s.c, s.alpha, s.modulus, s.residual];
        for (j, e) in expected.iter().enumerate() {
            assert_eq!(field(r, j).to_bits(), e.to_bits(), "row {i} column {j}");
        }
        assert_eq!(&r[5], "first");
    }
    for w in rows.windows(2) {
        assert!(field(&w[1], 1) > field(&w[0], 1));
        assert!(field(&w[1], 3) > field(&w[0], 3));
    }
}

#[test]
fn sweep_skips_the_critical_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let kc = k_crit();
    let (lo, hi) = (format!("{:.17}", kc - 0.1), format!("{:.17}", kc + 0.1));
    let out = sphrect(&["sweep", "--k-min", &lo, "--k-max", &hi, "--steps", "3", "--out", path.to_str().unwrap()]);
    let summary = json(&out);
    assert_eq!(num(&summary["rows"]), 2.0);
    assert_eq!(summary["skipped"].as_array().unwrap().len(), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("skipping"));
    let families: Vec<String> =
        csv::Reader::from_path(&path).unwrap().records().map(|r| r.unwrap()[5].to_string()).collect();
    assert_eq!(families, ["first", "second"]);
}

#[test]
fn sweep_argument_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let p = path.to_str().unwrap();
    assert_eq!(
        sphrect(&["sweep", "--k-min", "2", "--k-max", "1.5", "--steps", "3", "--out", p]).status.code(),
        Some(2)
    );
    assert_eq!(
        sphrect(&["sweep", "--k-min", "1.5", "--k-max", "2", "--steps", "1", "--out", p]).status.code(),
        Some(2)
    );
    let bad = dir.path().join("missing").join("s.csv");
    let out = sphrect(&["sweep", "--k-min", "1.5", "--k-max", "2", "--steps", "2", "--out", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn modulus_both_directions() {
    let v = json(&sphrect(&["modulus", "--k", "2"]));
    assert!((num(&v["modulus"]) - 0.63963).abs() < 1e-5);
    assert!((num(&v["modulus"]) * num(&v["reciprocal_modulus"]) - 1.0).abs() < 1e-15);
    let back = json(&sphrect(&["modulus", "--K", &format!("{:.17}", num(&v["modulus"]))]));
    assert!((num(&back["k"]) - 2.0).abs() < 1e-9);
    assert_eq!(back["family"], "first");
    assert_eq!(sphrect(&["modulus"]).status.code(), Some(2));
    assert_eq!(sphrect(&["modulus", "--k", "2", "--K", "0.5"]).status.code(), Some(2));
    assert_eq!(sphrect(&["modulus", "--K", "-1"]).status.code(), Some(2));
}

#[test]
fn belyi_examples_pass_strict() {
    for n in ["1", "2", "3"] {
        let v = json(&sphrect(&["belyi", "--example", n, "--strict"]));
        assert_eq!(v["all_passed"], true, "example {n}");
        assert!(v["portrait"]["entries"].as_array().unwrap().len() >= 4);
    }
    let v = json(&sphrect(&["belyi", "--example", "2"]));
    assert!(num(&v["conditions"]["max_residual"]) <= 1e-10);
    assert!(num(&v["printed_variant"]["conditions"]["max_residual"]) > 1e-3);
    assert!(v["printed_variant"]["verify_error"].is_string());
    let corners = v["corners"].as_array().unwrap();
    assert_eq!(corners.len(), 4);
    assert!(corners.iter().any(|c| c["x"].is_null()));
}

#[test]
fn belyi_strict_failure_exits_four() {
    // A tolerance no double-precision check can meet.
    let out = sphrect(&["belyi", "--example", "2", "--strict", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(4));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["all_passed"], false);
    assert_eq!(sphrect(&["belyi", "--example", "4"]).status.code(), Some(2));
}

#[test]
fn boundary_report_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("b.svg");
    let v = json(&sphrect(&["boundary", "--k", "2", "--samples", "32", "--svg", svg.to_str().unwrap()]));
    assert!(num(&v["max_defect"]) <= 1e-6);
    assert_eq!(v["unit_pair_opposite"], true);
    assert_eq!(v["sides"].as_array().unwrap().len(), 4);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
    assert!(text.matches("<polyline").count() >= 4);
    assert_eq!(sphrect(&["boundary", "--k", "3"]).status.code(), Some(2));
}

#[test]
fn unreachable_quadrature_tolerance_is_numerical_failure() {
    let out = sphrect(&["--tol-quad", "1e-300", "solve", "--k", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("accuracy"));
}
