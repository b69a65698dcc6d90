use std::process::{Command, Output};

use serde_json::Value;

fn bestofn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bestofn"))
        .args(args)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .env("BESTOFN_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    csv::Reader::from_reader(body.as_bytes())
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn exact_best_of_three() {
    let out = bestofn(&["exact", "--regime", "constant", "--n", "2", "--p", "3/5", "--mode", "exact"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["results"]["expectations"]["e_z"], "62/125");
    assert_eq!(v["command"], "exact");
    assert_eq!(v["provenance"]["timestamp"], "2023-11-14T22:13:20Z");
}

#[test]
fn exact_trivial_cases() {
    let v = json_of(&bestofn(&["exact", "--regime", "antiok", "--n", "1"]));
    assert_eq!(v["results"]["win_probability"]["player1"], "1/2");
    assert_eq!(v["results"]["win_probability"]["player2"], "1/2");
    let v = json_of(&bestofn(&["exact", "--regime", "constant", "--n", "1", "--p", "1/2"]));
    assert_eq!(v["results"]["expectations"]["e_z"], "0/1");
}

#[test]
fn exact_csv_rows_sum_to_one() {
    let out = bestofn(&["exact", "--regime", "polya", "--n1", "2", "--n2", "1", "--n", "6", "--mode", "float", "--format", "csv"]);
    let total: f64 = csv_rows(&out).iter().map(|r| r[3].parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn usage_and_capacity_exit_codes() {
    assert_eq!(bestofn(&["exact", "--regime", "constant", "--n", "3"]).status.code(), Some(2));
    assert_eq!(bestofn(&["exact", "--regime", "constant", "--n", "3", "--p", "7/5"]).status.code(), Some(2));
    assert_eq!(bestofn(&["exact", "--regime", "polya", "--n", "3", "--p", "1/2"]).status.code(), Some(2));
    assert_eq!(bestofn(&["nonsense"]).status.code(), Some(2));
    assert_eq!(bestofn(&["exact", "--regime", "constant", "--n", "3", "--p", "0.5", "--mode", "exact"]).status.code(), Some(2));
    let cap = bestofn(&["exact", "--regime", "constant", "--n", "600", "--p", "3/5"]);
    assert_eq!(cap.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&cap.stderr).contains("512"));
    let out = Command::new(env!("CARGO_BIN_EXE_bestofn"))
        .args(["formula", "antiok-limit", "--k", "1"])
        .env("BESTOFN_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn formula_commands() {
    let v = json_of(&bestofn(&["formula", "catalan-mean", "--n", "2", "--p", "3/5", "--check"]));
    assert_eq!(v["results"]["value"], "62/125");
    assert_eq!(v["results"]["check"]["pass"], true);

    let v = json_of(&bestofn(&["formula", "antiok-limit", "--k", "1"]));
    assert_eq!(v["results"]["value_float"], 0.25);

    let out = bestofn(&["formula", "identities", "--max", "30"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["results"]["pass"], true);

    let v = json_of(&bestofn(&["formula", "antiok-exact", "--n", "7", "--check"]));
    let rows = v["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r["pass"] == true));
    // k = 1: n / (2(2n-1)) = 7/26
    assert_eq!(rows[0]["probability"], "7/26");

    let v = json_of(&bestofn(&["formula", "negbin-pmf", "--n", "10", "--p", "0.7", "--check"]));
    assert!(v["results"]["rows"].as_array().unwrap().iter().all(|r| r["pass"] == true));

    let v = json_of(&bestofn(&["formula", "bounds", "--n", "10", "--p", "3/5", "--check", "--lambda", "1/2", "--tail-a", "4"]));
    assert_eq!(v["results"]["martingale"][0]["bound_value"], "50/3");
    // (4 lambda / (1 + lambda)^2)^n = (8/9)^10
    assert_eq!(v["results"]["gamma_race_bound"], "1073741824/3486784401");

    let v = json_of(&bestofn(&["formula", "polya-winprob", "--n1", "2", "--n2", "1"]));
    assert!((v["results"]["win_probability"].as_f64().unwrap() - 0.75).abs() < 1e-10);

    let v = json_of(&bestofn(&["formula", "polya-profit", "--n", "5"]));
    assert_eq!(v["results"]["exact_forms_agree"], true);
}

#[test]
fn simulate_against_exact() {
    let out = bestofn(&[
        "simulate", "--regime", "constant", "--n", "5", "--p", "0.6", "--samples", "1000000", "--seed", "42",
        "--compare-exact",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert!(v["results"]["tv_distance_to_exact"].as_f64().unwrap() <= 0.005);
    assert_eq!(v["provenance"]["seed"], 42);
}

#[test]
fn simulate_empty_and_mismatch() {
    let v = json_of(&bestofn(&["simulate", "--regime", "antiok", "--n", "4", "--samples", "0"]));
    assert_eq!(v["results"]["summary"]["total"], 0);
    assert!(v["results"]["summary"]["empirical_e_z"].is_null());
    let out = bestofn(&["simulate", "--regime", "antiok", "--n", "4", "--sampler", "poisson_race"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_is_repeatable() {
    let args = ["simulate", "--regime", "polya", "--n1", "1", "--n2", "2", "--n", "6", "--samples", "50000", "--seed", "9"];
    let a = bestofn(&args);
    let b = bestofn(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_round_trips_byte_for_byte() {
    for args in [
        vec!["exact", "--regime", "polya", "--n1", "2", "--n2", "3", "--n", "5", "--mode", "float"],
        vec!["formula", "polya-profit", "--n", "7"],
        vec!["simulate", "--regime", "constant", "--n", "4", "--p", "0.55", "--samples", "3000"],
        vec!["verify", "--suite", "identities", "--quick"],
    ] {
        let out = bestofn(&args);
        let text = String::from_utf8(out.stdout).unwrap();
        let parsed: Value = serde_json::from_str(&text).unwrap();
        let again = serde_json::to_string_pretty(&parsed).unwrap() + "\n";
        assert_eq!(again, text, "{args:?}");
        let env: bestofn_cli::OutputEnvelope = serde_json::from_str(&text).unwrap();
        assert_eq!(env.to_json(), text);
    }
}

#[test]
fn verify_identities_passes_and_fault_fails() {
    let out = bestofn(&["verify", "--suite", "identities"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["results"]["pass"], true);

    let out = bestofn(&["verify", "--suite", "all", "--quick", "--inject-catalan-fault"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Catalan convolution lemma"), "{err}");
    assert!(err.contains("catalan mean equals DP"), "{err}");
}

#[test]
fn verify_clt_passes() {
    let out = bestofn(&["verify", "--suite", "clt"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn plotdata_path_meets_line() {
    let rows = csv_rows(&bestofn(&["plotdata", "path", "--regime", "antiok", "--n", "20", "--seed", "7"]));
    let parsed: Vec<(i64, i64, i64)> = rows
        .iter()
        .map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap(), r[2].parse().unwrap()))
        .collect();
    assert_eq!(parsed[0], (0, 0, 40));
    let (_, x, line) = *parsed.last().unwrap();
    assert_eq!(x.abs(), line);
    assert!(parsed[..parsed.len() - 1].iter().all(|(_, x, l)| x.abs() < *l));
    assert!(parsed.windows(2).all(|w| w[1].0 == w[0].0 + 1 && (w[1].1 - w[0].1).abs() == 1));
}

#[test]
fn plotdata_grids() {
    let rows = csv_rows(&bestofn(&["plotdata", "zeta-density", "--n1", "2", "--n2", "3", "--points", "401"]));
    assert_eq!(rows.len(), 401);
    assert!(rows.iter().all(|r| r[1].parse::<f64>().unwrap() >= 0.0));

    let rows = csv_rows(&bestofn(&["plotdata", "margin-pmf", "--regime", "constant", "--n", "20", "--p", "0.6"]));
    let total: f64 = rows.iter().map(|r| r[3].parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("bestofn-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pmf.csv");
    let out = bestofn(&["plotdata", "margin-pmf", "--regime", "antiok", "--n", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# bestofn"));
    let missing = dir.join("no/such/dir/x.csv");
    let out = bestofn(&["formula", "antiok-limit", "--k", "2", "--out", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    std::fs::remove_dir_all(&dir).unwrap();
}
