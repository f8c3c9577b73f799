//! End-to-end checks of the binary: grammar, exit codes, JSON shapes,
//! output determinism, and the data-path override.

use std::process::{Command, Output};

fn watkins(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_watkins"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn watkins_env(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_watkins"));
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

#[test]
fn signature_of_32a3_prints_inf() {
    let out = watkins(&["signature", "--label", "32.a3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "(4, inf, 6)\n");
}

#[test]
fn signature_at_odd_prime() {
    let out = watkins(&["signature", "--label", "17.a1", "-p", "17"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "(0, 0, 1)\n");
}

#[test]
fn invariants_of_literal_curve() {
    let out = watkins(&["invariants", "--curve", "0,0,0,-1,0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("c4 = 48"));
    assert!(text.contains("disc = 64"));
}

#[test]
fn ap_by_point_counting() {
    let out = watkins(&["ap", "--label", "17.a4", "-q", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "-2\n");
}

#[test]
fn coeffs_export_is_csv() {
    let out = watkins(&["coeffs", "--curve", "0,0,0,-5,0", "-B", "15"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("n,a_n\n1,1\n"));
    assert!(text.contains("\n13,-4\n"));
}

#[test]
fn twist_reports_minimal_model() {
    let out = watkins(&["--json", "twist", "--label", "32.a3", "-D", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["model"], "[0,0,0,-4,0]");
    assert_eq!(v["disc"], "4096");
}

#[test]
fn local_data_at_two() {
    let out = watkins(&["--json", "local", "--label", "32.a3", "-p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["f"], 5);
    assert_eq!(v["kind"], "additive");
}

#[test]
fn conductor_is_factored() {
    let out = watkins(&["conductor", "--curve", "0,0,0,-5,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("800 = 2^5 * 5^2\n"));
}

#[test]
fn bound_watkins_report() {
    let out = watkins(&["--json", "bound", "watkins", "--label", "17.a4", "-D", "-3"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "HOLDS_BY_BOUNDS");
    assert_eq!(v["rank_upper"], 3);
    assert_eq!(v["terms"]["v2_m_over_c2"], -2);
    assert_eq!(v["mdeg_val_lower"], "3");
    // The claimed-territory prime case D = 3 (-1 mod 4) gets the full
    // closed-form bound -2 + 4 + 2 = 4.
    let out = watkins(&["--json", "bound", "watkins", "--label", "17.a4", "-D", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["mdeg_val_lower"], "4");
    assert_eq!(v["verdict"], "HOLDS_BY_BOUNDS");
}

#[test]
fn bound_terms_individually() {
    let out = watkins(&["bound", "rank", "--label", "32.a4", "-D", "2"]);
    assert_eq!(stdout(&out), "1\n");
    let out = watkins(&[
        "bound",
        "petersson",
        "--label",
        "17.a4",
        "-D",
        "-3",
        "--mode",
        "cased",
    ]);
    assert_eq!(stdout(&out), "4\n");
    let out = watkins(&["bound", "disc", "--label", "17.a4", "-D", "3"]);
    assert_eq!(stdout(&out), "2\n");
}

#[test]
fn verify_tables_reports_known_discrepancies() {
    let out = watkins(&["verify", "tables"]);
    // The bundled claims carry the source tables' corrupt rows; the check
    // names them and fails honestly.
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("49.a2: DISC MISMATCH"));
    assert!(text.contains("49.a4: DISC MISMATCH"));
    assert!(text.contains("128.c1: SIGNATURE MISMATCH"));
    assert!(text.contains("17.a1: ok"));
    assert!(text.contains("32 checks, 6 discrepancies"));
}

#[test]
fn verify_congruence_single_d() {
    let out = watkins(&["--json", "verify", "congruence", "-d", "5", "-B", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["bound"], 3);
    assert_eq!(v["min_observed_val"], 3);
    assert_eq!(v["claim_ok"], true);
    assert_eq!(v["conductor_family_ok"], true);
    assert_eq!(v["tight_witnesses"][0]["n"], 13);
    assert_eq!(v["tight_witnesses"][0]["value"], -8);
}

#[test]
fn verify_congruence_needs_exactly_one_range() {
    let out = watkins(&["verify", "congruence"]);
    assert_eq!(out.status.code(), Some(2));
    let out = watkins(&["verify", "congruence", "-d", "5", "--d-max", "15"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_lemmas_quick() {
    let out = watkins(&["verify", "lemmas", "-d", "3,5", "--q-max", "100"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("PASS\n"));
}

#[test]
fn verify_conductor_family_single() {
    let out = watkins(&["--json", "verify", "conductor-family", "-d", "105"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["families"][0]["members"], 8);
    assert_eq!(v["families"][0]["equal"], true);
}

#[test]
fn verify_watkins_sweep_small() {
    let out = watkins(&["verify", "watkins-sweep", "--d-limit", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("PASS\n"));
}

#[test]
fn setzer_pair_and_scan() {
    let out = watkins(&["setzer", "-p", "73"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("73.a1: [1,-1,0,-1,0] (disc 73)"));
    assert!(text.contains("73.a2: [1,-1,0,4,-3] (disc -5329)"));

    let out = watkins(&["setzer", "--limit", "200"]);
    let text = stdout(&out);
    assert!(text.contains("3 primes below 200"));
    assert!(text.contains("89:"));

    // 17 is the four-curve exceptional class, not a Setzer pair.
    let out = watkins(&["setzer", "-p", "17"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    // No selector at all is a clap-level error.
    let out = watkins(&["signature"]);
    assert_eq!(out.status.code(), Some(2));
    // Unknown label is a domain error.
    let out = watkins(&["signature", "--label", "99.z9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("99.z9"));
    // Composite where a prime is required.
    let out = watkins(&["ap", "--label", "17.a4", "-q", "4"]);
    assert_eq!(out.status.code(), Some(2));
    // Non-squarefree twist parameter.
    let out = watkins(&["twist", "--label", "17.a4", "-D", "4"]);
    assert_eq!(out.status.code(), Some(2));
    // Malformed curve literal.
    let out = watkins(&["invariants", "--curve", "1,2,3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_output_is_deterministic() {
    let args = ["--json", "verify", "watkins-sweep", "--d-limit", "5"];
    let first = watkins(&args);
    let second = watkins_env(&args, &[("WATKINS_THREADS", "1")]);
    let third = watkins_env(&args, &[("WATKINS_THREADS", "4")]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, third.stdout);
}

#[test]
fn data_override_is_honored() {
    let dir = std::env::temp_dir().join(format!("watkins-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("one-curve.csv");
    std::fs::write(
        &path,
        "label,a1,a2,a3,a4,a6,mE,cE,disc\n17.a1,1,-1,1,-91,-310,4,2,17\n",
    )
    .unwrap();
    let envs = [("WATKINS_DATA", path.to_str().unwrap())];

    let out = watkins_env(&["ap", "--label", "17.a1", "-q", "3"], &envs);
    assert_eq!(out.status.code(), Some(0));

    // The stock bundle's other labels are gone under the override.
    let out = watkins_env(&["ap", "--label", "32.a3", "-q", "3"], &envs);
    assert_eq!(out.status.code(), Some(2));

    // A corrupt file is a load error, not a panic.
    std::fs::write(&path, "wrong,header\n").unwrap();
    let out = watkins_env(&["ap", "--label", "17.a1", "-q", "3"], &envs);
    assert_eq!(out.status.code(), Some(2));

    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn timing_goes_to_stderr_not_stdout() {
    let out = watkins(&["verify", "conductor-family", "-d", "5"]);
    assert!(stderr(&out).contains("elapsed:"));
    assert!(!stdout(&out).contains("elapsed:"));
}
