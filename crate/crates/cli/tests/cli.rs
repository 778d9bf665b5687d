use std::process::{Command, Output};

use serde_json::Value;

fn bessel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bessel")).args(args).output().expect("binary runs")
}

fn bessel_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bessel")).args(args).env(key, val).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

/// Exit 1 exactly when the report lists counterexamples.
fn assert_exit_contract(out: &Output) -> Value {
    let v = json(out);
    let n = v["counterexamples"].as_array().unwrap().len();
    assert_eq!(out.status.code(), Some(if n == 0 { 0 } else { 1 }), "{v}");
    v
}

#[test]
fn classify_so5_lists_four_cosets_and_flags_the_near_w0_coset() {
    let out = bessel(&["classify", "--group", "so-odd", "--rank", "2", "--n", "1", "--ell1", "1"]);
    let v = assert_exit_contract(&out);
    assert_eq!(v["cosets"].as_array().unwrap().len(), 4);
    let survivors = v["survivors"].as_array().unwrap();
    assert_eq!(survivors.len(), 1);
    assert_eq!(survivors[0]["is_w0"], true);
    // The alpha_ell coset is only obstructed off a quadric, so the run is
    // not a full verification.
    assert_eq!(out.status.code(), Some(1));
    let ce = v["counterexamples"].as_array().unwrap();
    assert_eq!(ce.len(), 1);
    assert!(ce[0].as_str().unwrap().contains("obstructed-off-quadric"));
}

#[test]
fn report_has_the_stable_keys() {
    let v = json(&bessel(&["classify", "--rank", "2", "--n", "1", "--ell1", "1"]));
    for key in ["version", "command", "group", "r", "n", "ell1", "cosets", "survivors", "lemmas", "chains", "matchecks"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn json_output_round_trips() {
    let out = bessel(&["classify", "--group", "so-even", "--rank", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap(), text.trim_end());
}

#[test]
fn whittaker_case_is_verified() {
    let out = bessel(&["classify", "--whittaker", "--group", "all", "--rank", "2..4"]);
    let v = assert_exit_contract(&out);
    assert_eq!(out.status.code(), Some(0));
    assert!(v["survivors"].as_array().unwrap().iter().all(|s| s["is_w0"] == true));
}

#[test]
fn csv_has_the_documented_columns() {
    let out = bessel(&["classify", "--rank", "2", "--n", "1", "--ell1", "1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("coset,case_tag,x0_verdict,xnz_verdict,witness"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn csv_sweep_gains_a_config_column() {
    let out = bessel(&["classify", "--rank", "3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("config,coset,case_tag"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["classify", "--rank", "1"],
        vec!["classify", "--rank", "2", "--n", "1", "--ell1", "2"],
        vec!["classify", "--group", "sp", "--rank", "2"],
        vec!["classify"],
        vec!["verify", "--lemma", "2.16", "--rank", "3"],
        vec!["chain", "--rank", "3", "--theta", "e1-e3"],
        vec!["oracle", "--group", "u-odd"],
        vec!["frobnicate"],
    ] {
        let out = bessel(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn cap_from_the_environment() {
    let args = ["classify", "--group", "so-odd", "--rank", "4", "--n", "2", "--ell1", "1"];
    let out = bessel_env(&args, "BESSEL_CAP", "10");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
    assert_eq!(bessel_env(&args, "BESSEL_CAP", "many").status.code(), Some(2));
}

#[test]
fn verify_block_fixed_sweep_passes() {
    let out = bessel(&["verify", "--lemma", "other-block-fixed", "--group", "all", "--rank", "<=5"]);
    let v = assert_exit_contract(&out);
    assert_eq!(out.status.code(), Some(0));
    assert!(v["lemmas"].as_array().unwrap().iter().all(|l| l["pass"] == true));
}

#[test]
fn verify_reports_the_ell_equals_n_failure() {
    // ell = r - ell1 = 1 = n: the alpha_ell coset moves ell.
    let out = bessel(&["verify", "--lemma", "other-fixes-ell", "--rank", "2", "--n", "1", "--ell1", "1"]);
    let v = assert_exit_contract(&out);
    assert_eq!(out.status.code(), Some(1));
    let rows = v["lemmas"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["pass"], false);
    assert!(rows[0]["counterexample"].as_str().unwrap().contains("(1 4 5 2)"));
    // ell = 2 > n = 1 on SO_7: the same check holds.
    let ok = bessel(&["verify", "--lemma", "other-fixes-ell", "--rank", "3", "--n", "1", "--ell1", "1"]);
    assert_exit_contract(&ok);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn chain_of_a_non_associate_pair_is_empty() {
    let out = bessel(&["chain", "--group", "so-odd", "--rank", "3", "--theta", "e1-e2", "--theta-prime", "e3"]);
    let v = assert_exit_contract(&out);
    assert_eq!(out.status.code(), Some(0));
    assert!(v["chains"].as_array().unwrap().is_empty());
}

#[test]
fn chain_factors_every_element() {
    let out = bessel(&["chain", "--group", "so-even", "--rank", "4", "--theta", "e1-e2", "--theta-prime", "e3-e4"]);
    let v = assert_exit_contract(&out);
    let chains = v["chains"].as_array().unwrap();
    assert!(!chains.is_empty());
    assert!(chains.iter().all(|c| c["pass"] == true));
}

#[test]
fn matcheck_is_byte_identical_for_a_seed() {
    let args = ["matcheck", "--identity", "commutation", "--q", "5", "--trials", "10", "--seed", "7", "--group", "so-odd,u-even", "--rank", "2"];
    let a = bessel(&args);
    let b = bessel(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = assert_exit_contract(&a);
    assert_eq!(a.status.code(), Some(0));
    let signs: Vec<&Value> = v["matchecks"].as_array().unwrap().iter().map(|m| &m["commutation_signs"]).collect();
    assert!(signs.iter().all(|s| s.as_array().unwrap().iter().all(|x| x == 1)));
    assert!(signs.iter().any(|s| !s.as_array().unwrap().is_empty()));
}

#[test]
fn oracle_exit_code_tracks_the_second_orbit() {
    let square = bessel(&["oracle", "--q", "3", "--delta", "1"]);
    let v = assert_exit_contract(&square);
    assert_eq!(square.status.code(), Some(0));
    assert_eq!(v["oracle"]["group_order"], 51840);
    assert_eq!(v["oracle"]["points"], 40);

    let non_square = bessel(&["oracle", "--q", "3", "--delta", "2"]);
    assert_exit_contract(&non_square);
    assert_eq!(non_square.status.code(), Some(1));
}
