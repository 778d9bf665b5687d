//! The exported functions, called natively through the rlib.

use bessel_wasm_demo::{chain, classify, coset_table};
use serde_json::Value;

fn parse(text: String) -> Value {
    serde_json::from_str(&text).expect("exports return JSON")
}

#[test]
fn classify_so5() {
    let v = parse(classify("so-odd", 2, 1, 1));
    assert_eq!(v["cosets"].as_array().unwrap().len(), 4);
    assert_eq!(v["survivors"], serde_json::json!(["(1 5)"]));
    assert_eq!(v["verified"], false);
    let w0_rows = v["cosets"].as_array().unwrap().iter().filter(|c| c["is_w0"] == true).count();
    assert_eq!(w0_rows, 1);
}

#[test]
fn coset_table_counts() {
    let v = parse(coset_table("so-even", 3, 2));
    let rows = v["cosets"].as_array().unwrap();
    // |W(D3)| / |S_2 x W(D1)| = 24 / 2.
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().any(|r| r["w2"].as_str().unwrap().starts_with("four-cycle")));
}

#[test]
fn chains_between_associate_subsets() {
    let v = parse(chain("so-odd", 3, "e1-e2", "e2-e3"));
    let chains = v["chains"].as_array().unwrap();
    assert!(!chains.is_empty());
    assert!(chains.iter().all(|c| c["w"].is_string() && c["steps"].is_array()));
    assert!(parse(chain("so-odd", 3, "e1-e2", "e3"))["chains"].as_array().unwrap().is_empty());
}

#[test]
fn errors_are_json() {
    for text in [classify("sp", 3, 1, 1), classify("so-odd", 9, 1, 1), coset_table("u-odd", 3, 3), chain("so-odd", 3, "e1-e3", "e1-e2")] {
        assert!(parse(text)["error"].is_string());
    }
}
