//! Browser bindings for the classifier, the coset table and Langlands chains.
//!
//! Every export takes plain strings and integers and returns a JSON string.
//! Failures come back as `{"error": "..."}` so the page never has to catch.

use bessel_core::chain::{langlands_chain, parse_theta, weyl_between};
use bessel_core::support::{classify as run_classify, Support};
use bessel_core::weyl::{coset_key, coset_reps, normal_form, W2};
use bessel_core::{make_config, GroupDatum, GroupKind, LeviDatum, Result};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest rank the page accepts; enumeration grows like `2^r r!`.
pub const MAX_RANK: usize = 6;

fn respond(out: Result<Value>) -> String {
    match out {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

fn group(kind: &str, r: usize) -> Result<GroupDatum> {
    if r > MAX_RANK {
        return Err(bessel_core::Error::BadParameter(format!("rank {r} is above the demo limit {MAX_RANK}")));
    }
    GroupDatum::new(kind.parse::<GroupKind>()?, r)
}

fn w2_text(w2: &W2) -> String {
    match w2 {
        W2::Identity => "1".into(),
        W2::DPrime(d) => format!("(d0 d0') d0={d}"),
        W2::FourCycle { i0, j0 } => format!("four-cycle i0={i0} j0={j0}"),
    }
}

/// Support verdict for every coset of `(kind, r, n, ell1)`.
#[wasm_bindgen]
pub fn classify(kind: &str, r: usize, n: usize, ell1: usize) -> String {
    respond((|| {
        group(kind, r)?;
        let config = make_config(kind.parse()?, r, n, ell1)?;
        let cl = run_classify(&config)?;
        let support = Support::new(&config)?;
        let rows: Vec<Value> = cl
            .verdicts
            .iter()
            .map(|v| {
                json!({
                    "coset": v.coset.to_cycles(),
                    "case_tag": v.case_tag,
                    "x0": v.verdict_x_zero.label(),
                    "xnz": v.verdict_x_nonzero.label(),
                    "witness": v.witness_text(),
                    "is_w0": support.is_w0_coset(&v.coset),
                })
            })
            .collect();
        Ok(json!({
            "group": config.group.to_string(),
            "ell": config.ell(),
            "cosets": rows,
            "survivors": cl.survivors.iter().map(|w| w.to_cycles()).collect::<Vec<_>>(),
            "w0": cl.w0.to_cycles(),
            "verified": cl.is_verified(),
            "discrepancies": cl.discrepancies.iter().map(|d| format!("{}: {}", d.coset, d.detail)).collect::<Vec<_>>(),
        }))
    })())
}

/// Canonical representatives of `W_M \ W` with their normal forms.
#[wasm_bindgen]
pub fn coset_table(kind: &str, r: usize, n: usize) -> String {
    respond((|| {
        let levi = LeviDatum::new(group(kind, r)?, n)?;
        let rows: Vec<Value> = coset_reps(&levi)?
            .iter()
            .map(|w| {
                let nf = normal_form(w, &levi);
                json!({
                    "rep": w.to_cycles(),
                    "key": coset_key(w, &levi),
                    "bar_pairs": nf.w1_bar_pairs,
                    "cross_pairs": nf.w1_cross_pairs,
                    "w2": w2_text(&nf.w2),
                    "listed_shape": nf.is_listed_shape(levi.group()),
                })
            })
            .collect();
        Ok(json!({ "group": levi.group().to_string(), "n": n, "cosets": rows }))
    })())
}

/// Chains for every `w` with `wθ = θ'`; `theta` lists simple roots like `e1-e2,e3`.
#[wasm_bindgen]
pub fn chain(kind: &str, r: usize, theta: &str, theta_prime: &str) -> String {
    respond((|| {
        let g = group(kind, r)?;
        let (t, tp) = (parse_theta(g, theta)?, parse_theta(g, theta_prime)?);
        let chains = weyl_between(g, &t, &tp)?
            .iter()
            .map(|w| {
                let c = langlands_chain(&t, w)?;
                Ok(json!({ "w": w.to_cycles(), "steps": c.export() }))
            })
            .collect::<Result<Vec<Value>>>()?;
        Ok(json!({ "group": g.to_string(), "chains": chains }))
    })())
}
