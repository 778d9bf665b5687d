//! The nine acceptance criteria, one PASS/FAIL line each.
//!
//! Three criteria are red because the underlying mathematical claims fail in
//! exhaustive checks. Each known-red criterion must still fail, and for the
//! documented reason only; a change in either direction fails this test.

use std::collections::BTreeSet;
use std::time::Instant;

use bessel_core::chain::sweep_chains;
use bessel_core::datum::{configs_for, GroupDatum, GroupKind, LeviDatum};
use bessel_core::matgroup::{checks, finite, Ring};
use bessel_core::support::{
    classify, classify_whittaker, AlphaEllCase, CaseTag, CheckId, Support, XNonzeroVerdict, XZeroVerdict,
};
use bessel_core::weyl::{coset_key, coset_reps, sweep_normal_forms, DEFAULT_CAP};
use bessel_core::{make_config, Error};

struct Outcome {
    pass: bool,
    summary: String,
    /// For red criteria: whether every failure is of the documented kind.
    known_reason: bool,
}

fn binom(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn groups(rs: std::ops::RangeInclusive<usize>) -> Vec<GroupDatum> {
    GroupKind::ALL
        .into_iter()
        .flat_map(|k| rs.clone().filter_map(move |r| GroupDatum::new(k, r).ok()))
        .collect()
}

fn coset_counts() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for g in groups(2..=7) {
        for n in 1..g.r() {
            let l = LeviDatum::new(g, n).unwrap();
            let want = (1u128 << n) * binom(g.r() as u128, n as u128);
            let got = coset_reps(&l).unwrap().len() as u128;
            checked += 1;
            if got != want || l.coset_count() != want {
                bad.push(format!("{g} n={n}: {got} vs {want}"));
            }
        }
    }
    Outcome { pass: bad.is_empty(), summary: format!("{checked} Levis, {} mismatches {bad:?}", bad.len()), known_reason: false }
}

fn normal_forms() -> Outcome {
    let (mut elements, mut broken, mut unlisted) = (0, 0, 0);
    let mut only_so_even = true;
    for g in groups(2..=5) {
        for n in 1..=g.r() {
            let Ok(l) = LeviDatum::new(g, n) else { continue };
            let s = sweep_normal_forms(&l, DEFAULT_CAP).unwrap();
            elements += s.elements;
            broken += s.reconstruct_failures.len();
            unlisted += s.unlisted_cosets.len();
            only_so_even &= s.unlisted_cosets.is_empty() || g.kind() == GroupKind::SoEven;
        }
    }
    Outcome {
        pass: broken == 0 && unlisted == 0,
        summary: format!(
            "{elements} elements, {broken} reconstruction failures, {unlisted} SO(2r) cosets whose only normal forms use the mirrored four-cycle"
        ),
        known_reason: broken == 0 && unlisted > 0 && only_so_even,
    }
}

fn is_near_w0(support: &Support, v: &bessel_core::support::SupportVerdict) -> bool {
    // Partially obstructed only through α_ℓ: w(e_n + e_ℓ) = α_ℓ, no shift root.
    matches!(v.verdict_x_nonzero, XNonzeroVerdict::ObstructedOffQuadric(_)) && support.shift_root(&v.coset).is_none()
}

fn headline_sweep() -> Outcome {
    let (mut configs, mut cosets, mut gaps, mut near_w0, mut other) = (0, 0, 0, 0, Vec::new());
    for g in groups(2..=6) {
        for c in configs_for(g) {
            configs += 1;
            let cl = classify(&c).unwrap();
            let support = Support::new(&c).unwrap();
            cosets += cl.verdicts.len();
            if cl.survivors.len() != 1 || !support.is_w0_coset(&cl.survivors[0]) {
                other.push(format!("{c:?}: survivors {:?}", cl.survivors));
            }
            let mut partial = 0;
            for v in &cl.verdicts {
                let shaped = support.rank_reduction_shape(&v.coset).is_some();
                let rr = matches!(v.verdict_x_zero, XZeroVerdict::RankReduction(_));
                if rr && !shaped || v.case_tag == CaseTag::RankReductionShape && !rr {
                    other.push(format!("rank reduction off shape at {}", v.coset));
                }
                if is_near_w0(&support, v) {
                    partial += 1;
                }
            }
            gaps += cl.discrepancies.len();
            near_w0 += partial;
            if cl.discrepancies.len() != partial || partial > 1 {
                other.push(format!("{}: {:?}", bessel_core::support::describe(&c), cl.discrepancies));
            }
        }
    }
    Outcome {
        pass: gaps == 0 && other.is_empty(),
        summary: format!(
            "{configs} configurations, {cosets} cosets, survivors always {{w0}}; {gaps} gaps, {near_w0} of them the near-w0 coset killed only off the quadric; other problems {other:?}"
        ),
        known_reason: other.is_empty() && gaps == near_w0 && gaps > 0,
    }
}

/// A failing `(check, coset)` pair is explained when it is one of the two
/// gaps found in the sweep: `w(ℓ) = ℓ` fails only when `ℓ = n`, and the
/// `α_ℓ` shape fails only for `SO(2r)` cosets that need a four-cycle.
fn explained(check: CheckId, c: &bessel_core::Config) -> bool {
    match check {
        CheckId::OtherFixesEll => c.n() == c.ell(),
        CheckId::OtherShape => c.group.kind() == GroupKind::SoEven,
        CheckId::OtherCombined => c.n() == c.ell() || c.group.kind() == GroupKind::SoEven,
        _ => false,
    }
}

fn check_suites() -> Outcome {
    let (mut runs, mut four_cycle_cosets) = (0, 0);
    let mut failing: std::collections::BTreeMap<String, usize> = Default::default();
    let mut unexplained = Vec::new();
    let (mut final_calls, mut final_missing_ell_eq_n, mut final_missing_near_w0, mut final_missing_other) = (0, 0, 0, 0);
    let (mut k0_calls, mut k0_missing) = (0, 0);
    for g in groups(2..=6) {
        for c in configs_for(g) {
            let support = Support::new(&c).unwrap();
            let reps = coset_reps(&c.levi).unwrap();
            for id in CheckId::ALL {
                let rep = support.verify_check(id, &reps);
                runs += 1;
                if id == CheckId::FourCycleMeetsX {
                    four_cycle_cosets += rep.hypothesis_count;
                }
                if !rep.pass {
                    for w in &reps {
                        if !support.verify_check(id, std::slice::from_ref(w)).pass {
                            *failing.entry(id.to_string()).or_default() += 1;
                            if !explained(id, &c) {
                                unexplained.push(format!("{id} at {w} in {}", bessel_core::support::describe(&c)));
                            }
                        }
                    }
                }
            }
            for w in &reps {
                let v = support.verdict(w);
                if let AlphaEllCase::SumCase(..) = support.alpha_ell_case(w) {
                    if v.case_tag == CaseTag::AlphaEllSumCase && c.bessel.s() > 0 {
                        k0_calls += 1;
                        if matches!(support.find_k0(w), Err(Error::NotFound(_))) {
                            k0_missing += 1;
                        }
                    }
                }
                let needs_final = matches!(v.case_tag, CaseTag::AlphaEllOtherCase | CaseTag::RankReductionShape);
                if needs_final && c.bessel.s() > 0 {
                    final_calls += 1;
                    if let Err(Error::NotFound(_)) = support.final_root_image(w) {
                        if c.n() == c.ell() {
                            final_missing_ell_eq_n += 1;
                        } else if support.is_near_w0_coset(w) {
                            final_missing_near_w0 += 1;
                        } else {
                            final_missing_other += 1;
                        }
                    }
                }
            }
        }
    }
    let missing = final_missing_ell_eq_n + final_missing_near_w0 + final_missing_other;
    unexplained.truncate(5);
    Outcome {
        pass: failing.is_empty() && k0_missing == 0 && missing == 0,
        summary: format!(
            "{runs} check runs over {four_cycle_cosets} four-cycle cosets and the rest; failing (check: cosets) {failing:?}; find_k0 {k0_missing}/{k0_calls} NotFound; final_root_image {missing}/{final_calls} NotFound ({final_missing_ell_eq_n} with ell = n, {final_missing_near_w0} near-w0, {final_missing_other} other); unexplained {unexplained:?}"
        ),
        known_reason: unexplained.is_empty() && k0_missing == 0 && final_missing_other == 0 && !failing.is_empty(),
    }
}

fn chains() -> Outcome {
    let (mut total, mut failures) = (0, Vec::new());
    for g in groups(2..=5) {
        let s = sweep_chains(g).unwrap();
        total += s.chains;
        failures.extend(s.failures);
    }
    Outcome { pass: failures.is_empty(), summary: format!("{total} chains, {} failures", failures.len()), known_reason: false }
}

fn matrix_identities() -> Outcome {
    let (mut runs, mut bad) = (0, Vec::new());
    let mut signs = BTreeSet::new();
    for g in groups(2..=4) {
        for base in [Ring::Rational, Ring::Prime(5)] {
            let s = checks::run_matchecks(g, base, 100, 7).unwrap();
            runs += 1;
            signs.extend(s.commutation_signs.iter().copied());
            if !s.pass() {
                bad.push(format!("{g} over {base:?}: {:?}", s.failures));
            }
        }
    }
    Outcome {
        pass: bad.is_empty() && signs.len() == 1,
        summary: format!("{runs} runs x 100 trials, commutation sign {signs:?}, failures {bad:?}"),
        known_reason: false,
    }
}

fn witt() -> Outcome {
    let vectors = finite::nonzero_vectors(3, 3);
    match finite::witt_normalize(&vectors, 3) {
        Ok(out) => {
            let classes: BTreeSet<String> = out.iter().map(|w| format!("{:?}", w.class)).collect();
            let consistent = out.iter().all(|w| w.target == vec![w.delta, 0, 1] && (w.delta == 0) == w.isotropic);
            Outcome {
                pass: out.len() == 26 && consistent,
                summary: format!("{} of 26 normalized, delta classes {classes:?}", out.len()),
                known_reason: false,
            }
        }
        Err(e) => Outcome { pass: false, summary: e.to_string(), known_reason: false },
    }
}

fn oracle() -> Outcome {
    let c = make_config(GroupKind::SoOdd, 2, 1, 1).unwrap();
    let o = finite::coset_oracle(&c, 3, 1).unwrap();
    Outcome {
        pass: o.covered && o.length_determines_orbit && o.group_order == Some(51840) && o.points == 40,
        summary: format!(
            "|G| = {:?}, {} points, {} orbits, covered {}, equal length shares orbit {}",
            o.group_order,
            o.points,
            o.orbits.len(),
            o.covered,
            o.length_determines_orbit
        ),
        known_reason: false,
    }
}

fn whittaker() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for g in groups(2..=6) {
        let cl = classify_whittaker(g).unwrap();
        count += 1;
        let obstructed = cl.verdicts.iter().filter(|v| v.case_tag == CaseTag::P1).count();
        let l = &cl.config.levi;
        let w0_only = cl.survivors.len() == 1 && coset_key(&cl.survivors[0], l) == coset_key(&cl.w0, l);
        if !w0_only || !cl.is_verified() || obstructed + 1 != cl.verdicts.len() {
            bad.push(format!("{g}: survivors {:?}", cl.survivors));
        }
    }
    Outcome { pass: bad.is_empty(), summary: format!("{count} groups, problems {bad:?}"), known_reason: false }
}

/// Criteria that fail for documented mathematical reasons.
const KNOWN_RED: [usize; 3] = [2, 3, 4];

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("coset counts 2^n C(r,n), r <= 7", coset_counts),
        ("normal forms sound with a listed shape, r <= 5", normal_forms),
        ("survivors exactly w0 with no gaps, r in 2..6", headline_sweep),
        ("structural check suites, k0 and final-root searches, r in 2..6", check_suites),
        ("Langlands chain decompositions, r <= 5", chains),
        ("exact matrix identities over Q and F_5, r <= 4", matrix_identities),
        ("Witt normalization over F_3, ell0 = 3", witt),
        ("double-coset oracle for SO_5(F_3)", oracle),
        ("Whittaker degeneration", whittaker),
    ];
    let mut unexpected = Vec::new();
    for (i, (label, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        println!("{} criterion {n}: {label} [{secs:.1}s] {}", if out.pass { "PASS" } else { "FAIL" }, out.summary);
        let red = KNOWN_RED.contains(&n);
        if out.pass == red || red && !out.known_reason {
            unexpected.push(n);
        }
    }
    assert!(unexpected.is_empty(), "criteria {unexpected:?} differ from the recorded outcome");
}
