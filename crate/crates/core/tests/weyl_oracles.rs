//! Weyl-group routines against brute force over the whole group.

use std::collections::{BTreeMap, BTreeSet};

use bessel_core::roots::{inversions, positive_roots, positive_roots_of_subset, simple_roots};
use bessel_core::weyl::{
    canonical_rep, coset_key, coset_reps, enumerate_weyl, in_levi_weyl, levi_weyl_elements, longest_element,
    normal_form, w0_maximal, DEFAULT_CAP,
};
use bessel_core::{GroupDatum, GroupKind, LeviDatum, Root, SignedPerm};

fn groups(max_r: usize) -> Vec<GroupDatum> {
    GroupKind::ALL
        .into_iter()
        .flat_map(|k| (2..=max_r).filter_map(move |r| GroupDatum::new(k, r).ok()))
        .collect()
}

#[test]
fn weyl_orders() {
    for g in groups(5) {
        let w = enumerate_weyl(g, DEFAULT_CAP).unwrap();
        assert_eq!(w.len() as u128, g.weyl_order(), "{g}");
        let distinct: BTreeSet<Vec<usize>> = w.iter().map(|u| u.image()).collect();
        assert_eq!(distinct.len(), w.len());
        let r = g.r() as u128;
        let fact: u128 = (1..=r).product();
        let want = if g.kind() == GroupKind::SoEven { fact << (r - 1) } else { fact << r };
        assert_eq!(g.weyl_order(), want);
    }
}

/// `w` lies in `W_θ` exactly when its inversions are roots of `θ`; the
/// longest such element inverts all of them.
#[test]
fn longest_element_of_every_subset() {
    for g in groups(4) {
        let all = enumerate_weyl(g, DEFAULT_CAP).unwrap();
        let delta = simple_roots(g);
        for mask in 0u32..1 << delta.len() {
            let theta: BTreeSet<Root> =
                delta.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, a)| *a).collect();
            let inside = positive_roots_of_subset(g, &theta);
            let sub: Vec<&SignedPerm> = all.iter().filter(|w| inversions(w).is_subset(&inside)).collect();
            let top = sub.iter().max_by_key(|w| inversions(w).len()).unwrap();
            let long = longest_element(g, &theta);
            assert_eq!(&long, *top, "{g} {theta:?}");
            assert_eq!(inversions(&long), inside);
            assert_eq!(long.compose(&long).unwrap(), SignedPerm::identity(g));
        }
        // The full longest element inverts every positive root.
        let w_long = longest_element(g, &delta.iter().copied().collect());
        assert_eq!(inversions(&w_long).len(), positive_roots(g).len());
    }
}

#[test]
fn cosets_partition_the_group() {
    for g in groups(4) {
        let all = enumerate_weyl(g, DEFAULT_CAP).unwrap();
        for n in 1..g.r() {
            let l = LeviDatum::new(g, n).unwrap();
            let levi = levi_weyl_elements(&l);
            let mut classes: BTreeMap<Vec<usize>, Vec<&SignedPerm>> = BTreeMap::new();
            for w in &all {
                classes.entry(coset_key(w, &l)).or_default().push(w);
            }
            assert_eq!(classes.len() as u128, l.coset_count(), "{g} n={n}");
            assert!(classes.values().all(|c| c.len() == levi.len()), "{g} n={n}");
            let reps = coset_reps(&l).unwrap();
            let rep_keys: BTreeSet<Vec<usize>> = reps.iter().map(|w| coset_key(w, &l)).collect();
            assert_eq!(rep_keys.len(), reps.len());
            assert_eq!(rep_keys.len(), classes.len());
            // Brute-force certificate: u ~ w iff u^-1 w is in W_M.
            let brute_levi: BTreeSet<Vec<usize>> =
                all.iter().filter(|w| in_levi_weyl(w, &l)).map(|w| w.image()).collect();
            let levi_set: BTreeSet<Vec<usize>> = levi.iter().map(|w| w.image()).collect();
            assert_eq!(brute_levi, levi_set);
            for w in all.iter().step_by(5) {
                let c = canonical_rep(w, &l);
                assert_eq!(canonical_rep(&c, &l), c);
                assert!(in_levi_weyl(&w.inverse().compose(&c).unwrap(), &l));
            }
        }
    }
}

/// The longest coset is the coset of the longest Weyl element.
#[test]
fn w0_is_the_coset_of_the_longest_element() {
    for g in groups(5) {
        let delta: BTreeSet<Root> = simple_roots(g).into_iter().collect();
        let long = longest_element(g, &delta);
        for n in 1..g.r() {
            let l = LeviDatum::new(g, n).unwrap();
            assert_eq!(coset_key(&w0_maximal(&l), &l), coset_key(&long, &l), "{g} n={n}");
        }
    }
}

#[test]
fn normal_forms_land_in_their_coset() {
    for g in groups(4) {
        for n in 1..g.r() {
            let l = LeviDatum::new(g, n).unwrap();
            for w in coset_reps(&l).unwrap() {
                let nf = normal_form(&w, &l);
                let back = nf.reconstruct(&l).unwrap();
                assert_eq!(coset_key(&back, &l), coset_key(&w, &l), "{g} n={n} {w}");
            }
        }
    }
}

#[test]
fn cycle_text_round_trips() {
    for g in groups(3) {
        for w in enumerate_weyl(g, DEFAULT_CAP).unwrap() {
            let back = SignedPerm::from_cycles(g, &w.to_cycles()).unwrap();
            assert_eq!(back, w);
            let pairs = SignedPerm::from_signed_pairs(g, &w.to_signed_pairs()).unwrap();
            assert_eq!(pairs, w);
        }
    }
}
