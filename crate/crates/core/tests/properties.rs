//! Invariants checked on random inputs.

use bessel_core::datum::configs_for;
use bessel_core::matgroup::checks::{shift_roots, verify_commutation, verify_conjugation};
use bessel_core::matgroup::{MatGroup, Ring, Scalar};
use bessel_core::roots::{act, positive_roots, RootShape};
use bessel_core::support::Support;
use bessel_core::weyl::{coset_key, levi_weyl_elements, normal_form};
use bessel_core::{Config, GroupDatum, GroupKind, LeviDatum, Root, SignedPerm};
use proptest::prelude::*;

fn kind(i: usize) -> GroupKind {
    GroupKind::ALL[i % 4]
}

fn element(g: GroupDatum, images: &[usize], signs: &[bool]) -> SignedPerm {
    let mut pairs: Vec<(usize, bool)> = images.iter().copied().zip(signs.iter().copied()).collect();
    if g.kind() == GroupKind::SoEven && pairs.iter().filter(|p| p.1).count() % 2 == 1 {
        pairs[0].1 = !pairs[0].1;
    }
    SignedPerm::from_signed_pairs(g, &pairs).unwrap()
}

/// A random group of rank `2..=max_r` with `count` random elements.
fn group_and_elements(max_r: usize, count: usize) -> impl Strategy<Value = (GroupDatum, Vec<SignedPerm>)> {
    (0usize..4, 2..=max_r).prop_flat_map(move |(k, r)| {
        let g = GroupDatum::new(kind(k), r).unwrap();
        let one = (Just((1..=r).collect::<Vec<_>>()).prop_shuffle(), prop::collection::vec(any::<bool>(), r));
        prop::collection::vec(one, count)
            .prop_map(move |v| (g, v.iter().map(|(im, s)| element(g, im, s)).collect()))
    })
}

fn config_and_element(max_r: usize) -> impl Strategy<Value = (Config, SignedPerm)> {
    (group_and_elements(max_r, 1), any::<prop::sample::Index>()).prop_map(|((g, w), i)| {
        let configs = configs_for(g);
        (configs[i.index(configs.len())].clone(), w[0].clone())
    })
}

fn scalar(ring: Ring, a: i64, b: i64) -> Scalar {
    if ring.is_quadratic() {
        Scalar::from_parts(ring, a, b)
    } else {
        Scalar::from_i64(ring, a)
    }
}

/// A parameter admissible for the root group of `alpha`.
fn root_parameter(ring: Ring, alpha: &Root, a: i64, b: i64) -> Scalar {
    if matches!(alpha.shape, RootShape::Long(_)) {
        scalar(ring, 0, b)
    } else {
        scalar(ring, a, b)
    }
}

fn base_ring(prime: bool) -> Ring {
    if prime {
        Ring::Prime(5)
    } else {
        Ring::Rational
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn weyl_group_axioms((g, w) in group_and_elements(6, 3)) {
        let (u, v, x) = (&w[0], &w[1], &w[2]);
        let id = SignedPerm::identity(g);
        prop_assert_eq!(u.compose(v).unwrap().compose(x).unwrap(), u.compose(&v.compose(x).unwrap()).unwrap());
        prop_assert_eq!(u.compose(&u.inverse()).unwrap(), id.clone());
        prop_assert_eq!(id.compose(u).unwrap(), u.clone());
        prop_assert_eq!(SignedPerm::from_cycles(g, &u.to_cycles()).unwrap(), u.clone());
    }

    #[test]
    fn act_is_a_homomorphism((g, w) in group_and_elements(6, 2)) {
        let uv = w[0].compose(&w[1]).unwrap();
        for a in positive_roots(g) {
            prop_assert_eq!(act(&uv, &a), act(&w[0], &act(&w[1], &a)));
            prop_assert_eq!(act(&w[0], &a.neg()), act(&w[0], &a).neg());
            prop_assert!(act(&w[0], &a).is_valid_for(g));
        }
    }

    #[test]
    fn coset_key_is_a_right_levi_invariant(((g, w), n, i) in (group_and_elements(5, 1), 1usize..5, any::<prop::sample::Index>())) {
        let n = 1 + (n - 1) % (g.r() - 1);
        let l = LeviDatum::new(g, n).unwrap();
        let levi = levi_weyl_elements(&l);
        let m = &levi[i.index(levi.len())];
        prop_assert_eq!(coset_key(&w[0].compose(m).unwrap(), &l), coset_key(&w[0], &l));
    }

    #[test]
    fn normal_form_reconstructs_into_the_coset(((g, w), n) in (group_and_elements(6, 1), 1usize..6)) {
        let n = 1 + (n - 1) % (g.r() - 1);
        let l = LeviDatum::new(g, n).unwrap();
        let back = normal_form(&w[0], &l).reconstruct(&l).unwrap();
        prop_assert_eq!(coset_key(&back, &l), coset_key(&w[0], &l));
    }

    /// `X ∖ {α_ℓ} ⊆ X`, so a witness for `x != 0` is one for `x = 0`.
    #[test]
    fn obstruction_is_monotone((c, w) in config_and_element(6)) {
        let s = Support::new(&c).unwrap();
        if s.obstruction_x_nonzero(&w).is_some() {
            prop_assert!(s.obstruction_x_zero(&w).is_some());
        }
        let v = s.verdict(&w);
        prop_assert_eq!(v.intersection.iter().copied().collect::<std::collections::BTreeSet<_>>(), s.intersection(&w));
    }

    #[test]
    fn unipotents_are_members_and_additive(
        (g, _) in group_and_elements(4, 0),
        idx in any::<prop::sample::Index>(),
        prime in any::<bool>(),
        (a1, b1, a2, b2) in (-6i64..6, -6i64..6, -6i64..6, -6i64..6),
    ) {
        let mg = MatGroup::over(g, base_ring(prime));
        let roots: Vec<Root> = positive_roots(g).into_iter().flat_map(|a| [a, a.neg()]).collect();
        let alpha = roots[idx.index(roots.len())];
        let (t1, t2) = (root_parameter(mg.ring(), &alpha, a1, b1), root_parameter(mg.ring(), &alpha, a2, b2));
        let u1 = mg.unipotent(&alpha, &t1).unwrap();
        prop_assert!(mg.is_member(&u1));
        let heisenberg = g.kind() == GroupKind::UOdd && matches!(alpha.shape, RootShape::Short(_));
        if !heisenberg {
            prop_assert_eq!(u1.mul(&mg.unipotent(&alpha, &t2).unwrap()), mg.unipotent(&alpha, &(&t1 + &t2)).unwrap());
        }
    }

    /// `perm_rep(w) u_α(t) perm_rep(w)⁻¹` is a root element for `wα`.
    #[test]
    fn conjugation_moves_root_groups(
        (g, w) in group_and_elements(4, 1),
        idx in any::<prop::sample::Index>(),
        (a, b) in (-6i64..6, -6i64..6),
    ) {
        let mg = MatGroup::over(g, Ring::Prime(5));
        let roots = positive_roots(g);
        let alpha = roots[idx.index(roots.len())];
        let rep = verify_conjugation(&mg, &w[0], &alpha, &root_parameter(mg.ring(), &alpha, a, b)).unwrap();
        prop_assert_eq!(rep.image, act(&w[0], &alpha));
    }

    #[test]
    fn chi_is_additive_on_u_ell(
        (c, _) in config_and_element(4),
        picks in prop::collection::vec((any::<prop::sample::Index>(), -4i64..4, -4i64..4), 6),
    ) {
        let g = c.group;
        let b = &c.bessel;
        let mg = MatGroup::over(g, Ring::Rational);
        let ell_roots: Vec<Root> = positive_roots(g)
            .into_iter()
            .filter(|a| a.terms()[0].0 <= b.ell())
            .collect();
        let build = |part: &[(prop::sample::Index, i64, i64)]| {
            part.iter().fold(mg.identity(), |u, (i, x, y)| {
                let a = ell_roots[i.index(ell_roots.len())];
                u.mul(&mg.unipotent(&a, &root_parameter(mg.ring(), &a, *x, *y)).unwrap())
            })
        };
        let (u, v) = (build(&picks[..3]), build(&picks[3..]));
        let cu = mg.chi_coords(&u, b).unwrap();
        let cv = mg.chi_coords(&v, b).unwrap();
        let sum: Vec<Scalar> = cu.iter().zip(&cv).map(|(p, q)| p + q).collect();
        prop_assert_eq!(mg.chi_coords(&u.mul(&v), b).unwrap(), sum);
    }

    /// The commutation shift is `+y t`: additive in `t` and in `x`.
    #[test]
    fn shift_is_bilinear(
        (c, _) in config_and_element(4),
        xs in prop::collection::vec((-5i64..5, -5i64..5), 16),
        (t1, t2) in (-5i64..5, -5i64..5),
        idx in any::<prop::sample::Index>(),
    ) {
        let b = &c.bessel;
        let s = b.s();
        prop_assume!(s > 0);
        let mg = MatGroup::over(c.group, Ring::Prime(5));
        let ring = mg.ring();
        let roots = shift_roots(b);
        prop_assume!(!roots.is_empty());
        let alpha0 = roots[idx.index(roots.len())];
        let s = s as usize;
        let x: Vec<Scalar> = xs[..s].iter().map(|&(p, q)| scalar(ring, p, q)).collect();
        let x2: Vec<Scalar> = xs[8..8 + s].iter().map(|&(p, q)| scalar(ring, p, q)).collect();
        let xsum: Vec<Scalar> = x.iter().zip(&x2).map(|(p, q)| p + q).collect();
        let (t1, t2) = (scalar(ring, t1, 0), scalar(ring, t2, 0));
        let shift = |x: &[Scalar], t: &Scalar| verify_commutation(&mg, b, x, &alpha0, t).unwrap();
        let r = shift(&x, &t1);
        prop_assert!(r.shift.is_zero() || (r.sign == 1 && r.matrices_equal));
        prop_assert_eq!(shift(&x, &(&t1 + &t2)).shift, &r.shift + &shift(&x, &t2).shift);
        prop_assert_eq!(shift(&xsum, &t1).shift, &r.shift + &shift(&x2, &t1).shift);
    }
}
