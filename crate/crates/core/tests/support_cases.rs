//! Small configurations worked out by hand, and the edge cases of each
//! support query.

use bessel_core::roots::alpha;
use bessel_core::support::{
    classify, verify_check, AlphaEllCase, CaseTag, CheckId, Support, XNonzeroVerdict, XZeroVerdict,
};
use bessel_core::weyl::{coset_reps, normal_form, w0_maximal};
use bessel_core::{make_config, Error, GroupKind, Root, SignedPerm, W2};

#[test]
fn so5_has_four_cosets_and_survivor_15() {
    let c = make_config(GroupKind::SoOdd, 2, 1, 1).unwrap();
    let cl = classify(&c).unwrap();
    assert_eq!(cl.verdicts.len(), 4);
    assert_eq!(cl.survivors, vec![SignedPerm::from_cycles(c.group, "(1 5)").unwrap()]);
    assert_eq!(cl.w0.to_cycles(), "(1 5)");
    // The one discrepancy is the alpha_ell coset, killed only off a quadric.
    assert_eq!(cl.discrepancies.len(), 1);
    let near = &cl.discrepancies[0].coset;
    assert!(Support::new(&c).unwrap().is_near_w0_coset(near));
    assert!(matches!(cl.check(), Err(Error::ClassificationGap { .. })));
}

#[test]
fn so6_four_cycle_cosets_meet_x() {
    let c = make_config(GroupKind::SoEven, 3, 1, 1).unwrap();
    let cl = classify(&c).unwrap();
    assert_eq!(cl.verdicts.len(), 6);
    assert_eq!(cl.survivors.len(), 1);
    let s = Support::new(&c).unwrap();
    assert!(s.is_w0_coset(&cl.survivors[0]));
    // s = 0 here, so no coset has a nonzero-x slot.
    assert!(cl.verdicts.iter().all(|v| v.verdict_x_nonzero == XNonzeroVerdict::Vacuous));
    // With n = 1 every coset has a normal form without a four-cycle; they
    // first appear at n = 2.
    assert!(cl.verdicts.iter().all(|v| !matches!(normal_form(&v.coset, &c.levi).w2, W2::FourCycle { .. })));
    let c = make_config(GroupKind::SoEven, 3, 2, 1).unwrap();
    let cl = classify(&c).unwrap();
    let mut four_cycles = 0;
    for v in &cl.verdicts {
        if matches!(normal_form(&v.coset, &c.levi).w2, W2::FourCycle { .. }) {
            four_cycles += 1;
            // Meeting X may be through alpha_ell alone, as for (1 4 5)(2 6 3).
            assert!(!v.intersection.is_empty(), "{}", v.coset);
            assert!(matches!(v.verdict_x_zero, XZeroVerdict::Obstructed(_)));
        }
    }
    assert!(four_cycles > 0);
}

#[test]
fn w0_is_never_obstructed() {
    for kind in GroupKind::ALL {
        for r in 2..=5 {
            for c in bessel_core::datum::configs_for(bessel_core::GroupDatum::new(kind, r).unwrap()) {
                let s = Support::new(&c).unwrap();
                let w0 = w0_maximal(&c.levi);
                assert_eq!(s.obstruction_x_zero(&w0), None);
                assert_eq!(s.obstruction_x_nonzero(&w0), None);
                assert_eq!(s.alpha_ell_case(&w0), AlphaEllCase::NotThisCase);
                assert!(matches!(s.find_k0(&w0), Err(Error::BadParameter(_))));
                assert!(s.rank_reduction_shape(&w0).is_none());
                assert!(s.alpha_ell_shape(&w0).is_none());
                assert!(s.final_root_image(&w0).is_err());
                assert_eq!(s.verdict(&w0).case_tag, CaseTag::W0);
            }
        }
    }
}

#[test]
fn identity_is_obstructed_by_alpha_n() {
    for (kind, r, n, ell1) in [(GroupKind::SoOdd, 4, 1, 2), (GroupKind::SoEven, 4, 2, 1), (GroupKind::UEven, 3, 1, 1)] {
        let c = make_config(kind, r, n, ell1).unwrap();
        assert!(c.n() < c.ell());
        let s = Support::new(&c).unwrap();
        let id = SignedPerm::identity(c.group);
        let w = s.obstruction_x_zero(&id).unwrap();
        assert_eq!(w.image, w.alpha);
        assert!(s.x().contains(&alpha(c.n())));
        assert!(s.intersection(&id).contains(&alpha(c.n())));
    }
}

#[test]
fn find_k0_rejects_other_cases() {
    let c = make_config(GroupKind::SoOdd, 3, 1, 1).unwrap();
    let s = Support::new(&c).unwrap();
    assert!(matches!(s.find_k0(&SignedPerm::identity(c.group)), Err(Error::BadParameter(_))));
    // Every sum-case coset with a nonzero-x slot finds its k0. With s = 0
    // there may be no index k0 >= ell + 2 at all.
    for kind in GroupKind::ALL {
        for r in 2..=5 {
            for c in bessel_core::datum::configs_for(bessel_core::GroupDatum::new(kind, r).unwrap()) {
                if c.bessel.s() <= 0 {
                    continue;
                }
                let s = Support::new(&c).unwrap();
                for w in coset_reps(&c.levi).unwrap() {
                    if matches!(s.alpha_ell_case(&w), AlphaEllCase::SumCase(..)) {
                        let k = s.find_k0(&w).unwrap();
                        assert!(s.sigma().contains(&k.preimage));
                    }
                }
            }
        }
    }
}

/// Build `(1 r0)…(i0 i0')(i0+1 a)(a' (i0+1)')` and parse it back.
#[test]
fn rank_reduction_shape_round_trip() {
    // ell = 3 > n = 2, so e_n + e_ell is a genuine root.
    let c = make_config(GroupKind::SoOdd, 5, 2, 2).unwrap();
    let g = c.group;
    let a = c.ell() + 2;
    let i0 = 1;
    let text = format!("({} {})({} {})({} {})", i0, g.prime(i0), i0 + 1, a, g.prime(a), g.prime(i0 + 1));
    let w = SignedPerm::from_cycles(g, &text).unwrap();
    let s = Support::new(&c).unwrap();
    assert!(s.intersection(&w).is_empty());
    let shape = s.rank_reduction_shape(&w).unwrap();
    assert_eq!(shape.i0, i0);
    assert_eq!(shape.a_list, vec![a]);
    assert!(shape.x1_independent);
    assert!(matches!(s.verdict(&w).verdict_x_zero, XZeroVerdict::RankReduction(_)));
    let f = s.final_root_image(&w).unwrap();
    assert_eq!(f.image.terms()[0].0, c.ell());
    assert!(f.k >= c.ell() + 2);
}

#[test]
fn alpha_ell_shapes_in_so_even_use_identity_or_a_far_prime_pair() {
    for r in 3..=5 {
        let g = bessel_core::GroupDatum::new(GroupKind::SoEven, r).unwrap();
        for c in bessel_core::datum::configs_for(g) {
            let s = Support::new(&c).unwrap();
            for w in coset_reps(&c.levi).unwrap() {
                if s.alpha_ell_case(&w) != AlphaEllCase::OtherCase {
                    continue;
                }
                if let Some(shape) = s.alpha_ell_shape(&w) {
                    match shape.w2 {
                        W2::Identity => {}
                        W2::DPrime(d) => assert!((c.ell() + 2..=r).contains(&d) || d == c.ell() + 1),
                        W2::FourCycle { .. } => panic!("four-cycle in the alpha_ell shape"),
                    }
                }
            }
        }
    }
}

#[test]
fn named_check_examples() {
    // Block images above n: SO_7, n = 1, ell = 2.
    let c = make_config(GroupKind::SoOdd, 3, 1, 1).unwrap();
    assert_eq!(c.ell(), 2);
    let rep = verify_check(CheckId::FreeBlockImagesAboveN, &c).unwrap();
    assert!(rep.pass);
    assert!(rep.hypothesis_count > 0);

    // n maps into the block: SO_8, n = 2, ell = 3.
    let c = make_config(GroupKind::SoEven, 4, 2, 1).unwrap();
    assert_eq!(c.ell(), 3);
    assert!(verify_check(CheckId::OtherNToBlock, &c).unwrap().pass);

    // The four-cycle check has no hypothesis outside SO(2r).
    let c = make_config(GroupKind::UOdd, 3, 1, 1).unwrap();
    let rep = verify_check(CheckId::FourCycleMeetsX, &c).unwrap();
    assert!(rep.pass && rep.vacuous && rep.hypothesis_count == 0);
}

#[test]
fn check_names_parse_back() {
    for id in CheckId::ALL {
        assert_eq!(id.name().parse::<CheckId>().unwrap(), id);
    }
    assert!("2.16".parse::<CheckId>().is_err());
}

#[test]
fn whittaker_sweep_has_only_w0() {
    for kind in GroupKind::ALL {
        for r in 2..=5 {
            let g = bessel_core::GroupDatum::new(kind, r).unwrap();
            let cl = bessel_core::support::classify_whittaker(g).unwrap();
            assert!(cl.is_verified(), "{g}: {:?}", cl.discrepancies);
            assert_eq!(cl.survivors.len(), 1);
            assert!(cl.verdicts.iter().filter(|v| v.case_tag != CaseTag::W0).all(|v| {
                matches!(v.verdict_x_zero, XZeroVerdict::Obstructed(_))
            }));
        }
    }
}

#[test]
fn roots_print_and_parse() {
    for text in ["e1-e2", "e1+e3", "e2", "2e3", "-e1+e2"] {
        let r: Root = text.parse().unwrap();
        assert_eq!(r.to_string().parse::<Root>().unwrap(), r);
    }
}
