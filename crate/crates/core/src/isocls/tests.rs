use super::*;
use crate::gfield::make_field;

fn ctx(p: u64, h: u32) -> Arc<FieldCtx> {
    Arc::new(make_field(p, h).unwrap())
}

#[test]
fn family_i_witnesses() {
    let c = ctx(2, 3);
    let params = family_i_parameters(&c);
    let w = family_i_iso(&c, params[0], params[0]).unwrap().unwrap();
    assert_eq!((w.c, w.delta), (Felt::ONE, Felt::ONE));
    for &b in &params {
        for &bb in &params {
            let w = family_i_iso(&c, b, bb).unwrap().expect("all of F_8 \\ F_2 is one class");
            let a = family_i_model(&c, b).unwrap().poly;
            let t = family_i_model(&c, bb).unwrap().poly;
            assert_eq!(carries_onto(&w.map(&c), &a, &t).unwrap(), Some(w.delta));
            assert_eq!(c.pow(w.sigma, 9), w.delta);
        }
    }
    let c = ctx(2, 5);
    let g = c.primitive_element(5).unwrap();
    assert!(family_i_iso(&c, g, c.pow(g, 3)).unwrap().is_none());
    assert!(family_i_iso(&c, Felt::ONE, g).is_err());
}

#[test]
fn family_i_case_split() {
    let c = ctx(2, 5);
    let g = c.primitive_element(5).unwrap();
    let r = family_i_classify(&c, g, c.inv(g).unwrap()).unwrap();
    assert_eq!(r.case, IsoCase::Id2);
    assert_eq!(r.mobius, Some([0, 1, 1, 0]));
    assert!(inverse_witness_holds(&c, g).unwrap());

    let c = ctx(2, 6);
    let f4 = c.subfield_elements(2).unwrap().into_iter().find(|&x| !c.in_subfield(x, 1)).unwrap();
    let gen = c.primitive_element(6).unwrap();
    assert_eq!(family_i_classify(&c, f4, gen).unwrap().case, IsoCase::NotIso);
    assert!(family_i_iso(&c, f4, gen).unwrap().is_none());
    let f8 = c.primitive_element(3).unwrap();
    let f8b = c.pow(f8, 3);
    assert_eq!(family_i_classify(&c, f8, f8b).unwrap().case, IsoCase::Id1Fp3);
    assert!(family_i_iso(&c, f8, f8b).unwrap().is_some());

    let c = ctx(3, 4);
    let g = c.primitive_element(4).unwrap();
    assert!(inverse_witness_holds(&c, g).unwrap());
}

#[test]
fn solver_matches_case_split() {
    for (p, h) in [(2, 3), (2, 4), (2, 5), (3, 3)] {
        let r = class_inventory(Family::FamilyI, &ctx(p, h)).unwrap();
        assert_eq!(r.classifier_agreement, Some(true), "{p} {h}");
        assert!(r.equivalence_relation);
    }
}

#[test]
fn inventories() {
    let r = class_inventory(Family::FamilyI, &ctx(2, 3)).unwrap();
    assert_eq!(r.class_sizes, vec![6]);
    assert_eq!(r.oracle_agreement, Some(true));
    let r = class_inventory(Family::FamilyI, &ctx(2, 5)).unwrap();
    assert_eq!(r.class_sizes, vec![6; 5]);
    assert_eq!(r.oracle_agreement, Some(true));
    let r = class_inventory(Family::FamilyII, &ctx(3, 2)).unwrap();
    assert_eq!(r.class_sizes, vec![2; 4]);
    assert_eq!(r.oracle_agreement, Some(true));
    assert!(class_inventory(Family::FamilyIII, &ctx(2, 3)).is_err());
}

#[test]
fn family_ii_scaling() {
    let c = ctx(3, 2);
    let params = family_ii_parameters(&c);
    let b = params[0];
    let w = family_ii_iso(&c, b, b).unwrap().unwrap();
    assert_eq!(w.kappa, 1);
    let w = family_ii_iso(&c, b, c.scalar(2, b)).unwrap().unwrap();
    assert!(w.kappa == 2 && w.verified);
    let other = params.iter().copied().find(|&x| !c.in_subfield(c.div(x, b).unwrap(), 1)).unwrap();
    assert!(family_ii_iso(&c, b, other).unwrap().is_none());
    let ma = family_ii_model(&c, b).unwrap();
    let mb = family_ii_model(&c, other).unwrap();
    assert!(!oracle_iso(&ma, &mb, 2).unwrap().iso);
    assert!(oracle_iso(&ma, &ma, 2).unwrap().iso);
}

#[test]
fn oracle_tiers() {
    let c = ctx(2, 3);
    let params = family_i_parameters(&c);
    let m = family_i_model(&c, params[0]).unwrap();
    let r = oracle_iso(&m, &m, 1).unwrap();
    assert!(r.iso && r.maps_tested == 1);
    let n = family_i_model(&c, params[3]).unwrap();
    assert!(oracle_iso(&m, &n, 1).unwrap().iso);
    assert!(oracle_iso(&m, &n, 2).unwrap().iso);
    assert!(oracle_iso(&m, &n, 3).is_err());
    assert!(oracle_iso(&family_i_model(&ctx(2, 4), family_i_parameters(&ctx(2, 4))[0]).unwrap(), &m, 2).is_err());
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// The solver is symmetric, agrees with the case split, and its
        /// witnesses carry one model onto the other.
        #[test]
        fn family_i_pairs((p, h) in prop_oneof![Just((2u64, 4u32)), Just((2, 5)), Just((3, 3))], i in any::<usize>(), j in any::<usize>()) {
            let c = ctx(p, h);
            let params = family_i_parameters(&c);
            let (b, bb) = (params[i % params.len()], params[j % params.len()]);
            let w = family_i_iso(&c, b, bb).unwrap();
            prop_assert_eq!(w.is_some(), family_i_iso(&c, bb, b).unwrap().is_some());
            prop_assert_eq!(w.is_some(), family_i_classify(&c, b, bb).unwrap().iso);
            if let Some(w) = w {
                let a = family_i_model(&c, b).unwrap().poly;
                let t = family_i_model(&c, bb).unwrap().poly;
                prop_assert_eq!(carries_onto(&w.map(&c), &a, &t).unwrap(), Some(w.delta));
            }
            prop_assert!(inverse_witness_holds(&c, b).unwrap());
        }
    }
}
