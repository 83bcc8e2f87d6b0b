use super::*;
use crate::gfield::make_field;
use crate::models::{family_i_model, family_i_parameters, family_ii_parameters, family_iii_parameters, hermitian_model, HermitianVariant};
use crate::polyring::BiPoly;
use std::sync::Arc;

fn ctx(p: u64, h: u32) -> Arc<crate::gfield::FieldCtx> {
    Arc::new(make_field(p, h).unwrap())
}

#[test]
fn preservation_examples() {
    let c = ctx(2, 3);
    let b = family_i_parameters(&c)[0];
    let m = family_i_model(&c, b).unwrap();
    assert!(map_preserves(&m, &AffineAlgMap::identity(&c)).unwrap());
    let shift = AffineAlgMap::translation(&c, Felt::ONE, Felt::ZERO);
    assert!(!map_preserves(&m, &shift).unwrap());
    // λ^{q+1} = μ = 1
    let g = c.primitive_element(6).unwrap();
    let lambda = c.pow(g, 7);
    assert!(map_preserves(&m, &tau(&c, lambda, Felt::ONE)).unwrap());
}

#[test]
fn composition_laws() {
    let c = ctx(3, 1);
    let v = HermitianVariant::Plus;
    let params = sylow_parameters(&c, v).unwrap();
    assert_eq!(params.len(), 27);
    let maps: Vec<AffineAlgMap> = params.iter().take(6).map(|&(a, b)| psi(&c, v, a, b, Felt::ONE)).collect();
    for x in &maps {
        for y in &maps {
            for z in &maps {
                let l = x.then(y).unwrap().then(z).unwrap();
                let r = x.then(&y.then(z).unwrap()).unwrap();
                assert_eq!(l, r);
            }
        }
        assert_eq!(x.then(&AffineAlgMap::identity(&c)).unwrap(), *x);
        // point-map convention
        let (px, py) = (c.from_int(1), c.from_int(2));
        let (ax, ay) = maps[1].apply(px, py);
        assert_eq!(x.apply(ax, ay), maps[1].then(x).unwrap().apply(px, py));
    }
}

#[test]
fn closure_basics() {
    let c = ctx(2, 2);
    let id = AffineAlgMap::identity(&c);
    assert_eq!(AutGroupTable::closure(&c, &[id]).unwrap().order(), 1);
    let g = AutGroupTable::closure(&c, &[psi(&c, HermitianVariant::Plus, Felt::ZERO, Felt::ONE, Felt::ONE)]).unwrap();
    assert_eq!(g.order(), 2);
    assert_eq!(g.word(1), vec![0]);
    let sq = AffineAlgMap::new(BiPoly::x(&c), BiPoly::y(&c).pow(2)).unwrap();
    assert!(matches!(AutGroupTable::closure(&c, &[sq]), Err(AutError::NotInvertible(_))));
    let flat = AffineAlgMap::new(BiPoly::x(&c), BiPoly::zero(&c)).unwrap();
    assert!(matches!(AutGroupTable::closure(&c, &[flat]), Err(AutError::NotInvertible(_))));
    let big = [
        AffineAlgMap::translation(&c, Felt::ONE, Felt::ZERO),
        AffineAlgMap::translation(&c, c.generator(), Felt::ZERO),
        AffineAlgMap::translation(&c, Felt::ZERO, Felt::ONE),
        AffineAlgMap::translation(&c, Felt::ZERO, c.generator()),
    ];
    assert_eq!(AutGroupTable::closure_bounded(&c, &big, 10).unwrap_err(), AutError::BoundExceeded(10));
}

#[test]
fn pgu_small() {
    let c = ctx(2, 2);
    let s = pgu_stabilizer(&c, HermitianVariant::Plus).unwrap();
    let r = &s.report;
    assert_eq!((r.sylow_order, r.center_order, r.order), (64, 4, 320));
    assert_eq!(r.sylow_parameter_count, 64);
    assert!(r.center_is_y_translations && r.all_preserve);
    assert_eq!(r.noncentral_orders, [4].into());
    assert_eq!(r.stated_order, 192);
    let all: Vec<usize> = (0..s.sylow.order()).collect();
    let herm = hermitian_model(&c, HermitianVariant::Plus);
    assert!(unique_fixed_place(&herm, &s.sylow, &all).unwrap());

    let c = ctx(3, 2);
    for v in [HermitianVariant::Plus, HermitianVariant::MinusOmega, HermitianVariant::PlusOne] {
        let params = sylow_parameters(&c, v).unwrap();
        assert_eq!(params.len(), 729);
        let m = hermitian_model(&c, v);
        for &(a, b) in params.iter().step_by(37) {
            assert!(psi_condition(&c, v, a, b));
            assert!(map_preserves(&m, &psi(&c, v, a, b, Felt::ONE)).unwrap());
        }
    }
}

#[test]
fn order_four_element() {
    let c = ctx(2, 3);
    let q = c.q() as u128;
    let v = HermitianVariant::Plus;
    let cc = c.subfield_elements(6).unwrap().into_iter().find(|&x| c.add(c.add(c.pow(x, q), x), Felt::ONE).is_zero()).unwrap();
    let m = psi(&c, v, Felt::ONE, cc, Felt::ONE);
    let sq = m.then(&m).unwrap();
    assert_eq!(sq, psi(&c, v, Felt::ZERO, Felt::ONE, Felt::ONE));
    assert!(sq.then(&sq).unwrap().is_identity());
}

#[test]
fn subgroup_type_orders() {
    let t = subgroup_types(&ctx(3, 2)).unwrap();
    let u = t.u_b.unwrap();
    assert!(u.order == 9 && u.elementary_abelian && u.central);
    let v = t.v_c.unwrap();
    assert!(v.order == 9 && v.elementary_abelian && !v.central);
    assert!(t.cyclic4.is_none());
    let t = subgroup_types(&ctx(2, 3)).unwrap();
    let cy = t.cyclic4.unwrap();
    assert!(cy.order == 4 && cy.cyclic);
    assert!(t.u_b.unwrap().elementary_abelian);
}

#[test]
fn family_i_orders() {
    let c = ctx(2, 3);
    let b = family_i_parameters(&c)[0];
    let g = family_i_group(&c, b).unwrap();
    let r = &g.report;
    assert_eq!((r.v_order, r.lambda_order, r.w_order), (128, 9, Some(1152)));
    assert!(r.v_normal_in_w && r.lambda_meets_v_trivially && r.all_preserve);
    assert_eq!(r.p_elements_fix_one_place, Some(true));
    let w = g.w.as_ref().unwrap();
    assert!(w.is_normal(&g.v));
}

#[test]
fn family_ii_structure() {
    let c = ctx(3, 2);
    let b = family_ii_parameters(&c)[0];
    let g = family_ii_group(&c, b).unwrap();
    let r = &g.report;
    assert_eq!((r.psi_order, r.total_order), (27, 54));
    assert_eq!((r.gamma_order, r.commutator_order), (3, 3));
    assert!(r.commutator_is_gamma && r.all_preserve && r.p_elements_fix_one_place);
    assert_eq!(r.centralizers.gamma, [27].into());
    assert_eq!(r.centralizers.omega_minus_gamma, [9].into());
    assert_eq!(r.centralizers.outside_omega, [9].into());
    assert!(!r.psi_abelian);
}

#[test]
fn family_iii_structure() {
    let c = ctx(2, 2);
    let b = family_iii_parameters(&c)[0];
    let r = family_iii_group(&c, b).unwrap().report;
    assert!(r.deck_in_psi && r.criterion_matches && r.all_preserve);
    assert_eq!((r.deck_order, r.normalizer_order, r.quotient_order, r.quotient_exponent), (2, 16, 8, 4));
    assert_eq!(r.psi_order, 32);
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// Every admissible `ψ_{a,b,λ}` preserves the Hermitian model and
        /// composition agrees with applying the maps in turn.
        #[test]
        fn psi_maps((p, h) in prop_oneof![Just((2u64, 2u32)), Just((3, 1)), Just((2, 3))], ia in any::<usize>(), ib in any::<usize>(), k in 0u128..64) {
            let c = ctx(p, h);
            let v = HermitianVariant::Plus;
            let model = hermitian_model(&c, v);
            let params = sylow_parameters(&c, v).unwrap();
            let (a1, b1) = params[ia % params.len()];
            let (a2, b2) = params[ib % params.len()];
            prop_assert!(psi_condition(&c, v, a1, b1));
            let g = c.primitive_element(2 * h).unwrap();
            let lambda = c.pow(g, (c.q() as u128 - 1) * k);
            let s = psi(&c, v, a1, b1, lambda);
            let t = psi(&c, v, a2, b2, Felt::ONE);
            prop_assert!(map_preserves(&model, &s).unwrap());
            let st = s.then(&t).unwrap();
            prop_assert!(map_preserves(&model, &st).unwrap());
            for &(x, y) in affine_point_list(&model.poly, 1).unwrap().iter().take(16) {
                let (x1, y1) = s.apply(x, y);
                prop_assert_eq!(st.apply(x, y), t.apply(x1, y1));
            }
        }
    }
}
