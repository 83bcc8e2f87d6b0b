use super::*;
use crate::gfield::make_field;
use crate::polyring::Var;

fn ctx(p: u64, h: u32) -> Arc<FieldCtx> {
    Arc::new(make_field(p, h).unwrap())
}

fn poly(c: &Arc<FieldCtx>, terms: &[(u32, u32, i64)]) -> BiPoly {
    BiPoly::from_terms(c, terms.iter().map(|&(i, j, v)| (i, j, c.from_int(v))))
}

#[test]
fn hermitian_instantiations() {
    let c = ctx(2, 1);
    let m = hermitian_model(&c, HermitianVariant::Plus);
    assert_eq!(m.poly, poly(&c, &[(0, 2, 1), (0, 1, 1), (3, 0, 1)]));
    assert_eq!(m.claimed_genus, 1);
    assert_eq!(hermitian_model(&c, HermitianVariant::MinusOmega).poly, hermitian_model(&c, HermitianVariant::PlusOne).poly);

    let c = ctx(3, 1);
    let m = hermitian_model(&c, HermitianVariant::Plus);
    assert_eq!(m.poly, poly(&c, &[(0, 3, 1), (0, 1, 1), (4, 0, -1)]));
    assert_eq!(m.claimed_genus, 3);
}

#[test]
fn order_p_subcovers() {
    let c = ctx(2, 2);
    assert_eq!(subcover_center(&c).poly, poly(&c, &[(0, 2, 1), (0, 1, 1), (5, 0, 1)]));
    assert_eq!(fpp_char2(&c).unwrap().poly, poly(&c, &[(5, 0, 1), (0, 1, 1), (0, 2, 1)]));
    assert!(subcover_noncenter(&c).is_err());

    let c = ctx(3, 1);
    assert_eq!(subcover_noncenter(&c).unwrap().poly, poly(&c, &[(0, 3, 1), (0, 1, 1), (2, 0, -1)]));
    assert!(fpp_char2(&c).is_err());
}

fn generator_of(c: &FieldCtx, m: u32) -> Felt {
    c.primitive_element(m).unwrap()
}

#[test]
fn family_i_instantiation() {
    let c = ctx(2, 3);
    let t = generator_of(&c, 3);
    // t generates F_8; (t+t^2) ρ + (t+t^4) ρ^2 + ξ^9
    let m = family_i_model(&c, t).unwrap();
    let want = BiPoly::from_terms(
        &c,
        [
            (0, 1, c.add(t, c.pow(t, 2))),
            (0, 2, c.add(t, c.pow(t, 4))),
            (9, 0, Felt::ONE),
        ],
    );
    assert_eq!(m.poly, want);
    assert_eq!(m.claimed_genus, 4);
    assert_eq!(m.claimed_semigroup_gens, Some(vec![2, 9]));
    assert!(!m.poly.partial(Var::Y).is_zero() && m.poly.partial(Var::Y).is_constant());

    let c = ctx(2, 2);
    let t = generator_of(&c, 2);
    let m = family_i_model(&c, t).unwrap();
    assert_eq!(m.claimed_genus, 0);
    assert!(m.is_rational());
    assert_eq!(m.poly.num_terms(), 2);
    assert!(family_i_model(&c, Felt::ONE).is_err());
    assert!(family_i_model(&c, c.generator()).is_err());
}

#[test]
fn family_ii_instantiation() {
    let c = ctx(3, 2);
    let params = family_ii_parameters(&c);
    assert_eq!(params.len(), 8);
    let b = params[0];
    let m = family_ii_model(&c, b).unwrap();
    let xi = BiPoly::x(&c);
    let rho = BiPoly::y(&c);
    let lhs = (&xi + &xi.pow(3)).pow(2);
    let rhs = (&rho + &rho.pow(3)).scale(c.scalar(2, b));
    assert_eq!(m.poly, &lhs - &rhs);
    assert_eq!(m.poly.partial(Var::Y), BiPoly::constant(&c, c.neg(c.scalar(2, b))));
    assert_eq!(m.claimed_genus, 3);
    assert_eq!(m.claimed_semigroup_gens, Some(vec![3, 4, 10]));
    assert!(family_ii_model(&c, Felt::ZERO).is_err());
    assert!(family_ii_model(&c, Felt::ONE).is_err());
    assert!(family_ii_model(&ctx(2, 3), Felt::ONE).is_err());
}

#[test]
fn family_iii_small_case_by_hand() {
    let c = ctx(2, 2);
    for b in family_iii_parameters(&c) {
        let coeffs = family_iii_coeffs(&c, b).unwrap();
        let cc = c.add(b, c.square(b));
        let x = BiPoly::x(&c);
        let t = &x + &x.pow(2);
        let one = BiPoly::one(&c);
        let c4 = (&x + &BiPoly::constant(&c, cc)).pow(4);
        // g_0 = T(1+T)^2 + (X+c)^4 (1+T)
        let g0 = &(&t * &(&one + &t).pow(2)) + &(&c4 * &(&one + &t));
        assert_eq!(coeffs.g[0], g0);
        assert_eq!(coeffs.g[1], c4);
        assert_eq!(coeffs.constant, x.pow(5));
    }
}

#[test]
fn family_iii_models_for_small_h() {
    for h in 2..=4u32 {
        let c = ctx(2, h);
        let params = family_iii_parameters(&c);
        assert_eq!(params.len() as u64, c.q());
        for b in params {
            let m = family_iii_model(&c, b).unwrap();
            assert_eq!(m.poly.deg_y(), Some(1 << (h - 1)));
            assert_eq!(m.claimed_genus, c.q() * (c.q() - 2) / 8);
        }
    }
    let c = ctx(2, 3);
    let b = family_iii_parameters(&c)[0];
    assert_eq!(family_iii_coeffs(&c, b).unwrap().g.len(), 3);
    assert!(family_iii_coeffs(&c, Felt::ONE).is_err());
}

#[test]
fn genus_formulas() {
    assert_eq!(genus_formula(Family::FamilyI, 2, 3).unwrap(), 4);
    assert_eq!(genus_formula(Family::FamilyII, 3, 2).unwrap(), 3);
    assert_eq!(genus_formula(Family::FamilyIII, 2, 3).unwrap(), 6);
    assert!(genus_formula(Family::FamilyII, 2, 3).is_err());
    assert!(genus_formula(Family::FamilyIII, 3, 2).is_err());
    // order-p row matches family II
    assert_eq!(gsx_genus_table(3, 2)[0], (3, 3));
}

#[test]
fn lemma_a_small_primes() {
    let r = verify_lemma_a(2).unwrap();
    assert!(r.holds, "{r:?}");
    assert_eq!(r.degree, 22);
    let mut quads = r.quadratics.clone();
    quads.sort();
    // XY+1, XY+Y+1, XY+X+1, XY+X+Y
    assert_eq!(quads, vec![(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 0)]);
    assert!(r.top_terms_cancel);

    let r = verify_lemma_a(3).unwrap();
    assert!(r.holds);
    assert_eq!((r.degree, r.quadratic_factors), (66, 18));
    // 2p(p+1) + (p^2-p) + 2p^2(p-1)
    assert_eq!(r.axis_factors as u64 * 4 + r.linear_factors as u64 + 2 * r.quadratic_factors as u64, 66);
}

#[test]
fn lemma_b_identity() {
    for h in 2..=3u32 {
        let c = ctx(2, h);
        for b in family_iii_parameters(&c) {
            let r = verify_lemma_b(&c, b).unwrap();
            assert!(r.holds, "{r:?}");
            assert!(r.top_coefficient_is_c2q);
            // the printed (X+b+b^2)^{2q} form never equals the coefficient
            assert!(!r.printed_variants[0].holds);
        }
    }
}

#[test]
fn parameter_spaces() {
    assert_eq!(family_i_parameters(&make_field(2, 3).unwrap()).len(), 6);
    assert_eq!(family_i_parameters(&make_field(2, 5).unwrap()).len(), 30);
    assert_eq!(family_iii_parameters(&make_field(2, 2).unwrap()).len(), 4);
    assert!(family_iii_parameters(&make_field(3, 2).unwrap()).is_empty());
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        /// Family I and II models have constant nonzero `∂F/∂Y`, and every
        /// admissible family III parameter passes the G-identity.
        #[test]
        fn model_invariants(i in any::<usize>(), h in 2u32..5) {
            let c = ctx(3, 2);
            let params = family_ii_parameters(&c);
            let m = family_ii_model(&c, params[i % params.len()]).unwrap();
            let d = m.poly.partial(Var::Y);
            prop_assert!(d.total_degree() == Some(0));
            let c = ctx(2, h.min(4));
            let params = family_i_parameters(&c);
            let m = family_i_model(&c, params[i % params.len()]).unwrap();
            prop_assert!(m.poly.partial(Var::Y).total_degree() == Some(0));
            let params = family_iii_parameters(&c);
            let r = lemmas::verify_lemma_b(&c, params[i % params.len()]).unwrap();
            prop_assert!(r.holds);
        }
    }
}
