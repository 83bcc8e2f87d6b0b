use super::*;
use crate::gfield::make_field;
use crate::models::{
    family_i_model, family_i_parameters, family_ii_model, family_ii_parameters, family_iii_parameters,
    hermitian_model, subcover_center, HermitianVariant,
};

fn ctx(p: u64, h: u32) -> Arc<FieldCtx> {
    Arc::new(make_field(p, h).unwrap())
}

/// Counts `f = 0` over F_{p^m} by trying every pair.
fn brute_count(f: &BiPoly, m: u32) -> u64 {
    let els = f.ctx().subfield_elements(m).unwrap();
    let mut n = 0;
    for &x in &els {
        for &y in &els {
            if f.eval(x, y).is_zero() {
                n += 1;
            }
        }
    }
    n
}

#[test]
fn hermitian_counts() {
    assert_eq!(count_affine(&hermitian_model(&ctx(2, 1), HermitianVariant::Plus).poly, 1).unwrap(), 8);
    for (p, h) in [(2, 1), (3, 1), (2, 2), (2, 3), (3, 2)] {
        let c = ctx(p, h);
        let q = c.q();
        for v in [HermitianVariant::Plus, HermitianVariant::MinusOmega, HermitianVariant::PlusOne] {
            let m = hermitian_model(&c, v);
            let r = maximality_check(&m).unwrap();
            assert_eq!(r.n, q * q * q + 1, "{p} {h} {v:?}");
            assert!(r.maximal);
        }
    }
    assert_eq!(rational_places(&hermitian_model(&ctx(2, 2), HermitianVariant::Plus)).unwrap().n, 65);
}

#[test]
fn fiber_solver_matches_brute_force() {
    let c = ctx(2, 2);
    let b = family_iii_parameters(&c)[1];
    let m3 = crate::models::family_iii_model(&c, b).unwrap();
    for f in [
        hermitian_model(&c, HermitianVariant::Plus).poly,
        subcover_center(&c).poly,
        fpp_char2(&c).unwrap().poly,
        m3.poly,
    ] {
        assert_eq!(count_affine(&f, 1).unwrap(), brute_count(&f, 4), "{f}");
    }
    let c = ctx(3, 1);
    let x = BiPoly::x(&c);
    let y = BiPoly::y(&c);
    let f = &(&y.pow(2) - &x.pow(3)) + &x;
    assert!(!FiberSolver::new(&f, 2).unwrap().is_additive());
    assert_eq!(count_affine(&f, 1).unwrap(), brute_count(&f, 2));
    assert_eq!(count_affine(&f, 2).unwrap(), brute_count(&f, 4));
}

#[test]
fn family_i_and_ii_are_maximal() {
    let c = ctx(2, 3);
    for b in family_i_parameters(&c) {
        let m = family_i_model(&c, b).unwrap();
        let t = rational_places(&m).unwrap();
        assert_eq!((t.affine_points, t.n), (128, 129));
        assert!(maximality_check(&m).unwrap().maximal);
        assert!(singular_rational_points(&m, 1).unwrap().is_empty());
    }
    let c = ctx(3, 2);
    for b in family_ii_parameters(&c) {
        let m = family_ii_model(&c, b).unwrap();
        assert_eq!(rational_places(&m).unwrap().n, 136);
        assert!(maximality_check(&m).unwrap().maximal);
    }
}

#[test]
fn perturbed_model_is_not_maximal() {
    let c = ctx(2, 3);
    let mut m = family_i_model(&c, family_i_parameters(&c)[0]).unwrap();
    m.poly = &m.poly + &BiPoly::monomial(&c, Felt::ONE, 1, 0);
    assert!(!maximality_check(&m).unwrap().maximal);
}

#[test]
fn intermediate_genera_by_count() {
    for (p, h) in [(2, 2), (2, 3), (3, 1), (3, 2)] {
        let c = ctx(p, h);
        let m = subcover_center(&c);
        assert_eq!(genus_from_count(c.q(), rational_places(&m).unwrap().n), Some(m.claimed_genus));
    }
    for (p, h) in [(3, 1), (3, 2), (5, 1)] {
        let c = ctx(p, h);
        let m = crate::models::subcover_noncenter(&c).unwrap();
        assert_eq!(genus_from_count(c.q(), rational_places(&m).unwrap().n), Some(m.claimed_genus));
    }
    for h in 2..=4 {
        let c = ctx(2, h);
        let m = fpp_char2(&c).unwrap();
        assert_eq!(genus_from_count(c.q(), rational_places(&m).unwrap().n), Some(m.claimed_genus));
    }
}

#[test]
fn degree_four_counts() {
    let c = ctx(2, 2);
    let m = hermitian_model(&c, HermitianVariant::Plus);
    let t = affine_points(&m, 2).unwrap();
    let (q, g) = (c.q(), m.claimed_genus);
    let n2 = rational_places(&m).unwrap().n;
    assert!(t.n >= n2 && t.n <= q.pow(4) + 2 * g * q * q + 1);
    assert!(affine_points(&m, 3).is_err());
}

#[test]
fn quotient_counts() {
    let c = ctx(2, 2);
    let herm = hermitian_model(&c, HermitianVariant::Plus);
    let id = AffineAlgMap::identity(&c);
    assert_eq!(quotient_places_order2(&herm, &id), Err(PlaceError::NotOrderTwo));
    let psi = AffineAlgMap::translation(&c, Felt::ZERO, Felt::ONE);
    let r = quotient_places_order2(&herm, &psi).unwrap();
    assert_eq!((r.n, r.twisted), (33, 0));
    let bad = AffineAlgMap::translation(&c, Felt::ONE, Felt::ZERO);
    assert_eq!(quotient_places_order2(&herm, &bad), Err(PlaceError::NotAutomorphism));

    for h in [2, 3] {
        let c = ctx(2, h);
        for b in family_iii_parameters(&c).into_iter().take(2) {
            let r = family_iii_place_count(&c, b).unwrap();
            assert!(r.matches_expected && r.maximality.maximal, "{r:?}");
        }
    }
    let c = ctx(2, 2);
    let b = family_iii_parameters(&c)[0];
    assert_eq!(family_iii_place_count(&c, b).unwrap().quotient.n, 25);
}

#[test]
fn quotient_path_agrees_with_direct_count() {
    // family I at p = 2, h = 3 as the quotient of the central order-2 subcover
    let c = ctx(2, 3);
    let center = subcover_center(&c);
    for b in family_i_parameters(&c).into_iter().take(2) {
        let e = c.add(b, c.square(b));
        let deck = AffineAlgMap::translation(&c, Felt::ZERO, e);
        let r = quotient_places_order2(&center, &deck).unwrap();
        let direct = rational_places(&family_i_model(&c, b).unwrap()).unwrap().n;
        assert_eq!((r.n, direct), (129, 129));
    }
}

#[test]
fn zero_model_is_rejected() {
    let c = ctx(2, 1);
    assert_eq!(count_affine(&BiPoly::zero(&c), 1), Err(PlaceError::ZeroModel));
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        /// Fiber solving agrees with trying every `y` on random curves
        /// `y^{p^i} + c y + a(x)`.
        #[test]
        fn fibers_match_brute_force(i in 1u32..3, c in any::<u64>(), a in prop::collection::vec(any::<u64>(), 1..4)) {
            let ctx = ctx(2, 1);
            let n = ctx.order();
            let pick = |v: u64| ctx.decode(v as u128 % n).unwrap();
            let mut terms = vec![(0, 1u32 << i, Felt::ONE), (0, 1, pick(c))];
            terms.extend(a.iter().enumerate().map(|(e, &v)| (e as u32 + 1, 0, pick(v))));
            let f = BiPoly::from_terms(&ctx, terms);
            prop_assert_eq!(count_affine(&f, 1).unwrap(), brute_count(&f, 2));
        }
    }
}
