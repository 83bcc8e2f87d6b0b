use super::*;
use proptest::prelude::*;

// Naive reference: polynomials over F_p as Vec<u32>, multiplication by
// schoolbook convolution and long division.
fn naive_mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let n = f.len() - 1;
    for d in (n..prod.len()).rev() {
        let c = prod[d];
        if c != 0 {
            for (k, &fk) in f.iter().enumerate() {
                let idx = d - n + k;
                prod[idx] = (prod[idx] + (p - c) * fk) % p;
            }
        }
    }
    prod.truncate(n);
    prod
}

// Irreducibility by trial division against every monic polynomial of degree
// at most n/2.
fn naive_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    for d in 1..=n / 2 {
        for t in 0..(p as u64).pow(d as u32) {
            let mut g = vec![0u32; d + 1];
            let mut rest = t;
            for c in g.iter_mut().take(d) {
                *c = (rest % p as u64) as u32;
                rest /= p as u64;
            }
            g[d] = 1;
            let mut r = f.to_vec();
            for top in (d..=n).rev() {
                let c = r[top];
                if c != 0 {
                    for (k, &gk) in g.iter().enumerate() {
                        let idx = top - d + k;
                        r[idx] = (r[idx] + (p - c) * gk) % p;
                    }
                }
            }
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn brute_modulus(p: u32, n: u32) -> Vec<u32> {
    // enumerate (c_{n-1}, ..., c_0) in lexicographic order
    let total = (p as u64).pow(n);
    for t in 0..total {
        let mut c = vec![0u32; n as usize];
        let mut rest = t;
        for i in 0..n as usize {
            c[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        let mut f = c.clone();
        f.push(1);
        if naive_irreducible(&f, p) {
            return c;
        }
    }
    unreachable!()
}

#[test]
fn modulus_for_f16_is_x4_x_1() {
    let ctx = make_field(2, 1).unwrap();
    assert_eq!(ctx.modulus(), &[1, 1, 0, 0]);
}

#[test]
fn modulus_matches_trial_division_search() {
    for (p, h) in [(2u64, 1u32), (3, 1), (5, 1), (2, 2), (7, 1)] {
        let ctx = make_field(p, h).unwrap();
        assert_eq!(ctx.modulus(), brute_modulus(p as u32, 4 * h).as_slice(), "p={p} h={h}");
    }
}

#[test]
fn rejects_bad_parameters() {
    assert_eq!(make_field(2, 0).unwrap_err(), FieldError::ZeroExponent);
    assert_eq!(make_field(4, 1).unwrap_err(), FieldError::NotPrime(4));
    assert!(matches!(make_field(3, 5), Err(FieldError::TooLarge { .. })));
    assert!(matches!(make_field(2, 16), Err(FieldError::TooLarge { .. })));
}

#[test]
fn encoding_round_trip() {
    for (p, h) in [(2u64, 2u32), (3, 1), (5, 1)] {
        let ctx = make_field(p, h).unwrap();
        for n in 0..ctx.order() {
            let x = ctx.decode(n).unwrap();
            assert_eq!(ctx.encode(x), n);
        }
        assert!(ctx.decode(ctx.order()).is_err());
    }
}

#[test]
fn multiplication_matches_naive_reference() {
    for (p, h) in [(2u64, 1u32), (3, 1), (5, 1)] {
        let ctx = make_field(p, h).unwrap();
        let mut f = ctx.modulus().to_vec();
        f.push(1);
        for a in 0..ctx.order() {
            for b in (0..ctx.order()).step_by(7) {
                let (x, y) = (ctx.decode(a).unwrap(), ctx.decode(b).unwrap());
                let want = naive_mulmod(&ctx.coeffs(x), &ctx.coeffs(y), &f, p as u32);
                assert_eq!(ctx.coeffs(ctx.mul(x, y)), want);
                let sum: Vec<u32> = ctx
                    .coeffs(x)
                    .iter()
                    .zip(ctx.coeffs(y))
                    .map(|(&u, v)| (u + v) % p as u32)
                    .collect();
                assert_eq!(ctx.coeffs(ctx.add(x, y)), sum);
            }
        }
    }
}

#[test]
fn f4_generator_examples() {
    // F_4 = {0, 1, t, t+1} inside F_16
    let ctx = make_field(2, 1).unwrap();
    let f4 = ctx.subfield_elements(2).unwrap();
    assert_eq!(f4.len(), 4);
    let t = *f4.iter().find(|&&x| x != Felt::ZERO && x != Felt::ONE).unwrap();
    let t1 = ctx.add(t, Felt::ONE);
    assert_eq!(ctx.mul(ctx.square(t), Felt::ONE), ctx.add(t, Felt::ONE));
    assert_eq!(ctx.mul(t, t1), Felt::ONE);
    assert_eq!(ctx.frobenius(t, 1), t1);
    assert_eq!(ctx.rel_trace(t, 1, 2).unwrap(), Felt::ONE);
    for x in f4 {
        assert_eq!(ctx.pow(x, 4), x);
    }
}

#[test]
fn trace_on_prime_field_doubles() {
    let ctx = make_field(3, 1).unwrap();
    for k in 0..3 {
        let x = ctx.from_int(k);
        assert_eq!(ctx.rel_trace(x, 1, 2).unwrap(), ctx.from_int(2 * k));
    }
    assert_eq!(ctx.rel_trace(Felt::ZERO, 2, 4).unwrap(), Felt::ZERO);
    let g = ctx.generator();
    assert_eq!(ctx.rel_trace(g, 1, 2), Err(FieldError::NotInSubfield(2)));
    assert!(matches!(ctx.rel_trace(g, 3, 4), Err(FieldError::NotDivisor { .. })));
}

#[test]
fn trace_is_transitive_and_surjective() {
    let ctx = make_field(2, 2).unwrap();
    let f16 = ctx.subfield_elements(4).unwrap();
    let mut image = std::collections::BTreeSet::new();
    for &x in &f16 {
        let direct = ctx.rel_trace(x, 1, 4).unwrap();
        let staged = ctx.rel_trace(ctx.rel_trace(x, 2, 4).unwrap(), 1, 2).unwrap();
        assert_eq!(direct, staged);
        image.insert(ctx.rel_trace(x, 2, 4).unwrap());
    }
    assert_eq!(image.len(), 4);
}

#[test]
fn omega_properties() {
    for (p, h) in [(2u64, 1u32), (2, 3), (3, 1), (3, 2), (5, 1)] {
        let ctx = make_field(p, h).unwrap();
        let w = ctx.find_omega();
        assert!(ctx.in_subfield(w, 2 * h));
        let lhs = ctx.pow(w, ctx.q() as u128 - 1);
        assert_eq!(lhs, ctx.from_int(-1));
    }
    let ctx = make_field(3, 1).unwrap();
    let w = ctx.find_omega();
    // order-4 elements of F_9 by search
    let order4: Vec<Felt> = ctx
        .subfield_elements(2)
        .unwrap()
        .into_iter()
        .filter(|&x| x != Felt::ZERO && ctx.pow(x, 2) == ctx.from_int(-1))
        .collect();
    assert!(order4.contains(&w));
}

#[test]
fn subfield_sizes_and_membership() {
    let ctx = make_field(2, 2).unwrap();
    for m in [1u32, 2, 4, 8] {
        let els = ctx.subfield_elements(m).unwrap();
        assert_eq!(els.len() as u128, 2u128.pow(m));
        assert!(els.windows(2).all(|w| w[0] < w[1]));
        assert!(els.iter().all(|&x| ctx.pow(x, 2u128.pow(m)) == x));
    }
    assert_eq!(ctx.subfield_elements(1).unwrap(), vec![Felt::ZERO, Felt::ONE]);
    assert!(ctx.subfield_elements(3).is_err());
    assert_eq!(
        ctx.subfield_elements_bounded(8, 100),
        Err(FieldError::EnumerationBound(256))
    );
}

#[test]
fn hermitian_kernel_has_q_elements() {
    for (p, h) in [(2u64, 1u32), (2, 2), (3, 1), (2, 3), (3, 2)] {
        let ctx = make_field(p, h).unwrap();
        let q = ctx.q() as usize;
        let mut coeffs = vec![Felt::ZERO; h as usize + 1];
        coeffs[0] = Felt::ONE;
        coeffs[h as usize] = Felt::ONE;
        let ker = solve_linearized(&ctx, &coeffs, Felt::ZERO, 2 * h).unwrap();
        assert_eq!(ker.len(), q);
    }
}

#[test]
fn linearized_matches_exhaustive_substitution() {
    for (p, h) in [(2u64, 1u32), (3, 1), (2, 2)] {
        let ctx = make_field(p, h).unwrap();
        let q = ctx.q() as u128;
        let dom = ctx.subfield_elements(2 * h).unwrap();
        let mut coeffs = vec![Felt::ZERO; h as usize + 1];
        coeffs[0] = Felt::ONE;
        coeffs[h as usize] = Felt::ONE;
        let solver = LinearizedSolver::new(&ctx, &coeffs, 2 * h).unwrap();
        for &x in &dom {
            let rhs = ctx.pow(x, q + 1);
            let brute: Vec<Felt> = dom
                .iter()
                .copied()
                .filter(|&y| ctx.add(ctx.pow(y, q), y) == rhs)
                .collect();
            assert_eq!(solver.solve(&ctx, rhs), brute);
            assert_eq!(brute.len() as u64, ctx.q());
        }
    }
}

#[test]
fn artin_schreier_over_f2_has_no_root_at_one() {
    let ctx = make_field(2, 1).unwrap();
    let coeffs = [Felt::ONE, Felt::ONE];
    assert!(solve_linearized(&ctx, &coeffs, Felt::ONE, 1).unwrap().is_empty());
    assert_eq!(
        solve_linearized(&ctx, &[], Felt::ONE, 1).unwrap_err(),
        FieldError::EmptyCoefficients
    );
}

#[test]
fn division_by_zero_is_an_error() {
    let ctx = make_field(3, 1).unwrap();
    assert_eq!(ctx.inv(Felt::ZERO), Err(FieldError::DivisionByZero));
    assert_eq!(ctx.arith(Felt::ONE, Felt::ZERO, ArithOp::Div), Err(FieldError::DivisionByZero));
    assert_eq!(ctx.arith(Felt::ZERO, Felt::ZERO, ArithOp::Pow(-1)), Err(FieldError::DivisionByZero));
}

fn field_strategy() -> impl Strategy<Value = (u64, u32)> {
    prop_oneof![Just((2u64, 1u32)), Just((2, 3)), Just((3, 1)), Just((3, 2)), Just((5, 1)), Just((2, 8))]
}

proptest! {
    #[test]
    fn field_axioms((p, h) in field_strategy(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let ctx = make_field(p, h).unwrap();
        let n = ctx.order();
        let (x, y, z) = (
            ctx.decode(a as u128 % n).unwrap(),
            ctx.decode(b as u128 % n).unwrap(),
            ctx.decode(c as u128 % n).unwrap(),
        );
        prop_assert_eq!(ctx.add(x, Felt::ZERO), x);
        prop_assert_eq!(ctx.sub(ctx.add(x, y), y), x);
        prop_assert_eq!(ctx.mul(x, ctx.add(y, z)), ctx.add(ctx.mul(x, y), ctx.mul(x, z)));
        prop_assert_eq!(ctx.mul(ctx.mul(x, y), z), ctx.mul(x, ctx.mul(y, z)));
        if !x.is_zero() {
            prop_assert_eq!(ctx.mul(x, ctx.pow(x, n - 2)), Felt::ONE);
            prop_assert_eq!(ctx.pow_signed(x, -3).unwrap(), ctx.inv(ctx.pow(x, 3)).unwrap());
        }
    }

    #[test]
    fn frobenius_is_a_ring_map((p, h) in field_strategy(), a in any::<u64>(), b in any::<u64>(), m in 0u32..40) {
        let ctx = make_field(p, h).unwrap();
        let n = ctx.order();
        let (x, y) = (ctx.decode(a as u128 % n).unwrap(), ctx.decode(b as u128 % n).unwrap());
        prop_assert_eq!(ctx.frobenius(ctx.mul(x, y), m), ctx.mul(ctx.frobenius(x, m), ctx.frobenius(y, m)));
        prop_assert_eq!(ctx.frobenius(ctx.add(x, y), m), ctx.add(ctx.frobenius(x, m), ctx.frobenius(y, m)));
        prop_assert_eq!(ctx.frobenius(ctx.frobenius(x, 1), ctx.degree() - 1), x);
    }

    #[test]
    fn linearized_solutions_are_solutions((p, h) in field_strategy(), a in any::<u64>(), cs in proptest::collection::vec(any::<u64>(), 1..4)) {
        let ctx = make_field(p, h).unwrap();
        let n = ctx.order();
        let coeffs: Vec<Felt> = cs.iter().map(|&c| ctx.decode(c as u128 % n).unwrap()).collect();
        let x = ctx.decode(a as u128 % n).unwrap();
        let solver = LinearizedSolver::new(&ctx, &coeffs, ctx.degree()).unwrap();
        let rhs = ctx.eval_additive(&coeffs, x);
        let sols = solver.solve(&ctx, rhs);
        prop_assert!(sols.contains(&x));
        prop_assert_eq!(sols.len() as u128, solver.kernel_size());
        prop_assert_eq!(solver.count(&ctx, rhs), solver.kernel_size());
        for s in sols.iter().take(16) {
            prop_assert_eq!(ctx.eval_additive(&coeffs, *s), rhs);
        }
    }
}
