//! The end-to-end verification suite: ten numbered checks, each with a time
//! budget, plus a per-field sweep.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::autgrp::{family_i_group, family_ii_group, family_iii_group, pgu_stabilizer, unique_fixed_place, AutGroupTable};
use crate::gfield::{make_field, FieldCtx, Felt, LinearizedSolver};
use crate::isocls::{class_inventory, family_i_classify, family_i_iso, inverse_witness_holds, oracle_iso};
use crate::models::{
    family_i_model, family_i_parameters, family_ii_model, family_ii_parameters, family_iii_parameters, fpp_char2,
    genus_formula, hermitian_model, verify_lemma_a, verify_lemma_b, Family, HermitianVariant,
};
use crate::numsg::{is_telescopic, semigroup_at_infinity, telescopic_genus, NumSemigroup};
use crate::placecount::{family_iii_place_count, genus_from_count, maximality_check, rational_places};

type Fallible = Result<(), Box<dyn std::error::Error + Send + Sync>>;

/// `(id, name, budget in ms)`.
pub const CRITERIA: [(u8, &str, u64); 10] = [
    (1, "hermitian baseline", 5_000),
    (2, "family I genus at p=2, h=3", 5_000),
    (3, "family I genus at p=3, h=3", 60_000),
    (4, "family II genus and semigroup", 60_000),
    (5, "family III count through the quotient", 60_000),
    (6, "automorphism groups", 120_000),
    (7, "unique fixed place of p-elements", 60_000),
    (8, "isomorphism classes", 120_000),
    (9, "factorization identities", 60_000),
    (10, "oracle suites", 30_000),
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: u8,
    pub name: String,
    /// Every mathematical comparison held.
    pub math_ok: bool,
    pub elapsed_ms: u64,
    pub budget_ms: u64,
    pub within_budget: bool,
    pub passed: bool,
    /// Each failed comparison, named by the claim it tests.
    pub failures: Vec<String>,
    /// Known mismatches between a stated value and the computed one.
    pub discrepancies: Vec<String>,
    pub details: BTreeMap<String, Value>,
}

#[derive(Default)]
struct Check {
    failures: Vec<String>,
    discrepancies: Vec<String>,
    details: BTreeMap<String, Value>,
}

impl Check {
    fn expect<T: PartialEq + Debug>(&mut self, claim: &str, got: T, want: T) {
        if got != want {
            self.failures.push(format!("{claim}: got {got:?}, expected {want:?}"));
        }
    }

    fn ensure(&mut self, claim: &str, ok: bool) {
        if !ok {
            self.failures.push(format!("{claim}: does not hold"));
        }
    }

    fn note(&mut self, key: &str, value: impl Serialize) {
        self.details.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }
}

fn field(p: u64, h: u32) -> Result<Arc<FieldCtx>, crate::gfield::FieldError> {
    Ok(Arc::new(make_field(p, h)?))
}

fn run(id: u8, name: &str, budget_ms: u64, body: impl FnOnce(&mut Check) -> Fallible) -> CheckResult {
    let start = Instant::now();
    let mut ck = Check::default();
    if let Err(e) = body(&mut ck) {
        ck.failures.push(format!("error: {e}"));
    }
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let math_ok = ck.failures.is_empty();
    let within_budget = elapsed_ms <= budget_ms;
    CheckResult {
        id,
        name: name.to_string(),
        math_ok,
        elapsed_ms,
        budget_ms,
        within_budget,
        passed: math_ok && within_budget,
        failures: ck.failures,
        discrepancies: ck.discrepancies,
        details: ck.details,
    }
}

/// Runs check `id` (1 to 10).
pub fn run_criterion(id: u8) -> Option<CheckResult> {
    let &(_, name, budget) = CRITERIA.iter().find(|c| c.0 == id)?;
    let body: fn(&mut Check) -> Fallible = match id {
        1 => hermitian_baseline,
        2 => family_i_small,
        3 => family_i_p3,
        4 => family_ii_counts,
        5 => family_iii_counts,
        6 => automorphism_groups,
        7 => unique_fixed_points,
        8 => isomorphism_classes,
        9 => factorization_identities,
        10 => oracle_suites,
        _ => return None,
    };
    Some(run(id, name, budget, body))
}

pub fn run_all() -> Vec<CheckResult> {
    CRITERIA.iter().filter_map(|c| run_criterion(c.0)).collect()
}

fn hermitian_baseline(ck: &mut Check) -> Fallible {
    let mut rows = Vec::new();
    for (p, h) in [(2, 1), (3, 1), (2, 2), (2, 3)] {
        let ctx = field(p, h)?;
        let q = ctx.q();
        let model = hermitian_model(&ctx, HermitianVariant::Plus);
        let n = rational_places(&model)?.n;
        let m = maximality_check(&model)?;
        ck.expect(&format!("q={q}: Hermitian curve has q^3+1 rational places"), n, q.pow(3) + 1);
        ck.expect(&format!("q={q}: Hermitian genus q(q-1)/2"), m.genus, q * (q - 1) / 2);
        ck.ensure(&format!("q={q}: Hermitian curve is maximal"), m.maximal);
        rows.push(m);
    }
    ck.note("maximality", rows);
    Ok(())
}

/// Shared by checks 2 and 3: count, formula, semigroup and count-implied genus.
fn family_i_genus_agreement(ck: &mut Check, p: u64, h: u32, sample: usize, n_want: u64, g_want: u64, gens: &[u64]) -> Fallible {
    let ctx = field(p, h)?;
    let q = ctx.q();
    let params = family_i_parameters(&ctx);
    let formula = genus_formula(Family::FamilyI, p as u32, h)?;
    let semi = semigroup_at_infinity(Family::FamilyI, p as u32, h)?;
    ck.expect("family I genus formula q(q/p^2-1)/2", formula, g_want);
    ck.expect("family I semigroup generators (q/p^2, q+1)", semi.generators.clone(), gens.to_vec());
    ck.expect("family I semigroup gap count", semi.genus, g_want);
    let mut counts = Vec::new();
    for &b in params.iter().take(sample) {
        let model = family_i_model(&ctx, b)?;
        let n = rational_places(&model)?.n;
        let e = ctx.encode(b);
        ck.expect(&format!("b={e}: family I rational places"), n, n_want);
        ck.expect(&format!("b={e}: genus from maximal count"), genus_from_count(q, n), Some(g_want));
        counts.push(json!({"b": e, "N": n, "genus": model.claimed_genus, "maximal": maximality_check(&model)?.maximal}));
    }
    ck.expect("admissible parameters covered", counts.len(), sample.min(params.len()));
    ck.note("models", counts);
    ck.note("semigroup", json!({"generators": semi.generators, "gaps": semi.genus}));
    Ok(())
}

fn family_i_small(ck: &mut Check) -> Fallible {
    family_i_genus_agreement(ck, 2, 3, usize::MAX, 129, 4, &[2, 9])
}

fn family_i_p3(ck: &mut Check) -> Fallible {
    family_i_genus_agreement(ck, 3, 3, 3, 2188, 27, &[3, 28])
}

fn family_ii_counts(ck: &mut Check) -> Fallible {
    let ctx = field(3, 2)?;
    let params = family_ii_parameters(&ctx);
    ck.expect("family II admissible parameters at p=3, h=2", params.len(), 8);
    let mut counts = Vec::new();
    for &b in &params {
        let model = family_ii_model(&ctx, b)?;
        let n = rational_places(&model)?.n;
        ck.expect(&format!("b={}: family II rational places", ctx.encode(b)), n, 136);
        ck.expect("genus from maximal count", genus_from_count(9, n), Some(3));
        counts.push(json!({"b": ctx.encode(b), "N": n}));
    }
    ck.expect("family II genus formula (q/p)(q/p-1)/2", genus_formula(Family::FamilyII, 3, 2)?, 3);
    let semi = semigroup_at_infinity(Family::FamilyII, 3, 2)?;
    ck.expect("family II semigroup generators", semi.generators.clone(), vec![3, 4, 10]);
    ck.ensure("<3,4,10> is telescopic", is_telescopic(&semi.generators)?.telescopic);
    let tg = telescopic_genus(&semi.generators)?;
    ck.expect("l_g = q^2/p^2 - q/p - 1", tg.l_g, 5);
    ck.expect("telescopic genus", tg.genus, 3);
    if tg.l_g_with_a1 != tg.l_g {
        ck.discrepancies.push(format!(
            "telescopic sum with a_1 in every term gives l_g = {}, the a_i form gives {}",
            tg.l_g_with_a1, tg.l_g
        ));
    }
    ck.note("p3_h2", counts);
    ck.note("telescopic", tg);

    let ctx = field(5, 2)?;
    let b = *family_ii_parameters(&ctx).first().ok_or("no family II parameter at p=5")?;
    let model = family_ii_model(&ctx, b)?;
    let n = rational_places(&model)?.n;
    ck.expect("p=5, h=2: family II rational places", n, 1126);
    ck.expect("p=5, h=2: genus from maximal count", genus_from_count(25, n), Some(10));
    ck.expect("p=5, h=2: family II genus formula", model.claimed_genus, 10);
    ck.note("p5_h2", json!({"b": ctx.encode(b), "N": n}));
    Ok(())
}

fn family_iii_counts(ck: &mut Check) -> Fallible {
    let mut rows = Vec::new();
    for h in [2, 3] {
        let ctx = field(2, h)?;
        let q = ctx.q();
        let g = q * (q - 2) / 8;
        ck.expect(&format!("q={q}: family III genus formula q(q-2)/8"), genus_formula(Family::FamilyIII, 2, h)?, g);
        let params = family_iii_parameters(&ctx);
        ck.expect(&format!("q={q}: admissible parameters"), params.len() as u64, q);
        for &b in &params {
            let r = family_iii_place_count(&ctx, b)?;
            let e = ctx.encode(b);
            ck.expect(&format!("q={q}, b={e}: quotient count q^2(q+2)/4+1"), r.quotient.n, q * q * (q + 2) / 4 + 1);
            ck.expect(&format!("q={q}, b={e}: quotient count q^2+2gq+1"), r.quotient.n, q * q + 2 * g * q + 1);
            rows.push(json!({"q": q, "b": e, "count": r.quotient}));
        }
    }
    ck.note("counts", rows);
    Ok(())
}

fn automorphism_groups(ck: &mut Check) -> Fallible {
    let ctx = field(2, 3)?;
    let b = family_i_parameters(&ctx)[0];
    let r = family_i_group(&ctx, b)?.report;
    ck.expect("family I: |V| = q^3/p^2", r.v_order, 128);
    ck.expect("family I: |Λ| = (q+1)(p-1)", r.lambda_order, 9);
    ck.expect("family I: |W| = |V||Λ|", r.w_order, Some(1152));
    ck.ensure("family I: V normal in W", r.v_normal_in_w);
    ck.ensure("family I: V ∩ Λ = 1", r.lambda_meets_v_trivially);
    ck.ensure("family I: every element preserves the model", r.all_preserve);
    ck.expect("family I: stated normal p-subgroup order differs from q^3/p^2", r.stated_normal_order != r.v_order as u64, true);
    ck.discrepancies.extend(r.discrepancies.iter().map(|d| format!("family I: {d}")));
    ck.note("family_i", &r);

    let ctx = field(3, 2)?;
    let b = family_ii_parameters(&ctx)[0];
    let r = family_ii_group(&ctx, b)?.report;
    ck.expect("family II: |Ψ| = q^2/p", r.psi_order, 27);
    ck.expect("family II: total order (p-1)q^2/p", r.total_order, 54);
    ck.expect("family II: |Γ| = p", r.gamma_order, 3);
    ck.ensure("family II: commutator subgroup is Γ", r.commutator_is_gamma && r.commutator_order == 3);
    let c = &r.centralizers;
    ck.expect("family II: centralizer order of central elements q^2/p", c.gamma.iter().copied().collect::<Vec<_>>(), vec![27]);
    ck.expect("family II: centralizer order on Ω \\ Γ, (q/p)^2", c.omega_minus_gamma.iter().copied().collect::<Vec<_>>(), vec![9]);
    ck.expect("family II: centralizer order outside Ω, q", c.outside_omega.iter().copied().collect::<Vec<_>>(), vec![9]);
    ck.ensure("family II: every element preserves the model", r.all_preserve);
    ck.discrepancies.extend(r.discrepancies.iter().map(|d| format!("family II: {d}")));
    ck.note("family_ii", &r);

    let mut iii = Vec::new();
    for h in [2, 3] {
        let ctx = field(2, h)?;
        let q = ctx.q();
        let b = family_iii_parameters(&ctx)[0];
        let r = family_iii_group(&ctx, b)?.report;
        ck.expect(&format!("q={q}: normalizer of the deck map has order q^2"), r.normalizer_order as u64, q * q);
        ck.expect(&format!("q={q}: quotient group order q^2/2"), r.quotient_order as u64, q * q / 2);
        ck.expect(&format!("q={q}: quotient group exponent"), r.quotient_exponent, 4);
        ck.ensure(&format!("q={q}: normalizer criterion a ∈ F_q or a^q+a=1"), r.criterion_matches);
        iii.push(r);
    }
    ck.note("family_iii", iii);
    Ok(())
}

fn p_power_members(g: &AutGroupTable, p: u64) -> Vec<usize> {
    (1..g.order())
        .filter(|&i| {
            let mut o = g.element_order(i);
            while o.is_multiple_of(p) {
                o /= p;
            }
            o == 1
        })
        .collect()
}

fn unique_fixed_points(ck: &mut Check) -> Fallible {
    let mut rows = Vec::new();
    let mut record = |ck: &mut Check, label: String, model: &crate::models::CurveModel, group: &AutGroupTable, p: u64| -> Fallible {
        let members = p_power_members(group, p);
        let ok = unique_fixed_place(model, group, &members)?;
        ck.ensure(&format!("{label}: every nontrivial p-element fixes only the place at infinity"), ok);
        rows.push(json!({"group": label, "p_elements": members.len(), "unique": ok}));
        Ok(())
    };
    for (p, h) in [(2, 2), (2, 3), (3, 2)] {
        let ctx = field(p, h)?;
        let s = pgu_stabilizer(&ctx, HermitianVariant::Plus)?;
        let model = hermitian_model(&ctx, HermitianVariant::Plus);
        record(ck, format!("Hermitian stabilizer q={}", ctx.q()), &model, &s.group, p)?;
    }
    let ctx = field(2, 3)?;
    let b = family_i_parameters(&ctx)[0];
    let g = family_i_group(&ctx, b)?;
    let model = family_i_model(&ctx, b)?;
    record(ck, "family I V, p=2, h=3".into(), &model, &g.v, 2)?;
    if let Some(w) = &g.w {
        record(ck, "family I W, p=2, h=3".into(), &model, w, 2)?;
    }
    let ctx = field(3, 2)?;
    let b = family_ii_parameters(&ctx)[0];
    let g = family_ii_group(&ctx, b)?;
    let model = family_ii_model(&ctx, b)?;
    record(ck, "family II total, p=3, h=2".into(), &model, &g.total, 3)?;
    for h in [2, 3] {
        let ctx = field(2, h)?;
        let b = family_iii_parameters(&ctx)[0];
        let g = family_iii_group(&ctx, b)?;
        let model = fpp_char2(&ctx)?;
        record(ck, format!("family III Ψ, q={}", ctx.q()), &model, &g.psi, 2)?;
    }
    ck.note("groups", rows);
    Ok(())
}

fn isomorphism_classes(ck: &mut Check) -> Fallible {
    let mut inv = Vec::new();
    for (h, sizes) in [(3, vec![6]), (5, vec![6; 5])] {
        let ctx = field(2, h)?;
        let r = class_inventory(Family::FamilyI, &ctx)?;
        ck.expect(&format!("p=2, h={h}: family I class sizes"), r.class_sizes.clone(), sizes);
        ck.expect(&format!("p=2, h={h}: solver agrees with the case split"), r.classifier_agreement, Some(true));
        ck.expect(&format!("p=2, h={h}: solver agrees with the scaling oracle"), r.oracle_agreement, Some(true));
        ck.ensure(&format!("p=2, h={h}: isomorphism is an equivalence relation"), r.equivalence_relation);
        inv.push(r);
    }
    let ctx = field(3, 2)?;
    let r = class_inventory(Family::FamilyII, &ctx)?;
    ck.expect("p=3, h=2: family II class sizes", r.class_sizes.clone(), vec![2; 4]);
    ck.expect("p=3, h=2: solver agrees with the scaling oracle", r.oracle_agreement, Some(true));
    inv.push(r);
    ck.note("inventories", inv);

    let mut witnesses = Vec::new();
    for (p, h) in [(2, 3), (2, 5), (3, 3), (3, 4)] {
        let ctx = field(p, h)?;
        for b in family_i_parameters(&ctx) {
            let b_bar = ctx.inv(b)?;
            let ok = inverse_witness_holds(&ctx, b)?;
            ck.ensure(&format!("p={p}, h={h}, b={}: (c, δ) = (b^-p, -b) carries b to 1/b", ctx.encode(b)), ok);
            let classified = family_i_classify(&ctx, b, b_bar)?.iso;
            ck.ensure("b and 1/b are classified isomorphic", classified);
        }
        witnesses.push(json!({"p": p, "h": h, "checked": family_i_parameters(&ctx).len()}));
    }
    ck.note("inverse_witness", witnesses);

    let ctx = field(2, 5)?;
    let g = ctx.primitive_element(5)?;
    let b3 = ctx.pow(g, 3);
    ck.ensure("p=2, h=5: b and b^3 are not isomorphic", family_i_iso(&ctx, g, b3)?.is_none());
    let m = family_i_model(&ctx, g)?;
    let n = family_i_model(&ctx, b3)?;
    ck.ensure("p=2, h=5: oracle finds no scaling between b and b^3", !oracle_iso(&m, &n, 1)?.iso);
    Ok(())
}

fn factorization_identities(ck: &mut Check) -> Fallible {
    let mut a = Vec::new();
    for (p, deg) in [(2, 22), (3, 66)] {
        let r = verify_lemma_a(p)?;
        ck.expect(&format!("p={p}: total degree 2p^3+p^2+p"), r.degree, deg);
        ck.expect(&format!("p={p}: quadratic factors p^2(p-1)"), r.quadratic_factors as u64, (p * p * (p - 1)) as u64);
        ck.ensure(&format!("p={p}: F equals a scalar times the factor product"), r.holds);
        a.push(r);
    }
    ck.note("lemma_a", a);
    let mut b = Vec::new();
    for h in [2, 3, 4] {
        let ctx = field(2, h)?;
        for par in family_iii_parameters(&ctx) {
            let r = verify_lemma_b(&ctx, par)?;
            let e = ctx.encode(par);
            ck.ensure(&format!("h={h}, b={e}: every recursion division is exact"), r.divisions_exact);
            ck.ensure(&format!("h={h}, b={e}: g_(h-1) = (X+c)^q"), r.terminal_matches);
            ck.ensure(&format!("h={h}, b={e}: F = G^2 + G Tr(X)"), r.identity_holds);
            b.push(json!({"h": h, "b": e, "holds": r.holds, "printed_variants": r.printed_variants}));
        }
    }
    ck.note("lemma_b", b);
    Ok(())
}

fn brute_gap_genus(gens: &[u64]) -> u64 {
    let bound = gens.iter().product::<u64>() + 1;
    let mut reach = vec![false; bound as usize];
    reach[0] = true;
    for n in 1..bound as usize {
        reach[n] = gens.iter().any(|&g| n >= g as usize && reach[n - g as usize]);
    }
    reach.iter().filter(|&&r| !r).count() as u64
}

/// Weierstrass semigroup generators that occur for the models.
pub fn model_sequences() -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for (p, h) in [(2u64, 2u32), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2), (7, 2)] {
        let q = p.pow(h);
        out.push(vec![q, q + 1]);
        out.push(vec![q / p, q + 1]);
        if h >= 2 {
            out.push(vec![p.pow(h - 2), q + 1]);
        }
        if p > 2 {
            out.push(vec![q / p, q / p + q / (p * p), q + 1]);
        }
    }
    out
}

fn oracle_suites(ck: &mut Check) -> Fallible {
    let mut sequences = 0;
    for seq in model_sequences() {
        let tg = telescopic_genus(&seq)?;
        let brute = brute_gap_genus(&seq);
        ck.expect(&format!("{seq:?}: telescopic genus equals the gap count"), tg.genus, brute);
        ck.expect(&format!("{seq:?}: semigroup gap count"), NumSemigroup::from_generators(&seq)?.genus, brute);
        sequences += 1;
    }
    ck.note("sequences", sequences);

    let mut domains = 0;
    let mut evaluations: u64 = 0;
    for (p, h) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (7, 1)] {
        let ctx = make_field(p, h)?;
        let g = ctx.generator();
        let hh = h as usize;
        let mut polys = vec![vec![Felt::ONE; 2], {
            let mut c = vec![Felt::ZERO; hh + 1];
            c[0] = Felt::ONE;
            c[hh] = Felt::ONE;
            c
        }];
        polys.push((0..=hh + 1).map(|i| ctx.pow(g, 7 * i as u128 + 3)).collect());
        polys.push(vec![ctx.neg(ctx.find_omega()), Felt::ZERO, Felt::ONE]);
        for m in (1..=4 * h).filter(|m| (4 * h) % m == 0) {
            let dom = ctx.subfield_elements(m)?;
            for coeffs in &polys {
                let solver = LinearizedSolver::new(&ctx, coeffs, m)?;
                let mut fibers: BTreeMap<Felt, Vec<Felt>> = BTreeMap::new();
                for &y in &dom {
                    fibers.entry(ctx.eval_additive(coeffs, y)).or_default().push(y);
                }
                evaluations += dom.len() as u64;
                let mut ok = solver.kernel_size() as usize == fibers.get(&Felt::ZERO).map_or(0, Vec::len);
                for (&rhs, ys) in &fibers {
                    ok &= solver.solve(&ctx, rhs) == *ys;
                }
                for &rhs in dom.iter().step_by(1 + dom.len() / 64) {
                    ok &= solver.solve(&ctx, rhs).len() == fibers.get(&rhs).map_or(0, Vec::len);
                }
                ck.ensure(&format!("p={p}, 4h={}, domain F_(p^{m}): linearized solver matches substitution", 4 * h), ok);
                domains += 1;
            }
        }
    }
    ck.note("solver_cases", domains);
    ck.note("substitutions", evaluations);
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldSuite {
    pub p: u32,
    pub h: u32,
    pub checks: Vec<CheckResult>,
}

/// Models, counts, semigroups and groups for every family admissible at
/// `(p, h)`, with each enumeration skipped when it exceeds its bound.
pub fn field_suite(p: u64, h: u32) -> Result<FieldSuite, crate::gfield::FieldError> {
    let ctx = field(p, h)?;
    let mut checks = Vec::new();
    checks.push(run(0, "hermitian", u64::MAX, |ck| {
        let model = hermitian_model(&ctx, HermitianVariant::Plus);
        let m = maximality_check(&model)?;
        ck.ensure("Hermitian curve is maximal", m.maximal);
        ck.note("maximality", m);
        Ok(())
    }));
    for family in [Family::FamilyI, Family::FamilyII, Family::FamilyIII] {
        let params = match family {
            Family::FamilyI => family_i_parameters(&ctx),
            Family::FamilyII => family_ii_parameters(&ctx),
            _ => family_iii_parameters(&ctx),
        };
        if params.is_empty() {
            continue;
        }
        let name = format!("{family}");
        checks.push(run(0, &name, u64::MAX, |ck| {
            let g = genus_formula(family, p as u32, h)?;
            let mut rows = Vec::new();
            for &b in params.iter().take(8) {
                let e = ctx.encode(b);
                let n = match family {
                    Family::FamilyIII => family_iii_place_count(&ctx, b)?.quotient.n,
                    Family::FamilyI => rational_places(&family_i_model(&ctx, b)?)?.n,
                    _ => rational_places(&family_ii_model(&ctx, b)?)?.n,
                };
                ck.expect(&format!("b={e}: genus from maximal count equals the formula"), genus_from_count(ctx.q(), n), Some(g));
                rows.push(json!({"b": e, "N": n}));
            }
            if family != Family::FamilyIII {
                let s = semigroup_at_infinity(family, p as u32, h)?;
                ck.expect("semigroup gap count equals the formula", s.genus, g);
            }
            let group = match family {
                Family::FamilyI => family_i_group(&ctx, params[0]).map(|r| serde_json::to_value(r.report)),
                Family::FamilyII => family_ii_group(&ctx, params[0]).map(|r| serde_json::to_value(r.report)),
                _ => family_iii_group(&ctx, params[0]).map(|r| serde_json::to_value(r.report)),
            };
            match group {
                Ok(v) => ck.note("group", v?),
                Err(e) => ck.note("group_skipped", e.to_string()),
            }
            ck.note("genus", g);
            ck.note("counts", rows);
            Ok(())
        }));
    }
    Ok(FieldSuite { p: p as u32, h, checks })
}
