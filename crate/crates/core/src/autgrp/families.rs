use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use super::{map_preserves, unique_fixed_place, AffineAlgMap, AutError, AutGroupTable, AutResult, DEFAULT_CLOSURE_BOUND};
use crate::gfield::linalg::{FpMatrix, FpSystem};
use crate::gfield::{FieldCtx, Felt, LinearizedSolver};
use crate::models::{family_i_model, family_ii_model, family_iii_coeffs, fpp_char2, CurveModel};
use crate::placecount::family_iii_deck;
use crate::polyring::BiPoly;

/// Models of the shape `L(Y) + f(X)` with `L` additive.
fn split_additive(f: &BiPoly) -> AutResult<(Vec<(u32, Felt)>, BiPoly)> {
    let ctx = f.ctx();
    let mut l = Vec::new();
    let mut rest = Vec::new();
    for (e, c) in f.terms() {
        match (e.x, e.y) {
            (_, 0) => rest.push((e.x, 0, c)),
            (0, y) if is_p_power(ctx.p(), y) => l.push((y, c)),
            _ => return Err(AutError::Precondition("model is not additive in Y plus a polynomial in X")),
        }
    }
    Ok((l, BiPoly::from_terms(ctx, rest)))
}

fn is_p_power(p: u32, mut n: u32) -> bool {
    while n > 1 && n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

fn apply_additive(ctx: &Arc<FieldCtx>, l: &[(u32, Felt)], w: &BiPoly) -> BiPoly {
    l.iter().fold(BiPoly::zero(ctx), |acc, &(e, c)| &acc + &w.pow(e as u64).scale(c))
}

/// Solves `L(w(X)) = f(X) - f(X + a)` for `w` of degree at most `max_deg`
/// with coefficients in F_{q^2}, so that `(X + a, Y + w(X))` preserves
/// `L(Y) + f(X)`.
pub struct TranslationLift {
    ctx: Arc<FieldCtx>,
    f: BiPoly,
    system: FpSystem,
    /// `(j, β)` for each unknown.
    columns: Vec<(u32, Felt)>,
    rows: u32,
}

impl TranslationLift {
    pub fn new(model: &CurveModel, max_deg: u32) -> AutResult<Self> {
        let ctx = model.ctx().clone();
        let (l, f) = split_additive(&model.poly)?;
        let basis = ctx.subfield_basis(2 * ctx.h())?.to_vec();
        let mut columns = Vec::new();
        let mut images = Vec::new();
        for j in 0..=max_deg {
            for &beta in &basis {
                columns.push((j, beta));
                images.push(apply_additive(&ctx, &l, &BiPoly::monomial(&ctx, beta, j, 0)));
            }
        }
        let top = images
            .iter()
            .filter_map(|p| p.deg_x())
            .chain(f.deg_x())
            .max()
            .unwrap_or(0);
        let rows = top + 1;
        let d = ctx.degree() as usize;
        let cols: Vec<Vec<u32>> = images.iter().map(|p| Self::flatten(&ctx, p, rows, d)).collect();
        let m = FpMatrix::from_columns(ctx.p(), rows as usize * d, &cols);
        Ok(TranslationLift { system: FpSystem::new(&m), ctx, f, columns, rows })
    }

    fn flatten(ctx: &FieldCtx, p: &BiPoly, rows: u32, d: usize) -> Vec<u32> {
        let mut v = vec![0; rows as usize * d];
        for (e, c) in p.terms() {
            let off = e.x as usize * d;
            v[off..off + d].copy_from_slice(&ctx.coeffs(c));
        }
        v
    }

    fn assemble(&self, sol: &[u32]) -> BiPoly {
        let ctx = &self.ctx;
        let terms = self.columns.iter().zip(sol).filter(|(_, &s)| s != 0).map(|(&(j, beta), &s)| {
            (j, 0, ctx.scalar(s as i64, beta))
        });
        terms.fold(BiPoly::zero(ctx), |acc, (j, _, c)| &acc + &BiPoly::monomial(ctx, c, j, 0))
    }

    /// A particular `w` for the translation by `a`.
    pub fn lift(&self, a: Felt) -> AutResult<Option<BiPoly>> {
        let ctx = &self.ctx;
        let shifted = self.f.substitute(&(&BiPoly::x(ctx) + &BiPoly::constant(ctx, a)), &BiPoly::y(ctx))?;
        let rhs = &self.f - &shifted;
        if rhs.deg_x().unwrap_or(0) >= self.rows {
            return Ok(None);
        }
        let v = Self::flatten(ctx, &rhs, self.rows, ctx.degree() as usize);
        Ok(self.system.solve(&v).map(|s| self.assemble(&s)))
    }

    /// Basis of the `w` with `L(w) = 0`.
    pub fn kernel(&self) -> Vec<BiPoly> {
        self.system.kernel_basis().iter().map(|k| self.assemble(k)).collect()
    }

    /// `(X + a, Y + w(X))`.
    pub fn map(&self, a: Felt, w: &BiPoly) -> AffineAlgMap {
        let ctx = &self.ctx;
        AffineAlgMap {
            x_image: &BiPoly::x(ctx) + &BiPoly::constant(ctx, a),
            y_image: &BiPoly::y(ctx) + w,
        }
    }
}

/// The translation map for family I as displayed in closed form, with
/// `v^q - v + ω a^{q+1} = 0`.
pub fn family_i_printed_map(ctx: &Arc<FieldCtx>, b: Felt, a: Felt, v: Felt) -> AffineAlgMap {
    let p = ctx.p() as u128;
    let q = ctx.q() as u128;
    let omega = ctx.find_omega();
    let bb = ctx.sub(ctx.pow(b, p), b);
    let bbp = ctx.pow(bb, p - 1);
    let c2 = ctx.mul(omega, ctx.pow(a, q * p * p));
    let c1 = ctx.neg(ctx.add(
        ctx.mul(ctx.pow(omega, p), ctx.pow(a, p * p)),
        ctx.mul(bbp, ctx.mul(ctx.pow(omega, p), ctx.pow(a, q * p))),
    ));
    let c0 = ctx.neg(ctx.mul(bbp, ctx.mul(omega, ctx.pow(a, q))));
    let vv = ctx.sub(ctx.pow(v, p), v);
    let k = ctx.sub(ctx.pow(vv, p), ctx.mul(bbp, vv));
    let p32 = p as u32;
    AffineAlgMap {
        x_image: &BiPoly::x(ctx) + &BiPoly::constant(ctx, a),
        y_image: BiPoly::from_terms(
            ctx,
            [(0, 1, Felt::ONE), (p32 * p32, 0, c2), (p32, 0, c1), (1, 0, c0), (0, 0, k)],
        ),
    }
}

/// `(ξ, ρ) ↦ (λξ, μρ)`.
pub fn tau(ctx: &Arc<FieldCtx>, lambda: Felt, mu: Felt) -> AffineAlgMap {
    AffineAlgMap::scaling(ctx, lambda, mu)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyIReport {
    pub p: u32,
    pub h: u32,
    pub b: u128,
    pub printed_map_preserves: bool,
    pub lift_used: bool,
    pub v_order: usize,
    /// `q^3 / p^2`.
    pub v_expected: u64,
    pub lambda_order: usize,
    /// `(q + 1)(p - 1)`.
    pub lambda_expected: u64,
    pub w_order: Option<usize>,
    pub w_expected: u64,
    pub v_normal_in_w: bool,
    pub lambda_meets_v_trivially: bool,
    pub all_preserve: bool,
    pub p_elements_fix_one_place: Option<bool>,
    /// Order `p^{h-2}` given for the normal subgroup in the statement.
    pub stated_normal_order: u64,
    pub discrepancies: Vec<String>,
}

pub struct FamilyIGroup {
    pub v: AutGroupTable,
    pub lambda: AutGroupTable,
    pub w: Option<AutGroupTable>,
    pub report: FamilyIReport,
}

fn all_preserve(model: &CurveModel, maps: &[AffineAlgMap]) -> AutResult<bool> {
    for m in maps {
        if !map_preserves(model, m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Generators of `V` (translations in ξ) for family I.
fn family_i_v_generators(model: &CurveModel, b: Felt) -> AutResult<(Vec<AffineAlgMap>, bool, bool)> {
    let ctx = model.ctx();
    let q = ctx.q() as u128;
    let omega = model.omega;
    let mut coeffs = vec![Felt::ZERO; ctx.h() as usize + 1];
    coeffs[0] = ctx.from_int(-1);
    coeffs[ctx.h() as usize] = Felt::ONE;
    let v_solver = LinearizedSolver::new(ctx, &coeffs, 2 * ctx.h())?;
    let basis = ctx.subfield_basis(2 * ctx.h())?.to_vec();
    let mut printed_ok = true;
    let mut printed = Vec::new();
    for &a in &basis {
        let rhs = ctx.neg(ctx.mul(omega, ctx.pow(a, q + 1)));
        let v = *v_solver.solve(ctx, rhs).first().ok_or(AutError::NoLift(ctx.encode(a)))?;
        let m = family_i_printed_map(ctx, b, a, v);
        printed_ok &= map_preserves(model, &m)?;
        printed.push(m);
    }
    let p = ctx.p();
    let lift = TranslationLift::new(model, p * p)?;
    let mut gens = Vec::new();
    for &a in &basis {
        let w = lift.lift(a)?.ok_or(AutError::NoLift(ctx.encode(a)))?;
        gens.push(lift.map(a, &w));
    }
    for k in lift.kernel() {
        gens.push(lift.map(Felt::ZERO, &k));
    }
    if printed_ok {
        // the displayed maps miss the pure ρ-translations
        let extra: Vec<AffineAlgMap> = gens[basis.len()..].to_vec();
        printed.extend(extra);
        return Ok((printed, true, false));
    }
    Ok((gens, false, true))
}

fn lambda_generator(ctx: &Arc<FieldCtx>) -> AutResult<AffineAlgMap> {
    // λ of order (q+1)(p-1) and μ = λ^{q+1}
    let g = ctx.primitive_element(2 * ctx.h())?;
    let q = ctx.q() as u128;
    let lambda = ctx.pow(g, (q - 1) / (ctx.p() as u128 - 1));
    Ok(tau(ctx, lambda, ctx.pow(lambda, q + 1)))
}

fn normalizes_by_conjugation(sub: &AutGroupTable, g: &AffineAlgMap, g_inv: &AffineAlgMap) -> AutResult<bool> {
    for h in sub.generators() {
        let c = g_inv.then(h)?.then(g)?;
        if !sub.contains(&c) {
            return Ok(false);
        }
    }
    Ok(true)
}

const FIXED_POINT_WORK: usize = 2_000_000;

pub fn family_i_group(ctx: &Arc<FieldCtx>, b: Felt) -> AutResult<FamilyIGroup> {
    let model = family_i_model(ctx, b)?;
    let (p, h, q) = (ctx.p() as u64, ctx.h(), ctx.q());
    let (v_gens, printed_map_preserves, lift_used) = family_i_v_generators(&model, b)?;
    let v = AutGroupTable::closure(ctx, &v_gens)?;
    let lambda = AutGroupTable::closure(ctx, &[lambda_generator(ctx)?])?;
    let lam_gen = lambda.element(lambda.generator_indices()[0]).clone();
    let lam_inv = lambda.element(lambda.inverse(lambda.generator_indices()[0])).clone();
    let v_normal_in_w = normalizes_by_conjugation(&v, &lam_gen, &lam_inv)?;
    let lambda_meets_v_trivially = lambda.elements().iter().skip(1).all(|m| !v.contains(m));
    let w_expected = (q + 1) * (p - 1) * q.pow(3) / (p * p);
    let w = if w_expected <= DEFAULT_CLOSURE_BOUND as u64 {
        let mut gens = v.generators().into_iter().cloned().collect::<Vec<_>>();
        gens.push(lam_gen);
        Some(AutGroupTable::closure(ctx, &gens)?)
    } else {
        None
    };
    let mut ok = all_preserve(&model, v.elements())? && all_preserve(&model, lambda.elements())?;
    if let Some(w) = &w {
        ok &= all_preserve(&model, w.elements())?;
    }
    let points = q.pow(3) / (p * p);
    let p_elements_fix_one_place = if (v.order() as u64) * points <= FIXED_POINT_WORK as u64 {
        let all: Vec<usize> = (0..v.order()).collect();
        Some(unique_fixed_place(&model, &v, &all)?)
    } else {
        None
    };
    let stated_normal_order = p.pow(h - 2);
    let mut discrepancies = Vec::new();
    if !printed_map_preserves {
        discrepancies.push("displayed translation map does not preserve the model; lifted by linear algebra".into());
    }
    if stated_normal_order != v.order() as u64 {
        discrepancies.push(format!(
            "normal p-subgroup has order {} (stated p^(h-2) = {})",
            v.order(),
            stated_normal_order
        ));
    }
    let report = FamilyIReport {
        p: ctx.p(),
        h,
        b: ctx.encode(b),
        printed_map_preserves,
        lift_used,
        v_order: v.order(),
        v_expected: q.pow(3) / (p * p),
        lambda_order: lambda.order(),
        lambda_expected: (q + 1) * (p - 1),
        w_order: w.as_ref().map(|w| w.order()),
        w_expected,
        v_normal_in_w,
        lambda_meets_v_trivially,
        all_preserve: ok,
        p_elements_fix_one_place,
        stated_normal_order,
        discrepancies,
    };
    Ok(FamilyIGroup { v, lambda, w, report })
}

fn lcm(a: u64, b: u64) -> u64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

/// `Σ_{i<n} e^{p^i}`.
fn trace_terms(ctx: &FieldCtx, e: Felt, n: u32) -> Felt {
    (0..n).fold(Felt::ZERO, |acc, i| ctx.add(acc, ctx.frobenius(e, i)))
}

/// `(ξ, ρ) ↦ (ξ + a, ρ + νξ + c)`.
pub fn family_ii_psi(ctx: &Arc<FieldCtx>, a: Felt, nu: u32, c: Felt) -> AffineAlgMap {
    AffineAlgMap {
        x_image: &BiPoly::x(ctx) + &BiPoly::constant(ctx, a),
        y_image: BiPoly::from_terms(ctx, [(0, 1, Felt::ONE), (1, 0, ctx.from_int(nu as i64)), (0, 0, c)]),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceVariantCheck {
    pub label: String,
    /// The condition `T(a) = ν b, T(a)^2 = 2b T(c)` selects exactly the
    /// preserving maps.
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralizerProfile {
    pub gamma: BTreeSet<usize>,
    pub omega_minus_gamma: BTreeSet<usize>,
    pub outside_omega: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyIIReport {
    pub p: u32,
    pub h: u32,
    pub b: u128,
    pub candidates_tested: usize,
    pub psi_order: usize,
    /// `q^2 / p`.
    pub psi_expected: u64,
    pub total_order: usize,
    /// `(p - 1) q^2 / p`.
    pub total_expected: u64,
    pub gamma_order: usize,
    pub delta_order: usize,
    pub omega_order: usize,
    pub commutator_order: usize,
    pub commutator_is_gamma: bool,
    pub psi_abelian: bool,
    pub psi_exponent: u64,
    pub elementary_abelian: bool,
    pub centralizers: CentralizerProfile,
    pub trace_variants: Vec<TraceVariantCheck>,
    pub all_preserve: bool,
    pub p_elements_fix_one_place: bool,
    pub discrepancies: Vec<String>,
}

pub struct FamilyIIGroup {
    pub psi: AutGroupTable,
    pub total: AutGroupTable,
    pub report: FamilyIIReport,
}

const FAMILY_II_CANDIDATES: u64 = 200_000;

pub fn family_ii_group(ctx: &Arc<FieldCtx>, b: Felt) -> AutResult<FamilyIIGroup> {
    let model = family_ii_model(ctx, b)?;
    let (p, h, q) = (ctx.p(), ctx.h(), ctx.q());
    let els = ctx.subfield_elements(2 * h)?;
    if (els.len() as u64).pow(2) * p as u64 > FAMILY_II_CANDIDATES {
        return Err(AutError::BoundExceeded(FAMILY_II_CANDIDATES as usize));
    }
    let mut kept = Vec::new();
    let mut tested = 0;
    for &a in &els {
        for nu in 0..p {
            for &c in &els {
                tested += 1;
                if map_preserves(&model, &family_ii_psi(ctx, a, nu, c))? {
                    kept.push((a, nu, c));
                }
            }
        }
    }
    let kept_set: BTreeSet<(u128, u32, u128)> = kept.iter().map(|&(a, n, c)| (ctx.encode(a), n, ctx.encode(c))).collect();
    let two_b = ctx.scalar(2, b);
    let trace_variants = [(format!("{h}-term trace"), h), (format!("{}-term trace", 2 * h), 2 * h)]
        .into_iter()
        .map(|(label, n)| {
            let mut sel = BTreeSet::new();
            for &a in &els {
                let ta = trace_terms(ctx, a, n);
                for nu in 0..p {
                    if ta != ctx.scalar(nu as i64, b) {
                        continue;
                    }
                    for &c in &els {
                        if ctx.square(ta) == ctx.mul(two_b, trace_terms(ctx, c, n)) {
                            sel.insert((ctx.encode(a), nu, ctx.encode(c)));
                        }
                    }
                }
            }
            TraceVariantCheck { label, matches: sel == kept_set }
        })
        .collect();

    let maps: Vec<AffineAlgMap> = kept.iter().map(|&(a, nu, c)| family_ii_psi(ctx, a, nu, c)).collect();
    let psi = AutGroupTable::from_set(ctx, &maps)?;
    let params = |m: &AffineAlgMap| (m.x_image.constant_term(), m.y_image.coeff(1, 0), m.y_image.constant_term());
    let gamma: Vec<usize> = (0..psi.order()).filter(|&i| params(psi.element(i)).0.is_zero()).collect();
    let omega: Vec<usize> = (0..psi.order()).filter(|&i| params(psi.element(i)).1.is_zero()).collect();
    let delta = (0..psi.order())
        .filter(|&i| {
            let (a, nu, c) = params(psi.element(i));
            c.is_zero() && nu.is_zero() && trace_terms(ctx, a, 2 * h).is_zero()
        })
        .count();
    let commutator = psi.commutator_subgroup()?;
    let gamma_group = psi.subgroup(&gamma)?;
    let commutator_is_gamma =
        commutator.order() == gamma_group.order() && gamma_group.contains_group(&commutator);
    let gamma_set: BTreeSet<usize> = gamma.iter().copied().collect();
    let omega_set: BTreeSet<usize> = omega.iter().copied().collect();
    let mut centralizers = CentralizerProfile {
        gamma: BTreeSet::new(),
        omega_minus_gamma: BTreeSet::new(),
        outside_omega: BTreeSet::new(),
    };
    for i in 0..psi.order() {
        let c = psi.centralizer(i).len();
        if gamma_set.contains(&i) {
            centralizers.gamma.insert(c);
        } else if omega_set.contains(&i) {
            centralizers.omega_minus_gamma.insert(c);
        } else {
            centralizers.outside_omega.insert(c);
        }
    }
    let mut total_gens: Vec<AffineAlgMap> = psi.generators().into_iter().cloned().collect();
    if p > 2 {
        let g = ctx.primitive_element(1)?;
        total_gens.push(tau(ctx, g, ctx.square(g)));
    }
    let total = AutGroupTable::closure(ctx, &total_gens)?;
    let psi_exponent = psi.exponent();
    let psi_abelian = psi.is_abelian();
    let mut discrepancies = Vec::new();
    if !psi_abelian {
        discrepancies.push(format!("Psi of order {} is not abelian (exponent {psi_exponent})", psi.order()));
    }
    let all: Vec<usize> = (0..psi.order()).collect();
    let report = FamilyIIReport {
        p,
        h,
        b: ctx.encode(b),
        candidates_tested: tested,
        psi_order: psi.order(),
        psi_expected: q * q / p as u64,
        total_order: total.order(),
        total_expected: (p as u64 - 1) * q * q / p as u64,
        gamma_order: gamma.len(),
        delta_order: delta,
        omega_order: omega.len(),
        commutator_order: commutator.order(),
        commutator_is_gamma,
        psi_abelian,
        psi_exponent,
        elementary_abelian: psi_abelian && psi_exponent == p as u64,
        centralizers,
        trace_variants,
        all_preserve: all_preserve(&model, total.elements())?,
        p_elements_fix_one_place: unique_fixed_place(&model, &psi, &all)?,
        discrepancies,
    };
    Ok(FamilyIIGroup { psi, total, report })
}

/// `(x, η) ↦ (x + a, η + a^{2q} x^2 + a^q x + c + c^2)`.
pub fn family_iii_psi(ctx: &Arc<FieldCtx>, a: Felt, c: Felt) -> AffineAlgMap {
    let q = ctx.q() as u128;
    let aq = ctx.pow(a, q);
    AffineAlgMap {
        x_image: &BiPoly::x(ctx) + &BiPoly::constant(ctx, a),
        y_image: BiPoly::from_terms(
            ctx,
            [(0, 1, Felt::ONE), (2, 0, ctx.square(aq)), (1, 0, aq), (0, 0, ctx.add(c, ctx.square(c)))],
        ),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyIIIReport {
    pub q: u64,
    pub b: u128,
    pub candidates: usize,
    /// Preserving maps with `a ∈ F_{q^2}`.
    pub psi_order: usize,
    /// Preserving maps with `a ∈ F_q`.
    pub psi_order_a_in_fq: usize,
    pub deck_in_psi: bool,
    pub deck_order: u64,
    pub normalizer_order: usize,
    /// `q^2`.
    pub normalizer_expected: u64,
    /// The normalizer is `{ψ_{a,c} : a ∈ F_q or a^q + a = 1}`.
    pub criterion_matches: bool,
    pub quotient_order: usize,
    /// `q^2 / 2`.
    pub quotient_expected: u64,
    pub quotient_exponent: u64,
    pub quotient_order_histogram: BTreeMap<u64, usize>,
    pub all_preserve: bool,
}

pub struct FamilyIIIGroup {
    pub psi: AutGroupTable,
    pub normalizer: AutGroupTable,
    pub report: FamilyIIIReport,
}

pub fn family_iii_group(ctx: &Arc<FieldCtx>, b: Felt) -> AutResult<FamilyIIIGroup> {
    family_iii_coeffs(ctx, b)?;
    let q = ctx.q();
    if q > 16 {
        return Err(AutError::Precondition("q <= 16"));
    }
    let model = fpp_char2(ctx)?;
    let h = ctx.h();
    let mut coeffs = vec![Felt::ZERO; h as usize + 1];
    coeffs[0] = Felt::ONE;
    coeffs[h as usize] = Felt::ONE;
    let solver = LinearizedSolver::new(ctx, &coeffs, 2 * h)?;
    let mut maps: Vec<AffineAlgMap> = Vec::new();
    let mut keys = BTreeSet::new();
    let mut candidates = 0;
    for a in ctx.subfield_elements(2 * h)? {
        for c in solver.solve(ctx, ctx.pow(a, q as u128 + 1)) {
            candidates += 1;
            let m = family_iii_psi(ctx, a, c);
            if keys.insert(m.key()) {
                if !map_preserves(&model, &m)? {
                    return Err(AutError::NotAutomorphism(m.to_text()));
                }
                maps.push(m);
            }
        }
    }
    let psi = AutGroupTable::from_set(ctx, &maps)?;
    let a_of = |m: &AffineAlgMap| m.x_image.constant_term();
    let psi_order_a_in_fq = maps.iter().filter(|m| ctx.in_subfield(a_of(m), h)).count();
    let deck = family_iii_deck(ctx, b);
    let deck_in_psi = psi.contains(&deck);
    let deck_group = AutGroupTable::closure(ctx, std::slice::from_ref(&deck))?;
    let n_idx = psi.normalizer(&deck_group);
    let qq = q as u128;
    let criterion: BTreeSet<usize> = (0..psi.order())
        .filter(|&i| {
            let a = a_of(psi.element(i));
            ctx.in_subfield(a, h) || ctx.add(ctx.pow(a, qq), a) == Felt::ONE
        })
        .collect();
    let criterion_matches = criterion == n_idx.iter().copied().collect::<BTreeSet<_>>();
    let normalizer = psi.subgroup(&n_idx)?;
    let cosets = normalizer.cosets(&deck_group);
    let mut hist = BTreeMap::new();
    let mut exponent = 1;
    for coset in &cosets {
        let o = normalizer.order_modulo(coset[0], &deck_group);
        *hist.entry(o).or_insert(0) += 1;
        exponent = lcm(exponent, o);
    }
    let report = FamilyIIIReport {
        q,
        b: ctx.encode(b),
        candidates,
        psi_order: psi.order(),
        psi_order_a_in_fq,
        deck_in_psi,
        deck_order: deck_group.order() as u64,
        normalizer_order: normalizer.order(),
        normalizer_expected: q * q,
        criterion_matches,
        quotient_order: cosets.len(),
        quotient_expected: q * q / 2,
        quotient_exponent: exponent,
        quotient_order_histogram: hist,
        all_preserve: all_preserve(&model, psi.elements())?,
    };
    Ok(FamilyIIIGroup { psi, normalizer, report })
}
