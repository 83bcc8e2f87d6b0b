use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use super::{map_preserves, AffineAlgMap, AutError, AutGroupTable, AutResult, DEFAULT_CLOSURE_BOUND};
use crate::gfield::{FieldCtx, Felt, LinearizedSolver};
use crate::models::{hermitian_model, HermitianVariant};
use crate::polyring::BiPoly;

/// `(s, t)` with the Hermitian model `y^q + s y + t x^{q+1}`.
fn hermitian_form(ctx: &Arc<FieldCtx>, variant: HermitianVariant) -> (Felt, Felt) {
    let f = hermitian_model(ctx, variant).poly;
    (f.coeff(0, 1), f.coeff(ctx.q() as u32 + 1, 0))
}

/// `(x, y) ↦ (λx + a, κ a^q λ x + y + b)` with `κ = -t/s` for the model
/// `y^q + s y + t x^{q+1}`; `κ = 1` for `y^q + y - x^{q+1}`.
pub fn psi(ctx: &Arc<FieldCtx>, variant: HermitianVariant, a: Felt, b: Felt, lambda: Felt) -> AffineAlgMap {
    let (s, t) = hermitian_form(ctx, variant);
    let kappa = ctx.neg(ctx.div(t, s).expect("s != 0"));
    let q = ctx.q() as u128;
    let xc = ctx.mul(kappa, ctx.mul(ctx.pow(a, q), lambda));
    AffineAlgMap {
        x_image: BiPoly::from_terms(ctx, [(1, 0, lambda), (0, 0, a)]),
        y_image: BiPoly::from_terms(ctx, [(1, 0, xc), (0, 1, Felt::ONE), (0, 0, b)]),
    }
}

/// `b^q + s b + t a^{q+1} = 0`.
pub fn psi_condition(ctx: &Arc<FieldCtx>, variant: HermitianVariant, a: Felt, b: Felt) -> bool {
    let (s, t) = hermitian_form(ctx, variant);
    let q = ctx.q() as u128;
    let lhs = ctx.add(ctx.add(ctx.pow(b, q), ctx.mul(s, b)), ctx.mul(t, ctx.pow(a, q + 1)));
    lhs.is_zero()
}

fn b_solver(ctx: &Arc<FieldCtx>, variant: HermitianVariant) -> AutResult<(LinearizedSolver, Felt)> {
    let (s, t) = hermitian_form(ctx, variant);
    let mut coeffs = vec![Felt::ZERO; ctx.h() as usize + 1];
    coeffs[0] = s;
    coeffs[ctx.h() as usize] = Felt::ONE;
    Ok((LinearizedSolver::new(ctx, &coeffs, 2 * ctx.h())?, t))
}

/// All `(a, b)` with `ψ_{a,b,1}` defined, i.e. the Sylow p-subgroup's
/// parameters.
pub fn sylow_parameters(ctx: &Arc<FieldCtx>, variant: HermitianVariant) -> AutResult<Vec<(Felt, Felt)>> {
    let (solver, t) = b_solver(ctx, variant)?;
    let q = ctx.q() as u128;
    let mut out = Vec::new();
    for a in ctx.subfield_elements(2 * ctx.h())? {
        let rhs = ctx.neg(ctx.mul(t, ctx.pow(a, q + 1)));
        out.extend(solver.solve(ctx, rhs).into_iter().map(|b| (a, b)));
    }
    Ok(out)
}

fn first_b(ctx: &Arc<FieldCtx>, variant: HermitianVariant, a: Felt) -> AutResult<Felt> {
    let (solver, t) = b_solver(ctx, variant)?;
    let rhs = ctx.neg(ctx.mul(t, ctx.pow(a, ctx.q() as u128 + 1)));
    solver.solve(ctx, rhs).first().copied().ok_or(AutError::NoLift(ctx.encode(a)))
}

fn sylow_generators(ctx: &Arc<FieldCtx>, variant: HermitianVariant) -> AutResult<Vec<AffineAlgMap>> {
    let mut gens = Vec::new();
    for &a in ctx.subfield_basis(2 * ctx.h())? {
        gens.push(psi(ctx, variant, a, first_b(ctx, variant, a)?, Felt::ONE));
    }
    let (solver, _) = b_solver(ctx, variant)?;
    for z in solver.kernel(ctx) {
        if !z.is_zero() {
            gens.push(psi(ctx, variant, Felt::ZERO, z, Felt::ONE));
        }
    }
    Ok(gens)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PguReport {
    pub q: u64,
    pub variant: HermitianVariant,
    pub order: usize,
    /// `q^3 (q + 1)`.
    pub expected_order: u64,
    /// The order `q^3 (q - 1)` as stated for this subgroup.
    pub stated_order: u64,
    pub sylow_order: usize,
    pub sylow_parameter_count: usize,
    pub center_order: usize,
    /// The center consists of the maps `ψ_{0,b,1}`.
    pub center_is_y_translations: bool,
    /// Element orders found in `S_p \ Z(S_p)`.
    pub noncentral_orders: BTreeSet<u64>,
    pub all_preserve: bool,
}

pub struct PguStabilizer {
    pub group: AutGroupTable,
    pub sylow: AutGroupTable,
    pub report: PguReport,
}

/// The maps `ψ_{a,b,λ}` with `λ^{q+1} = 1` on the chosen Hermitian model.
pub fn pgu_stabilizer(ctx: &Arc<FieldCtx>, variant: HermitianVariant) -> AutResult<PguStabilizer> {
    let q = ctx.q();
    let expected_order = q.pow(3) * (q + 1);
    if expected_order > DEFAULT_CLOSURE_BOUND as u64 {
        return Err(AutError::BoundExceeded(DEFAULT_CLOSURE_BOUND));
    }
    let model = hermitian_model(ctx, variant);
    let sylow_gens = sylow_generators(ctx, variant)?;
    let sylow = AutGroupTable::closure(ctx, &sylow_gens)?;
    let g = ctx.primitive_element(2 * ctx.h())?;
    let lambda0 = ctx.pow(g, q as u128 - 1);
    let mut gens = sylow_gens.clone();
    gens.push(psi(ctx, variant, Felt::ZERO, Felt::ZERO, lambda0));
    let group = AutGroupTable::closure(ctx, &gens)?;

    let mut all_preserve = true;
    for m in group.elements() {
        if !map_preserves(&model, m)? {
            all_preserve = false;
            break;
        }
    }
    let center = sylow.center();
    let center_is_y_translations = center.iter().all(|&i| {
        let m = sylow.element(i);
        m.x_image == BiPoly::x(ctx) && m.y_image.deg_x().unwrap_or(0) == 0
    });
    let center_set: BTreeSet<usize> = center.iter().copied().collect();
    let noncentral_orders = (0..sylow.order())
        .filter(|i| !center_set.contains(i))
        .map(|i| sylow.element_order(i))
        .collect();
    let report = PguReport {
        q,
        variant,
        order: group.order(),
        expected_order,
        stated_order: q.pow(3) * (q - 1),
        sylow_order: sylow.order(),
        sylow_parameter_count: sylow_parameters(ctx, variant)?.len(),
        center_order: center.len(),
        center_is_y_translations,
        noncentral_orders,
        all_preserve,
    };
    Ok(PguStabilizer { group, sylow, report })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupTypeReport {
    pub name: &'static str,
    pub generators: Vec<String>,
    pub order: usize,
    pub abelian: bool,
    pub exponent: u64,
    pub elementary_abelian: bool,
    pub cyclic: bool,
    /// Contained in the center of the Sylow p-subgroup.
    pub central: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupTypes {
    pub u_b: Option<SubgroupTypeReport>,
    pub v_c: Option<SubgroupTypeReport>,
    pub cyclic4: Option<SubgroupTypeReport>,
}

fn type_report(ctx: &Arc<FieldCtx>, name: &'static str, gens: Vec<AffineAlgMap>) -> AutResult<SubgroupTypeReport> {
    let g = AutGroupTable::closure(ctx, &gens)?;
    let exponent = g.exponent();
    let p = ctx.p() as u64;
    let central = g.elements().iter().all(|m| m.x_image == BiPoly::x(ctx));
    Ok(SubgroupTypeReport {
        name,
        generators: gens.iter().map(|m| m.to_text()).collect(),
        order: g.order(),
        abelian: g.is_abelian(),
        exponent,
        elementary_abelian: g.is_abelian() && exponent == p,
        cyclic: exponent == g.order() as u64,
        central,
    })
}

/// Representatives of the order-p^2 subgroup types of `S_p` on
/// `y^q + y - x^{q+1}`.
pub fn subgroup_types(ctx: &Arc<FieldCtx>) -> AutResult<SubgroupTypes> {
    let v = HermitianVariant::Plus;
    let q = ctx.q() as u128;
    let h = ctx.h();
    let one = Felt::ONE;
    let u_b = match ctx.subfield_elements(h)?.into_iter().find(|&b| !ctx.in_subfield(b, 1)) {
        Some(b) => Some(type_report(ctx, "U_b", vec![psi(ctx, v, Felt::ZERO, one, one), psi(ctx, v, Felt::ZERO, b, one)])?),
        None => None,
    };
    let els = ctx.subfield_elements(2 * h)?;
    let v_c = if ctx.p() != 2 {
        let c = els
            .iter()
            .copied()
            .find(|&c| !c.is_zero() && ctx.add(ctx.pow(c, q), c).is_zero())
            .ok_or(AutError::Precondition("c^q + c = 0 has a nonzero root"))?;
        let half = ctx.inv(ctx.from_int(2))?;
        Some(type_report(ctx, "V_c", vec![psi(ctx, v, one, half, one), psi(ctx, v, Felt::ZERO, c, one)])?)
    } else {
        None
    };
    let cyclic4 = if ctx.p() == 2 {
        let c = els
            .iter()
            .copied()
            .find(|&c| ctx.add(ctx.add(ctx.pow(c, q), c), one).is_zero())
            .ok_or(AutError::Precondition("c^q + c + 1 = 0 has a root"))?;
        Some(type_report(ctx, "cyclic4", vec![psi(ctx, v, one, c, one)])?)
    } else {
        None
    };
    Ok(SubgroupTypes { u_b, v_c, cyclic4 })
}
