//! F_{q^2}-isomorphism between members of families I and II.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::autgrp::AffineAlgMap;
use crate::gfield::{FieldCtx, FieldError, Felt};
use crate::models::{family_i_model, family_i_parameters, family_ii_model, family_ii_parameters, CurveModel, Family, ModelError};
use crate::polyring::{BiPoly, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsoError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("parameter space of size {0} exceeds the bound")]
    SizeBound(u64),
    #[error("{0} is not supported here")]
    Unsupported(&'static str),
}

pub type IsoResult<T> = Result<T, IsoError>;

const INVENTORY_BOUND: u64 = 1 << 12;
const TIER_TWO_BOUND: u64 = 9;

/// `ξ ↦ σξ̄, ρ ↦ cρ̄` carrying the `b`-model onto `δ` times the `b̄`-model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsoWitness {
    pub c: Felt,
    pub delta: Felt,
    pub sigma: Felt,
    pub b: Felt,
    pub b_bar: Felt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub c: u128,
    pub delta: u128,
    pub sigma: u128,
    pub b: u128,
    pub b_bar: u128,
}

impl IsoWitness {
    pub fn report(&self, ctx: &FieldCtx) -> WitnessReport {
        WitnessReport {
            c: ctx.encode(self.c),
            delta: ctx.encode(self.delta),
            sigma: ctx.encode(self.sigma),
            b: ctx.encode(self.b),
            b_bar: ctx.encode(self.b_bar),
        }
    }

    pub fn map(&self, ctx: &Arc<FieldCtx>) -> AffineAlgMap {
        AffineAlgMap::scaling(ctx, self.sigma, self.c)
    }
}

/// Whether `map` pulls `a` back to a nonzero scalar multiple of `b`.
pub fn carries_onto(map: &AffineAlgMap, a: &BiPoly, b: &BiPoly) -> IsoResult<Option<Felt>> {
    let pulled = map.pullback(a)?;
    let Some((e, c)) = b.terms().next_back() else {
        return Ok(None);
    };
    let ctx = b.ctx();
    let s = ctx.div(pulled.coeff(e.x, e.y), c)?;
    Ok((!s.is_zero() && pulled == b.scale(s)).then_some(s))
}

/// Some `σ ∈ F_{q^2}` with `σ^{q+1} = δ`, for `δ ∈ F_q^*`.
fn norm_preimage(ctx: &FieldCtx, delta: Felt) -> IsoResult<Felt> {
    let g = ctx.primitive_element(2 * ctx.h())?;
    let q = ctx.q() as u128;
    let n = ctx.pow(g, q + 1);
    let mut acc = Felt::ONE;
    let mut sigma = Felt::ONE;
    for _ in 0..q - 1 {
        if acc == delta {
            return Ok(sigma);
        }
        acc = ctx.mul(acc, n);
        sigma = ctx.mul(sigma, g);
    }
    Err(IsoError::Unsupported("δ outside F_q^*"))
}

fn check_family_i_pair(ctx: &FieldCtx, b: Felt, b_bar: Felt) -> IsoResult<()> {
    for x in [b, b_bar] {
        if !ctx.in_subfield(x, ctx.h()) || ctx.in_subfield(x, 1) || ctx.h() < 2 {
            return Err(ModelError::Precondition { family: Family::FamilyI, requirement: "b in F_q \\ F_p" }.into());
        }
    }
    Ok(())
}

/// Searches `c ∈ F_q^*` with `δ` fixed by the `i = 1` condition and checks
/// `δ(b̄ - b̄^{p^i}) = c^{p^{i-1}}(b - b^{p^i})` for all `i`.
pub fn family_i_iso(ctx: &Arc<FieldCtx>, b: Felt, b_bar: Felt) -> IsoResult<Option<IsoWitness>> {
    check_family_i_pair(ctx, b, b_bar)?;
    let h = ctx.h();
    let diff = |x: Felt, i: u32| ctx.sub(x, ctx.frobenius(x, i));
    let ratio = ctx.div(diff(b, 1), diff(b_bar, 1))?;
    for c in ctx.subfield_elements(h)? {
        if c.is_zero() {
            continue;
        }
        let delta = ctx.mul(c, ratio);
        let ok = (1..h).all(|i| ctx.mul(delta, diff(b_bar, i)) == ctx.mul(ctx.frobenius(c, i - 1), diff(b, i)));
        if ok {
            let sigma = norm_preimage(ctx, delta)?;
            let w = IsoWitness { c, delta, sigma, b, b_bar };
            let a = family_i_model(ctx, b)?.poly;
            let target = family_i_model(ctx, b_bar)?.poly;
            if carries_onto(&w.map(ctx), &a, &target)? == Some(delta) {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IsoCase {
    /// Both parameters in F_{p^2}.
    #[serde(rename = "Id1_Fp2")]
    Id1Fp2,
    /// Both parameters in F_{p^3}.
    #[serde(rename = "Id1_Fp3")]
    Id1Fp3,
    /// Related by a fractional-linear map over F_p.
    #[serde(rename = "Id2")]
    Id2,
    #[serde(rename = "Ie")]
    NotIso,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub iso: bool,
    pub case: IsoCase,
    /// `(α, β, γ, δ)` for case `Id2`.
    pub mobius: Option<[u32; 4]>,
}

/// Decides isomorphism for family I by the closed-form case split.
pub fn family_i_classify(ctx: &Arc<FieldCtx>, b: Felt, b_bar: Felt) -> IsoResult<Classification> {
    check_family_i_pair(ctx, b, b_bar)?;
    let in2 = |x: Felt| ctx.in_subfield(x, 2);
    let in3 = |x: Felt| ctx.in_subfield(x, 3);
    let done = |case, mobius| Ok(Classification { iso: case != IsoCase::NotIso, case, mobius });
    if in2(b) && in2(b_bar) {
        return done(IsoCase::Id1Fp2, None);
    }
    if in3(b) && in3(b_bar) {
        return done(IsoCase::Id1Fp3, None);
    }
    if in2(b) || in3(b) || in2(b_bar) || in3(b_bar) {
        return done(IsoCase::NotIso, None);
    }
    let p = ctx.p();
    for al in 0..p {
        for be in 0..p {
            for ga in 0..p {
                for de in 0..p {
                    if (al * de + p * p - be * ga).is_multiple_of(p) {
                        continue;
                    }
                    let k = |v: u32| ctx.from_int(v as i64);
                    let num = ctx.add(ctx.mul(k(al), b), k(be));
                    let den = ctx.add(ctx.mul(k(ga), b), k(de));
                    if !den.is_zero() && ctx.div(num, den)? == b_bar {
                        return done(IsoCase::Id2, Some([al, be, ga, de]));
                    }
                }
            }
        }
    }
    done(IsoCase::NotIso, None)
}

/// The explicit witness `c = b^{-p}`, `δ = -b` for `b̄ = 1/b`.
pub fn inverse_witness_holds(ctx: &Arc<FieldCtx>, b: Felt) -> IsoResult<bool> {
    let b_bar = ctx.inv(b)?;
    check_family_i_pair(ctx, b, b_bar)?;
    let c = ctx.inv(ctx.frobenius(b, 1))?;
    let delta = ctx.neg(b);
    let diff = |x: Felt, i: u32| ctx.sub(x, ctx.frobenius(x, i));
    Ok((1..ctx.h()).all(|i| ctx.mul(delta, diff(b_bar, i)) == ctx.mul(ctx.frobenius(c, i - 1), diff(b, i))))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyIIWitness {
    pub kappa: u32,
    /// `ξ ↦ ξ̄, ρ ↦ κρ̄` verified by substitution.
    pub verified: bool,
}

/// `b̄ = κ b` with `κ ∈ F_p^*`.
pub fn family_ii_iso(ctx: &Arc<FieldCtx>, b: Felt, b_bar: Felt) -> IsoResult<Option<FamilyIIWitness>> {
    let a = family_ii_model(ctx, b)?.poly;
    let target = family_ii_model(ctx, b_bar)?.poly;
    let ratio = ctx.div(b_bar, b)?;
    if !ctx.in_subfield(ratio, 1) {
        return Ok(None);
    }
    let kappa = ctx.coeffs(ratio)[0];
    let map = AffineAlgMap::scaling(ctx, Felt::ONE, ratio);
    let verified = carries_onto(&map, &a, &target)?.is_some();
    Ok(Some(FamilyIIWitness { kappa, verified }))
}

/// `L(Y) + f(X)` split into the `Y`-part and the `X`-part.
fn additive_parts(f: &BiPoly) -> Option<(BiPoly, BiPoly)> {
    let ctx = f.ctx();
    let mut ly = Vec::new();
    let mut fx = Vec::new();
    for (e, c) in f.terms() {
        match (e.x, e.y) {
            (i, 0) => fx.push((i, 0, c)),
            (0, j) => ly.push((0, j, c)),
            _ => return None,
        }
    }
    let p = ctx.p();
    let additive = ly.iter().all(|&(_, j, _)| {
        let mut n = j;
        while n % p == 0 {
            n /= p;
        }
        n == 1
    });
    additive.then(|| (BiPoly::from_terms(ctx, ly), BiPoly::from_terms(ctx, fx)))
}

/// `Σ c_{ij} X^i Y^j ↦ Σ c_{ij} s^i t^j X^i Y^j`.
fn scale_vars(f: &BiPoly, s: Felt, t: Felt) -> BiPoly {
    let ctx = f.ctx();
    BiPoly::from_terms(
        ctx,
        f.terms().map(|(e, c)| (e.x, e.y, ctx.mul(c, ctx.mul(ctx.pow(s, e.x as u128), ctx.pow(t, e.y as u128))))),
    )
}

fn y_only(f: &BiPoly) -> BiPoly {
    BiPoly::from_terms(f.ctx(), f.terms().filter(|(e, _)| e.x == 0).map(|(e, c)| (0, e.y, c)))
}

fn ratio_to(a: &BiPoly, b: &BiPoly) -> Option<Felt> {
    let (e, c) = b.terms().next_back()?;
    let ctx = b.ctx();
    let s = ctx.div(a.coeff(e.x, e.y), c).ok()?;
    (!s.is_zero() && *a == b.scale(s)).then_some(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub iso: bool,
    pub tier: u8,
    pub maps_tested: u64,
    pub witness: Option<String>,
}

/// Exhaustive search for an isomorphism in a fixed family of plane maps:
/// tier 1 `ξ ↦ σξ̄, ρ ↦ cρ̄`; tier 2 adds `ρ ↦ cρ̄ + c_1ξ̄ + c_2`.
pub fn oracle_iso(a: &CurveModel, b: &CurveModel, tier: u8) -> IsoResult<OracleResult> {
    let ctx = a.ctx().clone();
    let units: Vec<Felt> = ctx.subfield_elements(2 * ctx.h())?.into_iter().filter(|x| !x.is_zero()).collect();
    let (fa, fb) = (&a.poly, &b.poly);
    let mut tested = 0;
    match tier {
        1 => {
            // terms free of X do not see σ, so a mismatch there rules out every σ at once
            let (ya, yb) = (y_only(fa), y_only(fb));
            for &t in &units {
                if !yb.is_zero() && ratio_to(&scale_vars(&ya, Felt::ONE, t), &yb).is_none() {
                    tested += units.len() as u64;
                    continue;
                }
                for &s in &units {
                    tested += 1;
                    if ratio_to(&scale_vars(fa, s, t), fb).is_some() {
                        let m = AffineAlgMap::scaling(&ctx, s, t);
                        return Ok(OracleResult { iso: true, tier, maps_tested: tested, witness: Some(m.to_text()) });
                    }
                }
            }
        }
        2 => {
            if ctx.q() > TIER_TWO_BOUND {
                return Err(IsoError::SizeBound(ctx.q()));
            }
            let ((la, xa), (lb, xb)) = match (additive_parts(fa), additive_parts(fb)) {
                (Some(pa), Some(pb)) => (pa, pb),
                _ => return Err(IsoError::Unsupported("tier 2 on models not additive in Y")),
            };
            let mut all = units.clone();
            all.push(Felt::ZERO);
            let x = BiPoly::x(&ctx);
            let y = BiPoly::y(&ctx);
            for &s in &units {
                let xs = scale_vars(&xa, s, Felt::ONE);
                for &t in &units {
                    // L(tY + c_1 X + c_2) = L(tY) + L(c_1 X) + L(c_2)
                    let Some(k) = ratio_to(&scale_vars(&la, Felt::ONE, t), &lb) else {
                        tested += (all.len() * all.len()) as u64;
                        continue;
                    };
                    let target = &xb.scale(k) - &xs;
                    for &c1 in &all {
                        let lin = la.substitute(&x, &x.scale(c1))?;
                        let rest = &target - &lin;
                        for &c2 in &all {
                            tested += 1;
                            let konst = la.substitute(&x, &BiPoly::constant(&ctx, c2))?;
                            if rest == konst {
                                let m = AffineAlgMap::new(
                                    x.scale(s),
                                    &(&y.scale(t) + &x.scale(c1)) + &BiPoly::constant(&ctx, c2),
                                )?;
                                debug_assert!(carries_onto(&m, fa, fb)?.is_some());
                                return Ok(OracleResult { iso: true, tier, maps_tested: tested, witness: Some(m.to_text()) });
                            }
                        }
                    }
                }
            }
        }
        _ => return Err(IsoError::Unsupported("tier other than 1 or 2")),
    }
    Ok(OracleResult { iso: false, tier, maps_tested: tested, witness: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InventoryReport {
    pub family: Family,
    pub p: u32,
    pub h: u32,
    pub parameters: usize,
    /// Classes as sorted encoded parameters, ordered by least member.
    pub classes: Vec<Vec<u128>>,
    pub class_sizes: Vec<usize>,
    /// Solver and case split agree on every pair (family I).
    pub classifier_agreement: Option<bool>,
    /// Tier-1 oracle agrees with the solver on every pair (small q).
    pub oracle_agreement: Option<bool>,
    pub equivalence_relation: bool,
}

const ORACLE_INVENTORY_Q: u64 = 32;

pub fn class_inventory(family: Family, ctx: &Arc<FieldCtx>) -> IsoResult<InventoryReport> {
    let params = match family {
        Family::FamilyI => family_i_parameters(ctx),
        Family::FamilyII => family_ii_parameters(ctx),
        _ => return Err(IsoError::Unsupported("inventory outside families I and II")),
    };
    if params.len() as u64 > INVENTORY_BOUND {
        return Err(IsoError::SizeBound(params.len() as u64));
    }
    let n = params.len();
    let mut matrix = vec![vec![false; n]; n];
    let mut classifier_ok = true;
    for i in 0..n {
        for j in 0..n {
            matrix[i][j] = match family {
                Family::FamilyI => {
                    let iso = family_i_iso(ctx, params[i], params[j])?.is_some();
                    classifier_ok &= family_i_classify(ctx, params[i], params[j])?.iso == iso;
                    iso
                }
                _ => family_ii_iso(ctx, params[i], params[j])?.is_some(),
            };
        }
    }
    let oracle_agreement = if ctx.q() <= ORACLE_INVENTORY_Q {
        let models: Vec<CurveModel> = params
            .iter()
            .map(|&b| match family {
                Family::FamilyI => family_i_model(ctx, b),
                _ => family_ii_model(ctx, b),
            })
            .collect::<Result<_, _>>()?;
        let mut ok = true;
        for i in 0..n {
            for j in 0..n {
                ok &= oracle_iso(&models[i], &models[j], 1)?.iso == matrix[i][j];
            }
        }
        Some(ok)
    } else {
        None
    };
    let reflexive = (0..n).all(|i| matrix[i][i]);
    let symmetric = (0..n).all(|i| (0..n).all(|j| matrix[i][j] == matrix[j][i]));
    let transitive =
        (0..n).all(|i| (0..n).all(|j| !matrix[i][j] || (0..n).all(|k| !matrix[j][k] || matrix[i][k])));
    let mut class_of: BTreeMap<usize, Vec<u128>> = BTreeMap::new();
    for j in 0..n {
        let rep = (0..n).find(|&i| matrix[i][j]).unwrap_or(j);
        class_of.entry(rep).or_default().push(ctx.encode(params[j]));
    }
    let mut classes: Vec<Vec<u128>> = class_of.into_values().collect();
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort();
    Ok(InventoryReport {
        family,
        p: ctx.p(),
        h: ctx.h(),
        parameters: n,
        class_sizes: classes.iter().map(|c| c.len()).collect(),
        classes,
        classifier_agreement: (family == Family::FamilyI).then_some(classifier_ok),
        oracle_agreement,
        equivalence_relation: reflexive && symmetric && transitive,
    })
}

#[cfg(test)]
mod tests;
