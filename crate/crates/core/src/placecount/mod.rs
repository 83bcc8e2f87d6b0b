//! Counting degree-one places by enumerating affine points over F_{q^{2k}}.
//!
//! Every model here has exactly one place at infinity; that is a convention
//! attached to the models, not something computed.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::autgrp::AffineAlgMap;
use crate::gfield::{FieldCtx, FieldError, Felt, LinearizedSolver};
use crate::models::{fpp_char2, genus_formula, CurveModel, Family, ModelError};
use crate::polyring::{BiPoly, PolyError, Var};

/// Largest enumeration domain `q^{2k}`.
pub const MAX_POINT_DOMAIN: u128 = 1 << 24;

pub const PLACES_AT_INFINITY: u64 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlaceError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("the zero polynomial does not define a curve")]
    ZeroModel,
    #[error("extension index k = {0} is not supported (need k in {{1, 2}})")]
    BadExtension(u32),
    #[error("enumeration domain of size {0} exceeds the bound")]
    SizeBound(u128),
    #[error("model has {0} singular affine rational points; use the quotient path")]
    Singular(usize),
    #[error("deck map does not have order 2")]
    NotOrderTwo,
    #[error("deck map does not preserve the model")]
    NotAutomorphism,
}

pub type PlaceResult<T> = Result<T, PlaceError>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaceTally {
    pub affine_points: u64,
    /// Encoded `(x, y)` pairs.
    pub singular_rational_points: Vec<(u128, u128)>,
    pub places_at_infinity: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub k: u32,
}

/// A column of `F` collected by Y-exponent: `Σ c X^e`.
type Column = Vec<(u32, Felt)>;

fn eval_column(ctx: &FieldCtx, col: &Column, x: Felt) -> Felt {
    col.iter().fold(Felt::ZERO, |acc, &(e, c)| ctx.add(acc, ctx.mul(c, ctx.pow(x, e as u128))))
}

enum Plan {
    /// `F(x, Y) = Σ_i a_i(x) Y^{p^i} + a(x)`; solved by linear algebra.
    Additive { slots: Vec<Column>, constant: Column, fixed: Option<LinearizedSolver> },
    Exhaustive { columns: Vec<(u32, Column)>, domain: Vec<Felt> },
}

/// Solves `F(x, Y) = 0` over a fixed subfield for many `x`.
pub struct FiberSolver {
    ctx: Arc<FieldCtx>,
    domain_degree: u32,
    plan: Plan,
}

fn p_power_index(p: u32, mut j: u32) -> Option<usize> {
    let mut i = 0;
    while j > 1 {
        if !j.is_multiple_of(p) {
            return None;
        }
        j /= p;
        i += 1;
    }
    (j == 1).then_some(i)
}

impl FiberSolver {
    /// `domain_degree` is `m` in F_{p^m}.
    pub fn new(f: &BiPoly, domain_degree: u32) -> PlaceResult<Self> {
        if f.is_zero() {
            return Err(PlaceError::ZeroModel);
        }
        let ctx = f.ctx().clone();
        ctx.subfield_basis(domain_degree)?;
        let mut columns: std::collections::BTreeMap<u32, Column> = Default::default();
        for (e, c) in f.terms() {
            columns.entry(e.y).or_default().push((e.x, c));
        }
        let additive = columns.keys().all(|&j| j == 0 || p_power_index(ctx.p(), j).is_some())
            && columns.keys().any(|&j| j > 0);
        let plan = if additive {
            let top = columns.keys().filter_map(|&j| p_power_index(ctx.p(), j)).max().unwrap_or(0);
            let mut slots = vec![Column::new(); top + 1];
            let mut constant = Column::new();
            for (j, col) in columns {
                match j {
                    0 => constant = col,
                    _ => slots[p_power_index(ctx.p(), j).expect("checked")] = col,
                }
            }
            let fixed = if slots.iter().all(|s| s.iter().all(|&(e, _)| e == 0)) {
                let coeffs: Vec<Felt> = slots.iter().map(|s| eval_column(&ctx, s, Felt::ZERO)).collect();
                Some(LinearizedSolver::new(&ctx, &coeffs, domain_degree)?)
            } else {
                None
            };
            Plan::Additive { slots, constant, fixed }
        } else {
            let size = (ctx.p() as u128).pow(domain_degree);
            if size > MAX_POINT_DOMAIN {
                return Err(PlaceError::SizeBound(size));
            }
            Plan::Exhaustive { columns: columns.into_iter().collect(), domain: ctx.subfield_elements(domain_degree)? }
        };
        Ok(FiberSolver { ctx, domain_degree, plan })
    }

    fn with_solver<R>(&self, x: Felt, f: impl FnOnce(&LinearizedSolver, Felt) -> R) -> Option<R> {
        let ctx = &self.ctx;
        let Plan::Additive { slots, constant, fixed } = &self.plan else {
            return None;
        };
        let rhs = ctx.neg(eval_column(ctx, constant, x));
        match fixed {
            Some(s) => Some(f(s, rhs)),
            None => {
                let coeffs: Vec<Felt> = slots.iter().map(|s| eval_column(ctx, s, x)).collect();
                if coeffs.iter().all(|c| c.is_zero()) {
                    // F(x, Y) is constant in Y
                    let s = LinearizedSolver::new(ctx, &[Felt::ZERO], self.domain_degree).expect("valid domain");
                    return Some(f(&s, rhs));
                }
                let s = LinearizedSolver::new(ctx, &coeffs, self.domain_degree).expect("valid domain");
                Some(f(&s, rhs))
            }
        }
    }

    fn exhaustive(&self, x: Felt) -> Vec<Felt> {
        let ctx = &self.ctx;
        let Plan::Exhaustive { columns, domain } = &self.plan else {
            return Vec::new();
        };
        let coeffs: Vec<(u32, Felt)> = columns.iter().map(|(j, col)| (*j, eval_column(ctx, col, x))).collect();
        domain
            .iter()
            .copied()
            .filter(|&y| {
                coeffs
                    .iter()
                    .fold(Felt::ZERO, |acc, &(j, c)| ctx.add(acc, ctx.mul(c, ctx.pow(y, j as u128))))
                    .is_zero()
            })
            .collect()
    }

    pub fn count(&self, x: Felt) -> u128 {
        let ctx = self.ctx.clone();
        self.with_solver(x, |s, rhs| s.count(&ctx, rhs)).unwrap_or_else(|| self.exhaustive(x).len() as u128)
    }

    pub fn roots(&self, x: Felt) -> Vec<Felt> {
        let ctx = self.ctx.clone();
        self.with_solver(x, |s, rhs| s.solve(&ctx, rhs)).unwrap_or_else(|| self.exhaustive(x))
    }

    pub fn is_additive(&self) -> bool {
        matches!(self.plan, Plan::Additive { .. })
    }
}

fn domain_degree(ctx: &FieldCtx, k: u32) -> PlaceResult<u32> {
    if k == 0 || k > 2 {
        return Err(PlaceError::BadExtension(k));
    }
    let m = 2 * ctx.h() * k;
    let size = (ctx.p() as u128).pow(m);
    if size > MAX_POINT_DOMAIN {
        return Err(PlaceError::SizeBound(size));
    }
    Ok(m)
}

/// All affine points of `f = 0` over F_{q^{2k}}, sorted by `x`.
pub fn affine_point_list(f: &BiPoly, k: u32) -> PlaceResult<Vec<(Felt, Felt)>> {
    let ctx = f.ctx().clone();
    let m = domain_degree(&ctx, k)?;
    let solver = FiberSolver::new(f, m)?;
    let mut out = Vec::new();
    for x in ctx.subfield_elements(m)? {
        out.extend(solver.roots(x).into_iter().map(|y| (x, y)));
    }
    Ok(out)
}

pub fn count_affine(f: &BiPoly, k: u32) -> PlaceResult<u64> {
    let ctx = f.ctx().clone();
    let m = domain_degree(&ctx, k)?;
    let solver = FiberSolver::new(f, m)?;
    Ok(ctx.subfield_elements(m)?.into_iter().map(|x| solver.count(x) as u64).sum())
}

fn singular_points_of(f: &BiPoly, k: u32) -> PlaceResult<Vec<(Felt, Felt)>> {
    let fy = f.partial(Var::Y);
    if !fy.is_zero() && fy.is_constant() {
        return Ok(Vec::new());
    }
    let fx = f.partial(Var::X);
    Ok(affine_point_list(f, k)?
        .into_iter()
        .filter(|&(x, y)| fx.eval(x, y).is_zero() && fy.eval(x, y).is_zero())
        .collect())
}

fn encode_points(ctx: &FieldCtx, pts: &[(Felt, Felt)]) -> Vec<(u128, u128)> {
    pts.iter().map(|&(x, y)| (ctx.encode(x), ctx.encode(y))).collect()
}

/// Affine point count over F_{q^{2k}} plus the singular points found.
pub fn affine_points(model: &CurveModel, k: u32) -> PlaceResult<PlaceTally> {
    let affine = count_affine(&model.poly, k)?;
    let singular = singular_points_of(&model.poly, k)?;
    Ok(PlaceTally {
        affine_points: affine,
        singular_rational_points: encode_points(model.ctx(), &singular),
        places_at_infinity: PLACES_AT_INFINITY,
        n: affine + PLACES_AT_INFINITY,
        k,
    })
}

pub fn singular_rational_points(model: &CurveModel, k: u32) -> PlaceResult<Vec<(Felt, Felt)>> {
    singular_points_of(&model.poly, k)
}

/// Degree-one places over F_{q^{2k}} of an affine-smooth model.
pub fn places_over(model: &CurveModel, k: u32) -> PlaceResult<PlaceTally> {
    let tally = affine_points(model, k)?;
    if !tally.singular_rational_points.is_empty() {
        return Err(PlaceError::Singular(tally.singular_rational_points.len()));
    }
    Ok(tally)
}

/// F_{q^2}-rational places.
pub fn rational_places(model: &CurveModel) -> PlaceResult<PlaceTally> {
    places_over(model, 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalityReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub genus: u64,
    /// `q^2 + 2gq + 1`.
    pub hasse_weil: u64,
    pub maximal: bool,
}

pub fn maximality_from_count(q: u64, n: u64, genus: u64) -> MaximalityReport {
    let hasse_weil = q * q + 2 * genus * q + 1;
    MaximalityReport { n, genus, hasse_weil, maximal: n == hasse_weil }
}

pub fn maximality_check(model: &CurveModel) -> PlaceResult<MaximalityReport> {
    let n = rational_places(model)?.n;
    Ok(maximality_from_count(model.q(), n, model.claimed_genus))
}

/// Genus implied by maximality, `(N - q^2 - 1) / (2q)`, when integral.
pub fn genus_from_count(q: u64, n: u64) -> Option<u64> {
    let excess = n.checked_sub(q * q + 1)?;
    (excess % (2 * q) == 0).then_some(excess / (2 * q))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientCount {
    /// Affine rational points `A`.
    pub affine: u64,
    /// Affine rational points fixed by the deck map `f`.
    pub fixed: u64,
    /// Affine non-rational points over F_{q^4} with `Frob(Q) = deck(Q)`.
    pub twisted: u64,
    #[serde(rename = "N")]
    pub n: u64,
}

fn frob_point(ctx: &FieldCtx, (x, y): (Felt, Felt), m: u32) -> (Felt, Felt) {
    (ctx.frobenius(x, m), ctx.frobenius(y, m))
}

/// Rational places of the quotient of an affine-smooth model by an
/// order-2 deck map fixing the place at infinity:
/// `f + (A - f)/2 + I/2 + 1`.
pub fn quotient_places_order2(model: &CurveModel, deck: &AffineAlgMap) -> PlaceResult<QuotientCount> {
    if deck.is_identity() || !deck.then(deck)?.is_identity() {
        return Err(PlaceError::NotOrderTwo);
    }
    if !deck.preserves(&model.poly)? {
        return Err(PlaceError::NotAutomorphism);
    }
    let ctx = model.ctx().clone();
    let singular = singular_points_of(&model.poly, 1)?;
    if !singular.is_empty() {
        return Err(PlaceError::Singular(singular.len()));
    }
    let m = 2 * ctx.h();
    let rational = affine_point_list(&model.poly, 1)?;
    let fixed = rational.iter().filter(|&&(x, y)| deck.apply(x, y) == (x, y)).count() as u64;
    let affine = rational.len() as u64;
    let twisted = affine_point_list(&model.poly, 2)?
        .into_iter()
        .filter(|&(x, y)| !(ctx.in_subfield(x, m) && ctx.in_subfield(y, m)))
        .filter(|&pt| frob_point(&ctx, pt, m) == deck.apply(pt.0, pt.1))
        .count() as u64;
    debug_assert!((affine - fixed).is_multiple_of(2) && twisted.is_multiple_of(2));
    Ok(QuotientCount {
        affine,
        fixed,
        twisted,
        n: fixed + (affine - fixed) / 2 + twisted / 2 + PLACES_AT_INFINITY,
    })
}

/// The order-2 map `(x, η) ↦ (x + 1, η + x^2 + x + b^2 + b)` on the
/// p = 2 order-p quotient.
pub fn family_iii_deck(ctx: &Arc<FieldCtx>, b: Felt) -> AffineAlgMap {
    let x = BiPoly::x(ctx);
    let c = ctx.add(b, ctx.square(b));
    AffineAlgMap {
        x_image: &x + &BiPoly::one(ctx),
        y_image: &(&(&BiPoly::y(ctx) + &x.pow(2)) + &x) + &BiPoly::constant(ctx, c),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyIIICount {
    pub quotient: QuotientCount,
    /// `q^2 (q + 2) / 4 + 1`.
    pub expected: u64,
    pub genus: u64,
    pub maximality: MaximalityReport,
    pub matches_expected: bool,
}

/// Rational places of the family III curve, counted on its smooth degree-2
/// cover.
pub fn family_iii_place_count(ctx: &Arc<FieldCtx>, b: Felt) -> PlaceResult<FamilyIIICount> {
    crate::models::family_iii_coeffs(ctx, b)?;
    let cover = fpp_char2(ctx)?;
    let deck = family_iii_deck(ctx, b);
    let quotient = quotient_places_order2(&cover, &deck)?;
    let q = ctx.q();
    let expected = q * q * (q + 2) / 4 + 1;
    let genus = genus_formula(Family::FamilyIII, 2, ctx.h())?;
    let maximality = maximality_from_count(q, quotient.n, genus);
    Ok(FamilyIIICount { matches_expected: quotient.n == expected, quotient, expected, genus, maximality })
}

#[cfg(test)]
mod tests;
