//! Plane models of the Hermitian curve, its order-p quotients and the three
//! order-p^2 families, with their claimed invariants.

mod lemmas;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::gfield::{FieldCtx, FieldError, Felt, LinearizedSolver};
use crate::polyring::{BiPoly, PolyError, VarNames};

pub use lemmas::{verify_lemma_a, verify_lemma_b, LemmaAReport, LemmaBReport, PrintedVariant};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("{family} requires {requirement}")]
    Precondition { family: Family, requirement: &'static str },
    #[error("recursion step for g_{step} is not an exact division")]
    InexactDivision { step: usize },
    #[error("terminal coefficient g_{index} differs from (X+c)^q")]
    TerminalMismatch { index: usize },
}

pub type ModelResult<T> = Result<T, ModelError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Hermitian,
    CenterP,
    NoncenterP,
    FppChar2,
    #[serde(rename = "family_I")]
    FamilyI,
    #[serde(rename = "family_II")]
    FamilyII,
    #[serde(rename = "family_III")]
    FamilyIII,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Hermitian => "Hermitian",
            Family::CenterP => "center_p",
            Family::NoncenterP => "noncenter_p",
            Family::FppChar2 => "Fpp_char2",
            Family::FamilyI => "family_I",
            Family::FamilyII => "family_II",
            Family::FamilyIII => "family_III",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hermitian" | "h" => Ok(Family::Hermitian),
            "center" | "center_p" => Ok(Family::CenterP),
            "noncenter" | "noncenter_p" => Ok(Family::NoncenterP),
            "fpp" | "fpp_char2" => Ok(Family::FppChar2),
            "i" | "1" | "family_i" => Ok(Family::FamilyI),
            "ii" | "2" | "family_ii" => Ok(Family::FamilyII),
            "iii" | "3" | "family_iii" => Ok(Family::FamilyIII),
            _ => Err(format!("unknown family {s:?}")),
        }
    }
}

/// Plane forms of the Hermitian curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HermitianVariant {
    /// `Y^q + Y - X^{q+1}`
    Plus,
    /// `Y^q - Y + ω X^{q+1}`
    MinusOmega,
    /// `Y^q + Y + X^{q+1}`
    PlusOne,
}

impl std::str::FromStr for HermitianVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plus" => Ok(HermitianVariant::Plus),
            "minus_omega" => Ok(HermitianVariant::MinusOmega),
            "plus_one" => Ok(HermitianVariant::PlusOne),
            _ => Err(format!("unknown Hermitian variant {s:?}")),
        }
    }
}

/// An affine plane model `F(X, Y) = 0` with its family data.
#[derive(Clone, Debug)]
pub struct CurveModel {
    pub family: Family,
    pub poly: BiPoly,
    pub b: Option<Felt>,
    pub omega: Felt,
    pub variant: Option<HermitianVariant>,
    pub claimed_genus: u64,
    pub claimed_semigroup_gens: Option<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelReport {
    pub family: Family,
    pub p: u32,
    pub h: u32,
    pub b: Option<u128>,
    pub variables: [String; 2],
    pub polynomial: String,
    pub claimed_genus: u64,
    pub claimed_semigroup_gens: Option<Vec<u64>>,
    pub rational: bool,
}

impl CurveModel {
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.poly.ctx()
    }

    pub fn q(&self) -> u64 {
        self.ctx().q()
    }

    /// Genus zero models are kept but flagged.
    pub fn is_rational(&self) -> bool {
        self.claimed_genus == 0
    }

    pub fn report(&self) -> ModelReport {
        let ctx = self.ctx();
        let names = self.poly.names();
        ModelReport {
            family: self.family,
            p: ctx.p(),
            h: ctx.h(),
            b: self.b.map(|b| ctx.encode(b)),
            variables: [names.0.to_string(), names.1.to_string()],
            polynomial: self.poly.to_text(),
            claimed_genus: self.claimed_genus,
            claimed_semigroup_gens: self.claimed_semigroup_gens.clone(),
            rational: self.is_rational(),
        }
    }
}

fn precondition(family: Family, requirement: &'static str) -> ModelError {
    ModelError::Precondition { family, requirement }
}

fn mono(ctx: &Arc<FieldCtx>, c: Felt, i: u64, j: u64) -> BiPoly {
    BiPoly::monomial(ctx, c, i as u32, j as u32)
}

/// `Σ_{i=0}^{k-1} V^{p^i}` in the variable `V` (X if `in_x`).
fn additive_sum(ctx: &Arc<FieldCtx>, k: u32, in_x: bool) -> BiPoly {
    let p = ctx.p() as u64;
    BiPoly::from_terms(
        ctx,
        (0..k).map(|i| {
            let e = p.pow(i) as u32;
            if in_x {
                (e, 0, Felt::ONE)
            } else {
                (0, e, Felt::ONE)
            }
        }),
    )
}

pub fn hermitian_model(ctx: &Arc<FieldCtx>, variant: HermitianVariant) -> CurveModel {
    let q = ctx.q();
    let omega = ctx.find_omega();
    let one = Felt::ONE;
    let minus_one = ctx.from_int(-1);
    let (ycoef, xcoef) = match variant {
        HermitianVariant::Plus => (one, minus_one),
        HermitianVariant::MinusOmega => (minus_one, omega),
        HermitianVariant::PlusOne => (one, one),
    };
    let poly = BiPoly::from_terms(ctx, [(0, q as u32, one), (0, 1, ycoef), (q as u32 + 1, 0, xcoef)])
        .with_names(VarNames("x", "y"));
    CurveModel {
        family: Family::Hermitian,
        poly,
        b: None,
        omega,
        variant: Some(variant),
        claimed_genus: genus_formula(Family::Hermitian, ctx.p(), ctx.h()).expect("always defined"),
        claimed_semigroup_gens: Some(vec![q, q + 1]),
    }
}

/// Quotient by an order-p subgroup of the center: `Σ_{i=1}^h η^{q/p^i} + ω ξ^{q+1}`.
pub fn subcover_center(ctx: &Arc<FieldCtx>) -> CurveModel {
    let q = ctx.q();
    let omega = ctx.find_omega();
    let poly = (&additive_sum(ctx, ctx.h(), false) + &mono(ctx, omega, q + 1, 0))
        .with_names(VarNames("ξ", "η"));
    CurveModel {
        family: Family::CenterP,
        poly,
        b: None,
        omega,
        variant: None,
        claimed_genus: genus_formula(Family::CenterP, ctx.p(), ctx.h()).expect("always defined"),
        claimed_semigroup_gens: None,
    }
}

/// Quotient by a non-central order-p subgroup (p odd):
/// `η^q + η - (Σ_{i=1}^h ξ^{q/p^i})^2`.
pub fn subcover_noncenter(ctx: &Arc<FieldCtx>) -> ModelResult<CurveModel> {
    if ctx.p() == 2 {
        return Err(precondition(Family::NoncenterP, "p > 2"));
    }
    let q = ctx.q();
    let s = additive_sum(ctx, ctx.h(), true);
    let poly = (&(&BiPoly::monomial(ctx, Felt::ONE, 0, q as u32) + &BiPoly::y(ctx)) - &s.pow(2))
        .with_names(VarNames("ξ", "η"));
    Ok(CurveModel {
        family: Family::NoncenterP,
        poly,
        b: None,
        omega: ctx.find_omega(),
        variant: None,
        claimed_genus: genus_formula(Family::NoncenterP, ctx.p(), ctx.h())?,
        claimed_semigroup_gens: None,
    })
}

/// Quotient of `y^q + y + x^{q+1}` by `ψ_{0,1,1}` (p = 2):
/// `x^{q+1} + Σ_{i=0}^{h-1} η^{2^i}`.
pub fn fpp_char2(ctx: &Arc<FieldCtx>) -> ModelResult<CurveModel> {
    if ctx.p() != 2 {
        return Err(precondition(Family::FppChar2, "p = 2"));
    }
    let q = ctx.q();
    let poly = (&mono(ctx, Felt::ONE, q + 1, 0) + &additive_sum(ctx, ctx.h(), false))
        .with_names(VarNames("x", "η"));
    Ok(CurveModel {
        family: Family::FppChar2,
        poly,
        b: None,
        omega: Felt::ONE,
        variant: None,
        claimed_genus: genus_formula(Family::FppChar2, 2, ctx.h())?,
        claimed_semigroup_gens: None,
    })
}

fn check_family_i(ctx: &FieldCtx, b: Felt) -> ModelResult<()> {
    if ctx.h() < 2 {
        return Err(precondition(Family::FamilyI, "h >= 2"));
    }
    if !ctx.in_subfield(b, ctx.h()) {
        return Err(precondition(Family::FamilyI, "b in F_q"));
    }
    if ctx.in_subfield(b, 1) {
        return Err(precondition(Family::FamilyI, "b not in F_p"));
    }
    Ok(())
}

/// `Σ_{i=1}^{h-1} (b - b^{p^i}) ρ^{p^{i-1}} + ω ξ^{q+1}`.
pub fn family_i_model(ctx: &Arc<FieldCtx>, b: Felt) -> ModelResult<CurveModel> {
    check_family_i(ctx, b)?;
    let (p, h, q) = (ctx.p() as u64, ctx.h(), ctx.q());
    let omega = ctx.find_omega();
    let mut poly = mono(ctx, omega, q + 1, 0);
    for i in 1..h {
        let c = ctx.sub(b, ctx.frobenius(b, i));
        poly = &poly + &mono(ctx, c, 0, p.pow(i - 1));
    }
    Ok(CurveModel {
        family: Family::FamilyI,
        poly: poly.with_names(VarNames("ξ", "ρ")),
        b: Some(b),
        omega,
        variant: None,
        claimed_genus: genus_formula(Family::FamilyI, ctx.p(), h)?,
        claimed_semigroup_gens: Some(vec![p.pow(h - 2), q + 1]),
    })
}

fn check_family_ii(ctx: &FieldCtx, b: Felt) -> ModelResult<()> {
    if ctx.p() == 2 {
        return Err(precondition(Family::FamilyII, "p > 2"));
    }
    if b.is_zero() {
        return Err(precondition(Family::FamilyII, "b != 0"));
    }
    if ctx.add(ctx.pow(b, ctx.q() as u128), b) != Felt::ZERO {
        return Err(precondition(Family::FamilyII, "b^q + b = 0"));
    }
    Ok(())
}

/// `(Σ_{i=1}^h ξ^{p^{i-1}})^2 - 2b Σ_{i=1}^h ρ^{p^{i-1}}`.
pub fn family_ii_model(ctx: &Arc<FieldCtx>, b: Felt) -> ModelResult<CurveModel> {
    check_family_ii(ctx, b)?;
    let (p, h, q) = (ctx.p() as u64, ctx.h(), ctx.q());
    let lhs = additive_sum(ctx, h, true).pow(2);
    let rhs = additive_sum(ctx, h, false).scale(ctx.scalar(2, b));
    Ok(CurveModel {
        family: Family::FamilyII,
        poly: (&lhs - &rhs).with_names(VarNames("ξ", "ρ")),
        b: Some(b),
        omega: ctx.find_omega(),
        variant: None,
        claimed_genus: genus_formula(Family::FamilyII, ctx.p(), h)?,
        claimed_semigroup_gens: Some(vec![q / p, q / p + q / (p * p), q + 1]),
    })
}

/// Coefficients of the family III model, `G = X^{q+1} + Σ g_i Y^{2^i}`.
#[derive(Clone, Debug)]
pub struct CoeffList {
    pub constant: BiPoly,
    pub g: Vec<BiPoly>,
}

/// Outcome of running the family III recursion without failing early.
#[derive(Clone, Debug)]
pub(crate) struct Recursion {
    pub g: Vec<BiPoly>,
    pub failed_step: Option<usize>,
    pub terminal_ok: bool,
    pub c: Felt,
}

fn check_family_iii(ctx: &FieldCtx, b: Felt) -> ModelResult<()> {
    if ctx.p() != 2 {
        return Err(precondition(Family::FamilyIII, "p = 2"));
    }
    if ctx.h() < 2 {
        return Err(precondition(Family::FamilyIII, "h >= 2"));
    }
    let lhs = ctx.add(ctx.add(ctx.pow(b, ctx.q() as u128), b), Felt::ONE);
    if !lhs.is_zero() {
        return Err(precondition(Family::FamilyIII, "b^q + b + 1 = 0"));
    }
    Ok(())
}

/// `X + X^2 + ... + X^{q/2}`.
pub(crate) fn trace_x(ctx: &Arc<FieldCtx>) -> BiPoly {
    additive_sum(ctx, ctx.h(), true)
}

pub(crate) fn run_recursion(ctx: &Arc<FieldCtx>, b: Felt) -> Recursion {
    let (h, q) = (ctx.h() as usize, ctx.q());
    let c = ctx.add(b, ctx.square(b));
    let x = BiPoly::x(ctx);
    let tr = trace_x(ctx);
    let s = &x + &x.pow(q);
    let cq = (&x + &BiPoly::constant(ctx, c)).pow(q);
    let c2q = cq.pow(2);
    let cqs = &cq * &s;
    let mut g = Vec::with_capacity(h);
    let first = &s.pow(2) + &cqs;
    match first.exact_div(&tr) {
        Ok(g0) => g.push(g0),
        Err(_) => return Recursion { g, failed_step: Some(0), terminal_ok: false, c },
    }
    for j in 1..h {
        let num = &(&g[j - 1].pow(2) + &c2q) + &cqs;
        match num.exact_div(&tr) {
            Ok(gj) => g.push(gj),
            Err(_) => return Recursion { g, failed_step: Some(j), terminal_ok: false, c },
        }
    }
    let terminal_ok = g[h - 1] == cq;
    Recursion { g, failed_step: None, terminal_ok, c }
}

pub fn family_iii_coeffs(ctx: &Arc<FieldCtx>, b: Felt) -> ModelResult<CoeffList> {
    check_family_iii(ctx, b)?;
    let rec = run_recursion(ctx, b);
    if let Some(step) = rec.failed_step {
        return Err(ModelError::InexactDivision { step });
    }
    if !rec.terminal_ok {
        return Err(ModelError::TerminalMismatch { index: ctx.h() as usize - 1 });
    }
    let q = ctx.q();
    Ok(CoeffList { constant: mono(ctx, Felt::ONE, q + 1, 0), g: rec.g })
}

impl CoeffList {
    /// `X^{q+1} + Σ g_i(X) Y^{2^i}`.
    pub fn assemble(&self) -> BiPoly {
        let mut acc = self.constant.clone();
        for (i, gi) in self.g.iter().enumerate() {
            acc = &acc + &gi.shift(0, 1 << i);
        }
        acc
    }
}

pub fn family_iii_model(ctx: &Arc<FieldCtx>, b: Felt) -> ModelResult<CurveModel> {
    let coeffs = family_iii_coeffs(ctx, b)?;
    Ok(CurveModel {
        family: Family::FamilyIII,
        poly: coeffs.assemble().with_names(VarNames("ξ", "κ")),
        b: Some(b),
        omega: Felt::ONE,
        variant: None,
        claimed_genus: genus_formula(Family::FamilyIII, 2, ctx.h())?,
        claimed_semigroup_gens: None,
    })
}

/// Builds the model for `family`; `b` is ignored by the parameter-free ones.
pub fn construct(ctx: &Arc<FieldCtx>, family: Family, b: Option<Felt>) -> ModelResult<CurveModel> {
    let need_b = || b.ok_or(precondition(family, "a parameter b"));
    match family {
        Family::Hermitian => Ok(hermitian_model(ctx, HermitianVariant::Plus)),
        Family::CenterP => Ok(subcover_center(ctx)),
        Family::NoncenterP => subcover_noncenter(ctx),
        Family::FppChar2 => fpp_char2(ctx),
        Family::FamilyI => family_i_model(ctx, need_b()?),
        Family::FamilyII => family_ii_model(ctx, need_b()?),
        Family::FamilyIII => family_iii_model(ctx, need_b()?),
    }
}

/// Genus claimed for each family at `q = p^h`.
pub fn genus_formula(family: Family, p: u32, h: u32) -> ModelResult<u64> {
    let p64 = p as u64;
    let q = p64.pow(h);
    match family {
        Family::Hermitian => Ok(q * (q - 1) / 2),
        Family::CenterP => Ok(q * (q / p64 - 1) / 2),
        Family::NoncenterP => {
            if p == 2 {
                return Err(precondition(family, "p > 2"));
            }
            Ok((q / p64) * (q - 1) / 2)
        }
        Family::FppChar2 => {
            if p != 2 {
                return Err(precondition(family, "p = 2"));
            }
            Ok(q * (q / 2 - 1) / 2)
        }
        Family::FamilyI => {
            if h < 2 {
                return Err(precondition(family, "h >= 2"));
            }
            Ok(q * (q / (p64 * p64) - 1) / 2)
        }
        Family::FamilyII => {
            if p == 2 {
                return Err(precondition(family, "p > 2"));
            }
            let r = q / p64;
            Ok(r * (r - 1) / 2)
        }
        Family::FamilyIII => {
            if p != 2 || h < 2 {
                return Err(precondition(family, "p = 2 and h >= 2"));
            }
            Ok(q * (q - 2) / 8)
        }
    }
}

/// The printed genus table for order-p^2 quotients, keyed by
/// `|H ∩ Z(S_p)|`: order `p` gives `½(q/p)(q/p-1)`, order `p^2` gives
/// `½(q/p^2)(q-1)`.
pub fn gsx_genus_table(p: u32, h: u32) -> [(u64, u64); 2] {
    let p = p as u64;
    let q = p.pow(h);
    [(p, (q / p) * (q / p).saturating_sub(1) / 2), (p * p, (q / (p * p)) * (q - 1) / 2)]
}

fn linearized_roots(ctx: &FieldCtx, coeffs: &[Felt], rhs: Felt, domain: u32) -> Vec<Felt> {
    LinearizedSolver::new(ctx, coeffs, domain)
        .expect("nonempty coefficients and valid domain")
        .solve(ctx, rhs)
}

fn hermitian_trace_coeffs(ctx: &FieldCtx) -> Vec<Felt> {
    let mut coeffs = vec![Felt::ZERO; ctx.h() as usize + 1];
    coeffs[0] = Felt::ONE;
    coeffs[ctx.h() as usize] = Felt::ONE;
    coeffs
}

/// Admissible `b` for family I: `F_q \ F_p`, sorted by encoding.
pub fn family_i_parameters(ctx: &FieldCtx) -> Vec<Felt> {
    if ctx.h() < 2 {
        return Vec::new();
    }
    ctx.subfield_elements(ctx.h())
        .expect("h divides 4h")
        .into_iter()
        .filter(|&b| !ctx.in_subfield(b, 1))
        .collect()
}

/// Admissible `b` for family II: nonzero roots of `b^q + b` in F_{q^2}.
pub fn family_ii_parameters(ctx: &FieldCtx) -> Vec<Felt> {
    if ctx.p() == 2 {
        return Vec::new();
    }
    linearized_roots(ctx, &hermitian_trace_coeffs(ctx), Felt::ZERO, 2 * ctx.h())
        .into_iter()
        .filter(|b| !b.is_zero())
        .collect()
}

/// Admissible `b` for family III: roots of `b^q + b + 1` in F_{q^2}.
pub fn family_iii_parameters(ctx: &FieldCtx) -> Vec<Felt> {
    if ctx.p() != 2 || ctx.h() < 2 {
        return Vec::new();
    }
    linearized_roots(ctx, &hermitian_trace_coeffs(ctx), Felt::ONE, 2 * ctx.h())
}

pub fn parameters(ctx: &FieldCtx, family: Family) -> Vec<Felt> {
    match family {
        Family::FamilyI => family_i_parameters(ctx),
        Family::FamilyII => family_ii_parameters(ctx),
        Family::FamilyIII => family_iii_parameters(ctx),
        _ => Vec::new(),
    }
}

#[cfg(test)]
mod tests;
