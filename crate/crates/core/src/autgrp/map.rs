use std::sync::Arc;

use crate::gfield::{FieldCtx, Felt};
use crate::polyring::{BiPoly, Exp, PolyError, PolyResult, Var};

/// A polynomial map of the affine plane, `P ↦ (u(P), v(P))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineAlgMap {
    pub x_image: BiPoly,
    pub y_image: BiPoly,
}

/// Canonical form of a map: the term lists of both components.
pub type MapKey = (Vec<(Exp, Felt)>, Vec<(Exp, Felt)>);

impl AffineAlgMap {
    pub fn new(x_image: BiPoly, y_image: BiPoly) -> PolyResult<Self> {
        x_image.checked_add(&y_image)?;
        Ok(AffineAlgMap { x_image, y_image })
    }

    pub fn identity(ctx: &Arc<FieldCtx>) -> Self {
        AffineAlgMap { x_image: BiPoly::x(ctx), y_image: BiPoly::y(ctx) }
    }

    /// `(x, y) ↦ (x + a, y + b)`.
    pub fn translation(ctx: &Arc<FieldCtx>, a: Felt, b: Felt) -> Self {
        AffineAlgMap {
            x_image: &BiPoly::x(ctx) + &BiPoly::constant(ctx, a),
            y_image: &BiPoly::y(ctx) + &BiPoly::constant(ctx, b),
        }
    }

    /// `(x, y) ↦ (λx, μy)`.
    pub fn scaling(ctx: &Arc<FieldCtx>, lambda: Felt, mu: Felt) -> Self {
        AffineAlgMap { x_image: BiPoly::x(ctx).scale(lambda), y_image: BiPoly::y(ctx).scale(mu) }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.x_image.ctx()
    }

    pub fn is_identity(&self) -> bool {
        let ctx = self.ctx();
        self.x_image == BiPoly::x(ctx) && self.y_image == BiPoly::y(ctx)
    }

    pub fn apply(&self, x: Felt, y: Felt) -> (Felt, Felt) {
        (self.x_image.eval(x, y), self.y_image.eval(x, y))
    }

    /// `f ∘ self`, i.e. `f(u, v)`.
    pub fn pullback(&self, f: &BiPoly) -> PolyResult<BiPoly> {
        f.substitute(&self.x_image, &self.y_image)
    }

    /// The point map `P ↦ other(self(P))`.
    pub fn then(&self, other: &Self) -> PolyResult<Self> {
        Ok(AffineAlgMap {
            x_image: other.pullback_component(&other.x_image, self)?,
            y_image: other.pullback_component(&other.y_image, self)?,
        })
    }

    fn pullback_component(&self, comp: &BiPoly, inner: &Self) -> PolyResult<BiPoly> {
        comp.substitute(&inner.x_image, &inner.y_image)
    }

    pub fn key(&self) -> MapKey {
        (self.x_image.terms().collect(), self.y_image.terms().collect())
    }

    /// Whether the map sends the curve `f = 0` into itself: the pullback is
    /// divisible by `f` (pseudo-remainder in Y) and keeps the total degree.
    pub fn preserves(&self, f: &BiPoly) -> PolyResult<bool> {
        if f.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let pulled = self.pullback(f)?;
        if pulled.total_degree() != f.total_degree() {
            return Ok(false);
        }
        let var = if f.deg_y().unwrap_or(0) >= 1 { Var::Y } else { Var::X };
        Ok(pulled.pseudo_rem(f, var)?.is_zero())
    }

    pub fn to_text(&self) -> String {
        format!("({}, {})", self.x_image.to_text(), self.y_image.to_text())
    }
}
