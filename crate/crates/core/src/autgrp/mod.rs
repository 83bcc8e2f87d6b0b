//! Explicit automorphisms of the curve models and the groups they generate.

mod families;
mod group;
mod map;
mod pgu;

use thiserror::Error;

use crate::gfield::{FieldError, Felt};
use crate::models::{CurveModel, ModelError};
use crate::placecount::{affine_point_list, PlaceError};
use crate::polyring::PolyError;

pub use families::*;
pub use group::{AutGroupTable, DEFAULT_CLOSURE_BOUND};
pub use map::{AffineAlgMap, MapKey};
pub use pgu::*;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Place(#[from] PlaceError),
    #[error("closure exceeded {0} elements")]
    BoundExceeded(usize),
    #[error("map {0} is not invertible")]
    NotInvertible(String),
    #[error("map {0} does not preserve the model")]
    NotAutomorphism(String),
    #[error("{0}")]
    Precondition(&'static str),
    #[error("no solution for the translation lift at a = {0}")]
    NoLift(u128),
}

pub type AutResult<T> = Result<T, AutError>;

/// Whether `map` sends the curve of `model` into itself.
pub fn map_preserves(model: &CurveModel, map: &AffineAlgMap) -> AutResult<bool> {
    Ok(map.preserves(&model.poly)?)
}

/// Affine rational points of `model` fixed by `map`.
pub fn fixed_rational_points(model: &CurveModel, map: &AffineAlgMap) -> AutResult<Vec<(Felt, Felt)>> {
    Ok(affine_point_list(&model.poly, 1)?
        .into_iter()
        .filter(|&(x, y)| map.apply(x, y) == (x, y))
        .collect())
}

/// Whether every nontrivial element among `members` fixes no affine
/// rational point, so the place at infinity is its only fixed rational place.
pub fn unique_fixed_place(model: &CurveModel, group: &AutGroupTable, members: &[usize]) -> AutResult<bool> {
    let points = affine_point_list(&model.poly, 1)?;
    Ok(members.iter().filter(|&&i| i != 0).all(|&i| {
        let m = group.element(i);
        points.iter().all(|&(x, y)| m.apply(x, y) != (x, y))
    }))
}

#[cfg(test)]
mod tests;
