//! Python bindings. Reports come back as JSON text; field elements use the
//! integer encoding.

use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use hermcov::gfield::{make_field, FieldCtx};
use hermcov::models::{construct as build, genus_formula as formula, parameters, Family};
use hermcov::numsg::{telescopic_genus, NumSemigroup};
use hermcov::placecount::{family_iii_place_count, maximality_check};
use hermcov::suite::run_criterion;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn family(name: &str) -> PyResult<Family> {
    Ok(match name.to_ascii_lowercase().as_str() {
        "hermitian" => Family::Hermitian,
        "center" => Family::CenterP,
        "noncenter" => Family::NoncenterP,
        "fpp" => Family::FppChar2,
        "i" => Family::FamilyI,
        "ii" => Family::FamilyII,
        "iii" => Family::FamilyIII,
        _ => return Err(PyValueError::new_err(format!("unknown family {name}"))),
    })
}

fn field(p: u64, h: u32) -> PyResult<Arc<FieldCtx>> {
    Ok(Arc::new(make_field(p, h).map_err(value_err)?))
}

fn to_json(v: impl serde::Serialize) -> PyResult<String> {
    serde_json::to_string(&v).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// `{p, h, modulus}` of F_{p^{4h}}.
#[pyfunction]
fn field_descriptor(p: u64, h: u32) -> PyResult<String> {
    to_json(field(p, h)?.descriptor())
}

/// Admissible parameters of a family, in integer encoding.
#[pyfunction]
fn family_parameters(name: &str, p: u64, h: u32) -> PyResult<Vec<u128>> {
    let ctx = field(p, h)?;
    Ok(parameters(&ctx, family(name)?).into_iter().map(|b| ctx.encode(b)).collect())
}

#[pyfunction]
fn genus_formula(name: &str, p: u32, h: u32) -> PyResult<u64> {
    formula(family(name)?, p, h).map_err(value_err)
}

#[pyfunction]
#[pyo3(signature = (name, p, h, b=None))]
fn construct(name: &str, p: u64, h: u32, b: Option<u128>) -> PyResult<String> {
    let ctx = field(p, h)?;
    let b = b.map(|n| ctx.decode(n)).transpose().map_err(value_err)?;
    to_json(build(&ctx, family(name)?, b).map_err(value_err)?.report())
}

/// `{N, genus, hasse_weil, maximal}` for one model.
#[pyfunction]
#[pyo3(signature = (name, p, h, b=None))]
fn maximality(name: &str, p: u64, h: u32, b: Option<u128>) -> PyResult<String> {
    let ctx = field(p, h)?;
    let fam = family(name)?;
    let b = b.map(|n| ctx.decode(n)).transpose().map_err(value_err)?;
    if fam == Family::FamilyIII {
        let b = b.ok_or_else(|| PyValueError::new_err("family III needs b"))?;
        return to_json(family_iii_place_count(&ctx, b).map_err(value_err)?.maximality);
    }
    let model = build(&ctx, fam, b).map_err(value_err)?;
    to_json(maximality_check(&model).map_err(value_err)?)
}

/// `(genus, gaps)` of the semigroup generated by `gens`.
#[pyfunction]
fn semigroup(gens: Vec<u64>) -> PyResult<(u64, Vec<u64>)> {
    let s = NumSemigroup::from_generators(&gens).map_err(value_err)?;
    Ok((s.genus, s.gaps))
}

/// `(l_g, genus)` of a telescopic sequence.
#[pyfunction]
fn telescopic(gens: Vec<u64>) -> PyResult<(i64, u64)> {
    let t = telescopic_genus(&gens).map_err(value_err)?;
    Ok((t.l_g, t.genus))
}

/// One numbered check of the verification suite.
#[pyfunction]
fn verify(id: u8) -> PyResult<String> {
    to_json(run_criterion(id).ok_or_else(|| PyValueError::new_err(format!("unknown check {id}")))?)
}

#[pymodule]
fn hermcov_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(field_descriptor, m)?)?;
    m.add_function(wrap_pyfunction!(family_parameters, m)?)?;
    m.add_function(wrap_pyfunction!(genus_formula, m)?)?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(maximality, m)?)?;
    m.add_function(wrap_pyfunction!(semigroup, m)?)?;
    m.add_function(wrap_pyfunction!(telescopic, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
