//! Python bindings for `nilsub`.
//!
//! Objects cross the boundary as `Object` handles; files use the same TOML
//! formats as the command-line tool.

use nilsub::ar::{tau_orbit, tau_s};
use nilsub::catalog::{describe_end, enumerate, verify_case, EnumerateOptions, Strategy};
use nilsub::hom::hom_basis;
use nilsub::io;
use nilsub::krull::{decompose, is_isomorphic, DecomposeOptions, IsoResult};
use nilsub::rep::{RepObject, Shape, StandardKind};
use nilsub::rng::seeded;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// An object `(U ⊆ V)` of `S_m(k[T]/T^n)` over `F_p`.
#[pyclass(module = "nilsub_py")]
#[derive(Clone)]
struct Object {
    inner: RepObject,
}

#[pymethods]
impl Object {
    /// Parses an object from TOML text in box or raw form.
    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        Ok(Self { inner: io::parse_object(text).map_err(value_err)? })
    }

    /// One of the standard objects `"P"`, `"I"` or `"Y"`.
    #[staticmethod]
    fn standard(kind: &str, p: u64, m: usize, n: usize) -> PyResult<Self> {
        let kind = match kind {
            "P" => StandardKind::P,
            "I" => StandardKind::I,
            "Y" => StandardKind::Y,
            other => return Err(PyValueError::new_err(format!("unknown standard object {other:?}"))),
        };
        let shape = Shape::new(p, m, n).map_err(value_err)?;
        Ok(Self { inner: RepObject::standard(kind, shape) })
    }

    /// Raw-form TOML text.
    fn to_toml(&self) -> String {
        io::write_object(&self.inner)
    }

    /// `(p, m, n)`.
    #[getter]
    fn shape(&self) -> (u64, usize, usize) {
        let s = self.inner.shape;
        (s.p, s.m, s.n)
    }

    /// `(dim U, dim V)`.
    #[getter]
    fn dims(&self) -> (usize, usize) {
        (self.inner.du(), self.inner.dv())
    }

    fn in_s(&self) -> bool {
        self.inner.in_s()
    }

    fn __repr__(&self) -> String {
        let (p, m, n) = self.shape();
        format!("Object(p={p}, m={m}, n={n}, dims={})", self.inner.dims())
    }
}

/// Dimension of `Hom(x, y)`.
#[pyfunction]
fn hom_dim(x: &Object, y: &Object) -> PyResult<usize> {
    Ok(hom_basis(&x.inner, &y.inner).map_err(value_err)?.dim())
}

/// Whether `x` and `y` are isomorphic; raises when undecided.
#[pyfunction]
#[pyo3(signature = (x, y, seed = 0))]
fn is_iso(x: &Object, y: &Object, seed: u64) -> PyResult<bool> {
    match is_isomorphic(&x.inner, &y.inner, &mut seeded(seed), &DecomposeOptions::default()).map_err(value_err)? {
        IsoResult::Iso(_) => Ok(true),
        IsoResult::NotIso(_) => Ok(false),
        IsoResult::Unknown => Err(PyRuntimeError::new_err("isomorphism undecided within the budget")),
    }
}

/// Indecomposable summands of `x`; raises if one cannot be certified.
#[pyfunction]
#[pyo3(signature = (x, seed = 0))]
fn decompose_object(x: &Object, seed: u64) -> PyResult<Vec<Object>> {
    let d = decompose(&x.inner, &mut seeded(seed), &DecomposeOptions::default());
    if !d.is_complete() {
        return Err(PyRuntimeError::new_err("some summands could not be certified"));
    }
    Ok(d.pieces.into_iter().map(|p| Object { inner: p.object }).collect())
}

/// The relative Auslander-Reiten translate of `x`.
#[pyfunction]
fn tau(x: &Object) -> PyResult<Object> {
    Ok(Object { inner: tau_s(&x.inner).map_err(value_err)? })
}

/// `(length, period, end)` of the `τ_S` orbit of `x`.
#[pyfunction]
#[pyo3(signature = (x, max_steps = 60))]
fn orbit(x: &Object, max_steps: usize) -> PyResult<(usize, Option<usize>, String)> {
    let r = tau_orbit(&x.inner, max_steps).map_err(value_err)?;
    Ok((r.len(), r.period(), describe_end(&r.end)))
}

/// Catalog of indecomposables of `S_m(k[T]/T^n)` over `F_p`; returns the
/// representatives and whether the search stabilized.
#[pyfunction]
#[pyo3(signature = (m, n, p = 2, strategy = "combined", seed = 0))]
fn enumerate_catalog(m: usize, n: usize, p: u64, strategy: &str, seed: u64) -> PyResult<(Vec<Object>, bool)> {
    let shape = Shape::new(p, m, n).map_err(value_err)?;
    let strategy: Strategy = strategy.parse().map_err(value_err)?;
    let cat = enumerate(shape, &EnumerateOptions { strategy, seed, ..Default::default() }).map_err(value_err)?;
    let objects = cat.objects().into_iter().map(|inner| Object { inner }).collect();
    Ok((objects, cat.complete))
}

/// Runs a named verification case; returns `(passed, [(claim, passed, detail)])`.
#[pyfunction]
#[pyo3(signature = (case, p = 2, seed = 0))]
fn verify(case: &str, p: u64, seed: u64) -> PyResult<(bool, Vec<(String, bool, String)>)> {
    let r = verify_case(case, p, seed).map_err(value_err)?;
    let claims = r.claims.iter().map(|c| (c.name.clone(), c.passed, c.detail.clone())).collect();
    Ok((r.passed(), claims))
}

#[pymodule]
fn nilsub_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Object>()?;
    m.add_function(wrap_pyfunction!(hom_dim, m)?)?;
    m.add_function(wrap_pyfunction!(is_iso, m)?)?;
    m.add_function(wrap_pyfunction!(decompose_object, m)?)?;
    m.add_function(wrap_pyfunction!(tau, m)?)?;
    m.add_function(wrap_pyfunction!(orbit, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_catalog, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
