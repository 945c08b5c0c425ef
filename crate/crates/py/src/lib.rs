//! Python bindings for `srlie-core`.

use nalgebra::Matrix3;
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use srlie_core::cutconj::{conjugate_time as conj_time, cut_time as cut};
use srlie_core::distance::{dist, DistanceResult};
use srlie_core::geodesics::geodesic as geo;
use srlie_core::verify::{run_suite, Suite};
use srlie_core::{BasisKind, Error, GeodesicParams, GroupKind, GroupPoint, So3RPoint, Su2RPoint};

fn to_py(e: Error) -> PyErr {
    if e.is_input_error() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn metric(m: u8) -> PyResult<BasisKind> {
    match m {
        1 => Ok(BasisKind::D1),
        2 => Ok(BasisKind::D2),
        _ => Err(PyValueError::new_err(format!("metric must be 1 or 2, got {m}"))),
    }
}

fn group(g: &str) -> PyResult<GroupKind> {
    match g {
        "su2r" => Ok(GroupKind::Su2R),
        "so3r" => Ok(GroupKind::So3R),
        _ => Err(PyValueError::new_err(format!("group must be 'su2r' or 'so3r', got {g:?}"))),
    }
}

fn result_dict<'py>(py: Python<'py>, d: &DistanceResult) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("value", d.value)?;
    out.set_item("case_label", d.case_label)?;
    out.set_item("xi", d.xi)?;
    out.set_item("residual", d.residual)?;
    Ok(out)
}

fn params(alpha: [f64; 3], beta: f64, g: &str, m: u8) -> PyResult<GeodesicParams> {
    GeodesicParams::normalized(alpha, beta, metric(m)?, group(g)?, 1e-6).map_err(to_py)
}

/// Distance from the identity to `(A, B, v)` on SU(2)xR.
#[pyfunction]
#[pyo3(signature = (a, b, v, metric=2))]
fn dist_su2r<'py>(py: Python<'py>, a: Complex64, b: Complex64, v: f64, metric: u8) -> PyResult<Bound<'py, PyDict>> {
    let p = Su2RPoint::new(a, b, v).map_err(to_py)?;
    let d = dist(&GroupPoint::Su2R(p), self::metric(metric)?).map_err(to_py)?;
    result_dict(py, &d)
}

/// Distance from the identity to `(C, v)` on SO(3)xR; `c` is a row-major 3x3.
#[pyfunction]
#[pyo3(signature = (c, v, metric=2))]
fn dist_so3r<'py>(py: Python<'py>, c: [[f64; 3]; 3], v: f64, metric: u8) -> PyResult<Bound<'py, PyDict>> {
    let m = Matrix3::from_fn(|i, j| c[i][j]);
    let p = So3RPoint::new(m, v).map_err(to_py)?;
    let d = dist(&GroupPoint::So3R(p), self::metric(metric)?).map_err(to_py)?;
    result_dict(py, &d)
}

/// Endpoint coordinates at time `t`: `[ReA, ImA, ReB, ImB, v]` or
/// `[c11, ..., c33, v]`.
#[pyfunction]
#[pyo3(signature = (alpha, beta, t, group="su2r", metric=2))]
fn geodesic(alpha: [f64; 3], beta: f64, t: f64, group: &str, metric: u8) -> PyResult<Vec<f64>> {
    Ok(geo(&params(alpha, beta, group, metric)?, t).coordinates())
}

/// `(cut_time, locus_class, first_conjugate_time)`.
#[pyfunction]
#[pyo3(signature = (alpha, beta, group="su2r", metric=2))]
fn cut_time(alpha: [f64; 3], beta: f64, group: &str, metric: u8) -> PyResult<(f64, &'static str, f64)> {
    let info = cut(&params(alpha, beta, group, metric)?).map_err(to_py)?;
    Ok((info.cut_time, info.locus_class.name(), info.first_conjugate_time))
}

#[pyfunction]
#[pyo3(signature = (alpha, beta, n=1, group="su2r", metric=2))]
fn conjugate_time(alpha: [f64; 3], beta: f64, n: usize, group: &str, metric: u8) -> PyResult<f64> {
    conj_time(&params(alpha, beta, group, metric)?, n).map_err(to_py)
}

/// `(max_residual, tolerance, passed)` for one property suite.
#[pyfunction]
#[pyo3(signature = (suite, count=20, seed=0))]
fn verify(suite: &str, count: usize, seed: u64) -> PyResult<(f64, f64, bool)> {
    let s: Suite = suite.parse().map_err(to_py)?;
    let r = run_suite(s, count, seed);
    Ok((r.max_residual, r.tolerance, r.passed))
}

#[pymodule]
fn srlie(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(dist_su2r, m)?)?;
    m.add_function(wrap_pyfunction!(dist_so3r, m)?)?;
    m.add_function(wrap_pyfunction!(geodesic, m)?)?;
    m.add_function(wrap_pyfunction!(cut_time, m)?)?;
    m.add_function(wrap_pyfunction!(conjugate_time, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
