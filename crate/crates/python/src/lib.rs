//! Python bindings for `quatstab`.
//!
//! Vectors cross the boundary as lists of floats, matrices as lists of rows,
//! and structured results (check reports, Hessian breakdowns, stability
//! reports) as plain dicts.

use nalgebra::{DMatrix, DVector, Matrix5, Vector5};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde::Serialize;

use quatstab::curvature::{self, SpaceFormParams};
use quatstab::hessian::{self, ChainTolerances};
use quatstab::spectral::{self, ReportOptions, Source, SpectralData};
use quatstab::sphere;

fn err(e: quatstab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn params(n: usize, c: f64) -> PyResult<SpaceFormParams> {
    SpaceFormParams::new(n, c).map_err(err)
}

fn vector(v: Vec<f64>) -> DVector<f64> {
    DVector::from_vec(v)
}

fn matrix(rows: &[Vec<f64>]) -> PyResult<DMatrix<f64>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(PyValueError::new_err("ragged matrix rows"));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn point(v: &[f64]) -> PyResult<Vector5<f64>> {
    if v.len() != 5 {
        return Err(PyValueError::new_err(format!("expected 5 coordinates, got {}", v.len())));
    }
    Ok(Vector5::from_column_slice(v))
}

/// Hypercomplex structure `(J1, J2, J3)` on `R^{4n}`.
#[pyclass(name = "QuaternionStructure", module = "quatstab", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyQuaternionStructure {
    inner: quatstab::QuaternionStructure,
}

#[pymethods]
impl PyQuaternionStructure {
    #[staticmethod]
    fn standard(n: usize) -> PyResult<Self> {
        Ok(Self { inner: quatstab::QuaternionStructure::standard(n).map_err(err)? })
    }

    /// Standard structure conjugated by a random orthogonal matrix.
    #[staticmethod]
    fn rotated(n: usize, seed: u64) -> PyResult<Self> {
        let o = quatstab::seeded::random_orthogonal(4 * n, seed);
        let inner = quatstab::QuaternionStructure::standard(n).map_err(err)?.conjugated(&o).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_matrices(n: usize, j1: Vec<Vec<f64>>, j2: Vec<Vec<f64>>, j3: Vec<Vec<f64>>) -> PyResult<Self> {
        let j = [matrix(&j1)?, matrix(&j2)?, matrix(&j3)?];
        Ok(Self { inner: quatstab::QuaternionStructure::from_matrices(n, j).map_err(err)? })
    }

    fn conjugated(&self, o: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(Self { inner: self.inner.conjugated(&matrix(&o)?).map_err(err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// `J_alpha` as a list of rows, `alpha` in `0..3`.
    fn j(&self, alpha: usize) -> PyResult<Vec<Vec<f64>>> {
        if alpha >= 3 {
            return Err(PyValueError::new_err("alpha must be 0, 1 or 2"));
        }
        Ok(rows(self.inner.j(alpha)))
    }

    #[pyo3(signature = (tol = 1e-12))]
    fn verify<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.verify(tol))
    }

    fn __repr__(&self) -> String {
        format!("QuaternionStructure(n={})", self.inner.n())
    }
}

/// Orthonormal frame `{E_i, J1 E_i, J2 E_i, J3 E_i}`.
#[pyclass(name = "AdaptedFrame", module = "quatstab", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyAdaptedFrame {
    inner: quatstab::AdaptedFrame,
}

#[pymethods]
impl PyAdaptedFrame {
    #[new]
    #[pyo3(signature = (q, seed = 0, first = None))]
    fn new(q: &PyQuaternionStructure, seed: u64, first: Option<Vec<f64>>) -> PyResult<Self> {
        let first = first.map(vector);
        let inner = quatstab::AdaptedFrame::build_with_first(&q.inner, first.as_ref(), seed).map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn vectors(&self) -> Vec<Vec<f64>> {
        self.inner.vectors().iter().map(|v| v.iter().copied().collect()).collect()
    }

    fn e(&self, i: usize) -> PyResult<Vec<f64>> {
        if i >= self.inner.n() {
            return Err(PyValueError::new_err("frame index out of range"));
        }
        Ok(self.inner.e(i).iter().copied().collect())
    }

    fn je(&self, alpha: usize, i: usize) -> PyResult<Vec<f64>> {
        if alpha >= 3 || i >= self.inner.n() {
            return Err(PyValueError::new_err("frame index out of range"));
        }
        Ok(self.inner.je(alpha, i).iter().copied().collect())
    }

    #[pyo3(signature = (q, tol = 1e-12))]
    fn verify<'py>(&self, py: Python<'py>, q: &PyQuaternionStructure, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.verify(&q.inner, tol))
    }

    fn __len__(&self) -> usize {
        self.inner.vectors().len()
    }
}

/// Vector field on `S^4` used as a variation of the identity map.
#[pyclass(name = "FieldSpec", module = "quatstab", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFieldSpec {
    inner: sphere::FieldSpec,
}

#[pymethods]
impl PyFieldSpec {
    /// Gradient of the coordinate function `<a, x>`; `a` must be a unit vector.
    #[staticmethod]
    fn coordinate_gradient(a: Vec<f64>) -> PyResult<Self> {
        Ok(Self { inner: sphere::FieldSpec::coordinate_gradient(point(&a)?).map_err(err)? })
    }

    /// Killing field `x -> A x` for a skew-symmetric 5x5 `A`.
    #[staticmethod]
    fn killing(a: Vec<Vec<f64>>) -> PyResult<Self> {
        let m = matrix(&a)?;
        if m.shape() != (5, 5) {
            return Err(PyValueError::new_err("expected a 5x5 matrix"));
        }
        Ok(Self { inner: sphere::FieldSpec::killing(Matrix5::from_fn(|i, j| m[(i, j)])).map_err(err)? })
    }

    /// Rotation in the `(i, j)` coordinate plane.
    #[staticmethod]
    fn rotation(i: usize, j: usize) -> PyResult<Self> {
        Ok(Self { inner: sphere::FieldSpec::rotation(i, j).map_err(err)? })
    }

    #[staticmethod]
    fn projected_constant(a: Vec<f64>) -> PyResult<Self> {
        Ok(Self { inner: sphere::FieldSpec::projected_constant(point(&a)?) })
    }
}

/// Seeded Monte Carlo quadrature on the round `S^4` of curvature `c`.
#[pyclass(name = "SphereQuadrature", module = "quatstab", frozen, skip_from_py_object)]
struct PySphereQuadrature {
    inner: sphere::SphereQuadrature,
}

#[pymethods]
impl PySphereQuadrature {
    #[new]
    #[pyo3(signature = (c = 4.0, samples = 1_000_000, seed = 0))]
    fn new(py: Python<'_>, c: f64, samples: usize, seed: u64) -> PyResult<Self> {
        let spec = sphere::SphereSpec::new(c).map_err(err)?;
        let inner = py.detach(|| sphere::SphereQuadrature::sample(spec, samples, seed)).map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn c(&self) -> f64 {
        self.inner.spec().c()
    }

    #[getter]
    fn radius(&self) -> f64 {
        self.inner.spec().radius()
    }

    #[getter]
    fn volume(&self) -> f64 {
        self.inner.spec().volume()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn dirichlet_energy(&self, py: Python<'_>, field: &PyFieldSpec) -> PyResult<f64> {
        py.detach(|| sphere::dirichlet_energy(&field.inner, &self.inner)).map_err(err)
    }

    fn l2_norm(&self, py: Python<'_>, field: &PyFieldSpec) -> PyResult<f64> {
        py.detach(|| sphere::l2_norm(&field.inner, &self.inner)).map_err(err)
    }

    /// Second variation of the identity map in the direction `field`.
    fn hessian<'py>(&self, py: Python<'py>, field: &PyFieldSpec) -> PyResult<Bound<'py, PyAny>> {
        let h = py.detach(|| sphere::hessian_identity_map(&field.inner, &self.inner)).map_err(err)?;
        to_py(py, &h)
    }

    /// Rayleigh quotient of the coordinate function `<a, x>`.
    #[pyo3(signature = (a = vec![0.0, 0.0, 1.0, 0.0, 0.0]))]
    fn rayleigh_lambda1(&self, py: Python<'_>, a: Vec<f64>) -> PyResult<f64> {
        let a = point(&a)?;
        py.detach(|| sphere::rayleigh_lambda1(&self.inner, &a)).map_err(err)
    }
}

#[pyfunction]
fn riemann(
    n: usize,
    c: f64,
    q: &PyQuaternionStructure,
    x: Vec<f64>,
    y: Vec<f64>,
    z: Vec<f64>,
    u: Vec<f64>,
) -> PyResult<f64> {
    curvature::riemann(&params(n, c)?, &q.inner, &vector(x), &vector(y), &vector(z), &vector(u)).map_err(err)
}

#[pyfunction]
fn sectional_curvature(n: usize, c: f64, q: &PyQuaternionStructure, x: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
    curvature::sectional_curvature(&params(n, c)?, &q.inner, &vector(x), &vector(y)).map_err(err)
}

#[pyfunction]
fn quaternion_sectional(n: usize, c: f64, q: &PyQuaternionStructure, x: Vec<f64>, alpha: usize) -> PyResult<f64> {
    curvature::quaternion_sectional(&params(n, c)?, &q.inner, &vector(x), alpha).map_err(err)
}

#[pyfunction]
fn curvature_term_operator(n: usize, c: f64, q: &PyQuaternionStructure, frame: &PyAdaptedFrame) -> PyResult<Vec<Vec<f64>>> {
    Ok(rows(&curvature::curvature_term_operator(&params(n, c)?, &q.inner, &frame.inner).map_err(err)?))
}

#[pyfunction]
#[pyo3(signature = (n, c, q, trials = 1000, seed = 0, tol = 1e-10))]
fn check_symmetries<'py>(
    py: Python<'py>,
    n: usize,
    c: f64,
    q: &PyQuaternionStructure,
    trials: usize,
    seed: u64,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let report = curvature::check_symmetries(&params(n, c)?, &q.inner, trials, seed, tol).map_err(err)?;
    to_py(py, &report)
}

#[pyfunction]
fn cri1_density(n: usize, c: f64, frame: &PyAdaptedFrame, v: Vec<f64>, i: usize) -> PyResult<f64> {
    hessian::cri1_density(&params(n, c)?, &frame.inner, &vector(v), i).map_err(err)
}

#[pyfunction]
fn cri2_density(
    n: usize,
    c: f64,
    q: &PyQuaternionStructure,
    frame: &PyAdaptedFrame,
    v: Vec<f64>,
    i: usize,
    alpha: usize,
) -> PyResult<f64> {
    hessian::cri2_density(&params(n, c)?, &q.inner, &frame.inner, &vector(v), i, alpha).map_err(err)
}

/// `(lhs, rhs)` of the first completeness identity.
#[pyfunction]
fn co1_identity(frame: &PyAdaptedFrame, v: Vec<f64>) -> PyResult<(f64, f64)> {
    let v = vector(v);
    if v.len() != 4 * frame.inner.n() {
        return Err(PyValueError::new_err("vector length does not match frame"));
    }
    Ok(hessian::co1_identity(&frame.inner, &v))
}

/// `(lhs, rhs)` of the second completeness identity.
#[pyfunction]
fn co2_identity(q: &PyQuaternionStructure, frame: &PyAdaptedFrame, v: Vec<f64>) -> PyResult<(f64, f64)> {
    let v = vector(v);
    if v.len() != q.inner.dim() || frame.inner.n() != q.inner.n() {
        return Err(PyValueError::new_err("vector length does not match frame"));
    }
    Ok(hessian::co2_identity(&q.inner, &frame.inner, &v))
}

#[pyfunction]
fn total_curvature_density(n: usize, c: f64, q: &PyQuaternionStructure, frame: &PyAdaptedFrame, v: Vec<f64>) -> PyResult<f64> {
    hessian::total_curvature_density(&params(n, c)?, &q.inner, &frame.inner, &vector(v)).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, c, q, trials = 1000, seed = 0, density_tol = 1e-12, algebraic_tol = 1e-10))]
#[allow(clippy::too_many_arguments)]
fn proof_chain_checks<'py>(
    py: Python<'py>,
    n: usize,
    c: f64,
    q: &PyQuaternionStructure,
    trials: usize,
    seed: u64,
    density_tol: f64,
    algebraic_tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let tol = ChainTolerances { density: density_tol, algebraic: algebraic_tol };
    let report = hessian::proof_chain_checks(&params(n, c)?, &q.inner, trials, seed, tol).map_err(err)?;
    to_py(py, &report)
}

#[pyfunction]
fn hessian_closed_form<'py>(py: Python<'py>, n: usize, c: f64, dirichlet: f64, l2: f64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &hessian::hessian_closed_form(&params(n, c)?, dirichlet, l2).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (n, c, trials = 1000, seed = 0, tol = 1e-10))]
fn pointwise_stability_check<'py>(
    py: Python<'py>,
    n: usize,
    c: f64,
    trials: usize,
    seed: u64,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &hessian::pointwise_stability_check(&params(n, c)?, trials, seed, tol).map_err(err)?)
}

#[pyfunction]
fn classify(c: f64) -> PyResult<&'static str> {
    Ok(spectral::classify(c).map_err(err)?.as_str())
}

/// `(lambda1, einstein_constant)` for quaternion projective space at `c = 4`.
#[pyfunction]
fn qps_constants(n: usize) -> PyResult<(f64, f64)> {
    let sd = spectral::qps_constants(n).map_err(err)?;
    Ok((sd.lambda1, sd.einstein_constant))
}

#[pyfunction]
fn qps_margin(n: usize) -> PyResult<f64> {
    spectral::qps_margin(n).map_err(err)
}

/// `"stable"` when `lambda1 >= 2 * einstein_constant`, else `"unstable"`.
#[pyfunction]
fn smith_verdict<'py>(py: Python<'py>, lambda1: f64, einstein_constant: f64) -> PyResult<Bound<'py, PyAny>> {
    let sd = SpectralData::new(lambda1, einstein_constant, Source::Numerical).map_err(err)?;
    to_py(py, &spectral::smith_verdict(&sd))
}

#[pyfunction]
#[pyo3(signature = (n, c, identity_trials = 0, seed = 0, attach_numerics = false, samples = 1_000_000, tolerance = 1e-10))]
#[allow(clippy::too_many_arguments)]
fn full_report<'py>(
    py: Python<'py>,
    n: usize,
    c: f64,
    identity_trials: usize,
    seed: u64,
    attach_numerics: bool,
    samples: usize,
    tolerance: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let opts = ReportOptions { identity_trials, seed, attach_numerics, samples, tolerance };
    let report = py.detach(|| spectral::full_report(n, c, &opts)).map_err(err)?;
    to_py(py, &report)
}

#[pymodule]
#[pyo3(name = "quatstab")]
fn quatstab_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQuaternionStructure>()?;
    m.add_class::<PyAdaptedFrame>()?;
    m.add_class::<PyFieldSpec>()?;
    m.add_class::<PySphereQuadrature>()?;
    m.add_function(wrap_pyfunction!(riemann, m)?)?;
    m.add_function(wrap_pyfunction!(sectional_curvature, m)?)?;
    m.add_function(wrap_pyfunction!(quaternion_sectional, m)?)?;
    m.add_function(wrap_pyfunction!(curvature_term_operator, m)?)?;
    m.add_function(wrap_pyfunction!(check_symmetries, m)?)?;
    m.add_function(wrap_pyfunction!(cri1_density, m)?)?;
    m.add_function(wrap_pyfunction!(cri2_density, m)?)?;
    m.add_function(wrap_pyfunction!(co1_identity, m)?)?;
    m.add_function(wrap_pyfunction!(co2_identity, m)?)?;
    m.add_function(wrap_pyfunction!(total_curvature_density, m)?)?;
    m.add_function(wrap_pyfunction!(proof_chain_checks, m)?)?;
    m.add_function(wrap_pyfunction!(hessian_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(pointwise_stability_check, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(qps_constants, m)?)?;
    m.add_function(wrap_pyfunction!(qps_margin, m)?)?;
    m.add_function(wrap_pyfunction!(smith_verdict, m)?)?;
    m.add_function(wrap_pyfunction!(full_report, m)?)?;
    Ok(())
}
