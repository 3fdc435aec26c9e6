//! Python module `combicoh`.
//!
//! Sequence ids are the strings the command-line tool accepts. Exact values
//! come back as `int` or `fractions.Fraction`; complex labels are Python
//! `complex`.

use combicoh::moments::moment_with_scheme;
use combicoh::{report, ExactValue, QuadratureConfig, Scheme, SequenceId, WeightKind, WeightSpec};
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

create_exception!(
    combicoh,
    DomainError,
    PyValueError,
    "Invalid argument or request."
);
create_exception!(
    combicoh,
    NumericalError,
    PyArithmeticError,
    "A numerical method failed to converge."
);

fn to_py(e: combicoh::Error) -> PyErr {
    if e.is_numerical() {
        NumericalError::new_err(e.to_string())
    } else {
        DomainError::new_err(e.to_string())
    }
}

fn parse_id(id: &str) -> PyResult<SequenceId> {
    id.parse().map_err(to_py)
}

fn exact<'py>(py: Python<'py>, v: &ExactValue) -> PyResult<Bound<'py, PyAny>> {
    let r = v.as_rational();
    let numer = r.numer().clone().into_pyobject(py)?.into_any();
    if r.is_integer() {
        return Ok(numer);
    }
    let fraction = py.import("fractions")?.getattr("Fraction")?;
    fraction.call1((numer, r.denom().clone()))
}

fn config(rel_tol: f64, scheme: Option<&str>) -> PyResult<QuadratureConfig> {
    let scheme = scheme
        .map(|s| s.parse::<Scheme>())
        .transpose()
        .map_err(to_py)?;
    Ok(QuadratureConfig {
        rel_tol,
        scheme,
        ..Default::default()
    })
}

/// c(0), ..., c(n_max) as integers.
#[pyfunction]
fn sequence<'py>(py: Python<'py>, id: &str, n_max: u32) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let id = parse_id(id)?;
    combicoh::seq_values(id, n_max)
        .iter()
        .map(|v| exact(py, v))
        .collect()
}

/// ε₀ = 0 and εₙ = c(n)/c(n−1) for n ≤ n_max.
#[pyfunction]
fn spectrum<'py>(py: Python<'py>, id: &str, n_max: u32) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let id = parse_id(id)?;
    combicoh::spectrum(id, n_max)
        .epsilon
        .iter()
        .map(|v| exact(py, v))
        .collect()
}

/// Radius of convergence of the normalization series (may be `inf`).
#[pyfunction]
fn radius(id: &str) -> PyResult<f64> {
    combicoh::radius_of_convergence(parse_id(id)?).map_err(to_py)
}

/// W(x) with the nominal constant, or the calibrated one.
#[pyfunction]
#[pyo3(signature = (id, x, calibrated = false, tail_tol = 1e-13))]
fn weight(id: &str, x: f64, calibrated: bool, tail_tol: f64) -> PyResult<f64> {
    let spec = WeightSpec::for_sequence(parse_id(id)?).map_err(to_py)?;
    match spec.kind {
        WeightKind::MixedSum => combicoh::cb_weight_eval(x, tail_tol).map_err(to_py),
        WeightKind::DiscreteAtoms => Err(DomainError::new_err(
            "the Bell measure is atomic; use bell_atoms()",
        )),
        WeightKind::Continuous if calibrated => {
            let cfg = QuadratureConfig::default();
            let cal =
                combicoh::calibrate_constant(&spec, cfg.calibration_tol, &cfg).map_err(to_py)?;
            cal.spec.eval(x).map_err(to_py)
        }
        WeightKind::Continuous => spec.eval(x).map_err(to_py),
    }
}

/// `[(k, mass)]` for the Bell measure, starting with the origin atom.
#[pyfunction]
#[pyo3(signature = (tail_tol = 1e-13, n_max = 10))]
fn bell_atoms(tail_tol: f64, n_max: u32) -> PyResult<Vec<(u32, f64)>> {
    let list = combicoh::bell_atoms(tail_tol, n_max).map_err(to_py)?;
    let mut out = vec![(0, list.origin_mass)];
    out.extend(list.atoms.iter().map(|a| (a.location, a.mass)));
    Ok(out)
}

/// The n-th moment of the weight and the scheme that produced it.
#[pyfunction]
#[pyo3(signature = (id, n, rel_tol = 1e-10, scheme = None))]
fn moment(id: &str, n: u32, rel_tol: f64, scheme: Option<&str>) -> PyResult<(f64, String)> {
    let spec = WeightSpec::for_sequence(parse_id(id)?).map_err(to_py)?;
    moment_with_scheme(&spec, n, &config(rel_tol, scheme)?).map_err(to_py)
}

type Row<'py> = (u32, Bound<'py, PyAny>, f64, f64, String);

#[pyclass(name = "MomentReport", module = "combicoh", frozen)]
struct PyMomentReport(combicoh::MomentReport);

#[pymethods]
impl PyMomentReport {
    #[getter]
    fn id(&self) -> String {
        self.0.id.to_string()
    }

    #[getter]
    fn max_relative_error(&self) -> f64 {
        self.0.max_relative_error
    }

    #[getter]
    fn calibration_ratio(&self) -> f64 {
        self.0.calibration_ratio
    }

    #[getter]
    fn notes(&self) -> Vec<String> {
        self.0.notes.clone()
    }

    /// `[(n, exact, numeric, relative_error, scheme)]`
    #[getter]
    fn rows<'py>(&self, py: Python<'py>) -> PyResult<Vec<Row<'py>>> {
        self.0
            .rows
            .iter()
            .map(|r| {
                Ok((
                    r.n,
                    exact(py, &r.exact)?,
                    r.numeric,
                    r.relative_error,
                    r.scheme.clone(),
                ))
            })
            .collect()
    }

    fn passes(&self, tolerance: f64) -> bool {
        self.0.passes(tolerance)
    }

    fn to_json(&self) -> String {
        report::to_json(&self.0)
    }

    fn to_text(&self) -> String {
        report::to_text(&self.0)
    }

    fn to_csv(&self) -> String {
        report::to_csv(&self.0)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        report::from_json(text).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        report::from_text(text).map(Self).map_err(to_py)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!(
            "MomentReport(id='{}', rows={}, max_relative_error={:e}, calibration_ratio={})",
            self.0.id,
            self.0.rows.len(),
            self.0.max_relative_error,
            self.0.calibration_ratio
        )
    }
}

/// Compares moments 0..=n_max of the weight with the exact sequence.
#[pyfunction]
#[pyo3(signature = (id, n_max = 10, rel_tol = 1e-10, scheme = None))]
fn verify(
    py: Python<'_>,
    id: &str,
    n_max: u32,
    rel_tol: f64,
    scheme: Option<&str>,
) -> PyResult<PyMomentReport> {
    let spec = WeightSpec::for_sequence(parse_id(id)?).map_err(to_py)?;
    let cfg = config(rel_tol, scheme)?;
    py.detach(|| combicoh::verify_moments(&spec, n_max, &cfg))
        .map(PyMomentReport)
        .map_err(to_py)
}

/// N(x) = Σ xⁿ/c(n).
#[pyfunction]
#[pyo3(signature = (id, x, tol = 1e-12))]
fn normalization(id: &str, x: f64, tol: f64) -> PyResult<f64> {
    combicoh::normalization(parse_id(id)?, x, tol).map_err(to_py)
}

/// ⟨z|w⟩.
#[pyfunction]
#[pyo3(signature = (id, z, w, tol = 1e-12))]
fn overlap(id: &str, z: Complex64, w: Complex64, tol: f64) -> PyResult<Complex64> {
    combicoh::overlap(parse_id(id)?, z, w, tol).map_err(to_py)
}

#[pyclass(name = "StateVector", module = "combicoh", frozen)]
struct PyStateVector(combicoh::StateVector);

#[pymethods]
impl PyStateVector {
    #[getter]
    fn amplitudes(&self) -> Vec<Complex64> {
        self.0.amplitudes.clone()
    }

    #[getter]
    fn truncation_mass(&self) -> f64 {
        self.0.truncation_mass
    }

    #[getter]
    fn normalization(&self) -> f64 {
        self.0.normalization
    }

    fn probabilities(&self) -> Vec<f64> {
        self.0.probabilities()
    }

    fn __len__(&self) -> usize {
        self.0.amplitudes.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "StateVector(n_max={}, truncation_mass={:e})",
            self.0.n_max(),
            self.0.truncation_mass
        )
    }
}

/// Amplitudes of |z⟩; the order grows past n_max until the omitted
/// probability is below tol.
#[pyfunction]
#[pyo3(signature = (id, z, n_max = 10, tol = 1e-12))]
fn state(id: &str, z: Complex64, n_max: u32, tol: f64) -> PyResult<PyStateVector> {
    let params = combicoh::StateParams {
        id: parse_id(id)?,
        z,
        n_max,
        series_tol: tol,
    };
    combicoh::state_coefficients(&params)
        .map(PyStateVector)
        .map_err(to_py)
}

#[pymodule]
#[pyo3(name = "combicoh")]
fn combicoh_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("DomainError", py.get_type::<DomainError>())?;
    m.add("NumericalError", py.get_type::<NumericalError>())?;
    m.add("REPORT_FORMAT", report::FORMAT_VERSION)?;
    m.add_class::<PyMomentReport>()?;
    m.add_class::<PyStateVector>()?;
    m.add_function(wrap_pyfunction!(sequence, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(radius, m)?)?;
    m.add_function(wrap_pyfunction!(weight, m)?)?;
    m.add_function(wrap_pyfunction!(bell_atoms, m)?)?;
    m.add_function(wrap_pyfunction!(moment, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(normalization, m)?)?;
    m.add_function(wrap_pyfunction!(overlap, m)?)?;
    m.add_function(wrap_pyfunction!(state, m)?)?;
    Ok(())
}
