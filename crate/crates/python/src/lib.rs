use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use layerpot_core::harness::{self, ErrorRecord, PointSpec, SweepConfig};
use layerpot_core::{self as core, Approximation, ProductRule, SurfaceDomain, Target, Vec3};

fn to_py_err(e: core::Error) -> PyErr {
    match e {
        core::Error::Io { .. } | core::Error::Csv { .. } => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn vec3(p: [f64; 3]) -> Vec3 {
    Vec3(p)
}

/// One of the benchmark surfaces: "sphere", "peanut" or "mushroom".
#[pyclass(name = "Domain", frozen)]
struct PyDomain {
    inner: SurfaceDomain,
}

#[pymethods]
impl PyDomain {
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        let kind = name.parse().map_err(to_py_err)?;
        Ok(PyDomain { inner: SurfaceDomain::new(kind) })
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.inner.name()
    }

    #[getter]
    fn ell(&self) -> f64 {
        self.inner.ell
    }

    fn radial_profile(&self, theta: f64) -> (f64, f64) {
        self.inner.radial_profile(theta)
    }

    fn parameterize(&self, theta: f64, phi: f64) -> [f64; 3] {
        self.inner.parameterize(theta, phi).0
    }

    /// Returns (position, normal, jacobian).
    fn surface_frame(&self, theta: f64, phi: f64) -> PyResult<([f64; 3], [f64; 3], f64)> {
        let f = self.inner.surface_frame(theta, phi).map_err(to_py_err)?;
        Ok((f.position.0, f.normal.0, f.jacobian))
    }

    fn inverse_parameterize(&self, p: [f64; 3]) -> PyResult<(f64, f64)> {
        self.inner.inverse_parameterize(vec3(p)).map_err(to_py_err)
    }

    /// Returns (theta, phi, eps) of the nearest boundary point.
    fn closest_boundary_point(&self, x: [f64; 3]) -> PyResult<(f64, f64, f64)> {
        let (y, eps) = self.inner.closest_boundary_point(vec3(x)).map_err(to_py_err)?;
        Ok((y.theta, y.phi, eps))
    }

    fn contains(&self, x: [f64; 3]) -> bool {
        self.inner.contains(vec3(x))
    }

    fn __repr__(&self) -> String {
        format!("Domain('{}')", self.inner.name())
    }
}

#[pyfunction]
fn gauss_legendre(n: usize) -> PyResult<(Vec<f64>, Vec<f64>)> {
    core::gauss_legendre(n).map_err(to_py_err)
}

#[pyfunction]
fn rotation_matrix(theta_star: f64, phi_star: f64) -> [[f64; 3]; 3] {
    core::rotation_matrix(theta_star, phi_star).matrix
}

#[pyfunction]
fn rotated_angles(s: f64, t: f64, theta_star: f64, phi_star: f64) -> (f64, f64) {
    core::rotated_angles(s, t, theta_star, phi_star)
}

#[pyfunction]
fn exact_solution(x: [f64; 3]) -> f64 {
    core::exact_solution(vec3(x))
}

#[pyfunction]
fn sphere_kernel_oracles(s: f64, eps: f64) -> (f64, f64) {
    core::sphere_kernel_oracles(s, eps)
}

/// Evaluates approximation 1, 2 or 3 with the exact-solution densities at
/// `x = y(theta_star, phi_star) - eps * ell * n`. Returns (u_numeric, u_exact).
#[pyfunction]
#[pyo3(signature = (domain, approx, theta_star, phi_star, eps, n = 128))]
fn evaluate(domain: &PyDomain, approx: u8, theta_star: f64, phi_star: f64, eps: f64, n: usize) -> PyResult<(f64, f64)> {
    let approx = Approximation::from_index(approx).map_err(to_py_err)?;
    let rule = ProductRule::cached(n).map_err(to_py_err)?;
    let target = Target::on_domain(&domain.inner, theta_star, phi_star, eps).map_err(to_py_err)?;
    let densities = core::densities_from_exact(&domain.inner);
    let u = approx.evaluate(&domain.inner, &densities, &target, &rule).map_err(to_py_err)?;
    Ok((u, core::exact_solution(target.x)))
}

#[pyfunction]
#[pyo3(signature = (domain, x, n = 64, frame = None))]
fn gauss_law(domain: &PyDomain, x: [f64; 3], n: usize, frame: Option<(f64, f64)>) -> PyResult<f64> {
    let rule = ProductRule::cached(n).map_err(to_py_err)?;
    Ok(core::gauss_law_check(&domain.inner, vec3(x), &rule, frame))
}

fn record_dict<'py>(py: Python<'py>, r: &ErrorRecord) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
    let d = pyo3::types::PyDict::new(py);
    d.set_item("domain", &r.domain)?;
    d.set_item("approx", r.approx)?;
    d.set_item("n", r.n)?;
    d.set_item("eps", r.eps)?;
    d.set_item("point_id", &r.point_id)?;
    d.set_item("theta_star", r.theta_star)?;
    d.set_item("phi_star", r.phi_star)?;
    d.set_item("u_exact", r.u_exact)?;
    d.set_item("u_numeric", r.u_numeric)?;
    d.set_item("abs_error", r.abs_error)?;
    d.set_item("log10_error", r.log10_error)?;
    Ok(d)
}

/// ε-sweep at the labelled points A, B, C of `domain`; returns a list of dicts.
#[pyfunction]
#[pyo3(signature = (domain, approx, eps_values, n = 128, out = None))]
fn epsilon_sweep<'py>(
    py: Python<'py>,
    domain: &PyDomain,
    approx: u8,
    eps_values: Vec<f64>,
    n: usize,
    out: Option<std::path::PathBuf>,
) -> PyResult<Vec<Bound<'py, pyo3::types::PyDict>>> {
    let approx = Approximation::from_index(approx).map_err(to_py_err)?;
    let mut config = SweepConfig::with_defaults(domain.inner, approx);
    config.n_values = vec![n];
    config.eps_values = eps_values;
    config.output_path = out.clone();
    let records = py.detach(|| harness::run_epsilon_sweep(&config)).map_err(to_py_err)?;
    if let Some(path) = out {
        harness::write_csv(&records, &path).map_err(to_py_err)?;
    }
    records.iter().map(|r| record_dict(py, r)).collect()
}

/// ε-sweep at explicit (theta, phi) boundary points.
#[pyfunction]
#[pyo3(signature = (domain, approx, eps_values, points, n = 128))]
fn epsilon_sweep_at<'py>(
    py: Python<'py>,
    domain: &PyDomain,
    approx: u8,
    eps_values: Vec<f64>,
    points: Vec<(f64, f64)>,
    n: usize,
) -> PyResult<Vec<Bound<'py, pyo3::types::PyDict>>> {
    let approx = Approximation::from_index(approx).map_err(to_py_err)?;
    let mut config = SweepConfig::with_defaults(domain.inner, approx);
    config.n_values = vec![n];
    config.eps_values = eps_values;
    config.points = points
        .into_iter()
        .enumerate()
        .map(|(i, (theta, phi))| PointSpec::Angles { id: format!("q{i}"), theta, phi })
        .collect();
    let records = py.detach(|| harness::run_epsilon_sweep(&config)).map_err(to_py_err)?;
    records.iter().map(|r| record_dict(py, r)).collect()
}

#[pyfunction]
#[pyo3(signature = (eps_values, errors, floor = 1e-13))]
fn fit_slope(eps_values: Vec<f64>, errors: Vec<f64>, floor: f64) -> PyResult<f64> {
    harness::fit_slope(&eps_values, &errors, floor).map_err(to_py_err)
}

#[pymodule]
fn layerpot(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDomain>()?;
    m.add_function(wrap_pyfunction!(gauss_legendre, m)?)?;
    m.add_function(wrap_pyfunction!(rotation_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(rotated_angles, m)?)?;
    m.add_function(wrap_pyfunction!(exact_solution, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_kernel_oracles, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_law, m)?)?;
    m.add_function(wrap_pyfunction!(epsilon_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(epsilon_sweep_at, m)?)?;
    m.add_function(wrap_pyfunction!(fit_slope, m)?)?;
    m.add("CSV_HEADER", harness::CSV_HEADER.join(","))?;
    Ok(())
}
