//! Python bindings: sparse vectors, the example zoo, projections and the verification harness.

pub mod api;

use fejerlab::verify::claims_for;
use fejerlab::zoo::{ExampleId, ExampleSpec};
use fejerlab::{LabConfig, LabError, Vector};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::Value;

fn py_err(e: LabError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    PyModule::import(py, "json")?.call_method1("loads", (v.to_string(),))
}

fn config(horizon: Option<usize>, jobs: Option<usize>) -> PyResult<LabConfig> {
    let mut cfg = LabConfig::default();
    if let Some(h) = horizon {
        cfg.horizon = h;
    }
    if let Some(j) = jobs {
        cfg.jobs = j;
    }
    cfg.validate().map_err(py_err)?;
    Ok(cfg)
}

/// Finitely supported vector of ℓ².
#[pyclass(name = "Vector", module = "fejerlab_py", skip_from_py_object)]
#[derive(Clone)]
struct PyVector(Vector);

#[pymethods]
impl PyVector {
    #[new]
    fn new(values: Vec<f64>) -> PyResult<Self> {
        api::dense(&values).map(PyVector).map_err(py_err)
    }

    #[staticmethod]
    fn basis(i: usize) -> Self {
        PyVector(Vector::basis(i))
    }

    #[staticmethod]
    fn from_parts(idx: Vec<usize>, val: Vec<f64>) -> PyResult<Self> {
        Vector::from_parts(idx, val).map(PyVector).map_err(py_err)
    }

    fn inner(&self, other: &PyVector) -> f64 {
        self.0.inner(&other.0)
    }

    fn norm(&self) -> f64 {
        self.0.norm()
    }

    fn dist(&self, other: &PyVector) -> f64 {
        self.0.dist(&other.0)
    }

    fn unit(&self) -> PyResult<Self> {
        self.0.unit().map(PyVector).map_err(py_err)
    }

    #[pyo3(signature = (width = None))]
    fn to_dense(&self, width: Option<usize>) -> Vec<f64> {
        self.0.to_dense(width.unwrap_or(self.0.width()))
    }

    fn entries(&self) -> Vec<(usize, f64)> {
        self.0.entries().collect()
    }

    fn __add__(&self, other: &PyVector) -> Self {
        PyVector(self.0.add(&other.0))
    }

    fn __sub__(&self, other: &PyVector) -> Self {
        PyVector(self.0.sub(&other.0))
    }

    fn __mul__(&self, alpha: f64) -> Self {
        PyVector(self.0.scale(alpha))
    }

    fn __rmul__(&self, alpha: f64) -> Self {
        PyVector(self.0.scale(alpha))
    }

    fn __eq__(&self, other: &PyVector) -> bool {
        self.0 == other.0
    }

    fn __len__(&self) -> usize {
        self.0.width()
    }

    fn __repr__(&self) -> String {
        format!("Vector({})", self.0)
    }
}

/// One example of the zoo: generator plus analytic record.
#[pyclass(name = "Example", module = "fejerlab_py")]
struct PyExample(ExampleSpec);

#[pymethods]
impl PyExample {
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        api::example(name).map(PyExample).map_err(py_err)
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.0.id.name()
    }

    #[getter]
    fn planar(&self) -> bool {
        self.0.id.is_planar()
    }

    #[getter]
    fn limit(&self) -> Option<PyVector> {
        self.0.analytic.limit.clone().map(PyVector)
    }

    fn term(&self, n: usize) -> PyVector {
        PyVector(self.0.term(n))
    }

    /// The first `n` terms as dense rows of a common width.
    fn terms(&self, n: usize) -> Vec<Vec<f64>> {
        let terms = self.0.terms(n);
        let width = terms.iter().map(Vector::width).max().unwrap_or(1).max(1);
        terms.iter().map(|x| x.to_dense(width)).collect()
    }

    fn claims(&self) -> Vec<(&'static str, &'static str)> {
        claims_for(self.0.id)
            .into_iter()
            .map(|c| (c.id, c.anchor))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("Example({})", self.0.id.name())
    }
}

#[pyfunction]
fn examples() -> Vec<&'static str> {
    ExampleId::ALL.iter().map(|id| id.name()).collect()
}

/// Metric projection onto a closed convex set given as Region JSON.
#[pyfunction]
fn project(region_json: &str, point: Vec<f64>) -> PyResult<Vec<f64>> {
    api::project(region_json, &point).map_err(py_err)
}

#[pyfunction]
fn distance(region_json: &str, point: Vec<f64>) -> PyResult<f64> {
    api::distance(region_json, &point).map_err(py_err)
}

/// `(p, q)` with `p = P_K(x)`, `q = P_{K°}(x)` for `K` generated by the given vectors.
#[pyfunction]
fn moreau_split(generators: Vec<Vec<f64>>, point: Vec<f64>) -> PyResult<(Vec<f64>, Vec<f64>)> {
    api::moreau(&generators, &point).map_err(py_err)
}

/// `(eps1, eps2)` of an example at step `n` and point `y`.
#[pyfunction]
fn tolerances(example: &str, n: usize, y: Vec<f64>) -> PyResult<(f64, f64)> {
    api::tolerances(example, n, &y).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (example, y, horizon = 64))]
fn liminf_membership<'py>(
    py: Python<'py>,
    example: &str,
    y: Vec<f64>,
    horizon: usize,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &api::membership(example, &y, horizon).map_err(py_err)?)
}

#[pyfunction]
#[pyo3(signature = (example, points, horizon = 64))]
fn classify<'py>(
    py: Python<'py>,
    example: &str,
    points: Vec<Vec<f64>>,
    horizon: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = config(Some(horizon), None)?;
    let v = py
        .detach(|| api::classify_points(example, &points, horizon, &cfg))
        .map_err(py_err)?;
    to_py(py, &v)
}

#[pyfunction]
#[pyo3(signature = (example, start = 0, horizon = 64))]
fn maximal_set_2d<'py>(
    py: Python<'py>,
    example: &str,
    start: usize,
    horizon: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = config(None, None)?;
    to_py(
        py,
        &api::maximal_set_grid(example, start, horizon, &cfg).map_err(py_err)?,
    )
}

/// Runs the registered claims of one example, or of all of them for `"all"`.
#[pyfunction]
#[pyo3(signature = (target = "all", jobs = None))]
fn verify<'py>(py: Python<'py>, target: &str, jobs: Option<usize>) -> PyResult<Bound<'py, PyAny>> {
    let cfg = config(None, jobs)?;
    let v = py.detach(|| api::verify(target, &cfg)).map_err(py_err)?;
    to_py(py, &v)
}

#[pymodule]
fn fejerlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyVector>()?;
    m.add_class::<PyExample>()?;
    m.add_function(wrap_pyfunction!(examples, m)?)?;
    m.add_function(wrap_pyfunction!(project, m)?)?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(moreau_split, m)?)?;
    m.add_function(wrap_pyfunction!(tolerances, m)?)?;
    m.add_function(wrap_pyfunction!(liminf_membership, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(maximal_set_2d, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
