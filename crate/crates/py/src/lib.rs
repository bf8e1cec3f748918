use std::collections::BTreeMap;
use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use wspec::cli::ReportJson;
use wspec::construct::{self, ConstructionReport};
use wspec::lincode::{self, GeneratorMatrix};
use wspec::oracle::{self, SearchOptions};
use wspec::{Error, FieldElement};

create_exception!(pywspec, BudgetExceeded, PyRuntimeError);

fn to_py(err: Error) -> PyErr {
    match err {
        Error::BudgetExceeded { .. } => BudgetExceeded::new_err(err.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Galois field GF(q).
#[pyclass(name = "Field", frozen)]
struct PyField {
    inner: Arc<wspec::FieldSpec>,
}

#[pymethods]
impl PyField {
    #[new]
    fn new(q: u64) -> PyResult<Self> {
        Ok(PyField { inner: Arc::new(wspec::FieldSpec::with_order(q).map_err(to_py)?) })
    }

    #[getter]
    fn order(&self) -> u64 {
        self.inner.order()
    }

    #[getter]
    fn characteristic(&self) -> u64 {
        self.inner.characteristic()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    fn add(&self, a: u16, b: u16) -> PyResult<u16> {
        let (a, b) = (self.element(a)?, self.element(b)?);
        Ok(self.inner.add(a, b).0)
    }

    fn mul(&self, a: u16, b: u16) -> PyResult<u16> {
        let (a, b) = (self.element(a)?, self.element(b)?);
        Ok(self.inner.mul(a, b).0)
    }

    fn inv(&self, a: u16) -> PyResult<u16> {
        let a = self.element(a)?;
        Ok(self.inner.inv(a).map_err(to_py)?.0)
    }

    fn __repr__(&self) -> String {
        format!("Field({})", self.inner.order())
    }
}

impl PyField {
    fn element(&self, a: u16) -> PyResult<FieldElement> {
        self.inner.element(a as u64).map_err(to_py)
    }
}

/// Multiset of points of PG(k-1, q), indexed by canonical point id.
#[pyclass(name = "ProjectiveSystem", frozen)]
struct PySystem {
    inner: wspec::ProjectiveSystem,
}

#[pymethods]
impl PySystem {
    #[new]
    fn new(q: u64, k: usize, multiplicities: Vec<u64>) -> PyResult<Self> {
        let geom = wspec::GeometrySpec::with_order(q, k).map_err(to_py)?;
        Ok(PySystem { inner: wspec::ProjectiveSystem::new(geom, multiplicities).map_err(to_py)? })
    }

    /// Builds the system of the columns of a generator matrix given as
    /// rows of element indices.
    #[staticmethod]
    fn from_matrix(q: u64, rows: Vec<Vec<u64>>) -> PyResult<Self> {
        let g = matrix(q, &rows)?;
        Ok(PySystem { inner: wspec::ProjectiveSystem::from_generator_matrix(&g).map_err(to_py)? })
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q()
    }

    #[getter]
    fn multiplicities(&self) -> Vec<u64> {
        self.inner.multiplicities().to_vec()
    }

    fn point(&self, id: usize) -> PyResult<Vec<u16>> {
        let geom = self.inner.geometry();
        if id >= geom.num_points() {
            return Err(PyValueError::new_err(format!("point id {id} out of range")));
        }
        Ok(geom.coords(wspec::Point(id)).iter().map(|e| e.0).collect())
    }

    fn is_spanning(&self) -> bool {
        self.inner.is_spanning()
    }

    fn effective_dimension(&self) -> usize {
        self.inner.effective_dimension()
    }

    fn hyperplane_characters(&self) -> Vec<u64> {
        self.inner.hyperplane_characters()
    }

    /// Weight -> number of nonzero codewords of that weight.
    fn spectrum(&self) -> BTreeMap<u64, u64> {
        self.inner.effective_spectrum().counts().clone()
    }

    fn weights(&self) -> Vec<u64> {
        self.inner.nonzero_weight_set().into_iter().collect()
    }

    fn min_distance(&self) -> PyResult<u64> {
        self.inner.min_distance().map_err(to_py)
    }

    fn generator_matrix(&self) -> Vec<Vec<u16>> {
        let g = self.inner.column_matrix();
        (0..g.k()).map(|i| g.row(i).iter().map(|e| e.0).collect()).collect()
    }

    fn __repr__(&self) -> String {
        format!("ProjectiveSystem(q={}, k={}, n={})", self.inner.q(), self.inner.k(), self.inner.n())
    }
}

fn matrix(q: u64, rows: &[Vec<u64>]) -> PyResult<GeneratorMatrix> {
    let field = Arc::new(wspec::FieldSpec::with_order(q).map_err(to_py)?);
    GeneratorMatrix::from_indices(field, rows).map_err(to_py)
}

/// Output of one of the constructions.
#[pyclass(name = "Construction", frozen)]
struct PyConstruction {
    inner: ConstructionReport,
}

#[pymethods]
impl PyConstruction {
    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.name()
    }

    #[getter]
    fn predicted(&self) -> u64 {
        self.inner.predicted_distinct
    }

    #[getter]
    fn achieved(&self) -> u64 {
        self.inner.achieved_distinct
    }

    #[getter]
    fn effective_dimension(&self) -> usize {
        self.inner.effective_dimension
    }

    #[getter]
    fn system(&self) -> PySystem {
        PySystem { inner: self.inner.system.clone() }
    }

    fn to_json(&self) -> String {
        ReportJson::from_construction(&self.inner).to_json()
    }

    fn __repr__(&self) -> String {
        format!(
            "Construction({}, n={}, achieved={}, predicted={})",
            self.inner.kind.name(),
            self.inner.system.n(),
            self.inner.achieved_distinct,
            self.inner.predicted_distinct
        )
    }
}

fn wrap(report: wspec::Result<ConstructionReport>) -> PyResult<PyConstruction> {
    report.map(|inner| PyConstruction { inner }).map_err(to_py)
}

#[pyfunction]
fn fws(n: u64, k: usize, q: u64) -> PyResult<PyConstruction> {
    wrap(construct::fws(n, k, q))
}

#[pyfunction]
fn mws(k: usize, q: u64) -> PyResult<PyConstruction> {
    wrap(construct::mws(k, q))
}

#[pyfunction]
fn dim2(n: u64, q: u64) -> PyResult<PyConstruction> {
    wrap(construct::dim2(n, q))
}

#[pyfunction]
fn arc_bound(n: u64, k: usize, q: u64) -> PyResult<PyConstruction> {
    wrap(construct::arc_bound(n, k, q))
}

#[pyfunction]
fn hyperoval_bound(n: u64, q: u64) -> PyResult<PyConstruction> {
    wrap(construct::hyperoval_bound(n, q))
}

/// Weight distribution of the row space of a generator matrix by
/// enumerating every codeword.
#[pyfunction]
fn codeword_spectrum(q: u64, rows: Vec<Vec<u64>>) -> PyResult<BTreeMap<u64, u64>> {
    let g = matrix(q, &rows)?;
    let spec = lincode::row_space_spectrum(&g, lincode::DEFAULT_CODEWORD_BUDGET).map_err(to_py)?;
    Ok(spec.counts().clone())
}

fn options(budget: Option<u128>, workers: Option<usize>) -> SearchOptions {
    SearchOptions { budget: budget.unwrap_or_else(oracle::budget_from_env), workers, ..SearchOptions::default() }
}

/// Exact maximum number of distinct nonzero weights of an [n, k]_q code,
/// returned as a JSON report.
#[pyfunction]
#[pyo3(signature = (n, k, q, budget=None, workers=None))]
fn max_distinct_weights(py: Python<'_>, n: u64, k: usize, q: u64, budget: Option<u128>, workers: Option<usize>) -> PyResult<String> {
    let geom = wspec::GeometrySpec::with_order(q, k).map_err(to_py)?;
    let opts = options(budget, workers);
    let result = py.detach(|| oracle::max_distinct_weights_with(&geom, n, &opts)).map_err(to_py)?;
    Ok(ReportJson::from_search(&result).to_json())
}

#[pyfunction]
fn fws_exists(py: Python<'_>, n: u64, k: usize, q: u64) -> PyResult<bool> {
    py.detach(|| oracle::fws_exists(n, k, q)).map_err(to_py)
}

/// `[(n, L(n, k, q) or None)]` for `n` in `n_from..=n_to`.
#[pyfunction]
#[pyo3(signature = (q, k, n_from, n_to, budget=None))]
fn l_table(py: Python<'_>, q: u64, k: usize, n_from: u64, n_to: u64, budget: Option<u128>) -> PyResult<Vec<(u64, Option<u64>)>> {
    let opts = options(budget, None);
    let table = py.detach(|| oracle::build_l_table(q, k, n_from..=n_to, &opts)).map_err(to_py)?;
    Ok(table.rows.iter().map(|r| (r.n, r.max_distinct)).collect())
}

#[pyfunction]
fn theta(q: u64, j: i64) -> PyResult<u64> {
    if j < -1 {
        return Err(PyValueError::new_err("theta needs j >= -1"));
    }
    Ok(wspec::theta(q, j))
}

#[pymodule]
fn pywspec(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    m.add_class::<PyField>()?;
    m.add_class::<PySystem>()?;
    m.add_class::<PyConstruction>()?;
    m.add_function(wrap_pyfunction!(fws, m)?)?;
    m.add_function(wrap_pyfunction!(mws, m)?)?;
    m.add_function(wrap_pyfunction!(dim2, m)?)?;
    m.add_function(wrap_pyfunction!(arc_bound, m)?)?;
    m.add_function(wrap_pyfunction!(hyperoval_bound, m)?)?;
    m.add_function(wrap_pyfunction!(codeword_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(max_distinct_weights, m)?)?;
    m.add_function(wrap_pyfunction!(fws_exists, m)?)?;
    m.add_function(wrap_pyfunction!(l_table, m)?)?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    Ok(())
}
