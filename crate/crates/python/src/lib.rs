//! Python bindings. Matrices are built from nested lists whose entries are
//! ints, `fractions.Fraction`s or strings like `"-3/4"`. Structured results
//! come back as plain dicts and lists; big counts come back as Python ints.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyList;

use rado_core::counting::{self, DiagonalSystem};
use rado_core::lab::bohr::{self, BohrSpec};
use rado_core::lab::coloring::{self, ColoringOptions, SolutionFilter};
use rado_core::lab::wtrick;
use rado_core::linalg::{self, parse_rational};
use rado_core::{matroid, structure, ErrorKind, RationalMatrix};

create_exception!(rado, BudgetExceeded, PyRuntimeError);
create_exception!(rado, InvariantViolation, PyRuntimeError);

fn err(e: rado_core::Error) -> PyErr {
    match e.kind() {
        ErrorKind::InvalidInput => PyValueError::new_err(e.to_string()),
        ErrorKind::Budget => BudgetExceeded::new_err(e.to_string()),
        ErrorKind::Invariant => InvariantViolation::new_err(e.to_string()),
    }
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn big_int<'py>(py: Python<'py>, digits: String) -> PyResult<Bound<'py, PyAny>> {
    py.import("builtins")?.getattr("int")?.call1((digits,))
}

#[pyclass(name = "Matrix", module = "rado", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct Matrix {
    inner: RationalMatrix,
}

#[pymethods]
impl Matrix {
    #[new]
    #[pyo3(signature = (rows, cols = None))]
    fn new(rows: Vec<Vec<Bound<'_, PyAny>>>, cols: Option<usize>) -> PyResult<Self> {
        let parsed = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| parse_rational(&e.str()?.to_string()).map_err(err))
                    .collect::<PyResult<Vec<_>>>()
            })
            .collect::<PyResult<Vec<_>>>()?;
        let c = cols.or_else(|| parsed.first().map(Vec::len)).unwrap_or(0);
        Ok(Matrix { inner: RationalMatrix::from_rational_rows(parsed, c).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Matrix { inner })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("matrix serializes")
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.inner.rows(), self.inner.cols())
    }

    /// Entries as strings, row by row.
    fn entries(&self) -> Vec<Vec<String>> {
        self.inner.to_rows().iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect()
    }

    fn rank(&self) -> usize {
        linalg::rank(&self.inner)
    }

    fn transpose(&self) -> Matrix {
        Matrix { inner: self.inner.transpose() }
    }

    /// `(reduced matrix, pivot columns)`.
    fn rref(&self) -> (Matrix, Vec<usize>) {
        let r = linalg::rref(&self.inner);
        (Matrix { inner: r.matrix }, r.pivots)
    }

    /// Primitive integer kernel basis.
    fn kernel<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let basis = linalg::kernel_basis(&self.inner).integral();
        let out = PyList::empty(py);
        for v in basis {
            let row = PyList::empty(py);
            for e in v {
                row.append(big_int(py, e.to_string())?)?;
            }
            out.append(row)?;
        }
        Ok(out)
    }

    fn __repr__(&self) -> String {
        format!("Matrix({:?})", self.entries())
    }
}

#[pyfunction]
fn mu_profile(m: PyRef<'_, Matrix>) -> PyResult<Vec<usize>> {
    Ok(matroid::mu_profile(&m.inner).map_err(err)?.values)
}

#[pyfunction]
fn q_profile(m: PyRef<'_, Matrix>) -> PyResult<Vec<usize>> {
    Ok(matroid::q_profile(&m.inner).map_err(err)?.values)
}

#[pyfunction]
fn condition_i<'py>(py: Python<'py>, m: PyRef<'_, Matrix>, k: u32) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &matroid::check_condition_i(&m.inner, k).map_err(err)?)
}

#[pyfunction]
fn partition<'py>(py: Python<'py>, m: PyRef<'_, Matrix>, k: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &matroid::partition_report(&m.inner, k).map_err(err)?)
}

#[pyfunction]
fn quasi<'py>(py: Python<'py>, m: PyRef<'_, Matrix>, q: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &matroid::is_quasi_partitionable(&m.inner, q).map_err(err)?)
}

/// Certificate dict, or `None` when the columns condition fails.
#[pyfunction]
fn columns_condition<'py>(py: Python<'py>, m: PyRef<'_, Matrix>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &structure::check_columns_condition(&m.inner).map_err(err)?)
}

#[pyfunction]
fn normal_form<'py>(py: Python<'py>, m: PyRef<'_, Matrix>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &structure::to_normal_form(&m.inner).map_err(err)?)
}

#[pyfunction]
fn decompose<'py>(py: Python<'py>, m: PyRef<'_, Matrix>, q: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &structure::decompose_quasi(&m.inner, q).map_err(err)?)
}

fn system(m: &Matrix, k: u32) -> PyResult<DiagonalSystem> {
    DiagonalSystem::new(m.inner.clone(), k).map_err(err)
}

/// `{"total", "trivial", "nontrivial"}` over `[n]^s`.
#[pyfunction]
fn count_solutions<'py>(py: Python<'py>, m: PyRef<'_, Matrix>, k: u32, n: u64) -> PyResult<Bound<'py, PyAny>> {
    let sys = system(&m, k)?;
    let c = py.detach(|| counting::count_solutions(&sys, n, None)).map_err(err)?.counts;
    let out = pyo3::types::PyDict::new(py);
    out.set_item("total", big_int(py, c.total.to_string())?)?;
    out.set_item("trivial", big_int(py, c.trivial.to_string())?)?;
    out.set_item("nontrivial", big_int(py, c.nontrivial.to_string())?)?;
    Ok(out.into_any())
}

/// Solutions with `x_u = x_v` (0-based, `u < v`).
#[pyfunction]
fn count_trivial_pair<'py>(py: Python<'py>, m: PyRef<'_, Matrix>, k: u32, n: u64, u: usize, v: usize) -> PyResult<Bound<'py, PyAny>> {
    let sys = system(&m, k)?;
    big_int(py, counting::count_trivial_pair(&sys, n, u, v).map_err(err)?.to_string())
}

#[pyfunction]
fn mean_value(py: Python<'_>, k: u32, t: u32, n: u64) -> PyResult<Bound<'_, PyAny>> {
    let v = py.detach(|| counting::mean_value(k, t, n)).map_err(err)?.value;
    big_int(py, v.to_string())
}

/// Colors of `1..=n` (one entry per integer), or `None` if every
/// `r`-coloring has a monochromatic solution.
#[pyfunction]
#[pyo3(signature = (m, k, n, r = 2, filter = "non-constant"))]
fn find_bad_coloring(m: PyRef<'_, Matrix>, k: u32, n: u64, r: u32, filter: &str) -> PyResult<Option<Vec<u32>>> {
    let filter = match filter {
        "non-constant" => SolutionFilter::NonConstant,
        "pairwise-distinct" => SolutionFilter::PairwiseDistinct,
        "all" => SolutionFilter::All,
        other => return Err(PyValueError::new_err(format!("unknown filter {other:?}"))),
    };
    let sys = system(&m, k)?;
    let opts = ColoringOptions { filter, ..Default::default() };
    let found = coloring::find_bad_coloring_with(&sys, n, r, opts).map_err(err)?.coloring;
    Ok(found.map(|c| (1..=n).map(|x| c.color(x)).collect()))
}

#[pyfunction]
fn bohr_set(h: u32, phases: Vec<String>, rho: &str, n: u64) -> PyResult<Vec<u64>> {
    let phases = phases.iter().map(|p| parse_rational(p)).collect::<Result<Vec<_>, _>>().map_err(err)?;
    let spec = BohrSpec::new(h, phases, parse_rational(rho).map_err(err)?).map_err(err)?;
    Ok(bohr::bohr_set(&spec, n))
}

#[pyfunction]
#[pyo3(signature = (k, w, n, zeta = 1, xi = 1))]
fn w_params<'py>(py: Python<'py>, k: u32, w: u64, n: u64, zeta: u64, xi: u64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &wtrick::w_params(k, w, n, zeta, xi).map_err(err)?)
}

#[pymodule]
fn rado(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Matrix>()?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    m.add("InvariantViolation", m.py().get_type::<InvariantViolation>())?;
    m.add_function(wrap_pyfunction!(mu_profile, m)?)?;
    m.add_function(wrap_pyfunction!(q_profile, m)?)?;
    m.add_function(wrap_pyfunction!(condition_i, m)?)?;
    m.add_function(wrap_pyfunction!(partition, m)?)?;
    m.add_function(wrap_pyfunction!(quasi, m)?)?;
    m.add_function(wrap_pyfunction!(columns_condition, m)?)?;
    m.add_function(wrap_pyfunction!(normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(count_solutions, m)?)?;
    m.add_function(wrap_pyfunction!(count_trivial_pair, m)?)?;
    m.add_function(wrap_pyfunction!(mean_value, m)?)?;
    m.add_function(wrap_pyfunction!(find_bad_coloring, m)?)?;
    m.add_function(wrap_pyfunction!(bohr_set, m)?)?;
    m.add_function(wrap_pyfunction!(w_params, m)?)?;
    Ok(())
}
