//! Python bindings for the Bruhat-order library.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;

use bruhatkit::enumerator::{self, Check, Prop410Mode, Verifier};
use bruhatkit::{bruhat, extremal, graphs, perm};

fn value_error(e: bruhatkit::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Parses JSON text into native Python objects.
fn to_python(py: Python<'_>, value: &serde_json::Value) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).expect("json values serialize");
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

#[pyclass(
    name = "Permutation",
    module = "bruhatkit_py",
    frozen,
    eq,
    ord,
    hash,
    str,
    skip_from_py_object
)]
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PyPermutation(perm::Permutation);

impl std::fmt::Display for PyPermutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[pymethods]
impl PyPermutation {
    /// Accepts one-line text ("3412" or "3,4,1,2") or a list of integers.
    #[new]
    fn new(word: &Bound<'_, PyAny>) -> PyResult<Self> {
        let inner = if let Ok(text) = word.extract::<String>() {
            text.parse().map_err(value_error)?
        } else {
            let entries: Vec<u8> = word.extract()?;
            perm::Permutation::new(entries).map_err(value_error)?
        };
        Ok(PyPermutation(inner))
    }

    #[staticmethod]
    fn identity(n: usize) -> PyResult<Self> {
        perm::Permutation::identity(n)
            .map(PyPermutation)
            .map_err(value_error)
    }

    #[staticmethod]
    fn longest(n: usize) -> PyResult<Self> {
        perm::Permutation::longest(n)
            .map(PyPermutation)
            .map_err(value_error)
    }

    #[staticmethod]
    fn unrank(rank: u32, n: usize) -> PyResult<Self> {
        perm::Permutation::unrank(perm::PermRank(rank), n)
            .map(PyPermutation)
            .map_err(value_error)
    }

    #[getter]
    fn word(&self) -> Vec<u32> {
        self.0.word().iter().map(|&x| u32::from(x)).collect()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    fn length(&self) -> usize {
        self.0.length()
    }

    fn rank(&self) -> u32 {
        self.0.rank().0
    }

    fn inverse(&self) -> Self {
        PyPermutation(self.0.inverse())
    }

    fn compose(&self, other: &PyPermutation) -> PyResult<Self> {
        self.0
            .compose(&other.0)
            .map(PyPermutation)
            .map_err(value_error)
    }

    /// The product with the transposition `(a b)`.
    fn right_mul(&self, a: usize, b: usize) -> PyResult<Self> {
        let t = perm::Transposition::new(a, b).map_err(value_error)?;
        self.0.right_mul(t).map(PyPermutation).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!("Permutation('{}')", self.0)
    }

    fn __len__(&self) -> usize {
        self.0.degree()
    }
}

fn pairs(labels: &bruhat::CoverLabelSet) -> Vec<(u8, u8)> {
    labels.iter().map(|t| (t.a(), t.b())).collect()
}

#[pyclass(name = "Interval", module = "bruhatkit_py", frozen)]
pub struct PyInterval(bruhat::Interval);

#[pymethods]
impl PyInterval {
    /// Raises `ValueError` unless `u <= v` in Bruhat order.
    #[new]
    fn new(u: &PyPermutation, v: &PyPermutation) -> PyResult<Self> {
        bruhat::Interval::new(u.0.clone(), v.0.clone())
            .map(PyInterval)
            .map_err(value_error)
    }

    #[getter]
    fn bottom(&self) -> PyPermutation {
        PyPermutation(self.0.bottom().clone())
    }

    #[getter]
    fn top(&self) -> PyPermutation {
        PyPermutation(self.0.top().clone())
    }

    fn atom_labels(&self) -> Vec<(u8, u8)> {
        pairs(&self.0.atom_labels())
    }

    fn coatom_labels(&self) -> Vec<(u8, u8)> {
        pairs(&self.0.coatom_labels())
    }

    fn atom_count(&self) -> usize {
        self.0.atom_count()
    }

    fn coatom_count(&self) -> usize {
        self.0.coatom_count()
    }

    fn components_equal(&self) -> bool {
        graphs::check_components_equal(&self.0)
    }

    /// Blocks of the shared component partition.
    fn components(&self) -> PyResult<Vec<Vec<u32>>> {
        let partition = graphs::common_partition(&self.0).map_err(value_error)?;
        Ok(partition
            .blocks()
            .iter()
            .map(|b| b.iter().map(|&x| u32::from(x)).collect())
            .collect())
    }

    fn component_sizes(&self) -> PyResult<Vec<usize>> {
        graphs::component_sizes(&self.0).map_err(value_error)
    }

    fn gap_bound_report(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let report = extremal::gap_bound_report(&self.0).map_err(value_error)?;
        to_python(
            py,
            &serde_json::to_value(report).expect("report serializes"),
        )
    }

    /// DOT text of the atom (`side="atom"`) or coatom graph.
    #[pyo3(signature = (side = "atom"))]
    fn graph_dot(&self, side: &str) -> PyResult<String> {
        match side {
            "atom" => Ok(graphs::atom_graph(&self.0).to_dot()),
            "coatom" => Ok(graphs::coatom_graph(&self.0).to_dot()),
            other => Err(PyValueError::new_err(format!("unknown side {other:?}"))),
        }
    }

    fn __repr__(&self) -> String {
        format!("Interval('{}', '{}')", self.0.bottom(), self.0.top())
    }
}

#[pyfunction]
fn bruhat_leq(u: &PyPermutation, v: &PyPermutation) -> PyResult<bool> {
    bruhat::bruhat_leq(&u.0, &v.0).map_err(value_error)
}

#[pyfunction]
fn is_cover(u: &PyPermutation, w: &PyPermutation) -> PyResult<bool> {
    bruhat::is_cover(&u.0, &w.0).map_err(value_error)
}

#[pyfunction]
fn f(x: u64) -> PyResult<i64> {
    extremal::f(x).map_err(value_error)
}

#[pyfunction]
fn f_delta(x: u64) -> PyResult<i64> {
    extremal::f_delta(x).map_err(value_error)
}

#[pyfunction]
fn floor_lemma_holds(k1: u64, k2: u64) -> PyResult<bool> {
    extremal::floor_lemma_holds(k1, k2).map_err(value_error)
}

#[pyfunction]
fn max_coatoms(n: usize) -> PyResult<u64> {
    extremal::max_coatoms(n).map_err(value_error)
}

#[pyfunction]
fn theorem_a_value(n: usize) -> PyResult<i64> {
    extremal::theorem_a_value(n).map_err(value_error)
}

#[pyfunction]
fn opt_top_permutations(n: usize) -> PyResult<Vec<PyPermutation>> {
    Ok(extremal::opt_top_permutations(n)
        .map_err(value_error)?
        .into_iter()
        .map(PyPermutation)
        .collect())
}

#[pyfunction]
fn is_opt_top(v: &PyPermutation) -> bool {
    extremal::is_opt_top(&v.0)
}

/// Scans every interval of `S_n`; returns the canonical scan document.
#[pyfunction]
#[pyo3(signature = (n, jobs = 1, allow_large = false))]
fn scan_max_gap(py: Python<'_>, n: usize, jobs: usize, allow_large: bool) -> PyResult<Py<PyAny>> {
    let result = py
        .detach(|| {
            let cache = enumerator::build_order_cache(n, allow_large)?;
            enumerator::scan_max_gap(&cache, jobs)
        })
        .map_err(value_error)?;
    to_python(py, &serde_json::to_value(&result).expect("scan serializes"))
}

/// Runs one named check (`a`, `b`, `p21`, `p29`, `p410`, `corollary`, `lemma`).
#[pyfunction]
#[pyo3(signature = (n, check, sample = None, seed = 1, jobs = 1, allow_large = false))]
fn verify(
    py: Python<'_>,
    n: usize,
    check: &str,
    sample: Option<u64>,
    seed: u64,
    jobs: usize,
    allow_large: bool,
) -> PyResult<Py<PyAny>> {
    let check: Check = check.parse().map_err(PyValueError::new_err)?;
    let mode = match sample {
        Some(count) => Prop410Mode::Sample { count, seed },
        None => Prop410Mode::Exhaustive,
    };
    let report = py
        .detach(|| Verifier::new(n, jobs, allow_large).run(check, mode))
        .map_err(value_error)?;
    to_python(
        py,
        &serde_json::to_value(&report).expect("report serializes"),
    )
}

#[pymodule]
pub fn bruhatkit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPermutation>()?;
    m.add_class::<PyInterval>()?;
    m.add_function(wrap_pyfunction!(bruhat_leq, m)?)?;
    m.add_function(wrap_pyfunction!(is_cover, m)?)?;
    m.add_function(wrap_pyfunction!(f, m)?)?;
    m.add_function(wrap_pyfunction!(f_delta, m)?)?;
    m.add_function(wrap_pyfunction!(floor_lemma_holds, m)?)?;
    m.add_function(wrap_pyfunction!(max_coatoms, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_a_value, m)?)?;
    m.add_function(wrap_pyfunction!(opt_top_permutations, m)?)?;
    m.add_function(wrap_pyfunction!(is_opt_top, m)?)?;
    m.add_function(wrap_pyfunction!(scan_max_gap, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
