//! Python bindings: the main types and counting routes as plain functions.
//!
//! Sets are passed as (n, elements) pairs; counts come back as Python ints
//! of arbitrary width.

use num_bigint::BigUint;
use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use circpeak::{CountTable, Error, PeakSet, Permutation};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::ScaleLimit(msg) => PyOverflowError::new_err(msg),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn peak_set(n: u32, elements: Vec<u32>) -> PyResult<PeakSet> {
    PeakSet::new(n, elements).map_err(to_py_err)
}

fn table_to_dict<'py>(py: Python<'py>, table: &CountTable) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    for (key, count) in table.iter() {
        let key_tuple = pyo3::types::PyTuple::new(py, key.elements())?;
        dict.set_item(key_tuple, count.clone())?;
    }
    Ok(dict)
}

/// Circular peak set of a permutation given in one-line notation.
#[pyfunction]
fn circular_peak_set(perm: Vec<u32>) -> PyResult<Vec<u32>> {
    let p = Permutation::new(perm).map_err(to_py_err)?;
    Ok(p.circular_peak_set().elements().to_vec())
}

/// Whether some permutation of [n] has exactly this peak set.
#[pyfunction]
fn is_feasible(n: u32, elements: Vec<u32>) -> PyResult<bool> {
    Ok(peak_set(n, elements)?.is_feasible())
}

/// Maximal runs of the set as (max, length) pairs.
#[pyfunction]
fn run_decomposition(n: u32, elements: Vec<u32>) -> PyResult<Vec<(u32, u32)>> {
    let s = peak_set(n, elements)?;
    Ok(s.run_decomposition()
        .runs()
        .iter()
        .map(|r| (r.max, r.len))
        .collect())
}

/// Order-isomorphic relabeling of the subsequence at 1-based positions.
#[pyfunction]
fn reduce_subsequence(perm: Vec<u32>, positions: Vec<u32>) -> PyResult<Vec<u32>> {
    let p = Permutation::new(perm).map_err(to_py_err)?;
    Ok(p.reduce_subsequence(&positions)
        .map_err(to_py_err)?
        .values()
        .to_vec())
}

/// cp_n(S) by exhaustive enumeration (small n only).
#[pyfunction]
fn oracle_count(n: u32, elements: Vec<u32>) -> PyResult<BigUint> {
    circpeak::oracle::oracle_count(&peak_set(n, elements)?).map_err(to_py_err)
}

/// All permutations with peak set S, lexicographically.
#[pyfunction]
fn enumerate_class(n: u32, elements: Vec<u32>) -> PyResult<Vec<Vec<u32>>> {
    let class = circpeak::oracle::enumerate_class(&peak_set(n, elements)?).map_err(to_py_err)?;
    Ok(class.iter().map(|p| p.values().to_vec()).collect())
}

/// Full oracle table at order n as {tuple(S): count}.
#[pyfunction]
#[pyo3(signature = (n, threads=1))]
fn oracle_table<'py>(py: Python<'py>, n: u32, threads: usize) -> PyResult<Bound<'py, PyDict>> {
    let table = circpeak::oracle::oracle_table_threaded(n, threads).map_err(to_py_err)?;
    table_to_dict(py, &table)
}

/// Full DP table at order n as {tuple(S): count}.
#[pyfunction]
fn dp_table<'py>(py: Python<'py>, n: u32) -> PyResult<Bound<'py, PyDict>> {
    let table = circpeak::recurrences::dp_table(n).map_err(to_py_err)?;
    table_to_dict(py, &table)
}

/// cp_n(∅) = 2^{n-1}.
#[pyfunction]
fn cp_empty(n: u32) -> PyResult<BigUint> {
    circpeak::closed_forms::cp_empty(n).map_err(to_py_err)
}

/// cp_n({i}) in closed form.
#[pyfunction]
fn cp_single(n: u32, i: u32) -> PyResult<BigUint> {
    circpeak::closed_forms::cp_single(n, i).map_err(to_py_err)
}

/// cp_n({i, j}) in closed form.
#[pyfunction]
fn cp_pair(n: u32, i: u32, j: u32) -> PyResult<BigUint> {
    circpeak::closed_forms::cp_pair(n, i, j).map_err(to_py_err)
}

/// cp_n([n-k+1, n]) via the a-coefficient alternating sum.
#[pyfunction]
fn cp_tail_run(n: u32, k: u32) -> PyResult<BigUint> {
    if n < 3 {
        return Err(PyValueError::new_err("cp_tail_run requires n >= 3"));
    }
    Ok(circpeak::closed_forms::cp_tail_run(n, k))
}

/// Rows of the b triangle as "p/q" strings, k = 1..=k_max.
#[pyfunction]
fn b_triangle(k_max: u32) -> PyResult<Vec<Vec<String>>> {
    if k_max < 1 {
        return Err(PyValueError::new_err("the b triangle starts at k = 1"));
    }
    let tri = circpeak::closed_forms::b_triangle(k_max);
    Ok(tri
        .rows()
        .map(|(_, row)| row.iter().map(|v| v.to_string()).collect())
        .collect())
}

/// Rows of the a triangle as "p/q" strings, k = 0..=k_max.
#[pyfunction]
fn a_triangle(k_max: u32) -> PyResult<Vec<Vec<String>>> {
    let tri = circpeak::closed_forms::a_triangle(k_max);
    Ok(tri
        .rows()
        .map(|(_, row)| row.iter().map(|v| v.to_string()).collect())
        .collect())
}

/// cp_n(S) as a generating-function coefficient.
#[pyfunction]
fn gf_coefficient(n: u32, elements: Vec<u32>) -> PyResult<BigUint> {
    circpeak::genfunc::gf_coefficient(&peak_set(n, elements)?).map_err(to_py_err)
}

/// Total weight w(i, r, n, k) in closed form.
#[pyfunction]
fn w_closed(i: u32, r: u32, n: u32, k: u32) -> BigUint {
    circpeak::paths::w_closed(i, r, n, k)
}

/// Total weight w(i, r, n, k) by explicit path enumeration.
#[pyfunction]
fn w_by_enumeration(i: u32, r: u32, n: u32, k: u32) -> BigUint {
    circpeak::paths::w_by_enumeration(i, r, n, k)
}

/// cp_n(S) by the scalable dispatcher (closed forms + weighted paths).
#[pyfunction]
fn cp_count(n: u32, elements: Vec<u32>) -> PyResult<BigUint> {
    circpeak::paths::cp_count(&peak_set(n, elements)?).map_err(to_py_err)
}

/// Runs the cross-validation suite; returns (name, passed, detail) triples.
#[pyfunction]
#[pyo3(signature = (max_n=8, threads=1))]
fn verify(max_n: u32, threads: usize) -> PyResult<Vec<(String, bool, String)>> {
    let report = circpeak::verify::run_verify(circpeak::verify::VerifyConfig { max_n, threads })
        .map_err(to_py_err)?;
    Ok(report
        .checks
        .into_iter()
        .map(|c| (c.name.to_string(), c.passed, c.detail))
        .collect())
}

#[pymodule]
fn circpeak_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("ORACLE_LIMIT", circpeak::oracle_limit())?;
    m.add("DP_LIMIT", circpeak::dp_limit())?;
    m.add_function(wrap_pyfunction!(circular_peak_set, m)?)?;
    m.add_function(wrap_pyfunction!(is_feasible, m)?)?;
    m.add_function(wrap_pyfunction!(run_decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_subsequence, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_count, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_class, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_table, m)?)?;
    m.add_function(wrap_pyfunction!(dp_table, m)?)?;
    m.add_function(wrap_pyfunction!(cp_empty, m)?)?;
    m.add_function(wrap_pyfunction!(cp_single, m)?)?;
    m.add_function(wrap_pyfunction!(cp_pair, m)?)?;
    m.add_function(wrap_pyfunction!(cp_tail_run, m)?)?;
    m.add_function(wrap_pyfunction!(b_triangle, m)?)?;
    m.add_function(wrap_pyfunction!(a_triangle, m)?)?;
    m.add_function(wrap_pyfunction!(gf_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(w_closed, m)?)?;
    m.add_function(wrap_pyfunction!(w_by_enumeration, m)?)?;
    m.add_function(wrap_pyfunction!(cp_count, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
