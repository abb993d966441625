//! Python bindings. Matrices cross the boundary as `(rows, field)` where
//! `rows` is a list of lists of entries (int, str or `fractions.Fraction`)
//! and `field` is `"QQ"` or `"GF(p)"`. Results come back as plain dicts and
//! lists with entries as strings.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use nilfactor_core::forensics::{check_sourour_projection_flaw, check_wu_counterexample_over};
use nilfactor_core::lu_similarity::DEFAULT_SEED;
use nilfactor_core::suites::{lemma1_suite, lemma2_suite, roth_suite, sourour_suite};
use nilfactor_core::{factor_seeded, Error, ExactMatrix, FieldSpec, MatrixFile};

create_exception!(nilfactor, NilfactorError, PyValueError);
create_exception!(nilfactor, NotSingularError, NilfactorError);
create_exception!(nilfactor, ExceptionalCaseError, NilfactorError);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::NotSingular => NotSingularError::new_err(e.to_string()),
        Error::ExceptionalCase => ExceptionalCaseError::new_err(e.to_string()),
        _ => NilfactorError::new_err(e.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| NilfactorError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parse_field(field: &str) -> PyResult<FieldSpec> {
    field.parse().map_err(py_err)
}

fn to_matrix(rows: Vec<Vec<Bound<'_, PyAny>>>, field: &str) -> PyResult<ExactMatrix> {
    let rows = rows
        .into_iter()
        .map(|row| row.iter().map(|x| Ok(x.str()?.to_string())).collect::<PyResult<Vec<_>>>())
        .collect::<PyResult<Vec<_>>>()?;
    let file = MatrixFile {
        field: parse_field(field)?,
        n: rows.len(),
        rows,
    };
    file.to_matrix().map_err(py_err)
}

fn rows_of(m: &ExactMatrix) -> Vec<Vec<String>> {
    m.to_string_rows()
}

/// Parse matrix file text (plain or JSON) into `(rows, field)`.
#[pyfunction]
fn parse_matrix(text: &str) -> PyResult<(Vec<Vec<String>>, String)> {
    let m = nilfactor_core::parse_matrix(text).map_err(py_err)?;
    Ok((rows_of(&m), m.field().to_string()))
}

/// Render a matrix in the plain file format.
#[pyfunction]
#[pyo3(signature = (rows, field = "QQ"))]
fn format_matrix(rows: Vec<Vec<Bound<'_, PyAny>>>, field: &str) -> PyResult<String> {
    nilfactor_core::format_matrix(&to_matrix(rows, field)?).map_err(py_err)
}

/// Factor a singular matrix as `N1·N2` with both factors nilpotent.
///
/// Returns `{"n1": rows, "n2": rows, "field": str, "certificate": dict}`.
#[pyfunction]
#[pyo3(signature = (rows, field = "QQ", seed = None))]
fn factor<'py>(
    py: Python<'py>,
    rows: Vec<Vec<Bound<'py, PyAny>>>,
    field: &str,
    seed: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let a = to_matrix(rows, field)?;
    let f = factor_seeded(&a, seed.unwrap_or(DEFAULT_SEED)).map_err(py_err)?;
    let out = serde_json::json!({
        "n1": rows_of(&f.n1),
        "n2": rows_of(&f.n2),
        "field": a.field().to_string(),
        "certificate": f.certificate,
    });
    to_py(py, &out)
}

/// Run the odd-`k` right-factor check. Returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (k = 7, field = "QQ"))]
fn check_wu_counterexample<'py>(py: Python<'py>, k: usize, field: &str) -> PyResult<Bound<'py, PyAny>> {
    let r = check_wu_counterexample_over(k, parse_field(field)?).map_err(py_err)?;
    to_py(py, &r)
}

/// Run the projection-rank check. Returns the report as a dict.
#[pyfunction]
fn check_projection_flaw(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &check_sourour_projection_flaw().map_err(py_err)?)
}

/// Run one property suite: `lemma1`, `lemma2`, `sourour` or `roth`.
///
/// `size` is the largest `k` for `lemma1` and the largest matrix size for
/// `lemma2`; `count` is instances per size for `sourour` and in total for `roth`.
#[pyfunction]
#[pyo3(signature = (name, fields = None, size = None, count = None, seed = None))]
fn run_suite<'py>(
    py: Python<'py>,
    name: &str,
    fields: Option<Vec<String>>,
    size: Option<usize>,
    count: Option<usize>,
    seed: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let fields = match fields {
        Some(fs) => fs.iter().map(|f| parse_field(f)).collect::<PyResult<Vec<_>>>()?,
        None => vec![FieldSpec::Rationals, FieldSpec::PrimeField(2), FieldSpec::PrimeField(5)],
    };
    let seed = seed.unwrap_or(DEFAULT_SEED);
    let report = match name {
        "lemma1" => lemma1_suite(size.unwrap_or(11), &fields),
        "lemma2" => lemma2_suite(&(1..=size.unwrap_or(12)).collect::<Vec<_>>(), &fields),
        "sourour" => sourour_suite(count.unwrap_or(25), &[3, 4, 5, 6], &fields, seed),
        "roth" => roth_suite(count.unwrap_or(100), &fields, seed),
        other => return Err(PyValueError::new_err(format!("unknown suite `{other}`"))),
    }
    .map_err(py_err)?;
    let out = serde_json::json!({
        "suite": report.suite,
        "passed": report.passed(),
        "checks": report.checks,
    });
    to_py(py, &out)
}

#[pymodule]
fn nilfactor(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("NilfactorError", py.get_type::<NilfactorError>())?;
    m.add("NotSingularError", py.get_type::<NotSingularError>())?;
    m.add("ExceptionalCaseError", py.get_type::<ExceptionalCaseError>())?;
    m.add_function(wrap_pyfunction!(parse_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(format_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(factor, m)?)?;
    m.add_function(wrap_pyfunction!(check_wu_counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(check_projection_flaw, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
