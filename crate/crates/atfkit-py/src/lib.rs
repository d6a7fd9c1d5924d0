//! Python bindings. Rationals cross the boundary as strings ("3/2", "-4");
//! structured results come back as plain dicts built from the library's JSON.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::Value;

use atfkit::atf_diagram::{self, Orientation, SvgOptions};
use atfkit::chain_classifier::{self, Anchor};
use atfkit::compactification::{self, NeighborhoodSpec};
use atfkit::constructions;
use atfkit::exact_core::{parse_rational, Rational};
use atfkit::period_solver::{self, ConfigAreas};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn q(s: &str) -> PyResult<Rational> {
    parse_rational(s).map_err(err)
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn diagram(text: &str) -> PyResult<atf_diagram::BaseDiagram> {
    atf_diagram::from_json(text).map_err(err)
}

/// Runs the command-line tool in-process; returns (exit code, stdout, stderr).
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let out = atfkit::cli::run(std::iter::once("atfkit".to_string()).chain(args));
    (out.code, out.stdout, out.stderr)
}

#[pyfunction]
fn validate_diagram<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    let v = atf_diagram::validate(&diagram(text)?);
    let mut j = serde_json::to_value(&v).map_err(err)?;
    j["valid"] = Value::Bool(v.is_valid());
    to_py(py, &j)
}

/// Mutates node `node` and returns the new diagram as JSON text.
#[pyfunction]
#[pyo3(signature = (text, node, orientation = "ccw"))]
fn mutate_diagram(text: &str, node: usize, orientation: &str) -> PyResult<String> {
    let o: Orientation = orientation.parse().map_err(err)?;
    let d = atf_diagram::mutate(&diagram(text)?, node, o).map_err(err)?;
    Ok(atf_diagram::to_json(&d))
}

#[pyfunction]
#[pyo3(signature = (text, size = 400.0))]
fn render_svg(text: &str, size: f64) -> PyResult<String> {
    let opts = SvgOptions { size, ..SvgOptions::default() };
    Ok(atf_diagram::render_svg(&diagram(text)?, &opts))
}

#[pyfunction]
#[pyo3(signature = (n, anchor = "d2"))]
fn classify_chain<'py>(py: Python<'py>, n: usize, anchor: &str) -> PyResult<Bound<'py, PyAny>> {
    let anchor = match anchor.to_ascii_lowercase().as_str() {
        "d1" => Anchor::D1,
        "d2" => Anchor::D2,
        other => return Err(err(format!("unknown anchor {other:?}"))),
    };
    let r = chain_classifier::classify(n, anchor).map_err(err)?;
    to_py(py, &r.to_json())
}

#[pyfunction]
fn solve_periods<'py>(py: Python<'py>, n: usize, d1: &str, d2: &str, c: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
    let c = c.iter().map(|s| q(s)).collect::<PyResult<Vec<_>>>()?;
    let areas = ConfigAreas { d1: q(d1)?, d2: q(d2)?, c };
    let p = period_solver::solve_periods(n, &areas).map_err(err)?;
    to_py(py, &serde_json::to_value(&p).map_err(err)?)
}

#[pyfunction]
fn construct_s2s2<'py>(py: Python<'py>, k: usize, a: &str, b: &str) -> PyResult<Bound<'py, PyAny>> {
    let r = constructions::construct_s2s2(k, &q(a)?, &q(b)?).map_err(err)?;
    to_py(py, &r.to_json())
}

#[pyfunction]
fn construct_x1<'py>(py: Python<'py>, k: usize, h: &str, mu: &str) -> PyResult<Bound<'py, PyAny>> {
    let r = constructions::construct_x1(k, &q(h)?, &q(mu)?).map_err(err)?;
    to_py(py, &r.to_json())
}

#[pyfunction]
#[pyo3(signature = (n, alpha, beta = None, eps = None))]
fn nonsqueezing<'py>(py: Python<'py>, n: usize, alpha: &str, beta: Option<&str>, eps: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
    let beta = beta.map(q).transpose()?;
    let eps = eps.map(q).transpose()?;
    let r = compactification::nonsqueezing_certificate(n, &q(alpha)?, beta.as_ref(), eps.as_ref()).map_err(err)?;
    to_py(py, &r.to_json())
}

/// `m` is the magnitude of the self-intersection, n+1 by default.
#[pyfunction]
#[pyo3(signature = (n, f, s, m = None))]
fn khodorovskiy<'py>(py: Python<'py>, n: usize, f: &str, s: &str, m: Option<i64>) -> PyResult<Bound<'py, PyAny>> {
    let spec = NeighborhoodSpec { self_intersection: -m.unwrap_or(n as i64 + 1), f: q(f)?, s: q(s)? };
    let r = compactification::khodorovskiy_verdict(n, &spec).map_err(err)?;
    to_py(py, &r.to_json())
}

#[pymodule]
fn atfkit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add_function(wrap_pyfunction!(validate_diagram, m)?)?;
    m.add_function(wrap_pyfunction!(mutate_diagram, m)?)?;
    m.add_function(wrap_pyfunction!(render_svg, m)?)?;
    m.add_function(wrap_pyfunction!(classify_chain, m)?)?;
    m.add_function(wrap_pyfunction!(solve_periods, m)?)?;
    m.add_function(wrap_pyfunction!(construct_s2s2, m)?)?;
    m.add_function(wrap_pyfunction!(construct_x1, m)?)?;
    m.add_function(wrap_pyfunction!(nonsqueezing, m)?)?;
    m.add_function(wrap_pyfunction!(khodorovskiy, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
