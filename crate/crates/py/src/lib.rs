//! Python bindings. Results cross the boundary as JSON text.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::json;
use wittkit::cli::{parse_presentation, Built, Params, SCHEMA_VERSION, SUITES};
use wittkit::error::{enumeration_cap, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Parse { .. } | Error::NotPrime(_) | Error::NotReduced(_) | Error::Precondition(_) | Error::InvalidAlgebra(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Parse a presentation and describe what it builds, as JSON.
#[pyfunction]
fn parse(text: &str) -> PyResult<String> {
    let pres = parse_presentation(text).map_err(to_py)?;
    let mut info = json!({ "presentation": pres.format(), "p": pres.p, "n": pres.n, "generators": pres.generators });
    match pres.build_default().map_err(to_py)? {
        Built::Algebra(a) => {
            info["kind"] = json!("algebra");
            info["dim"] = json!(a.dim());
            info["reduced"] = json!(a.is_reduced());
            info["perfect"] = json!(a.is_perfect());
        }
        Built::Module(m) => {
            info["kind"] = json!("module");
            info["order"] = json!(m.order().to_string());
            info["invariant_factors"] = json!(m.invariant_factors());
        }
        Built::Extension(b) => {
            info["kind"] = json!("extension");
            info["rank"] = json!(b.dim());
        }
    }
    Ok(info.to_string())
}

/// Run a named suite and return its JSON report.
#[pyfunction]
#[pyo3(signature = (suite, p=None, n=None, d=None, r=None, algebra=None, seed=0, guard=None))]
#[allow(clippy::too_many_arguments)]
fn run_suite(suite: &str, p: Option<u64>, n: Option<usize>, d: Option<usize>, r: Option<usize>, algebra: Option<String>, seed: u64, guard: Option<u64>) -> PyResult<String> {
    let params = Params { p, n, d, r, algebra, seed, guard: guard.unwrap_or_else(enumeration_cap) };
    let report = wittkit::cli::run_suite(suite, &params).map_err(to_py)?;
    Ok(report.to_json())
}

#[pymodule]
fn wittkit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add("SCHEMA_VERSION", SCHEMA_VERSION)?;
    m.add("SUITES", SUITES.to_vec())?;
    Ok(())
}
