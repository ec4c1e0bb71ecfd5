//! Python bindings: signatures, grids, classification and evaluation.

use eo_core::algebra::FieldMode;
use eo_core::classify::{dichotomy_verdict, verdict_extended, ExtendedMode};
use eo_core::cli::{choose_engine, dispatch, Engine};
use eo_core::generate::{delta_realizability, Caps};
use eo_core::grid::io::{format_grid, parse_grid};
use eo_core::signature::io::{format_signatures, parse_signatures};
use eo_core::tractable::{eval_affine, eval_fpnp_report, eval_product, interpolate_delta, prune_effective, OracleBackend};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

fn err(e: eo_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable report")
}

fn field() -> PyResult<FieldMode> {
    FieldMode::from_env().map_err(err)
}

#[pyclass(name = "Signature", frozen, from_py_object)]
#[derive(Clone)]
struct PySignature(eo_core::Signature);

#[pymethods]
impl PySignature {
    /// First signature block in `text`.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        let mut sigs = parse_signatures(text, field()?).map_err(err)?;
        if sigs.is_empty() {
            return Err(PyValueError::new_err("no signature in input"));
        }
        Ok(PySignature(sigs.swap_remove(0)))
    }

    #[staticmethod]
    fn parse_all(text: &str) -> PyResult<Vec<PySignature>> {
        Ok(parse_signatures(text, field()?).map_err(err)?.into_iter().map(PySignature).collect())
    }

    #[getter]
    fn arity(&self) -> usize {
        self.0.arity()
    }

    #[getter]
    fn name(&self) -> Option<String> {
        self.0.name().map(str::to_string)
    }

    /// `(string, value)` pairs over the support, values rendered exactly.
    fn support(&self) -> Vec<(String, String)> {
        self.0
            .support()
            .into_iter()
            .map(|a| (self.0.render(a), self.0.value(a).to_string()))
            .collect()
    }

    fn is_eo(&self) -> bool {
        self.0.is_eo()
    }

    fn dual(&self) -> Self {
        PySignature(self.0.dual())
    }

    fn tensor(&self, other: &PySignature) -> PyResult<Self> {
        self.0.tensor(&other.0).map(PySignature).map_err(err)
    }

    /// Root descriptor and step history of the generating process, as JSON.
    #[pyo3(signature = (max_steps=None))]
    fn generate(&self, max_steps: Option<usize>) -> PyResult<String> {
        let mut caps = Caps::default();
        if let Some(n) = max_steps {
            caps.max_steps = n;
        }
        let (report, state) = delta_realizability(&self.0, caps).map_err(err)?;
        Ok(format!(r#"{{"report":{},"state":{}}}"#, json(&report), json(&state)))
    }

    fn __str__(&self) -> String {
        format_signatures(std::slice::from_ref(&self.0))
    }

    fn __repr__(&self) -> String {
        format!("Signature(arity={}, support={})", self.0.arity(), self.0.support().len())
    }

    fn __eq__(&self, other: &PySignature) -> bool {
        self.0 == other.0
    }
}

#[pyclass(name = "Grid", frozen, from_py_object)]
#[derive(Clone)]
struct PyGrid(eo_core::Grid);

#[pymethods]
impl PyGrid {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_grid(text, None, field()?).map(PyGrid).map_err(err)
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.0.vertices.len()
    }

    fn is_closed(&self) -> bool {
        self.0.is_closed()
    }

    /// Partition function. `engine` is one of brute, affine, product, fpnp, auto.
    #[pyo3(signature = (engine="auto"))]
    fn evaluate(&self, engine: &str) -> PyResult<String> {
        let engine = match engine {
            "brute" => Engine::Brute,
            "affine" => Engine::Affine,
            "product" => Engine::Product,
            "fpnp" => Engine::Fpnp,
            "auto" => choose_engine(&self.0),
            other => return Err(PyValueError::new_err(format!("unknown engine {other:?}"))),
        };
        let z = match engine {
            Engine::Affine => eval_affine(&self.0),
            Engine::Product => eval_product(&self.0),
            Engine::Fpnp => eval_fpnp_report(&self.0, None, &OracleBackend::Exhaustive).map(|r| r.value),
            Engine::Brute | Engine::Auto => self.0.brute_force_partition(),
        };
        z.map(|z| z.to_string()).map_err(err)
    }

    fn gate_signature(&self) -> PyResult<PySignature> {
        self.0.gate_signature().map(PySignature).map_err(err)
    }

    /// Drop non-effective support strings at every vertex.
    fn prune(&self) -> PyResult<PyGrid> {
        prune_effective(&self.0, &OracleBackend::Exhaustive).map(PyGrid).map_err(err)
    }

    /// Evaluate with every `Δ` interpolated through node ratio `x`.
    #[pyo3(signature = (x="2"))]
    fn interpolate(&self, x: &str) -> PyResult<String> {
        let x = field()?.parse_value(x).map_err(err)?;
        interpolate_delta(&self.0, &x).map(|z| z.to_string()).map_err(err)
    }

    fn __str__(&self) -> String {
        format_grid(&self.0)
    }
}

/// Dichotomy verdict for a signature set, as JSON. `mode` selects the
/// extended variants (eo, upside, downside, single-weighted).
#[pyfunction]
#[pyo3(signature = (sigs, mode=None))]
fn classify(sigs: Vec<PySignature>, mode: Option<&str>) -> PyResult<String> {
    let set: Vec<eo_core::Signature> = sigs.into_iter().map(|s| s.0).collect();
    let verdict = match mode {
        None => dichotomy_verdict(&set),
        Some(m) => verdict_extended(&set, m.parse::<ExtendedMode>().map_err(err)?),
    };
    verdict.map(|v| json(&v)).map_err(err)
}

/// Run the `eo` command line with `--json` and return `(exit code, output)`.
#[pyfunction]
fn run(args: Vec<String>) -> (i32, String) {
    let argv = std::iter::once("eo".to_string()).chain(std::iter::once("--json".to_string())).chain(args);
    let (report, code) = dispatch(argv);
    (code, report.render())
}

#[pymodule]
fn eo_holant(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySignature>()?;
    m.add_class::<PyGrid>()?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
