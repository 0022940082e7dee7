//! Python bindings for the offload simulator. Graphs and scenarios come in as
//! classes; report payloads come back as plain dicts and lists so callers can
//! poke at them without extra types.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;
use std::str::FromStr;

use offsim_core as core;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// serde_json payload to native Python objects.
fn json_to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_py_any(py)?,
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                u.into_py_any(py)?
            } else if let Some(i) = n.as_i64() {
                i.into_py_any(py)?
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_py_any(py)?
            }
        }
        Value::String(s) => s.into_py_any(py)?,
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_py_any(py)?
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, val) in map {
                dict.set_item(k, json_to_py(py, val)?)?;
            }
            dict.into_py_any(py)?
        }
    })
}

fn serialize_to_py<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let doc = serde_json::to_value(value).map_err(value_err)?;
    json_to_py(py, &doc)
}

/// A call-link graph of application methods.
#[pyclass(frozen)]
struct CallGraph {
    inner: core::CallGraph,
}

#[pymethods]
impl CallGraph {
    /// Parse the plain-text dialect: `node <id> <offloadable> <mobile_s>
    /// <cloud_s> <upload_B> <return_B>` lines, then `edge <from> <to>` lines.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        core::parse_graph_text(text)
            .map(|inner| Self { inner })
            .map_err(value_err)
    }

    /// Parse the JSON shape used inside scenario files.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let raw: core::CallGraph = serde_json::from_str(text).map_err(value_err)?;
        let inner = core::CallGraph::new(raw.root, raw.nodes, raw.edges).map_err(value_err)?;
        Ok(Self { inner })
    }

    /// Structural problems as strings; an empty list means the graph is sound.
    fn validate(&self) -> Vec<String> {
        core::validate_graph(&self.inner)
            .iter()
            .map(|v| v.to_string())
            .collect()
    }

    /// Chain decomposition as a dict of stages.
    fn extract_chains(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let dec = core::extract_chains(&self.inner).map_err(value_err)?;
        serialize_to_py(py, &dec)
    }

    /// True when no directed path connects the two methods either way.
    fn independent(&self, a: &str, b: &str) -> PyResult<bool> {
        core::independent(&self.inner, a, b).map_err(value_err)
    }

    fn offloadable_percent(&self) -> f64 {
        self.inner.offloadable_percent()
    }

    fn total_upload_bytes(&self) -> u64 {
        self.inner.total_upload_bytes()
    }

    fn offloadable_upload_bytes(&self) -> u64 {
        self.inner.offloadable_upload_bytes()
    }

    #[getter]
    fn root(&self) -> String {
        self.inner.root.clone()
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.nodes.len()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edges.len()
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&self.inner).map_err(value_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "CallGraph(root='{}', nodes={}, edges={})",
            self.inner.root,
            self.inner.nodes.len(),
            self.inner.edges.len()
        )
    }
}

/// One self-contained run description: graph, device, network, fleet, hosts.
#[pyclass(frozen)]
struct Scenario {
    inner: core::Scenario,
}

#[pymethods]
impl Scenario {
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        core::load_scenario(path)
            .map(|inner| Self { inner })
            .map_err(|e| value_err(format!("{path}: {e}")))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        core::load_scenario_str(text)
            .map(|inner| Self { inner })
            .map_err(value_err)
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn mode(&self) -> String {
        self.inner.mode.to_string()
    }

    fn graph(&self) -> CallGraph {
        CallGraph {
            inner: self.inner.graph.clone(),
        }
    }

    /// Run the scheduler (plus energy accounting) and return the full report
    /// bundle as a dict. `mode` and `crash` override the scenario's values;
    /// crash uses the `<vm>@<fraction>` / `<vm>@t=<seconds>` grammar.
    #[pyo3(signature = (mode=None, crash=None))]
    fn simulate(
        &self,
        py: Python<'_>,
        mode: Option<&str>,
        crash: Option<&str>,
    ) -> PyResult<Py<PyAny>> {
        let mode = mode
            .map(core::Mode::from_str)
            .transpose()
            .map_err(PyValueError::new_err)?;
        let crash = crash
            .map(core::CrashEvent::parse_flag)
            .transpose()
            .map_err(value_err)?;
        let bundle = core::run_report(&self.inner, mode, crash.as_ref()).map_err(value_err)?;
        serialize_to_py(py, &bundle)
    }

    /// Worst-case resend rows for per-VM percent splits of the offloadable data.
    fn resend_sweep(&self, py: Python<'_>, splits: Vec<Vec<f64>>) -> PyResult<Py<PyAny>> {
        let report = core::resend_sweep(&self.inner, &splits).map_err(value_err)?;
        serialize_to_py(py, &report)
    }

    /// Host energy for the same cloudlet batch spread over each VM count.
    #[pyo3(signature = (vm_counts=vec![1, 2], cloudlets=10, cloudlet_secs=0.25))]
    fn energy_compare(
        &self,
        py: Python<'_>,
        vm_counts: Vec<usize>,
        cloudlets: usize,
        cloudlet_secs: f64,
    ) -> PyResult<Py<PyAny>> {
        let report = core::energy_compare(&self.inner, &vm_counts, cloudlets, cloudlet_secs)
            .map_err(value_err)?;
        serialize_to_py(py, &report)
    }

    fn to_json(&self) -> String {
        self.inner.to_canonical_json()
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario(name='{}', mode='{}', vms={})",
            self.inner.name,
            self.inner.mode,
            self.inner.vm_fleet.len()
        )
    }
}

#[allow(clippy::too_many_arguments)]
fn decision_inputs(
    compute_mi: f64,
    mobile_mips: f64,
    transfer_mbit: f64,
    bandwidth_mbps: f64,
    server_mips: Option<f64>,
    speedup: Option<f64>,
    p_compute_w: f64,
    p_idle_w: f64,
    p_transmit_w: f64,
) -> core::DecisionInputs {
    core::DecisionInputs {
        compute_mi,
        mobile_mips,
        server_mips,
        speedup,
        transfer_mbit,
        bandwidth_mbps,
        p_compute_w,
        p_idle_w,
        p_transmit_w,
    }
}

/// Energy saved by offloading, in joules, using the server speed directly.
#[pyfunction]
#[pyo3(signature = (*, compute_mi, mobile_mips, transfer_mbit, bandwidth_mbps,
                    server_mips=None, speedup=None,
                    p_compute_w=0.9, p_idle_w=0.3, p_transmit_w=1.3))]
#[allow(clippy::too_many_arguments)]
fn energy_saved(
    compute_mi: f64,
    mobile_mips: f64,
    transfer_mbit: f64,
    bandwidth_mbps: f64,
    server_mips: Option<f64>,
    speedup: Option<f64>,
    p_compute_w: f64,
    p_idle_w: f64,
    p_transmit_w: f64,
) -> PyResult<f64> {
    core::energy_saved(&decision_inputs(
        compute_mi,
        mobile_mips,
        transfer_mbit,
        bandwidth_mbps,
        server_mips,
        speedup,
        p_compute_w,
        p_idle_w,
        p_transmit_w,
    ))
    .map_err(value_err)
}

/// Energy saved by offloading, in joules, using the speedup-factor form.
#[pyfunction]
#[pyo3(signature = (*, compute_mi, mobile_mips, transfer_mbit, bandwidth_mbps,
                    server_mips=None, speedup=None,
                    p_compute_w=0.9, p_idle_w=0.3, p_transmit_w=1.3))]
#[allow(clippy::too_many_arguments)]
fn energy_saved_speedup(
    compute_mi: f64,
    mobile_mips: f64,
    transfer_mbit: f64,
    bandwidth_mbps: f64,
    server_mips: Option<f64>,
    speedup: Option<f64>,
    p_compute_w: f64,
    p_idle_w: f64,
    p_transmit_w: f64,
) -> PyResult<f64> {
    core::energy_saved_speedup(&decision_inputs(
        compute_mi,
        mobile_mips,
        transfer_mbit,
        bandwidth_mbps,
        server_mips,
        speedup,
        p_compute_w,
        p_idle_w,
        p_transmit_w,
    ))
    .map_err(value_err)
}

fn costs_from_tuples(seq: Vec<(f64, f64, f64, f64)>) -> Vec<core::MethodCost> {
    seq.into_iter()
        .map(|(m, c, i, r)| core::MethodCost::new(m, c, i, r))
        .collect()
}

/// Per-method offload utilities for a call sequence of
/// (mobile_s, cloud_s, upload_s, return_s) tuples. Returns (utilities, k*)
/// where k* is the 1-based end method of the best interval starting at 1.
#[pyfunction]
fn fu_utilities(seq: Vec<(f64, f64, f64, f64)>) -> PyResult<(Vec<f64>, usize)> {
    core::fu_utilities(&costs_from_tuples(seq)).map_err(value_err)
}

/// Best contiguous interval to offload, as (start, end, saving_s), 1-based.
#[pyfunction]
fn best_offload_interval(seq: Vec<(f64, f64, f64, f64)>) -> PyResult<(usize, usize, f64)> {
    let choice = core::best_offload_interval(&costs_from_tuples(seq)).map_err(value_err)?;
    Ok((choice.start, choice.end, choice.saving_s))
}

/// Mid-run policy check: keep computing locally or restart on the cloud.
/// Returns a dict tagged `decision`.
#[pyfunction]
fn break_even_decision(
    py: Python<'_>,
    local_elapsed_s: f64,
    break_even_s: f64,
    offload_path_s: f64,
) -> PyResult<Py<PyAny>> {
    let d = core::break_even_decision(local_elapsed_s, break_even_s, offload_path_s)
        .map_err(value_err)?;
    serialize_to_py(py, &d)
}

#[pymodule]
fn offsim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<CallGraph>()?;
    m.add_class::<Scenario>()?;
    m.add_function(wrap_pyfunction!(energy_saved, m)?)?;
    m.add_function(wrap_pyfunction!(energy_saved_speedup, m)?)?;
    m.add_function(wrap_pyfunction!(fu_utilities, m)?)?;
    m.add_function(wrap_pyfunction!(best_offload_interval, m)?)?;
    m.add_function(wrap_pyfunction!(break_even_decision, m)?)?;
    Ok(())
}
