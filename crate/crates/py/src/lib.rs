//! Python bindings: the circuit type, the exact oracles, the reduction
//! compiler, the one-clean-qubit builders and the shot-budgeted estimator.
//! Complex values cross the boundary as Python complex numbers; circuits and
//! instances also serialize to the same JSON documents the CLI uses.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use otoc_core::circuit::{Circuit as CoreCircuit, Gate, GateKind, Polarity};
use otoc_core::io;
use otoc_core::pauli::{PauliString, Probe};
use otoc_core::reduction::OTOCInstance as CoreInstance;
use otoc_core::sim::{DQC1Circuit as CoreDqc1, ShotPlan};

fn err(e: otoc_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn polarity(on_one: bool) -> Polarity {
    if on_one {
        Polarity::OnOne
    } else {
        Polarity::OnZero
    }
}

fn parse_words(labels: Vec<String>, n: usize) -> PyResult<Vec<Probe>> {
    labels
        .into_iter()
        .map(|label| {
            let word = PauliString::parse(&label).map_err(err)?;
            if word.n_qubits() != n {
                return Err(PyValueError::new_err(format!(
                    "Pauli label \"{label}\" has {} letters, circuit has {n} qubits",
                    word.n_qubits()
                )));
            }
            Ok(Probe::Pauli(word))
        })
        .collect()
}

/// An ordered gate list on a fixed qubit count; qubit 0 is the least
/// significant bit of basis-state indices.
#[pyclass(name = "Circuit", skip_from_py_object)]
#[derive(Clone)]
struct PyCircuit {
    inner: CoreCircuit,
}

#[pymethods]
impl PyCircuit {
    #[new]
    fn new(n_qubits: usize) -> Self {
        PyCircuit {
            inner: CoreCircuit::new(n_qubits),
        }
    }

    fn n_qubits(&self) -> usize {
        self.inner.n_qubits()
    }

    fn gate_count(&self) -> usize {
        self.inner.len()
    }

    /// Append a named gate: one of "I","X","Y","Z","H","S","Sdg".
    fn gate(&mut self, kind: &str, target: usize) -> PyResult<()> {
        let kind = match kind {
            "I" => GateKind::I,
            "X" => GateKind::X,
            "Y" => GateKind::Y,
            "Z" => GateKind::Z,
            "H" => GateKind::H,
            "S" => GateKind::S,
            "Sdg" => GateKind::Sdg,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown gate kind \"{other}\""
                )))
            }
        };
        self.inner.push(Gate::named(kind, target)).map_err(err)
    }

    /// Append a dense single-qubit unitary (4 complex entries, row-major).
    fn dense1(&mut self, target: usize, matrix: Vec<Complex64>) -> PyResult<()> {
        self.inner
            .push(Gate::dense1(target, matrix).map_err(err)?)
            .map_err(err)
    }

    /// Append a dense two-qubit unitary (16 complex entries, row-major;
    /// bit of t0 is the low index position).
    fn dense2(&mut self, t0: usize, t1: usize, matrix: Vec<Complex64>) -> PyResult<()> {
        self.inner
            .push(Gate::dense2(t0, t1, matrix).map_err(err)?)
            .map_err(err)
    }

    /// Operator product self · other (other applies first).
    fn compose(&self, other: &PyCircuit) -> PyResult<PyCircuit> {
        Ok(PyCircuit {
            inner: self.inner.compose(&other.inner).map_err(err)?,
        })
    }

    fn adjoint(&self) -> PyCircuit {
        PyCircuit {
            inner: self.inner.adjoint(),
        }
    }

    /// Widen with control wires at the given indices; `on_one` selects the
    /// polarity per control.
    fn controlled_on(&self, controls: Vec<(usize, bool)>) -> PyResult<PyCircuit> {
        let controls: Vec<(usize, Polarity)> = controls
            .into_iter()
            .map(|(q, on_one)| (q, polarity(on_one)))
            .collect();
        Ok(PyCircuit {
            inner: self.inner.controlled_on(&controls).map_err(err)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&io::circuit_to_doc(&self.inner)).map_err(json_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<PyCircuit> {
        let doc: io::CircuitDoc = serde_json::from_str(text).map_err(json_err)?;
        Ok(PyCircuit {
            inner: io::circuit_from_doc(&doc).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "Circuit(n_qubits={}, gates={})",
            self.inner.n_qubits(),
            self.inner.len()
        )
    }
}

/// A 2k-point correlator instance (U, {W_j}, {V_j}) with Pauli probes.
#[pyclass(name = "OTOCInstance", skip_from_py_object)]
#[derive(Clone)]
struct PyInstance {
    inner: CoreInstance,
}

#[pymethods]
impl PyInstance {
    #[new]
    fn new(u: &PyCircuit, w: Vec<String>, v: Vec<String>) -> PyResult<Self> {
        let n = u.inner.n_qubits();
        let inner = CoreInstance::new(
            u.inner.clone(),
            parse_words(w, n)?,
            parse_words(v, n)?,
        )
        .map_err(err)?;
        Ok(PyInstance { inner })
    }

    fn k(&self) -> usize {
        self.inner.k()
    }

    fn n_qubits(&self) -> usize {
        self.inner.u().n_qubits()
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&io::instance_to_doc(&self.inner).map_err(err)?)
            .map_err(json_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<PyInstance> {
        let doc: io::InstanceDoc = serde_json::from_str(text).map_err(json_err)?;
        Ok(PyInstance {
            inner: io::instance_from_doc(&doc).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "OTOCInstance(n_qubits={}, k={})",
            self.inner.u().n_qubits(),
            self.inner.k()
        )
    }
}

/// A circuit on 1 + n qubits with the clean qubit on wire 0.
#[pyclass(name = "DQC1Circuit", skip_from_py_object)]
#[derive(Clone)]
struct PyDqc1 {
    inner: CoreDqc1,
}

#[pymethods]
impl PyDqc1 {
    fn n_mixed(&self) -> usize {
        self.inner.n_mixed()
    }

    fn gate_count(&self) -> usize {
        self.inner.circuit().len()
    }

    fn meaning(&self) -> String {
        self.inner.meaning().to_string()
    }

    fn statistic(&self) -> &'static str {
        match self.inner.statistic() {
            otoc_core::sim::Statistic::RealPart => "real",
            otoc_core::sim::Statistic::ImaginaryPart => "imag",
        }
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&io::dqc1_to_doc(&self.inner)).map_err(json_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<PyDqc1> {
        let doc: io::Dqc1Doc = serde_json::from_str(text).map_err(json_err)?;
        Ok(PyDqc1 {
            inner: io::dqc1_from_doc(&doc).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "DQC1Circuit(n_mixed={}, statistic={:?})",
            self.inner.n_mixed(),
            self.statistic()
        )
    }
}

#[pyfunction]
fn run_statevector(circuit: &PyCircuit, basis_state: usize) -> PyResult<Vec<Complex64>> {
    otoc_core::sim::run_statevector(&circuit.inner, basis_state).map_err(err)
}

#[pyfunction]
fn exact_unitary(circuit: &PyCircuit) -> PyResult<Vec<Vec<Complex64>>> {
    let u = otoc_core::sim::exact_unitary(&circuit.inner).map_err(err)?;
    let dim = u.dim();
    Ok((0..dim)
        .map(|r| (0..dim).map(|c| u.get(r, c)).collect())
        .collect())
}

#[pyfunction]
fn exact_normalized_trace(circuit: &PyCircuit) -> PyResult<Complex64> {
    otoc_core::sim::exact_normalized_trace(&circuit.inner).map_err(err)
}

#[pyfunction]
fn exact_otoc(instance: &PyInstance) -> PyResult<Complex64> {
    otoc_core::sim::exact_otoc(&instance.inner).map_err(err)
}

#[pyfunction]
fn ruler(a: u64) -> PyResult<u32> {
    otoc_core::reduction::ruler(a).map_err(err)
}

#[pyfunction]
fn compile_trace_to_otoc(circuit: &PyCircuit, k: usize) -> PyResult<PyInstance> {
    Ok(PyInstance {
        inner: otoc_core::reduction::compile_trace_to_otoc(&circuit.inner, k).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (instance, fallback = false, imag = false))]
fn build_otoc_dqc1(instance: &PyInstance, fallback: bool, imag: bool) -> PyResult<PyDqc1> {
    let mut d = if fallback {
        otoc_core::builder::build_otoc_dqc1_fallback(&instance.inner).map_err(err)?
    } else {
        otoc_core::builder::build_otoc_dqc1(&instance.inner).map_err(err)?
    };
    if imag {
        d = otoc_core::builder::imaginary_variant(&d).map_err(err)?;
    }
    Ok(PyDqc1 { inner: d })
}

#[pyfunction]
fn dqc1_exact_p0(d: &PyDqc1) -> PyResult<f64> {
    otoc_core::sim::dqc1_exact_p0(&d.inner).map_err(err)
}

#[pyfunction]
fn dqc1_sample(d: &PyDqc1, shots: u64, seed: u64) -> PyResult<(u64, u64)> {
    let plan = ShotPlan::new(shots, 1.0, 0.5, seed).map_err(err)?;
    otoc_core::sim::dqc1_sample(&d.inner, &plan).map_err(err)
}

#[pyfunction]
fn shots_for(epsilon: f64, failure_prob: f64) -> PyResult<u64> {
    otoc_core::estimator::shots_for(epsilon, failure_prob).map_err(err)
}

/// Estimate the correlator of an instance; returns (value, shots_total).
#[pyfunction]
fn estimate_otoc(
    instance: &PyInstance,
    epsilon: f64,
    failure_prob: f64,
    seed: u64,
) -> PyResult<(Complex64, u64)> {
    let est = otoc_core::estimator::estimate_otoc(
        instance.inner.u(),
        instance.inner.w(),
        instance.inner.v(),
        epsilon,
        failure_prob,
        seed,
    )
    .map_err(err)?;
    Ok((est.value, est.shots_total))
}

#[pyfunction]
fn exact_avg_bipartite_otoc(circuit: &PyCircuit) -> PyResult<Complex64> {
    otoc_core::estimator::exact_avg_bipartite_otoc(&circuit.inner).map_err(err)
}

/// Check the reduction on one circuit; returns
/// (otoc, re_trace, delta_or_none, passed).
#[pyfunction]
fn verify_reduction(
    circuit: &PyCircuit,
    k: usize,
) -> PyResult<(Complex64, f64, Option<f64>, bool)> {
    let check = otoc_core::reduction::verify_reduction(&circuit.inner, k).map_err(err)?;
    Ok((check.otoc, check.re_trace, check.delta, check.passed))
}

#[pyfunction]
fn trotterize_ising(
    n_qubits: usize,
    coupling: f64,
    field: f64,
    t: f64,
    steps: usize,
) -> PyResult<PyCircuit> {
    let h = otoc_core::dynamics::HamiltonianSpec::ising_chain(n_qubits, coupling, field)
        .map_err(err)?;
    Ok(PyCircuit {
        inner: otoc_core::dynamics::trotterize(&h, t, steps).map_err(err)?,
    })
}

#[pyfunction]
fn trotterize_xxz(
    n_qubits: usize,
    coupling: f64,
    anisotropy: f64,
    t: f64,
    steps: usize,
) -> PyResult<PyCircuit> {
    let h = otoc_core::dynamics::HamiltonianSpec::xxz_chain(n_qubits, coupling, anisotropy)
        .map_err(err)?;
    Ok(PyCircuit {
        inner: otoc_core::dynamics::trotterize(&h, t, steps).map_err(err)?,
    })
}

#[pymodule]
fn otoc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCircuit>()?;
    m.add_class::<PyInstance>()?;
    m.add_class::<PyDqc1>()?;
    m.add_function(wrap_pyfunction!(run_statevector, m)?)?;
    m.add_function(wrap_pyfunction!(exact_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(exact_normalized_trace, m)?)?;
    m.add_function(wrap_pyfunction!(exact_otoc, m)?)?;
    m.add_function(wrap_pyfunction!(ruler, m)?)?;
    m.add_function(wrap_pyfunction!(compile_trace_to_otoc, m)?)?;
    m.add_function(wrap_pyfunction!(build_otoc_dqc1, m)?)?;
    m.add_function(wrap_pyfunction!(dqc1_exact_p0, m)?)?;
    m.add_function(wrap_pyfunction!(dqc1_sample, m)?)?;
    m.add_function(wrap_pyfunction!(shots_for, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_otoc, m)?)?;
    m.add_function(wrap_pyfunction!(exact_avg_bipartite_otoc, m)?)?;
    m.add_function(wrap_pyfunction!(verify_reduction, m)?)?;
    m.add_function(wrap_pyfunction!(trotterize_ising, m)?)?;
    m.add_function(wrap_pyfunction!(trotterize_xxz, m)?)?;
    Ok(())
}
