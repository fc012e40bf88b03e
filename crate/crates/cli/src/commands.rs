//! Thin command wrappers over the library operations: read documents, run,
//! write documents atomically, emit the run manifest.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::path::Path;
use std::time::Instant;

use otoc_core::builder::{build_otoc_dqc1, build_otoc_dqc1_fallback, imaginary_variant};
use otoc_core::circuit::random_circuit;
use otoc_core::dynamics::HamiltonianSpec;
use otoc_core::estimator::estimate_otoc_exact;
use otoc_core::io;
use otoc_core::sim::{dqc1_exact_p0, dqc1_sample, ShotPlan};

use crate::manifest;
use crate::CliError;

fn read_doc<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Input(format!("cannot parse {}: {e}", path.display())))
}

fn write_doc<T: Serialize>(path: &Path, doc: &T) -> Result<(), CliError> {
    let mut bytes = serde_json::to_vec_pretty(doc)?;
    bytes.push(b'\n');
    manifest::write_atomic(path, &bytes)
}

pub fn compile_reduction(k: usize, input: &Path, out: &Path) -> Result<(), CliError> {
    let started = Instant::now();
    let circuit_doc: io::CircuitDoc = read_doc(input)?;
    let circuit = io::circuit_from_doc(&circuit_doc)?;
    let instance = otoc_core::reduction::compile_trace_to_otoc(&circuit, k)?;
    write_doc(out, &io::instance_to_doc(&instance)?)?;
    manifest::emit(
        "compile-reduction",
        None,
        &[input],
        &[out],
        started.elapsed().as_secs_f64(),
    )
}

pub fn build_dqc1(input: &Path, out: &Path, imag: bool, fallback: bool) -> Result<(), CliError> {
    let started = Instant::now();
    let doc: io::InstanceDoc = read_doc(input)?;
    let instance = io::instance_from_doc(&doc)?;
    let mut d = if fallback {
        build_otoc_dqc1_fallback(&instance)?
    } else {
        build_otoc_dqc1(&instance)?
    };
    if imag {
        d = imaginary_variant(&d)?;
    }
    write_doc(out, &io::dqc1_to_doc(&d))?;
    manifest::emit(
        "build-dqc1",
        None,
        &[input],
        &[out],
        started.elapsed().as_secs_f64(),
    )
}

pub fn estimate(
    input: &Path,
    eps: f64,
    fail: f64,
    seed: u64,
    exact: bool,
    out: &Path,
) -> Result<(), CliError> {
    let started = Instant::now();
    let doc: io::InstanceDoc = read_doc(input)?;
    let instance = io::instance_from_doc(&doc)?;
    let result = if exact {
        estimate_otoc_exact(instance.u(), instance.w(), instance.v(), seed)?
    } else {
        otoc_core::estimator::estimate_otoc(
            instance.u(),
            instance.w(),
            instance.v(),
            eps,
            fail,
            seed,
        )?
    };
    write_doc(out, &io::estimate_to_doc(&result))?;
    manifest::emit(
        "estimate",
        Some(seed),
        &[input],
        &[out],
        started.elapsed().as_secs_f64(),
    )
}

#[derive(Serialize)]
struct SampleDoc {
    shots: u64,
    count_zero: u64,
    count_one: u64,
    p0_estimate: f64,
    seed: u64,
}

#[derive(Serialize)]
struct ExactP0Doc {
    p0_exact: f64,
}

pub fn simulate(
    input: &Path,
    shots: Option<u64>,
    seed: Option<u64>,
    exact: bool,
    out: &Path,
) -> Result<(), CliError> {
    let started = Instant::now();
    let doc: io::Dqc1Doc = read_doc(input)?;
    let d = io::dqc1_from_doc(&doc)?;
    if exact {
        let p0 = dqc1_exact_p0(&d)?;
        write_doc(out, &ExactP0Doc { p0_exact: p0 })?;
    } else {
        let shots = shots.expect("clap enforces --shots");
        let seed = seed.expect("clap enforces --seed");
        let plan = ShotPlan::new(shots, 1.0, 0.5, seed)?;
        let (count_zero, count_one) = dqc1_sample(&d, &plan)?;
        write_doc(
            out,
            &SampleDoc {
                shots,
                count_zero,
                count_one,
                p0_estimate: count_zero as f64 / shots as f64,
                seed,
            },
        )?;
    }
    manifest::emit(
        "simulate",
        seed,
        &[input],
        &[out],
        started.elapsed().as_secs_f64(),
    )
}

#[allow(clippy::too_many_arguments)]
pub fn trotterize_cmd(
    model: &str,
    n: usize,
    t: f64,
    steps: usize,
    coupling: f64,
    field: f64,
    delta: f64,
    out: &Path,
) -> Result<(), CliError> {
    let started = Instant::now();
    let h = match model {
        "ising" => HamiltonianSpec::ising_chain(n, coupling, field)?,
        "xxz" => HamiltonianSpec::xxz_chain(n, coupling, delta)?,
        other => return Err(CliError::Input(format!("unknown model \"{other}\""))),
    };
    let circuit = otoc_core::dynamics::trotterize(&h, t, steps)?;
    write_doc(out, &io::circuit_to_doc(&circuit))?;
    manifest::emit(
        "trotterize",
        None,
        &[],
        &[out],
        started.elapsed().as_secs_f64(),
    )
}

#[derive(Serialize)]
struct BenchDoc {
    seed: u64,
    threads: usize,
    statevector_qubits: usize,
    two_qubit_gates_applied: usize,
    gates_per_second: f64,
    dqc1_mixed_qubits: usize,
    shots_sampled: u64,
    shots_per_second: f64,
}

/// Gate throughput on a seeded 20-qubit depth-100 workload and shot
/// throughput on a fixed one-clean-qubit circuit; report on stdout.
pub fn bench(seed: u64) -> Result<(), CliError> {
    use num_complex::Complex64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let n = 20usize;
    let depth = 100usize;
    let mut gates = Vec::with_capacity(depth);
    for _ in 0..depth {
        let t0 = rand::Rng::random_range(&mut rng, 0..n);
        let mut t1 = rand::Rng::random_range(&mut rng, 0..n - 1);
        if t1 >= t0 {
            t1 += 1;
        }
        let u = otoc_core::linalg::random_unitary(4, &mut rng);
        gates.push(otoc_core::circuit::Gate::dense2(t0, t1, u.data().to_vec())?);
    }
    let mut state = vec![Complex64::ZERO; 1 << n];
    state[0] = Complex64::ONE;
    let tick = Instant::now();
    for g in &gates {
        otoc_core::sim::apply_gate(&mut state, n, g);
    }
    let gate_secs = tick.elapsed().as_secs_f64();

    let payload = random_circuit(5, 20, &mut rng);
    let instance = otoc_core::reduction::compile_trace_to_otoc(&payload, 2)?;
    let d = build_otoc_dqc1(&instance)?;
    let shots = 2000u64;
    let plan = ShotPlan::new(shots, 1.0, 0.5, seed)?;
    let tick = Instant::now();
    let _ = dqc1_sample(&d, &plan)?;
    let shot_secs = tick.elapsed().as_secs_f64();

    let doc = BenchDoc {
        seed,
        threads: rayon::current_num_threads(),
        statevector_qubits: n,
        two_qubit_gates_applied: depth,
        gates_per_second: depth as f64 / gate_secs,
        dqc1_mixed_qubits: d.n_mixed(),
        shots_sampled: shots,
        shots_per_second: shots as f64 / shot_secs,
    };
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(())
}
