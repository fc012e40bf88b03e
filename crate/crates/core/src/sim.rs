//! Exact oracles and the one-clean-qubit sampling simulator.
//!
//! The statevector kernel walks amplitude pairs/quads with bit-mask strides;
//! controlled gates go through a generic scatter loop. Two trace oracles
//! (dense and statevector-sum) cross-check each other. Shot sampling draws
//! each shot from its own counter-derived stream, so counts are bit-identical
//! for any parallel partitioning.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::pauli::Probe;
use crate::reduction::OTOCInstance;

/// Statevector path cap (amplitude vector of 2^n entries).
pub const STATEVECTOR_QUBIT_CAP: usize = 24;
/// Dense-matrix path cap.
pub const DENSE_QUBIT_CAP: usize = 12;
/// Cap for trace and p0 sums over all basis states.
pub const TRACE_QUBIT_CAP: usize = 20;

/// Which statistic a one-clean-qubit circuit's 0-outcome probability encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statistic {
    RealPart,
    ImaginaryPart,
}

/// A circuit on 1 + n qubits with qubit 0 as the clean qubit. The mixed
/// register is qubits 1..=n. `meaning` records what expectation the
/// 0-outcome probability encodes, for reports and result files.
#[derive(Clone, Debug)]
pub struct DQC1Circuit {
    circuit: Circuit,
    n_mixed: usize,
    statistic: Statistic,
    meaning: String,
}

impl DQC1Circuit {
    pub fn new(
        circuit: Circuit,
        n_mixed: usize,
        statistic: Statistic,
        meaning: impl Into<String>,
    ) -> Result<Self> {
        if circuit.n_qubits() != 1 + n_mixed {
            return Err(Error::QubitCountMismatch(circuit.n_qubits(), 1 + n_mixed));
        }
        Ok(DQC1Circuit {
            circuit,
            n_mixed,
            statistic,
            meaning: meaning.into(),
        })
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    /// The clean qubit is always wire 0.
    pub fn clean_qubit(&self) -> usize {
        0
    }

    pub fn n_mixed(&self) -> usize {
        self.n_mixed
    }

    pub fn statistic(&self) -> Statistic {
        self.statistic
    }

    pub fn meaning(&self) -> &str {
        &self.meaning
    }
}

/// Shot budget and reproducibility parameters for sampling runs.
#[derive(Clone, Copy, Debug)]
pub struct ShotPlan {
    pub shots: u64,
    pub epsilon: f64,
    pub failure_prob: f64,
    pub seed: u64,
}

impl ShotPlan {
    pub fn new(shots: u64, epsilon: f64, failure_prob: f64, seed: u64) -> Result<Self> {
        if shots < 1 {
            return Err(Error::InvalidParameter("shots must be >= 1".into()));
        }
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::InvalidParameter(
                "epsilon must be in (0, 1]".into(),
            ));
        }
        if !(failure_prob > 0.0 && failure_prob < 1.0) {
            return Err(Error::InvalidParameter(
                "failure probability must be in (0, 1)".into(),
            ));
        }
        Ok(ShotPlan {
            shots,
            epsilon,
            failure_prob,
            seed,
        })
    }
}

/// Derive an independent stream seed from a master seed and a counter.
/// SplitMix64 finalizer; stable across platforms.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
fn scatter(bits: usize, fixed_sorted: &[usize]) -> usize {
    let mut x = bits;
    for &p in fixed_sorted {
        let low = x & ((1usize << p) - 1);
        x = ((x >> p) << (p + 1)) | low;
    }
    x
}

fn apply_1q_plain(state: &mut [Complex64], n: usize, t: usize, m: &[Complex64]) {
    let (m00, m01, m10, m11) = (m[0], m[1], m[2], m[3]);
    let tbit = 1usize << t;
    let dim = 1usize << n;
    let mut base = 0usize;
    while base < dim {
        for i0 in base..base + tbit {
            let i1 = i0 | tbit;
            let a = state[i0];
            let b = state[i1];
            state[i0] = m00 * a + m01 * b;
            state[i1] = m10 * a + m11 * b;
        }
        base += tbit << 1;
    }
}

fn apply_2q_plain(state: &mut [Complex64], n: usize, t0: usize, t1: usize, m: &[Complex64]) {
    let b0 = 1usize << t0;
    let b1 = 1usize << t1;
    let (lo, hi) = if t0 < t1 { (t0, t1) } else { (t1, t0) };
    let (lo_bit, hi_bit) = (1usize << lo, 1usize << hi);
    let dim = 1usize << n;

    let mut outer = 0usize;
    while outer < dim {
        let mut mid = outer;
        while mid < outer + hi_bit {
            for base in mid..mid + lo_bit {
                let i00 = base;
                let i01 = base | b0;
                let i10 = base | b1;
                let i11 = base | b0 | b1;
                let v0 = state[i00];
                let v1 = state[i01];
                let v2 = state[i10];
                let v3 = state[i11];
                state[i00] = m[0] * v0 + m[1] * v1 + m[2] * v2 + m[3] * v3;
                state[i01] = m[4] * v0 + m[5] * v1 + m[6] * v2 + m[7] * v3;
                state[i10] = m[8] * v0 + m[9] * v1 + m[10] * v2 + m[11] * v3;
                state[i11] = m[12] * v0 + m[13] * v1 + m[14] * v2 + m[15] * v3;
            }
            mid += lo_bit << 1;
        }
        outer += hi_bit << 1;
    }
}

fn apply_gate_controlled(state: &mut [Complex64], n: usize, gate: &Gate) {
    let mut fixed: Vec<usize> = gate
        .targets()
        .iter()
        .chain(gate.controls().iter().map(|(q, _)| q))
        .copied()
        .collect();
    fixed.sort_unstable();
    let ctrl_val: usize = gate
        .controls()
        .iter()
        .filter(|&&(_, p)| p == crate::circuit::Polarity::OnOne)
        .fold(0, |v, &(q, _)| v | (1 << q));
    let free = n - fixed.len();
    let m = gate.matrix();

    match gate.targets() {
        [t] => {
            let tbit = 1usize << *t;
            let (m00, m01, m10, m11) = (m[0], m[1], m[2], m[3]);
            for bits in 0..(1usize << free) {
                let i0 = scatter(bits, &fixed) | ctrl_val;
                let i1 = i0 | tbit;
                let a = state[i0];
                let b = state[i1];
                state[i0] = m00 * a + m01 * b;
                state[i1] = m10 * a + m11 * b;
            }
        }
        [t0, t1] => {
            let b0 = 1usize << *t0;
            let b1 = 1usize << *t1;
            for bits in 0..(1usize << free) {
                let i00 = scatter(bits, &fixed) | ctrl_val;
                let i01 = i00 | b0;
                let i10 = i00 | b1;
                let i11 = i00 | b0 | b1;
                let v0 = state[i00];
                let v1 = state[i01];
                let v2 = state[i10];
                let v3 = state[i11];
                state[i00] = m[0] * v0 + m[1] * v1 + m[2] * v2 + m[3] * v3;
                state[i01] = m[4] * v0 + m[5] * v1 + m[6] * v2 + m[7] * v3;
                state[i10] = m[8] * v0 + m[9] * v1 + m[10] * v2 + m[11] * v3;
                state[i11] = m[12] * v0 + m[13] * v1 + m[14] * v2 + m[15] * v3;
            }
        }
        _ => unreachable!("gates act on one or two qubits"),
    }
}

/// Apply one gate to an amplitude vector in place.
pub fn apply_gate(state: &mut [Complex64], n_qubits: usize, gate: &Gate) {
    if gate.controls().is_empty() {
        match gate.targets() {
            [t] => apply_1q_plain(state, n_qubits, *t, gate.matrix()),
            [t0, t1] => apply_2q_plain(state, n_qubits, *t0, *t1, gate.matrix()),
            _ => unreachable!(),
        }
    } else {
        apply_gate_controlled(state, n_qubits, gate);
    }
}

fn run_into(state: &mut [Complex64], circuit: &Circuit, input_basis_state: usize) {
    state.fill(Complex64::ZERO);
    state[input_basis_state] = Complex64::ONE;
    for gate in circuit.gates() {
        apply_gate(state, circuit.n_qubits(), gate);
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::CapExceeded {
            requested: n,
            cap,
        });
    }
    Ok(())
}

/// Evolve the basis state |x⟩ through the circuit: U(c)|x⟩.
pub fn run_statevector(circuit: &Circuit, input_basis_state: usize) -> Result<Vec<Complex64>> {
    let n = circuit.n_qubits();
    check_cap(n, STATEVECTOR_QUBIT_CAP)?;
    if input_basis_state >= (1usize << n) {
        return Err(Error::InvalidParameter(format!(
            "basis state {input_basis_state} out of range for {n} qubits"
        )));
    }
    let mut state = vec![Complex64::ZERO; 1 << n];
    run_into(&mut state, circuit, input_basis_state);
    Ok(state)
}

/// Dense unitary of the circuit; column j is U(c)|j⟩.
pub fn exact_unitary(circuit: &Circuit) -> Result<CMatrix> {
    let n = circuit.n_qubits();
    check_cap(n, DENSE_QUBIT_CAP)?;
    let dim = 1usize << n;
    let mut out = CMatrix::zeros(dim);
    let mut state = vec![Complex64::ZERO; dim];
    for col in 0..dim {
        run_into(&mut state, circuit, col);
        for (row, &amp) in state.iter().enumerate() {
            if amp != Complex64::ZERO {
                out.set(row, col, amp);
            }
        }
    }
    Ok(out)
}

/// Normalized trace (1/2^n) Σ_x ⟨x|U(c)|x⟩ by the statevector sum.
pub fn exact_normalized_trace(circuit: &Circuit) -> Result<Complex64> {
    let n = circuit.n_qubits();
    check_cap(n, TRACE_QUBIT_CAP)?;
    let dim = 1usize << n;
    let mut state = vec![Complex64::ZERO; dim];
    let mut acc = Complex64::ZERO;
    for x in 0..dim {
        run_into(&mut state, circuit, x);
        acc += state[x];
    }
    Ok(acc / dim as f64)
}

/// Normalized trace through the dense-matrix path; cross-checks the
/// statevector sum.
pub fn exact_normalized_trace_dense(circuit: &Circuit) -> Result<Complex64> {
    let u = exact_unitary(circuit)?;
    Ok(u.trace() / u.dim() as f64)
}

/// Exact 2k-point correlator of an instance:
/// (1/2^n) Tr[W₁(t)V₁ … W_k(t)V_k] with W(t) = U W U†, all dense.
pub fn exact_otoc(instance: &OTOCInstance) -> Result<Complex64> {
    let n = instance.u().n_qubits();
    check_cap(n, DENSE_QUBIT_CAP)?;
    let u = exact_unitary(instance.u())?;
    let udag = u.dagger();
    let dim = 1usize << n;

    let mut acc = CMatrix::identity(dim);
    for (w, v) in instance.w().iter().zip(instance.v()) {
        // acc ← acc · U W U† V, multiplying Pauli words as permutations.
        acc = acc.mul(&u);
        right_multiply_probe(&mut acc, w, n)?;
        acc = acc.mul(&udag);
        right_multiply_probe(&mut acc, v, n)?;
    }
    Ok(acc.trace() / dim as f64)
}

fn right_multiply_probe(acc: &mut CMatrix, probe: &Probe, n_qubits: usize) -> Result<()> {
    match probe {
        Probe::Pauli(p) => {
            if p.n_qubits() != n_qubits {
                return Err(Error::QubitCountMismatch(p.n_qubits(), n_qubits));
            }
            p.right_multiply_into(acc);
        }
        Probe::Local(obs) => {
            let dense = obs.embed(n_qubits)?;
            *acc = acc.mul(&dense);
        }
    }
    Ok(())
}

fn prob_clean_zero(state: &[Complex64]) -> f64 {
    // Clean qubit is bit 0: sum |amplitude|² over even indices.
    state
        .iter()
        .step_by(2)
        .map(|z| z.norm_sqr())
        .sum()
}

/// Exact 0-outcome probability of the clean qubit:
/// (1/2^n) Σ_x ‖(⟨0| ⊗ I) U |0, x⟩‖².
pub fn dqc1_exact_p0(d: &DQC1Circuit) -> Result<f64> {
    let n = d.n_mixed();
    check_cap(n, TRACE_QUBIT_CAP)?;
    let dim_mixed = 1usize << n;
    let mut state = vec![Complex64::ZERO; 1 << (n + 1)];
    let mut acc = 0.0f64;
    for x in 0..dim_mixed {
        run_into(&mut state, d.circuit(), x << 1);
        acc += prob_clean_zero(&state);
    }
    Ok(acc / dim_mixed as f64)
}

fn single_shot(d: &DQC1Circuit, seed: u64, shot: u64, state: &mut [Complex64]) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, shot));
    let x: u64 = rng.random_range(0..(1u64 << d.n_mixed()));
    run_into(state, d.circuit(), (x as usize) << 1);
    let p0 = prob_clean_zero(state);
    rng.random::<f64>() < p0
}

/// Sample the clean-qubit measurement. Each shot draws a uniform mixed-state
/// basis state and a measurement outcome from a stream derived from
/// (seed, shot index); results are identical for any worker count.
/// Returns (count_zero, count_one).
pub fn dqc1_sample(d: &DQC1Circuit, plan: &ShotPlan) -> Result<(u64, u64)> {
    check_cap(d.n_mixed(), STATEVECTOR_QUBIT_CAP - 1)?;
    let dim = 1usize << (d.n_mixed() + 1);
    let zeros: u64 = (0..plan.shots)
        .into_par_iter()
        .map_init(
            || vec![Complex64::ZERO; dim],
            |state, shot| u64::from(single_shot(d, plan.seed, shot, state)),
        )
        .sum();
    Ok((zeros, plan.shots - zeros))
}

/// Exact N-time ordered correlator (1/2^n) Tr[O₁(t₁) … O_N(t_N)] with
/// O_j(t_j) = A_j† O_j A_j and A_j the product of the first j segments.
/// Dense oracle for the forward-only builder.
pub fn exact_ntime_correlator(inst: &crate::builder::NTimeInstance) -> Result<Complex64> {
    let n = inst.n_qubits();
    check_cap(n, DENSE_QUBIT_CAP)?;
    let dim = 1usize << n;
    let mut cumulative = CMatrix::identity(dim);
    let mut acc = CMatrix::identity(dim);
    for (segment, op) in inst.segments().iter().zip(inst.operators()) {
        cumulative = exact_unitary(segment)?.mul(&cumulative);
        let heisenberg = cumulative.dagger().mul(&op.to_matrix()).mul(&cumulative);
        acc = acc.mul(&heisenberg);
    }
    Ok(acc.trace() / dim as f64)
}
