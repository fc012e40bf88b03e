//! Synthesis of one-clean-qubit circuits for correlator estimation.
//!
//! All builders emit a Hadamard sandwich on the clean qubit (wire 0) around a
//! body whose two clean-qubit branches A₀, A₁ satisfy
//! tr̃[A₀A₁†] = conj(⟨·⟩) for the advertised expectation. That single
//! convention makes the measured statistic uniform across builders:
//!
//!   p0 = (1 + Re ⟨·⟩) / 2,  and with an Sdg inserted on the clean qubit
//!   p0 = (1 + Im ⟨·⟩) / 2.
//!
//! The paired builder consumes two probe pairs per evolution round trip, so
//! it applies U or U† only k times where the single-sided fallback needs 2k.

use crate::circuit::{Circuit, Gate, GateKind, Polarity};
use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::reduction::OTOCInstance;
use crate::sim::{DQC1Circuit, Statistic};

/// An N-time ordered correlator problem: segment j evolves from t_{j-1} to
/// t_j; only forward segments ever appear in the synthesized circuit.
#[derive(Clone, Debug)]
pub struct NTimeInstance {
    segments: Vec<Circuit>,
    operators: Vec<PauliString>,
    times: Vec<f64>,
}

impl NTimeInstance {
    pub fn new(segments: Vec<Circuit>, operators: Vec<PauliString>, times: Vec<f64>) -> Result<Self> {
        if segments.is_empty()
            || segments.len() != operators.len()
            || segments.len() != times.len()
        {
            return Err(Error::ProbeCountMismatch(segments.len(), operators.len()));
        }
        let n = segments[0].n_qubits();
        for s in &segments {
            if s.n_qubits() != n {
                return Err(Error::QubitCountMismatch(s.n_qubits(), n));
            }
        }
        for o in &operators {
            if o.n_qubits() != n {
                return Err(Error::QubitCountMismatch(o.n_qubits(), n));
            }
        }
        if times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::DecreasingTimes);
        }
        Ok(NTimeInstance {
            segments,
            operators,
            times,
        })
    }

    pub fn segments(&self) -> &[Circuit] {
        &self.segments
    }

    pub fn operators(&self) -> &[PauliString] {
        &self.operators
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn n(&self) -> usize {
        self.segments.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.segments[0].n_qubits()
    }
}

/// Clean-qubit-conditioned application of a Pauli word on the mixed
/// register: Λ₀(O) = |0⟩⟨0| ⊗ O + |1⟩⟨1| ⊗ I, Λ₁ the counterpart. Emitted as
/// one controlled Pauli gate per non-identity letter.
pub fn lambda_control(op: &PauliString, polarity: Polarity) -> Result<Circuit> {
    let mut c = Circuit::new(1 + op.n_qubits());
    for (q, &letter) in op.letters().iter().enumerate() {
        if letter == crate::pauli::PauliLetter::I {
            continue;
        }
        c.push(Gate::pauli(letter, 1 + q).with_controls(vec![(0, polarity)])?)?;
    }
    Ok(c)
}

fn append(dst: &mut Circuit, src: &Circuit) {
    for g in src.gates() {
        dst.push(g.clone()).expect("widths match");
    }
}

fn pauli_words(instance: &OTOCInstance) -> Result<(Vec<PauliString>, Vec<PauliString>)> {
    let grab = |probes: &[crate::pauli::Probe]| -> Result<Vec<PauliString>> {
        probes
            .iter()
            .enumerate()
            .map(|(i, p)| p.as_pauli().cloned().ok_or(Error::NonPauliProbe(i)))
            .collect()
    };
    Ok((grab(instance.w())?, grab(instance.v())?))
}

fn finish(body: Circuit, n_mixed: usize, meaning: String) -> Result<DQC1Circuit> {
    let h = Circuit::new(1 + n_mixed).with(GateKind::H, 0);
    let mut circuit = h.clone();
    append(&mut circuit, &body);
    append(&mut circuit, &h);
    DQC1Circuit::new(circuit, n_mixed, Statistic::RealPart, meaning)
}

/// Paired builder for even k: each round j handles probe pairs j and
/// k−j+1 with one U† and one U, halving the evolution depth. Odd k falls
/// back to the single-sided construction. Probes must be Pauli words;
/// decompose observables first.
pub fn build_otoc_dqc1(instance: &OTOCInstance) -> Result<DQC1Circuit> {
    let (w, v) = pauli_words(instance)?;
    let k = instance.k();
    if k % 2 == 1 {
        return build_otoc_dqc1_fallback(instance);
    }
    let n = instance.u().n_qubits();
    let u = instance.u().embedded(1 + n, 1)?;
    let u_dag = u.adjoint();

    let mut body = Circuit::new(1 + n);
    for j in (1..=k / 2).rev() {
        // Round j applies, in time order:
        //   Λ₁(V_j), U†, Λ₁(W_j), Λ₀(W_{k-j+1}), U, Λ₀(V_{k-j+1})
        let mate = k - j + 1;
        append(&mut body, &lambda_control(&v[j - 1], Polarity::OnOne)?);
        append(&mut body, &u_dag);
        append(&mut body, &lambda_control(&w[j - 1], Polarity::OnOne)?);
        append(&mut body, &lambda_control(&w[mate - 1], Polarity::OnZero)?);
        append(&mut body, &u);
        append(&mut body, &lambda_control(&v[mate - 1], Polarity::OnZero)?);
    }
    finish(body, n, format!("Re 2k-point correlator, k = {k}, paired"))
}

/// Single-sided construction, valid for any k ≥ 1: every probe of the
/// alternating word is applied under an on-one control while the U/U†
/// segments stay uncontrolled, so the on-zero branch telescopes to the
/// identity.
pub fn build_otoc_dqc1_fallback(instance: &OTOCInstance) -> Result<DQC1Circuit> {
    let (w, v) = pauli_words(instance)?;
    let k = instance.k();
    let n = instance.u().n_qubits();
    let u = instance.u().embedded(1 + n, 1)?;
    let u_dag = u.adjoint();

    let mut body = Circuit::new(1 + n);
    for j in (1..=k).rev() {
        append(&mut body, &lambda_control(&v[j - 1], Polarity::OnOne)?);
        append(&mut body, &u_dag);
        append(&mut body, &lambda_control(&w[j - 1], Polarity::OnOne)?);
        append(&mut body, &u);
    }
    finish(
        body,
        n,
        format!("Re 2k-point correlator, k = {k}, single-sided"),
    )
}

/// Forward-only builder for N-time ordered correlators: segment j then a
/// clean-controlled O_j, repeated in time order. No segment adjoints appear.
pub fn build_ntime_dqc1(instance: &NTimeInstance) -> Result<DQC1Circuit> {
    let n = instance.n_qubits();
    let mut body = Circuit::new(1 + n);
    for (segment, op) in instance.segments().iter().zip(instance.operators()) {
        append(&mut body, &segment.embedded(1 + n, 1)?);
        append(&mut body, &lambda_control(op, Polarity::OnZero)?);
    }
    finish(
        body,
        n,
        format!("Re {}-time ordered correlator", instance.n()),
    )
}

/// Switch a real-part circuit to the imaginary part by inserting Sdg on the
/// clean qubit just before the closing Hadamard: p0 = (1 + Im ⟨·⟩) / 2.
pub fn imaginary_variant(d: &DQC1Circuit) -> Result<DQC1Circuit> {
    if d.statistic() == Statistic::ImaginaryPart {
        return Err(Error::AlreadyImaginary);
    }
    let last = d.circuit().gates().last();
    let closes_with_h = matches!(last, Some(g) if g.kind() == GateKind::H && g.targets() == [0] && g.controls().is_empty());
    if !closes_with_h {
        return Err(Error::MissingHadamardSandwich);
    }
    let n_mixed = d.n_mixed();
    let meaning = format!("{} (imaginary part)", d.meaning());
    let mut circuit = Circuit::new(1 + n_mixed);
    let gates = d.circuit().gates();
    for g in &gates[..gates.len() - 1] {
        circuit.push(g.clone())?;
    }
    circuit.push(Gate::named(GateKind::Sdg, 0))?;
    circuit.push(gates[gates.len() - 1].clone())?;
    DQC1Circuit::new(circuit, n_mixed, Statistic::ImaginaryPart, meaning)
}
