//! Gate-level circuit representation.
//!
//! Circuits are ordered gate lists over a fixed qubit count; gates carry
//! dense matrices even for named kinds so the simulation kernels stay
//! uniform. Basis states are labeled little-endian: qubit 0 is the least
//! significant bit. Circuits are immutable once built and all
//! transformations are pure.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::random_unitary;
#[cfg(test)]
use crate::linalg::CMatrix;
use crate::pauli::PauliLetter;

/// Tolerance for the U†U − I unitarity check on gate matrices.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Control polarity: fire when the control qubit is |0⟩ or |1⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    OnZero,
    OnOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    I,
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    /// Dense single-qubit unitary.
    Dense1,
    /// Dense two-qubit unitary.
    Dense2,
}

impl GateKind {
    pub fn is_named(self) -> bool {
        !matches!(self, GateKind::Dense1 | GateKind::Dense2)
    }

    fn named_matrix(self) -> Option<Vec<Complex64>> {
        let one = Complex64::ONE;
        let zero = Complex64::ZERO;
        let i = Complex64::new(0.0, 1.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let m: &[Complex64] = match self {
            GateKind::I => &[one, zero, zero, one],
            GateKind::X => &[zero, one, one, zero],
            GateKind::Y => &[zero, -i, i, zero],
            GateKind::Z => &[one, zero, zero, -one],
            GateKind::H => return Some(vec![
                Complex64::new(h, 0.0),
                Complex64::new(h, 0.0),
                Complex64::new(h, 0.0),
                Complex64::new(-h, 0.0),
            ]),
            GateKind::S => &[one, zero, zero, i],
            GateKind::Sdg => &[one, zero, zero, -i],
            GateKind::Dense1 | GateKind::Dense2 => return None,
        };
        Some(m.to_vec())
    }

    pub fn from_pauli_letter(letter: PauliLetter) -> GateKind {
        match letter {
            PauliLetter::I => GateKind::I,
            PauliLetter::X => GateKind::X,
            PauliLetter::Y => GateKind::Y,
            PauliLetter::Z => GateKind::Z,
        }
    }
}

/// One gate: a 2×2 or 4×4 unitary on explicit targets, optionally decorated
/// with any number of polarity-tagged controls.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    kind: GateKind,
    targets: Vec<usize>,
    controls: Vec<(usize, Polarity)>,
    matrix: Vec<Complex64>,
}

fn unitarity_defect(dim: usize, m: &[Complex64]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            // (U†U)[i][j] = Σ_k conj(U[k][i]) U[k][j]
            let mut acc = Complex64::ZERO;
            for k in 0..dim {
                acc += m[k * dim + i].conj() * m[k * dim + j];
            }
            let target = if i == j { Complex64::ONE } else { Complex64::ZERO };
            worst = worst.max((acc - target).norm());
        }
    }
    worst
}

impl Gate {
    pub fn named(kind: GateKind, target: usize) -> Gate {
        let matrix = kind.named_matrix().expect("named kind");
        Gate {
            kind,
            targets: vec![target],
            controls: Vec::new(),
            matrix,
        }
    }

    pub fn pauli(letter: PauliLetter, target: usize) -> Gate {
        Gate::named(GateKind::from_pauli_letter(letter), target)
    }

    pub fn dense1(target: usize, matrix: Vec<Complex64>) -> Result<Gate> {
        if matrix.len() != 4 {
            return Err(Error::BadDimension {
                expected: 4,
                got: matrix.len(),
            });
        }
        let defect = unitarity_defect(2, &matrix);
        if defect > UNITARITY_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Gate {
            kind: GateKind::Dense1,
            targets: vec![target],
            controls: Vec::new(),
            matrix,
        })
    }

    /// Two-qubit dense gate. The matrix index pairs bit(t0) with the low
    /// position: local basis index = bit(t0) + 2·bit(t1).
    pub fn dense2(t0: usize, t1: usize, matrix: Vec<Complex64>) -> Result<Gate> {
        if t0 == t1 {
            return Err(Error::DuplicateQubit(t0));
        }
        if matrix.len() != 16 {
            return Err(Error::BadDimension {
                expected: 16,
                got: matrix.len(),
            });
        }
        let defect = unitarity_defect(4, &matrix);
        if defect > UNITARITY_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Gate {
            kind: GateKind::Dense2,
            targets: vec![t0, t1],
            controls: Vec::new(),
            matrix,
        })
    }

    pub fn with_controls(mut self, controls: Vec<(usize, Polarity)>) -> Result<Gate> {
        self.controls.extend(controls);
        self.validate_indices()?;
        Ok(self)
    }

    fn validate_indices(&self) -> Result<()> {
        let mut seen: Vec<usize> = Vec::new();
        for &q in self
            .targets
            .iter()
            .chain(self.controls.iter().map(|(q, _)| q))
        {
            if seen.contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
            seen.push(q);
        }
        Ok(())
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn controls(&self) -> &[(usize, Polarity)] {
        &self.controls
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn adjoint(&self) -> Gate {
        let kind = match self.kind {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            k => k,
        };
        let dim = if self.targets.len() == 1 { 2 } else { 4 };
        let mut matrix = vec![Complex64::ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                matrix[c * dim + r] = self.matrix[r * dim + c].conj();
            }
        }
        Gate {
            kind,
            targets: self.targets.clone(),
            controls: self.controls.clone(),
            matrix,
        }
    }

    fn shifted(&self, offset: usize) -> Gate {
        Gate {
            kind: self.kind,
            targets: self.targets.iter().map(|q| q + offset).collect(),
            controls: self
                .controls
                .iter()
                .map(|&(q, p)| (q + offset, p))
                .collect(),
            matrix: self.matrix.clone(),
        }
    }

    fn remapped(&self, map: &[usize]) -> Gate {
        Gate {
            kind: self.kind,
            targets: self.targets.iter().map(|&q| map[q]).collect(),
            controls: self.controls.iter().map(|&(q, p)| (map[q], p)).collect(),
            matrix: self.matrix.clone(),
        }
    }

    fn max_index(&self) -> usize {
        self.targets
            .iter()
            .chain(self.controls.iter().map(|(q, _)| q))
            .copied()
            .max()
            .unwrap()
    }
}

/// An ordered gate list on `n_qubits` qubits; gates apply in list order.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Circuit {
        Circuit {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate_indices()?;
        if gate.max_index() >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index: gate.max_index(),
                n_qubits: self.n_qubits,
            });
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Builder-style append of a named gate; panics on a range error, which
    /// keeps test construction terse.
    pub fn with(mut self, kind: GateKind, target: usize) -> Circuit {
        self.push(Gate::named(kind, target)).expect("gate in range");
        self
    }

    /// Operator product self · other: `other` applies first.
    pub fn compose(&self, other: &Circuit) -> Result<Circuit> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::QubitCountMismatch(self.n_qubits, other.n_qubits));
        }
        let mut gates = other.gates.clone();
        gates.extend(self.gates.iter().cloned());
        Ok(Circuit {
            n_qubits: self.n_qubits,
            gates,
        })
    }

    /// Gate order reversed, every gate conjugate-transposed. Control
    /// polarities are unchanged.
    pub fn adjoint(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::adjoint).collect(),
        }
    }

    /// Place this circuit inside a wider register, shifted up by `offset`.
    pub fn embedded(&self, new_n: usize, offset: usize) -> Result<Circuit> {
        if offset + self.n_qubits > new_n {
            return Err(Error::QubitOutOfRange {
                index: offset + self.n_qubits - 1,
                n_qubits: new_n,
            });
        }
        Ok(Circuit {
            n_qubits: new_n,
            gates: self.gates.iter().map(|g| g.shifted(offset)).collect(),
        })
    }

    /// Decorate every gate with the given control set. The controls are new
    /// wires inserted at the stated indices of the widened register; the
    /// original qubits fill the remaining indices in order. The result acts
    /// as P ⊗ U(self) + (I − P) ⊗ I, with P the projector onto the selected
    /// polarity pattern.
    pub fn controlled_on(&self, controls: &[(usize, Polarity)]) -> Result<Circuit> {
        let n_new = self.n_qubits + controls.len();
        let mut taken = vec![false; n_new];
        for &(q, _) in controls {
            if q >= n_new {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    n_qubits: n_new,
                });
            }
            if taken[q] {
                return Err(Error::DuplicateQubit(q));
            }
            taken[q] = true;
        }
        let map: Vec<usize> = (0..n_new).filter(|&q| !taken[q]).collect();
        debug_assert_eq!(map.len(), self.n_qubits);

        let mut gates = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let g = g.remapped(&map).with_controls(controls.to_vec())?;
            gates.push(g);
        }
        Ok(Circuit {
            n_qubits: n_new,
            gates,
        })
    }
}

/// Seeded random circuit: layers of dense one- and two-qubit unitaries on
/// random wires. Used by oracle tests and the bench workloads.
pub fn random_circuit<R: Rng>(n_qubits: usize, depth: usize, rng: &mut R) -> Circuit {
    let mut c = Circuit::new(n_qubits);
    for _ in 0..depth {
        if n_qubits >= 2 && rng.random::<f64>() < 0.6 {
            let t0 = rng.random_range(0..n_qubits);
            let mut t1 = rng.random_range(0..n_qubits - 1);
            if t1 >= t0 {
                t1 += 1;
            }
            let u = random_unitary(4, rng);
            c.push(Gate::dense2(t0, t1, u.data().to_vec()).unwrap())
                .unwrap();
        } else {
            let t = rng.random_range(0..n_qubits);
            let u = random_unitary(2, rng);
            c.push(Gate::dense1(t, u.data().to_vec()).unwrap()).unwrap();
        }
    }
    c
}

/// Reference dense unitary of a single gate on the full register, built from
/// projectors. Slow; exists as an independent check on the statevector
/// kernels.
#[cfg(test)]
pub(crate) fn gate_dense_reference(gate: &Gate, n_qubits: usize) -> CMatrix {
    let dim = 1usize << n_qubits;
    let local_dim = 1usize << gate.targets().len();
    let mut acted = CMatrix::zeros(dim);
    // P ⊗ U part: basis states matching the controls get the gate action.
    for col in 0..dim {
        let fires = gate
            .controls()
            .iter()
            .all(|&(q, p)| ((col >> q) & 1 == 1) == (p == Polarity::OnOne));
        if !fires {
            acted.set(col, col, Complex64::ONE);
            continue;
        }
        let local_col: usize = gate
            .targets()
            .iter()
            .enumerate()
            .map(|(i, &q)| ((col >> q) & 1) << i)
            .sum();
        for local_row in 0..local_dim {
            let mut row = col;
            for (i, &q) in gate.targets().iter().enumerate() {
                row = (row & !(1 << q)) | (((local_row >> i) & 1) << q);
            }
            let v = gate.matrix()[local_row * local_dim + local_col];
            if v != Complex64::ZERO {
                acted.set(row, col, v);
            }
        }
    }
    acted
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::exact_unitary;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn compose_identity_case() {
        let c = Circuit::new(2).with(GateKind::H, 0).with(GateKind::X, 1);
        let empty = Circuit::new(2);
        let left = empty.compose(&c).unwrap();
        assert_eq!(left, c);
        let right = c.compose(&empty).unwrap();
        assert_eq!(right, c);
    }

    #[test]
    fn compose_order_is_operator_product() {
        // compose(a, b) applies b first: U = Ua · Ub
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_circuit(2, 6, &mut rng);
        let b = random_circuit(2, 6, &mut rng);
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.len(), a.len() + b.len());
        let ua = exact_unitary(&a).unwrap();
        let ub = exact_unitary(&b).unwrap();
        let uab = exact_unitary(&ab).unwrap();
        assert!(uab.max_abs_diff(&ua.mul(&ub)) <= 1e-10);
    }

    #[test]
    fn compose_rejects_width_mismatch() {
        let a = Circuit::new(2);
        let b = Circuit::new(3);
        assert!(matches!(
            a.compose(&b),
            Err(Error::QubitCountMismatch(2, 3))
        ));
    }

    #[test]
    fn adjoint_composed_with_self_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let c = random_circuit(3, 10, &mut rng);
        let u = exact_unitary(&c.compose(&c.adjoint()).unwrap()).unwrap();
        assert!(u.max_abs_diff(&CMatrix::identity(8)) <= 1e-10);
    }

    #[test]
    fn adjoint_of_named_gates() {
        let h = Gate::named(GateKind::H, 0).adjoint();
        assert_eq!(h.kind(), GateKind::H);
        let s = Gate::named(GateKind::S, 0).adjoint();
        assert_eq!(s.kind(), GateKind::Sdg);
        assert_eq!(s.matrix()[3], Complex64::new(0.0, -1.0));
        let sdg = s.adjoint();
        assert_eq!(sdg.kind(), GateKind::S);
    }

    #[test]
    fn adjoint_matches_dagger_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let c = random_circuit(3, 12, &mut rng);
        let u = exact_unitary(&c).unwrap();
        let uadj = exact_unitary(&c.adjoint()).unwrap();
        assert!(uadj.max_abs_diff(&u.dagger()) <= 1e-10);
    }

    #[test]
    fn adjoint_is_an_involution_gate_for_gate() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let mut c = random_circuit(3, 8, &mut rng);
        c.push(Gate::named(GateKind::S, 1)).unwrap();
        c.push(
            Gate::named(GateKind::X, 2)
                .with_controls(vec![(0, Polarity::OnZero)])
                .unwrap(),
        )
        .unwrap();
        assert_eq!(c.adjoint().adjoint(), c);
    }

    #[test]
    fn controlled_on_x_gives_cnot() {
        let x = Circuit::new(1).with(GateKind::X, 0);
        let cnot = x.controlled_on(&[(0, Polarity::OnOne)]).unwrap();
        assert_eq!(cnot.n_qubits(), 2);
        let u = exact_unitary(&cnot).unwrap();
        // Little-endian: control is the low bit; |q1 q0⟩ = |01⟩ ↔ |11⟩.
        let mut expected = CMatrix::zeros(4);
        expected.set(0, 0, Complex64::ONE);
        expected.set(3, 1, Complex64::ONE);
        expected.set(2, 2, Complex64::ONE);
        expected.set(1, 3, Complex64::ONE);
        assert!(u.max_abs_diff(&expected) <= 1e-12);
    }

    #[test]
    fn controlled_on_two_anticontrols_block_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let c = random_circuit(2, 8, &mut rng);
        let gated = c
            .controlled_on(&[(0, Polarity::OnZero), (1, Polarity::OnZero)])
            .unwrap();
        let u = exact_unitary(&gated).unwrap();

        // Oracle: |00⟩⟨00| ⊗ U(c) + (I − |00⟩⟨00|) ⊗ I, controls on the two
        // low bits.
        let uc = exact_unitary(&c).unwrap();
        let mut expected = CMatrix::identity(16);
        for r in 0..4 {
            for cx in 0..4 {
                expected.set(r << 2, cx << 2, uc.get(r, cx));
            }
        }
        assert!(u.max_abs_diff(&expected) <= 1e-10);
    }

    #[test]
    fn controlled_on_empty_circuit() {
        let empty = Circuit::new(2);
        let gated = empty
            .controlled_on(&[(0, Polarity::OnOne)])
            .unwrap();
        assert_eq!(gated.n_qubits(), 3);
        assert!(gated.is_empty());
        let u = exact_unitary(&gated).unwrap();
        assert!(u.max_abs_diff(&CMatrix::identity(8)) == 0.0);
    }

    #[test]
    fn controlled_on_distributes_over_compose() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let a = random_circuit(2, 5, &mut rng);
        let b = random_circuit(2, 5, &mut rng);
        let controls = [(1, Polarity::OnOne)];
        let lhs = a.compose(&b).unwrap().controlled_on(&controls).unwrap();
        let rhs = a
            .controlled_on(&controls)
            .unwrap()
            .compose(&b.controlled_on(&controls).unwrap())
            .unwrap();
        let ul = exact_unitary(&lhs).unwrap();
        let ur = exact_unitary(&rhs).unwrap();
        assert!(ul.max_abs_diff(&ur) <= 1e-10);
    }

    #[test]
    fn gate_rejects_nonunitary_matrix() {
        let bad = vec![
            Complex64::ONE,
            Complex64::ONE,
            Complex64::ZERO,
            Complex64::ONE,
        ];
        assert!(matches!(Gate::dense1(0, bad), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn gate_rejects_overlapping_indices() {
        let g = Gate::named(GateKind::X, 1).with_controls(vec![(1, Polarity::OnOne)]);
        assert!(matches!(g, Err(Error::DuplicateQubit(1))));
        assert!(Gate::dense2(2, 2, vec![Complex64::ZERO; 16]).is_err());
    }

    #[test]
    fn push_checks_range() {
        let mut c = Circuit::new(2);
        assert!(matches!(
            c.push(Gate::named(GateKind::X, 2)),
            Err(Error::QubitOutOfRange { index: 2, .. })
        ));
    }
}
