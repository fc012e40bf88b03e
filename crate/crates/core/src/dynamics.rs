//! Spin-chain Hamiltonians and first-order product-formula circuits.
//!
//! Each Hamiltonian term is a weighted Pauli word on at most two sites;
//! exp(−iθ·word) has the closed form cos θ I − i sin θ σ, emitted as a dense
//! one- or two-qubit gate. Higher-order formulas are out of scope.

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::estimator::{estimate_otoc, EstimateResult};
use crate::linalg::CMatrix;
use crate::pauli::{PauliLetter, PauliString, Probe};
use crate::reduction::OTOCInstance;
use crate::sim::exact_otoc;

/// A sum of weighted nearest-neighbor Pauli words.
#[derive(Clone, Debug)]
pub struct HamiltonianSpec {
    n_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl HamiltonianSpec {
    pub fn new(n_qubits: usize, terms: Vec<(f64, PauliString)>) -> Result<Self> {
        for (coeff, word) in &terms {
            if !coeff.is_finite() {
                return Err(Error::InvalidParameter(
                    "Hamiltonian coefficients must be finite".into(),
                ));
            }
            if word.n_qubits() != n_qubits {
                return Err(Error::QubitCountMismatch(word.n_qubits(), n_qubits));
            }
            if word.weight() > 2 {
                return Err(Error::SupportTooLarge(word.weight(), 2));
            }
        }
        Ok(HamiltonianSpec { n_qubits, terms })
    }

    /// Transverse-field Ising chain, open boundary:
    /// H = J Σ Z_i Z_{i+1} + g Σ X_i.
    pub fn ising_chain(n_qubits: usize, coupling: f64, field: f64) -> Result<Self> {
        let mut terms = Vec::new();
        for i in 0..n_qubits.saturating_sub(1) {
            terms.push((coupling, two_site(n_qubits, i, PauliLetter::Z, PauliLetter::Z)?));
        }
        for i in 0..n_qubits {
            terms.push((field, PauliString::single(n_qubits, i, PauliLetter::X)?));
        }
        HamiltonianSpec::new(n_qubits, terms)
    }

    /// XXZ chain, open boundary:
    /// H = J Σ (X_i X_{i+1} + Y_i Y_{i+1} + Δ Z_i Z_{i+1}).
    pub fn xxz_chain(n_qubits: usize, coupling: f64, anisotropy: f64) -> Result<Self> {
        let mut terms = Vec::new();
        for i in 0..n_qubits.saturating_sub(1) {
            terms.push((coupling, two_site(n_qubits, i, PauliLetter::X, PauliLetter::X)?));
            terms.push((coupling, two_site(n_qubits, i, PauliLetter::Y, PauliLetter::Y)?));
            terms.push((
                coupling * anisotropy,
                two_site(n_qubits, i, PauliLetter::Z, PauliLetter::Z)?,
            ));
        }
        HamiltonianSpec::new(n_qubits, terms)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    /// Dense 2^n × 2^n matrix of the Hamiltonian, for exponential oracles.
    pub fn to_matrix(&self) -> CMatrix {
        let mut h = CMatrix::zeros(1 << self.n_qubits);
        for (coeff, word) in &self.terms {
            h = h.add(&word.to_matrix().scale(Complex64::new(*coeff, 0.0)));
        }
        h
    }
}

fn two_site(n: usize, i: usize, a: PauliLetter, b: PauliLetter) -> Result<PauliString> {
    if i + 1 >= n {
        return Err(Error::QubitOutOfRange {
            index: i + 1,
            n_qubits: n,
        });
    }
    let mut letters = vec![PauliLetter::I; n];
    letters[i] = a;
    letters[i + 1] = b;
    Ok(PauliString::new(letters))
}

/// exp(−iθ σ) for a weight-1 or weight-2 Pauli word, as a gate.
fn pauli_rotation_gate(word: &PauliString, theta: f64) -> Result<Gate> {
    let sites: Vec<usize> = word
        .letters()
        .iter()
        .enumerate()
        .filter(|(_, &l)| l != PauliLetter::I)
        .map(|(q, _)| q)
        .collect();
    let cos = Complex64::new(theta.cos(), 0.0);
    let msin = Complex64::new(0.0, -theta.sin());
    match sites.as_slice() {
        [] => {
            // Identity word: a pure phase e^{−iθ}.
            let phase = cos + msin;
            Gate::dense1(0, vec![phase, Complex64::ZERO, Complex64::ZERO, phase])
        }
        [q] => {
            let sigma = word.letter(*q).matrix();
            let m = CMatrix::identity(2).scale(cos).add(&sigma.scale(msin));
            Gate::dense1(*q, m.data().to_vec())
        }
        [q0, q1] => {
            // Gate matrix indexes bit(q0) as the low position, so the q1
            // letter sits on the high factor of the Kronecker product.
            let sigma = word.letter(*q1).matrix().kron(&word.letter(*q0).matrix());
            let m = CMatrix::identity(4).scale(cos).add(&sigma.scale(msin));
            Gate::dense2(*q0, *q1, m.data().to_vec())
        }
        _ => Err(Error::SupportTooLarge(sites.len(), 2)),
    }
}

/// First-order product formula: `steps` repetitions of one exponential per
/// term. Zero-angle rotations are dropped, so t = 0 yields an empty circuit.
pub fn trotterize(h: &HamiltonianSpec, t: f64, steps: usize) -> Result<Circuit> {
    if steps < 1 {
        return Err(Error::InvalidParameter("steps must be >= 1".into()));
    }
    let dt = t / steps as f64;
    let mut c = Circuit::new(h.n_qubits());
    for _ in 0..steps {
        for (coeff, word) in h.terms() {
            let theta = coeff * dt;
            if theta == 0.0 {
                continue;
            }
            c.push(pauli_rotation_gate(word, theta)?)?;
        }
    }
    Ok(c)
}

/// How `autocorrelator_curve` evaluates each grid point.
#[derive(Clone, Copy, Debug)]
pub enum CurveMode {
    Exact,
    Sampled {
        epsilon: f64,
        failure_prob: f64,
        seed: u64,
    },
}

/// ⟨O(t) O⟩ over a time grid under Trotterized evolution. Exact mode runs
/// the dense correlator oracle; sampled mode runs the one-clean-qubit
/// estimator per grid point.
pub fn autocorrelator_curve(
    h: &HamiltonianSpec,
    observable: &PauliString,
    t_grid: &[f64],
    steps: usize,
    mode: CurveMode,
) -> Result<Vec<(f64, Complex64)>> {
    if t_grid.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if observable.n_qubits() != h.n_qubits() {
        return Err(Error::QubitCountMismatch(
            observable.n_qubits(),
            h.n_qubits(),
        ));
    }
    let probe = Probe::Pauli(observable.clone());
    let mut curve = Vec::with_capacity(t_grid.len());
    for (i, &t) in t_grid.iter().enumerate() {
        let u_t = trotterize(h, t, steps)?;
        let value = match mode {
            CurveMode::Exact => {
                let inst =
                    OTOCInstance::new(u_t, vec![probe.clone()], vec![probe.clone()])?;
                exact_otoc(&inst)?
            }
            CurveMode::Sampled {
                epsilon,
                failure_prob,
                seed,
            } => {
                let est: EstimateResult = estimate_otoc(
                    &u_t,
                    std::slice::from_ref(&probe),
                    std::slice::from_ref(&probe),
                    epsilon,
                    failure_prob / t_grid.len() as f64,
                    crate::sim::derive_seed(seed, i as u64),
                )?;
                est.value
            }
        };
        curve.push((t, value));
    }
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::expm;
    use crate::sim::exact_unitary;

    fn dense_evolution(h: &HamiltonianSpec, t: f64) -> CMatrix {
        expm(&h.to_matrix().scale(Complex64::new(0.0, -t)))
    }

    #[test]
    fn zero_time_gives_identity_circuit() {
        let h = HamiltonianSpec::ising_chain(3, 1.0, 0.7).unwrap();
        let c = trotterize(&h, 0.0, 4).unwrap();
        assert!(c.is_empty());
        let u = exact_unitary(&c).unwrap();
        assert!(u.max_abs_diff(&CMatrix::identity(8)) == 0.0);
    }

    #[test]
    fn single_term_is_exact_at_one_step() {
        let omega = 0.9;
        let h = HamiltonianSpec::new(
            1,
            vec![(omega, PauliString::parse("Z").unwrap())],
        )
        .unwrap();
        let t = 1.3;
        let u = exact_unitary(&trotterize(&h, t, 1).unwrap()).unwrap();
        assert!(u.max_abs_diff(&dense_evolution(&h, t)) <= 1e-12);
        // More steps change nothing for a single commuting term.
        let u5 = exact_unitary(&trotterize(&h, t, 5).unwrap()).unwrap();
        assert!(u5.max_abs_diff(&dense_evolution(&h, t)) <= 1e-12);
    }

    #[test]
    fn commuting_terms_exact_at_one_step() {
        let zz = |i| two_site(3, i, PauliLetter::Z, PauliLetter::Z).unwrap();
        let h = HamiltonianSpec::new(3, vec![(0.8, zz(0)), (-0.3, zz(1))]).unwrap();
        let u = exact_unitary(&trotterize(&h, 0.7, 1).unwrap()).unwrap();
        assert!(u.max_abs_diff(&dense_evolution(&h, 0.7)) <= 1e-10);
    }

    #[test]
    fn trotter_error_halves_as_steps_double() {
        let h = HamiltonianSpec::ising_chain(3, 1.0, 0.9).unwrap();
        let t = 1.0;
        let exact = dense_evolution(&h, t);
        let err = |steps: usize| {
            exact_unitary(&trotterize(&h, t, steps).unwrap())
                .unwrap()
                .max_abs_diff(&exact)
        };
        let (e8, e16, e32) = (err(8), err(16), err(32));
        let r1 = e16 / e8;
        let r2 = e32 / e16;
        assert!((0.4..=0.6).contains(&r1), "ratio 8→16 = {r1}");
        assert!((0.4..=0.6).contains(&r2), "ratio 16→32 = {r2}");
    }

    #[test]
    fn trotter_output_is_unitary() {
        let h = HamiltonianSpec::xxz_chain(3, 1.0, 0.5).unwrap();
        for steps in [1, 3, 10] {
            let u = exact_unitary(&trotterize(&h, 0.8, steps).unwrap()).unwrap();
            assert!(u.unitarity_defect() <= 1e-10);
        }
    }

    #[test]
    fn steps_must_be_positive() {
        let h = HamiltonianSpec::ising_chain(2, 1.0, 1.0).unwrap();
        assert!(trotterize(&h, 1.0, 0).is_err());
    }

    #[test]
    fn hamiltonian_rejects_wide_words() {
        let bad = PauliString::parse("XXX").unwrap();
        assert!(matches!(
            HamiltonianSpec::new(3, vec![(1.0, bad)]),
            Err(Error::SupportTooLarge(3, 2))
        ));
    }

    #[test]
    fn autocorrelator_constant_for_commuting_observable() {
        // O = Z commutes with H = ω Z, so ⟨O(t)O⟩ = 1 on the whole grid.
        let h = HamiltonianSpec::new(1, vec![(0.6, PauliString::parse("Z").unwrap())]).unwrap();
        let o = PauliString::parse("Z").unwrap();
        let curve =
            autocorrelator_curve(&h, &o, &[0.0, 0.5, 1.0, 2.0], 3, CurveMode::Exact).unwrap();
        for (_, value) in curve {
            assert!((value - Complex64::ONE).norm() <= 1e-10);
        }
    }

    #[test]
    fn autocorrelator_is_one_at_time_zero() {
        let h = HamiltonianSpec::ising_chain(3, 1.0, 0.5).unwrap();
        for label in ["XII", "IYI", "IIZ"] {
            let o = PauliString::parse(label).unwrap();
            let curve = autocorrelator_curve(&h, &o, &[0.0], 2, CurveMode::Exact).unwrap();
            assert!((curve[0].1 - Complex64::ONE).norm() <= 1e-12);
        }
    }

    #[test]
    fn sampled_curve_tracks_exact_curve() {
        let h = HamiltonianSpec::ising_chain(4, 1.0, 0.8).unwrap();
        let o = PauliString::parse("ZIII").unwrap();
        let grid = [0.3, 0.9];
        let eps = 0.1;
        let exact = autocorrelator_curve(&h, &o, &grid, 4, CurveMode::Exact).unwrap();
        let sampled = autocorrelator_curve(
            &h,
            &o,
            &grid,
            4,
            CurveMode::Sampled {
                epsilon: eps,
                failure_prob: 0.05,
                seed: 2024,
            },
        )
        .unwrap();
        for ((_, e), (_, s)) in exact.iter().zip(&sampled) {
            assert!((e - s).norm() <= eps, "exact {e}, sampled {s}");
        }
    }

    #[test]
    fn empty_grid_rejected() {
        let h = HamiltonianSpec::ising_chain(2, 1.0, 1.0).unwrap();
        let o = PauliString::parse("ZI").unwrap();
        assert!(matches!(
            autocorrelator_curve(&h, &o, &[], 2, CurveMode::Exact),
            Err(Error::EmptyFamily)
        ));
    }
}
