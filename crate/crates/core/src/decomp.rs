//! Pauli-basis decomposition of local observables.
//!
//! α_σ = Tr[σ M] / 2^l over all 4^l words on the support; decomposition is
//! over the complex field and assumes nothing about Hermiticity.

use num_complex::Complex64;

use crate::error::Result;
use crate::linalg::CMatrix;
use crate::pauli::{LocalObservable, PauliLetter, PauliString};

/// Coefficients below this are dropped from decompositions.
pub const PRUNE_TOL: f64 = 1e-12;

/// A pruned Pauli expansion of a local operator. Words live on the support
/// (length l), not the full register.
#[derive(Clone, Debug)]
pub struct PauliDecomposition {
    terms: Vec<(Complex64, PauliString)>,
    support: Vec<usize>,
}

impl PauliDecomposition {
    pub fn terms(&self) -> &[(Complex64, PauliString)] {
        &self.terms
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn l(&self) -> usize {
        self.support.len()
    }

    /// Σ_σ |α_σ|², the squared Hilbert-Schmidt norm over 2^l.
    pub fn coefficient_norm_sqr(&self) -> f64 {
        self.terms.iter().map(|(a, _)| a.norm_sqr()).sum()
    }
}

const LETTERS: [PauliLetter; 4] = [
    PauliLetter::I,
    PauliLetter::X,
    PauliLetter::Y,
    PauliLetter::Z,
];

fn word_for(code: usize, l: usize) -> PauliString {
    let letters = (0..l).map(|q| LETTERS[(code >> (2 * q)) & 3]).collect();
    PauliString::new(letters)
}

/// Expand an observable in the Pauli basis on its support.
pub fn decompose(obs: &LocalObservable) -> Result<PauliDecomposition> {
    let l = obs.l();
    let dim = 1usize << l;
    let mut terms = Vec::new();
    for code in 0..(1usize << (2 * l)) {
        let word = word_for(code, l);
        // Tr[σ M]: σ columns are signed unit vectors, so the trace reads one
        // entry of M per column.
        let sigma = word.to_matrix();
        let mut tr = Complex64::ZERO;
        for row in 0..dim {
            for col in 0..dim {
                let s = sigma.get(row, col);
                if s != Complex64::ZERO {
                    tr += s * obs.matrix().get(col, row);
                }
            }
        }
        let alpha = tr / dim as f64;
        if alpha.norm() >= PRUNE_TOL {
            terms.push((alpha, word));
        }
    }
    Ok(PauliDecomposition {
        terms,
        support: obs.support().to_vec(),
    })
}

/// Σ α_σ σ as a dense 2^l × 2^l matrix.
pub fn reconstruct(d: &PauliDecomposition) -> CMatrix {
    let dim = 1usize << d.l();
    let mut out = CMatrix::zeros(dim);
    for (alpha, word) in &d.terms {
        out = out.add(&word.to_matrix().scale(*alpha));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_unitary;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn obs1(matrix: CMatrix) -> LocalObservable {
        LocalObservable::new(vec![0], matrix).unwrap()
    }

    #[test]
    fn x_decomposes_to_single_term() {
        let d = decompose(&obs1(PauliLetter::X.matrix())).unwrap();
        assert_eq!(d.terms().len(), 1);
        let (alpha, word) = &d.terms()[0];
        assert!((alpha - Complex64::ONE).norm() < 1e-14);
        assert_eq!(word.label(), "X");
    }

    #[test]
    fn projector_decomposes_to_half_i_plus_half_z() {
        let mut proj = CMatrix::zeros(2);
        proj.set(0, 0, Complex64::ONE);
        let d = decompose(&obs1(proj)).unwrap();
        assert_eq!(d.terms().len(), 2);
        for (alpha, word) in d.terms() {
            assert!(word.label() == "I" || word.label() == "Z");
            assert!((alpha - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn roundtrip_hermitian_and_general_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..10 {
            // Hermitian 4×4: A + A†
            let a = random_unitary(4, &mut rng);
            let herm = a.add(&a.dagger());
            let obs = LocalObservable::new(vec![0, 1], herm.clone()).unwrap();
            let rec = reconstruct(&decompose(&obs).unwrap());
            assert!(rec.max_abs_diff(&herm) <= 1e-12);

            // General complex 4×4 (no Hermiticity assumed).
            let b = random_unitary(4, &mut rng).scale(Complex64::new(0.7, -1.3));
            let obs = LocalObservable::new(vec![0, 1], b.clone()).unwrap();
            let rec = reconstruct(&decompose(&obs).unwrap());
            assert!(rec.max_abs_diff(&b) <= 1e-12);
        }
    }

    #[test]
    fn reconstruct_identity_term() {
        let d = decompose(&obs1(CMatrix::identity(2))).unwrap();
        assert_eq!(d.terms().len(), 1);
        assert!(reconstruct(&d).max_abs_diff(&CMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn decomposition_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let m = random_unitary(4, &mut rng);
        let n = random_unitary(4, &mut rng);
        let a = Complex64::new(0.3, -0.8);
        let b = Complex64::new(-1.1, 0.2);
        let combo = m.scale(a).add(&n.scale(b));

        let dm = decompose(&LocalObservable::new(vec![0, 1], m).unwrap()).unwrap();
        let dn = decompose(&LocalObservable::new(vec![0, 1], n).unwrap()).unwrap();
        let dc = decompose(&LocalObservable::new(vec![0, 1], combo).unwrap()).unwrap();

        // Compare termwise via lookup; absent terms are zero.
        let lookup = |d: &PauliDecomposition, label: &str| -> Complex64 {
            d.terms()
                .iter()
                .find(|(_, w)| w.label() == label)
                .map(|(c, _)| *c)
                .unwrap_or(Complex64::ZERO)
        };
        for code in 0..16usize {
            let label = super::word_for(code, 2).label();
            let expected = a * lookup(&dm, &label) + b * lookup(&dn, &label);
            let got = lookup(&dc, &label);
            assert!((expected - got).norm() <= 1e-12, "term {label}");
        }
    }

    #[test]
    fn hermitian_unitary_has_unit_coefficient_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..5 {
            // Reflection V diag(±1) V† is Hermitian and unitary.
            let v = random_unitary(4, &mut rng);
            let mut d = CMatrix::zeros(4);
            for i in 0..4 {
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                d.set(i, i, Complex64::new(sign, 0.0));
            }
            let refl = v.mul(&d).mul(&v.dagger());
            let obs = LocalObservable::new(vec![0, 1], refl).unwrap();
            let norm = decompose(&obs).unwrap().coefficient_norm_sqr();
            assert!((norm - 1.0).abs() <= 1e-10, "norm {norm}");
        }
    }

    #[test]
    fn term_count_bounded_by_4_to_l() {
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        let m = random_unitary(8, &mut rng);
        let obs = LocalObservable::new(vec![0, 1, 2], m).unwrap();
        assert!(decompose(&obs).unwrap().terms().len() <= 64);
    }
}
