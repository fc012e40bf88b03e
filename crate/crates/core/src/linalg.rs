//! Small dense complex matrices.
//!
//! Everything at desk scale runs through these: oracle unitaries, Pauli
//! embeddings, matrix exponentials for Trotter checks. Row-major storage,
//! square only. No BLAS; dimensions stay at or below 2^12.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::ONE;
        }
        m
    }

    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::BadDimension {
                expected: dim * dim,
                got: data.len(),
            });
        }
        Ok(CMatrix { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    /// Matrix product self · rhs.
    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::ZERO {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMatrix {
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim);
        CMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Kronecker product; `rhs` occupies the low (fast) index.
    pub fn kron(&self, rhs: &CMatrix) -> CMatrix {
        let (da, db) = (self.dim, rhs.dim);
        let n = da * db;
        let mut out = CMatrix::zeros(n);
        for ia in 0..da {
            for ja in 0..da {
                let a = self.data[ia * da + ja];
                if a == Complex64::ZERO {
                    continue;
                }
                for ib in 0..db {
                    for jb in 0..db {
                        out.data[(ia * db + ib) * n + (ja * db + jb)] = a * rhs.data[ib * db + jb];
                    }
                }
            }
        }
        out
    }

    /// Largest entrywise modulus of self − rhs.
    pub fn max_abs_diff(&self, rhs: &CMatrix) -> f64 {
        assert_eq!(self.dim, rhs.dim);
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max-norm of U†U − I.
    pub fn unitarity_defect(&self) -> f64 {
        self.dagger().mul(self).max_abs_diff(&CMatrix::identity(self.dim))
    }

    fn max_row_sum(&self) -> f64 {
        let n = self.dim;
        (0..n)
            .map(|i| self.data[i * n..(i + 1) * n].iter().map(|z| z.norm()).sum())
            .fold(0.0_f64, f64::max)
    }
}

/// exp(M) by scaling-and-squaring with a Taylor series. Accurate to near
/// machine precision for the small anti-Hermitian arguments used in tests;
/// independent of the product-formula code it cross-checks.
pub fn expm(m: &CMatrix) -> CMatrix {
    let norm = m.max_row_sum();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m.scale(Complex64::new(1.0 / f64::from(1 << squarings), 0.0));

    let mut sum = CMatrix::identity(m.dim());
    let mut term = CMatrix::identity(m.dim());
    for k in 1..40 {
        term = term.mul(&scaled).scale(Complex64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term);
        if term.max_row_sum() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.mul(&sum);
    }
    sum
}

/// Haar-like random unitary: modified Gram-Schmidt on a complex Gaussian.
pub fn random_unitary<R: Rng>(dim: usize, rng: &mut R) -> CMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
                .collect()
        })
        .collect();
    for j in 0..dim {
        for i in 0..j {
            let proj: Complex64 = (0..dim).map(|r| cols[i][r].conj() * cols[j][r]).sum();
            let prior = cols[i].clone();
            for (z, c) in cols[j].iter_mut().zip(prior) {
                *z -= proj * c;
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut cols[j] {
            *z /= norm;
        }
    }
    let mut out = CMatrix::zeros(dim);
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            out.set(i, j, z);
        }
    }
    out
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller; tail-safe since random::<f64>() is in [0, 1).
    let u: f64 = 1.0 - rng.random::<f64>();
    let v: f64 = rng.random();
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_multiplication() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = random_unitary(4, &mut rng);
        let i = CMatrix::identity(4);
        assert!(u.mul(&i).max_abs_diff(&u) == 0.0);
        assert!(i.mul(&u).max_abs_diff(&u) == 0.0);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for dim in [2, 4, 8] {
            let u = random_unitary(dim, &mut rng);
            assert!(u.unitarity_defect() < 1e-12);
        }
    }

    #[test]
    fn expm_of_diagonal() {
        // exp(diag(i a, i b)) = diag(e^{ia}, e^{ib})
        let mut m = CMatrix::zeros(2);
        m.set(0, 0, Complex64::new(0.0, 0.3));
        m.set(1, 1, Complex64::new(0.0, -1.7));
        let e = expm(&m);
        assert!((e.get(0, 0) - Complex64::from_polar(1.0, 0.3)).norm() < 1e-14);
        assert!((e.get(1, 1) - Complex64::from_polar(1.0, -1.7)).norm() < 1e-14);
        assert!(e.get(0, 1).norm() < 1e-15);
    }

    #[test]
    fn expm_matches_pauli_rotation_closed_form() {
        // exp(-i θ X) = cos θ I - i sin θ X
        let theta = 0.83;
        let mut x = CMatrix::zeros(2);
        x.set(0, 1, Complex64::ONE);
        x.set(1, 0, Complex64::ONE);
        let arg = x.scale(Complex64::new(0.0, -theta));
        let expected = CMatrix::identity(2)
            .scale(Complex64::new(theta.cos(), 0.0))
            .add(&x.scale(Complex64::new(0.0, -theta.sin())));
        assert!(expm(&arg).max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn kron_dimensions_and_values() {
        let a = CMatrix::from_vec(
            2,
            vec![
                Complex64::ONE,
                Complex64::ZERO,
                Complex64::ZERO,
                Complex64::new(2.0, 0.0),
            ],
        )
        .unwrap();
        let b = CMatrix::identity(2);
        let k = a.kron(&b);
        assert_eq!(k.dim(), 4);
        assert_eq!(k.get(0, 0), Complex64::ONE);
        assert_eq!(k.get(3, 3), Complex64::new(2.0, 0.0));
        assert_eq!(k.get(1, 2), Complex64::ZERO);
    }
}
