//! Pauli words and local observables used as correlator probes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Default limit on local-observable support size.
pub const DEFAULT_SUPPORT_LIMIT: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub fn matrix(self) -> CMatrix {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::ONE;
        let zero = Complex64::ZERO;
        let entries = match self {
            PauliLetter::I => [one, zero, zero, one],
            PauliLetter::X => [zero, one, one, zero],
            PauliLetter::Y => [zero, -i, i, zero],
            PauliLetter::Z => [one, zero, zero, -one],
        };
        CMatrix::from_vec(2, entries.to_vec()).unwrap()
    }

    pub fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'I' | 'i' => Ok(PauliLetter::I),
            'X' | 'x' => Ok(PauliLetter::X),
            'Y' | 'y' => Ok(PauliLetter::Y),
            'Z' | 'z' => Ok(PauliLetter::Z),
            other => Err(Error::InvalidParameter(format!(
                "unknown Pauli letter '{other}'"
            ))),
        }
    }
}

/// A tensor product of single-qubit Paulis, one letter per qubit.
/// Qubit 0 is the least significant bit of basis-state indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<PauliLetter>,
}

impl PauliString {
    pub fn new(letters: Vec<PauliLetter>) -> Self {
        PauliString { letters }
    }

    pub fn identity(n_qubits: usize) -> Self {
        PauliString {
            letters: vec![PauliLetter::I; n_qubits],
        }
    }

    /// Single non-identity letter at `qubit`, identity elsewhere.
    pub fn single(n_qubits: usize, qubit: usize, letter: PauliLetter) -> Result<Self> {
        if qubit >= n_qubits {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                n_qubits,
            });
        }
        let mut letters = vec![PauliLetter::I; n_qubits];
        letters[qubit] = letter;
        Ok(PauliString { letters })
    }

    /// Parse a label like "XIZ"; leftmost character is qubit 0.
    pub fn parse(label: &str) -> Result<Self> {
        let letters = label
            .chars()
            .map(PauliLetter::from_char)
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString { letters })
    }

    pub fn label(&self) -> String {
        self.letters.iter().map(|l| l.as_char()).collect()
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[PauliLetter] {
        &self.letters
    }

    pub fn letter(&self, qubit: usize) -> PauliLetter {
        self.letters[qubit]
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.letters
            .iter()
            .filter(|&&l| l != PauliLetter::I)
            .count()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    /// Bitmask of qubits where the letter flips the basis state (X or Y).
    fn x_mask(&self) -> usize {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == PauliLetter::X || l == PauliLetter::Y)
            .fold(0, |m, (q, _)| m | (1 << q))
    }

    /// Amplitude of the single nonzero entry in column `col`; the row is
    /// `col ^ x_mask`.
    fn column_phase(&self, col: usize) -> Complex64 {
        let mut phase = Complex64::ONE;
        for (q, &l) in self.letters.iter().enumerate() {
            let bit = (col >> q) & 1;
            phase *= match l {
                PauliLetter::I | PauliLetter::X => Complex64::ONE,
                PauliLetter::Y => {
                    if bit == 0 {
                        Complex64::new(0.0, 1.0)
                    } else {
                        Complex64::new(0.0, -1.0)
                    }
                }
                PauliLetter::Z => {
                    if bit == 0 {
                        Complex64::ONE
                    } else {
                        -Complex64::ONE
                    }
                }
            };
        }
        phase
    }

    /// Dense 2^n × 2^n matrix. Each column has exactly one nonzero entry.
    pub fn to_matrix(&self) -> CMatrix {
        let n = self.letters.len();
        let dim = 1 << n;
        let xm = self.x_mask();
        let mut m = CMatrix::zeros(dim);
        for col in 0..dim {
            m.set(col ^ xm, col, self.column_phase(col));
        }
        m
    }

    /// In-place right-multiplication `acc ← acc · P`, using the fact that a
    /// Pauli word is a signed permutation. O(4^n) instead of a matmul.
    pub(crate) fn right_multiply_into(&self, acc: &mut CMatrix) {
        let dim = acc.dim();
        assert_eq!(dim, 1 << self.letters.len());
        let xm = self.x_mask();
        for row in 0..dim {
            let mut new_row = vec![Complex64::ZERO; dim];
            for (col, slot) in new_row.iter_mut().enumerate() {
                *slot = acc.get(row, col ^ xm) * self.column_phase(col);
            }
            for (col, value) in new_row.into_iter().enumerate() {
                acc.set(row, col, value);
            }
        }
    }
}

/// A dense operator on a few qubits. `support[0]` is the least significant
/// bit of the local matrix index.
#[derive(Clone, Debug)]
pub struct LocalObservable {
    support: Vec<usize>,
    matrix: CMatrix,
}

impl LocalObservable {
    pub fn new(support: Vec<usize>, matrix: CMatrix) -> Result<Self> {
        Self::with_limit(support, matrix, DEFAULT_SUPPORT_LIMIT)
    }

    pub fn with_limit(support: Vec<usize>, matrix: CMatrix, limit: usize) -> Result<Self> {
        let l = support.len();
        if l > limit {
            return Err(Error::SupportTooLarge(l, limit));
        }
        for (i, &q) in support.iter().enumerate() {
            if support[..i].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        if matrix.dim() != 1 << l {
            return Err(Error::BadDimension {
                expected: 1 << l,
                got: matrix.dim(),
            });
        }
        Ok(LocalObservable { support, matrix })
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn l(&self) -> usize {
        self.support.len()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Dense embedding into an n-qubit register.
    pub fn embed(&self, n_qubits: usize) -> Result<CMatrix> {
        for &q in &self.support {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    n_qubits,
                });
            }
        }
        Ok(embed_on_support(&self.matrix, &self.support, n_qubits))
    }
}

/// Scatter a 2^l × 2^l matrix onto the given qubits of an n-qubit register;
/// identity elsewhere.
pub fn embed_on_support(small: &CMatrix, support: &[usize], n_qubits: usize) -> CMatrix {
    let l = support.len();
    debug_assert_eq!(small.dim(), 1 << l);
    let dim = 1usize << n_qubits;
    let mut out = CMatrix::zeros(dim);

    let rest_bits: Vec<usize> = (0..n_qubits).filter(|q| !support.contains(q)).collect();
    let place = |local: usize, rest: usize| -> usize {
        let mut idx = 0usize;
        for (i, &q) in support.iter().enumerate() {
            idx |= ((local >> i) & 1) << q;
        }
        for (i, &q) in rest_bits.iter().enumerate() {
            idx |= ((rest >> i) & 1) << q;
        }
        idx
    };

    for rest in 0..(1usize << rest_bits.len()) {
        for lr in 0..(1usize << l) {
            let row = place(lr, rest);
            for lc in 0..(1usize << l) {
                let v = small.get(lr, lc);
                if v != Complex64::ZERO {
                    out.set(row, place(lc, rest), v);
                }
            }
        }
    }
    out
}

/// A correlator probe: either a full-width Pauli word or a dense local
/// operator.
#[derive(Clone, Debug)]
pub enum Probe {
    Pauli(PauliString),
    Local(LocalObservable),
}

impl Probe {
    /// Dense embedding on n qubits.
    pub fn embed(&self, n_qubits: usize) -> Result<CMatrix> {
        match self {
            Probe::Pauli(p) => {
                if p.n_qubits() != n_qubits {
                    return Err(Error::QubitCountMismatch(p.n_qubits(), n_qubits));
                }
                Ok(p.to_matrix())
            }
            Probe::Local(o) => o.embed(n_qubits),
        }
    }

    pub fn as_pauli(&self) -> Option<&PauliString> {
        match self {
            Probe::Pauli(p) => Some(p),
            Probe::Local(_) => None,
        }
    }
}
