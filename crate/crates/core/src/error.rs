use thiserror::Error;

/// Errors produced by circuit construction, simulation, compilation and
/// estimation. Cap violations are kept distinct from structural errors so
/// callers (the CLI in particular) can map them to separate exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count mismatch: {0} vs {1}")]
    QubitCountMismatch(usize, usize),
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("duplicate qubit index {0} in gate or support")]
    DuplicateQubit(usize),
    #[error("gate matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("matrix has wrong dimension: expected {expected}, got {got}")]
    BadDimension { expected: usize, got: usize },
    #[error("{requested} qubits exceeds cap of {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("observable support size {0} exceeds limit {1}")]
    SupportTooLarge(usize, usize),
    #[error("ruler function requires a >= 1")]
    RulerDomain,
    #[error("pair count {0} is unsupported: not a power of two and not 3")]
    UnsupportedPairCount(usize),
    #[error("probe lists must have equal nonzero length (got {0} and {1})")]
    ProbeCountMismatch(usize, usize),
    #[error("probe {0} is not a Pauli word; decompose it first")]
    NonPauliProbe(usize),
    #[error("term count {0} exceeds cap of {1}")]
    TermCapExceeded(usize, usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("times must be non-decreasing")]
    DecreasingTimes,
    #[error("time grid or circuit family is empty")]
    EmptyFamily,
    #[error("circuit already measures the imaginary part")]
    AlreadyImaginary,
    #[error("circuit does not end with a Hadamard on the clean qubit")]
    MissingHadamardSandwich,
}

pub type Result<T> = std::result::Result<T, Error>;
