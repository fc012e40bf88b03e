//! Correlator estimation in the one-clean-qubit model, with exact oracles.
//!
//! The pipeline: compile a trace-estimation circuit into a 2k-point
//! out-of-time-order correlator instance ([`reduction`]), synthesize a
//! one-clean-qubit circuit that measures it ([`builder`]), sample it under a
//! Hoeffding shot budget ([`estimator`]), and verify every construction
//! against dense brute-force oracles ([`sim`]). [`dynamics`] supplies
//! Trotterized spin-chain evolutions as physically meaningful inputs, and
//! [`io`] pins the JSON file formats the CLI speaks.

pub mod builder;
pub mod circuit;
pub mod decomp;
pub mod dynamics;
pub mod error;
pub mod estimator;
pub mod io;
pub mod linalg;
pub mod pauli;
pub mod reduction;
pub mod sim;

pub use builder::{
    build_ntime_dqc1, build_otoc_dqc1, build_otoc_dqc1_fallback, imaginary_variant,
    lambda_control, NTimeInstance,
};
pub use circuit::{random_circuit, Circuit, Gate, GateKind, Polarity};
pub use decomp::{decompose, reconstruct, PauliDecomposition};
pub use dynamics::{autocorrelator_curve, trotterize, CurveMode, HamiltonianSpec};
pub use error::{Error, Result};
pub use estimator::{
    estimate_avg_bipartite_otoc, estimate_otoc, exact_avg_bipartite_otoc, shots_for,
    time_averaged_otoc, EstimateResult,
};
pub use linalg::CMatrix;
pub use pauli::{LocalObservable, PauliLetter, PauliString, Probe};
pub use reduction::{
    compile_trace_to_otoc, k3_affine_fit, probe_tables, ruler, verify_reduction, OTOCInstance,
};
pub use sim::{
    dqc1_exact_p0, dqc1_sample, exact_normalized_trace, exact_ntime_correlator, exact_otoc,
    exact_unitary, run_statevector, DQC1Circuit, ShotPlan, Statistic,
};
