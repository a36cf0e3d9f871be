//! Exact analysis of two-party, two-input, two-output nonsignaling boxes.
//!
//! Every quantity is an exact [`Rational`]: CHSH values, the covariance-based
//! PR-box fraction `F_PR`, local and genuine polytope membership with
//! certificates, Hardy-paradox success probabilities and the
//! information-causality verdicts of the standard noisy-PR families.

pub mod analysis;
pub mod boxes;
pub mod chsh;
pub mod error;
pub mod lp;
pub mod polytope;
pub mod rational;
pub mod sample;
pub mod theories;

pub use analysis::{
    hardy_check, pr_decompose, witness, DecompositionChecks, HardyReport, IcVerdict, PrDecomposition,
    QuantumModel, WitnessVerdict,
};
pub use boxes::{BoxTable, CorrelationSummary, DetLabel, PrLabel, Relabeling};
pub use chsh::{
    chsh_value, chsh_values, cov_chsh, exceeds_hardy_quantum_bound, exceeds_tsirelson, f_pr, max_chsh, ChshLabel,
    FprReport,
};
pub use error::{Error, Result};
pub use polytope::{hull_membership, is_bell_local, is_genuine_member, LocalityCertificate, Verdict, VertexSet};
pub use rational::Rational;
pub use sample::sample_nonsignaling;
pub use theories::{generate, FamilyPoint, LocalTerm, NoiseVertex};
