//! Quantum distinguishability measures and information bounds for binary
//! quantum channels.
//!
//! - [`distinguish`]: classical divergences and the Bures-Uhlmann fidelity
//!   together with the measurement that attains it.
//! - [`holevo`]: mutual information against the Holevo bound, plus the
//!   curvature-minimizing measurement and its lower bound.
//! - [`oracle`]: random measurement search and finite differences.
//! - [`report`]: every closed form checked against the oracle.

pub mod channel;
pub mod distinguish;
pub mod error;
pub mod holevo;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod report;
pub mod sampling;

pub use channel::{BinaryChannel, DensityMatrix, OutcomeDistribution, Povm};
pub use error::{Error, ErrorCategory, Result};
pub use linalg::{ComplexMatrix, HermitianOperator};
