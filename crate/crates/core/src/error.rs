use thiserror::Error;

use crate::states::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |a_ij - conj(a_ji)| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("eigensolver did not converge in {sweeps} sweeps: off-diagonal norm {residual:.3e}")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("not a density matrix ({reason})")]
    NotDensityMatrix { reason: String },

    #[error("Kraus set is not trace preserving: max |sum K'K - I| = {deviation:.3e}")]
    IncompleteKraus { deviation: f64 },

    #[error("invalid state parameters: {}", list(violations))]
    InvalidParams { violations: Vec<Violation> },

    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("log argument not positive in {term}: {value:.3e}")]
    LogDomain { term: &'static str, value: f64 },

    #[error("vector is not unit norm: |n|^2 - 1 = {deviation:.3e}")]
    NotUnit { deviation: f64 },

    #[error("objective not finite at direction ({z1}, {z2}, {z3})")]
    NonFiniteObjective { z1: f64, z2: f64, z3: f64 },

    #[error("invalid optimizer configuration: {reason}")]
    BadOptimizerConfig { reason: String },

    #[error("could not build worker pool: {reason}")]
    ThreadPool { reason: String },
}

fn list(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
