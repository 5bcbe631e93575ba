//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or invalid edge-list input, with the 1-based line number.
    #[error("edge list line {line}: {msg}")]
    EdgeList { line: usize, msg: String },

    /// Graph-level invariant violation (bad index, negative weight, ...).
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    /// A matrix handed in as a Laplacian does not satisfy the Laplacian
    /// invariants (zero row sums, sign pattern).
    #[error("invalid laplacian: {0}")]
    InvalidLaplacian(String),

    /// The eigensolver failed; `detail` carries the LAPACK return code
    /// (the number of eigenvalues the QR iteration left unresolved).
    #[error("eigensolver failed: {detail}")]
    Eigensolver { detail: String },

    /// A computed eigenpair failed the residual acceptance bound.
    #[error("eigenpair {mode} residual {residual:.3e} exceeds bound {bound:.3e}")]
    EigenResidual {
        mode: usize,
        residual: f64,
        bound: f64,
    },

    /// The eigenbasis is too ill-conditioned for modal decomposition.
    #[error("eigenbasis condition estimate {cond:.3e} exceeds 1e8; refusing modal decomposition")]
    IllConditioned { cond: f64 },

    /// Integrator step size violates the stability bound.
    #[error("step size {dt:.3e} violates stability bound {bound:.3e}")]
    StepSize { dt: f64, bound: f64 },

    /// A trajectory does not carry the data an operation needs.
    #[error("trajectory unsuitable: {0}")]
    Trajectory(String),

    /// Catch-all for numerical inconsistencies detected at runtime.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
