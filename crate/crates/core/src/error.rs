use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("stationary distribution overflowed at vertex {vertex}")]
    NonFiniteStationary { vertex: usize },

    #[error(
        "tridiagonal eigensolver did not converge for eigenvalue {index} after {iterations} sweeps"
    )]
    NoConvergence { index: usize, iterations: usize },

    #[error("eigenvalues {index} and {next} are not simple (difference {gap:e})")]
    DegenerateSpectrum { index: usize, next: usize, gap: f64 },

    #[error("interior eigenvalue {index} has 1 - lambda^2 = {value:e}, too close to zero")]
    SingularInteriorWeight { index: usize, value: f64 },

    #[error("vertex index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
