use thiserror::Error;

/// Errors raised across the receiver simulation stack.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A photon-count outcome with zero probability was asked for its
    /// heralded qubit states.
    #[error("degenerate outcome: photon count {n} has zero herald probability")]
    DegenerateOutcome { n: u32 },

    /// Two angles for which the bit-node combining unitary is undefined.
    #[error("degenerate combining angles: theta = {theta}, theta' = {theta_prime}")]
    DegenerateAngles { theta: f64, theta_prime: f64 },

    #[error("circuit error: {0}")]
    Circuit(String),

    #[error("cannot emit QASM: {0}")]
    Emission(String),

    #[error("QASM parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Trace or normalization drift beyond the engine tolerance.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
