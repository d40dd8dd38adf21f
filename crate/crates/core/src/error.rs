use thiserror::Error;

/// Errors raised by grid construction, field reductions, channel evolution
/// and the gate oracle.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite field")]
    NonFiniteField,

    #[error("wigner bound exceeded: |W| = {value:.6e} at ({q:.4}, {p:.4})")]
    WignerBound { value: f64, q: f64, p: f64 },

    #[error("unsupported Laguerre order {0}: supported orders are 0, 1, 2")]
    UnsupportedOrder(u32),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid times: {0}")]
    InvalidTimes(String),

    #[error("quadrature did not converge: {0}")]
    QuadratureNotConverged(String),

    #[error("state not nonclassical")]
    NotNonclassical,

    #[error("bisection bracket not found: predicate still true at gamma_t = {0}")]
    BracketNotFound(f64),

    #[error("truncation error: {0}")]
    Truncation(String),

    #[error("series did not converge: {0}")]
    SeriesNotConverged(String),

    #[error("undefined phase: alpha = 0")]
    UndefinedPhase,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
