use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A scalar parameter lies outside its admissible range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Exponents violate the balance condition between `p`, `q` and the
    /// Hölder exponent of the weight.
    #[error("balance condition q/p <= 1 + alpha/n violated: q/p = {ratio:.6} > {bound:.6}")]
    Balance { ratio: f64, bound: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("infeasible problem: {0}")]
    Feasibility(String),

    #[error("solver did not converge after {iterations} iterations (residual {residual:.3e}): {message}")]
    Solver { message: String, iterations: usize, residual: f64 },

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
