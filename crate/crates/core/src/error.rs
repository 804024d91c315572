use thiserror::Error;

/// Failure classes shared by every layer of the toolkit.
///
/// The CLI maps each variant to its own exit code (see [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("sieve limit {requested} exceeds the memory budget of {budget} entries")]
    LimitTooLarge { requested: u64, budget: u64 },

    #[error("{a} is not invertible modulo {q}")]
    NotInvertible { a: i64, q: u64 },

    #[error("modulus {0} must be odd")]
    EvenModulus(u64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("{what} did not converge (error estimate {err_estimate:e} > tolerance {tolerance:e})")]
    NonConvergence {
        what: &'static str,
        err_estimate: f64,
        tolerance: f64,
    },

    #[error("asymptotic regime violated: y*X = {yx} is below the minimum {min}")]
    RegimeViolation { yx: f64, min: f64 },

    #[error("asymptotic order {0} is not supported without caller-supplied coefficients")]
    UnsupportedOrder(usize),

    #[error("divisor tables hold {have} entries but {need} are required")]
    TablesTooSmall { have: u64, need: u64 },

    #[error("modulus {0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("usage: {0}")]
    Usage(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization: {0}")]
    Serialize(#[from] serde_json::Error),

    #[error("{0} assertion(s) failed")]
    AssertionFailed(usize),
}

impl Error {
    /// Process exit code for this failure class. `0` is reserved for success.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            Error::AssertionFailed(_) => 3,
            Error::LimitTooLarge { .. } => 4,
            Error::TablesTooSmall { .. } => 5,
            Error::NotInvertible { .. }
            | Error::EvenModulus(_)
            | Error::NotOddPrime(_)
            | Error::Precondition(_) => 6,
            Error::NonConvergence { .. } => 7,
            Error::RegimeViolation { .. } | Error::UnsupportedOrder(_) => 8,
            Error::DegenerateFit(_) => 9,
            Error::Io(_) | Error::Serialize(_) => 10,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
