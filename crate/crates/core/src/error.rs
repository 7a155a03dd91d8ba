use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error(
        "exact DP would visit more than {budget} states (reached {states}); \
         raise the budget or use the asymptotic estimate"
    )]
    StateBudget { states: usize, budget: usize },

    #[error(
        "cumulant of order {order} needs {tuples} term tuples (budget {budget}); \
         lower ell0/r0 or use the regular-graph expansion"
    )]
    TupleBudget {
        order: usize,
        tuples: u128,
        budget: u128,
    },

    #[error("Newton iteration did not converge after {iterations} steps (residual {residual:e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        best: Vec<f64>,
    },

    #[error("matrix is numerically singular: eigenvalue {eigenvalue:e} vs largest {largest:e}")]
    Singular { eigenvalue: f64, largest: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
