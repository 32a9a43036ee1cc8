use thiserror::Error;

use crate::equations::SolvabilityVerdict;

/// Errors produced by widthlab operations.
///
/// Everything except [`Error::Numerical`] describes bad or inadmissible
/// input; the CLI maps those to exit code 1 and numerical failures to 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("{source_name}:{line}:{column}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("sequence model underflow: term {index} is {value:e}, below 1e-300")]
    Underflow { index: usize, value: f64 },

    #[error("not coverable: {0}")]
    NotCoverable(String),

    #[error("XAY = B is not solvable: rank(B) = {} exceeds rank(A) = {}", .0.rank_b, .0.rank_a)]
    Unsolvable(Box<SolvabilityVerdict>),

    #[error("classification error: {0}")]
    Classification(String),

    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("requested tolerance not met: achieved residual {achieved:e} >= eps {eps:e}")]
    Infeasible { achieved: f64, eps: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Numerical(_))
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::ShapeMismatch(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
