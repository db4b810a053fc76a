use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FpError {
    /// A parameter lies outside its domain (p <= 1, c <= 0, |lambda| >= 1, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Series data violating the representation invariants.
    #[error("invalid series: {0}")]
    InvalidSeries(String),

    /// A quadrature did not reach its tolerance within the node budget.
    #[error("{what}: quadrature did not converge (residual {residual:e} after {nodes} nodes)")]
    Accuracy {
        what: &'static str,
        residual: f64,
        nodes: usize,
    },
}

impl FpError {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        FpError::InvalidParameter(msg.into())
    }

    pub fn is_accuracy(&self) -> bool {
        matches!(self, FpError::Accuracy { .. })
    }
}

pub type Result<T> = std::result::Result<T, FpError>;
