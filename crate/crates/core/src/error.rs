use thiserror::Error;

/// Errors raised by the numerical engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested quantity diverges at this argument.
    #[error("divergence: {0}")]
    Divergence(String),

    /// A function was evaluated at one of its singular points.
    #[error("singular point: {0}")]
    SingularPoint(String),

    /// Adaptive quadrature ran out of its subdivision budget.
    #[error("accuracy error: best estimate {best} with error estimate {err_est:.3e} after {panels} panels")]
    Accuracy { best: f64, err_est: f64, panels: usize },

    /// A path or input violated a structural contract.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Bracketed root search found no sign change, or more than one.
    #[error("bracket error: {0}")]
    Bracket(String),

    /// A critical value of a rational map is not in {0, 1, ∞}.
    #[error("not a Belyi map: critical point {point} has critical value {value}")]
    BelyiViolation { point: String, value: String },
}

impl Error {
    /// True for failures caused by numerics (nonconvergence, missing bracket)
    /// rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Accuracy { .. } | Error::Bracket(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
