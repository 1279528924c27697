use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative method failed to bracket or converge.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// The truncation interval carries no usable probability mass.
    #[error("unusable truncation: {0}")]
    UnusableTruncation(String),

    /// A Monte Carlo run produced no significant draws to average over.
    #[error("no significant draws among {n_sims} simulations; increase n_sims")]
    Undersampled { n_sims: usize },

    /// Malformed or unreadable input data.
    #[error("input error: {0}")]
    Input(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}

/// Rejects NaN and values outside the open unit interval.
pub(crate) fn check_probability(name: &str, p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must lie in (0, 1), got {p}")))
    }
}

/// Rejects NaN, zero and negative values. `+inf` passes.
pub(crate) fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive, got {x}")))
    }
}

pub(crate) fn check_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite, got {x}")))
    }
}
