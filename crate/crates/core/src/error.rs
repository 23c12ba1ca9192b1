use thiserror::Error;

/// Errors raised by the simulator and the solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{name} = {value} is outside the domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// A value violates a structural invariant (normalization, orthogonality, PSD).
    #[error("invariant violated: {0}")]
    Invariant(String),

    /// A numerical solver found no admissible solution or its cross-check disagreed.
    #[error("solver failure: {0}")]
    Solver(String),

    /// A transcript does not follow the protocol message grammar.
    #[error("malformed transcript: {0}")]
    Transcript(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            value,
            domain: "[0, 1]",
        })
    }
}

/// Probabilities that must stay strictly below one (loss rates, `p` for the solvers).
pub(crate) fn check_sub_unit(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            value,
            domain: "[0, 1)",
        })
    }
}
