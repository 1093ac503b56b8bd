use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("chart is not generic: {0}")]
    NonGeneric(String),

    #[error("{what} vanishes at {location} (|value| = {modulus:e})")]
    VanishingFactor {
        what: String,
        location: String,
        modulus: f64,
    },

    #[error("Gamma pole near {arg}: distance {distance:e} to {nearest}")]
    GammaPole {
        arg: String,
        nearest: i64,
        distance: f64,
    },

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error(
        "quadrature not converged: relative change {change:e} above {tol:e} (value {value:e})"
    )]
    Unconverged { value: f64, change: f64, tol: f64 },
}

impl Error {
    /// True for rejections of the input itself, as opposed to numerical failures.
    pub fn is_input_rejection(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_) | Error::NonGeneric(_) | Error::Divergent(_)
        )
    }

    pub(crate) fn vanishing(
        what: impl Into<String>,
        location: impl Into<String>,
        modulus: f64,
    ) -> Self {
        Error::VanishingFactor {
            what: what.into(),
            location: location.into(),
            modulus,
        }
    }
}
