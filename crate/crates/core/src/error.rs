use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violates a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative or adaptive routine stopped before reaching its tolerance.
    #[error("{what} did not converge ({detail})")]
    NoConvergence { what: &'static str, detail: String },

    /// The rejection sampler hit its trial cap, which signals a broken RNG.
    #[error("rejection sampler exceeded {0} trials")]
    SamplerExhausted(u64),

    /// A computed quantity left its admissible range by more than rounding.
    #[error("internal consistency: {0}")]
    Consistency(String),

    /// A calibration target cannot be reached inside the search envelope.
    #[error("unreachable calibration target: {0}")]
    Unreachable(String),

    /// A calibration bracket failed the monotonicity check.
    #[error("non-monotone bracket: {0}")]
    NonMonotone(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by caller input rather than numerical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Unreachable(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
