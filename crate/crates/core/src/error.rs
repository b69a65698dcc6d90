use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A caller broke an operation's precondition (absorbing state, bad path, ...).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("could not parse `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("exact mode is limited to n <= {cap} (requested n = {n}); use float mode")]
    Capacity { n: u32, cap: u32 },

    #[error("exact mode needs rational parameters; {0}")]
    NotRational(String),

    #[error("quadrature did not reach tolerance {tol:e}: estimate {estimate} with error {error:e}")]
    Quadrature { estimate: f64, error: f64, tol: f64 },

    #[error("sampler `{sampler}` cannot run regime `{regime}`")]
    SamplerMismatch { sampler: String, regime: String },
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::ContractViolation(msg.into())
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
