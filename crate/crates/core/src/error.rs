use thiserror::Error;

/// Errors raised by the channel, receiver, game and analysis layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate channel for user {user}: signal gain is zero")]
    DegenerateChannel { user: usize },

    #[error("signal gain of user {user} is not real (imaginary residue {residue:e})")]
    NonRealSignalGain { user: usize, residue: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("no interior best response: {0}")]
    NoTargetSinr(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error(
        "target loss {target_db} dB is unattainable; achievable range is [{min_db}, {max_db}] dB"
    )]
    UnattainableLoss {
        target_db: f64,
        min_db: f64,
        max_db: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
