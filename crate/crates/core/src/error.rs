use alloc::string::String;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unknown agent {0:?}")]
    InvalidAgent(String),
    #[error("invalid epistemic model: {0}")]
    InvalidModel(String),
    #[error("invalid prior: {0}")]
    InvalidPrior(String),
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("context has zero likelihood in every state")]
    ImpossibleContext,
    #[error("outcome space has {outcomes} outcomes; event enumeration is limited to {limit}")]
    SpaceTooLarge { outcomes: usize, limit: usize },
    #[error("states appear mislabeled: {0}; swap the two states (or enable auto-relabel)")]
    MislabeledStates(String),
    #[error("operation needs exactly two states, prior has {0}")]
    NotTwoStates(usize),
    #[error("degree sequence is not graphical: {0}")]
    NotGraphical(String),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("enumeration cost {cost} exceeds budget {budget}")]
    BudgetExceeded { cost: u128, budget: u128 },
    #[error("no graphical sequence after {attempts} attempts")]
    AttemptCapExceeded { attempts: u32 },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
