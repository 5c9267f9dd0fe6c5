use crate::zetaring::RationalFunc;

/// Crate-wide error type.
///
/// The CLI maps variants to exit codes: `Domain` → 2 (usage), `Resource` → 3,
/// `Pipeline` and `Internal` → 4 (internal-consistency failure).
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Input outside an operation's stated domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A configured memory or size budget would be exceeded.
    #[error("resource error: {0}")]
    Resource(String),
    /// The coefficient pipeline met a rational function it cannot reduce to
    /// pure powers of 1/k; carries the offending term.
    #[error("coefficient pipeline error: {message} (offending term: {offending})")]
    Pipeline {
        message: String,
        offending: Box<RationalFunc>,
    },
    /// An internal consistency check failed; indicates a defect, not bad input.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// Exit code the CLI uses for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) => 2,
            Error::Resource(_) => 3,
            Error::Pipeline { .. } | Error::Internal(_) => 4,
        }
    }
}
