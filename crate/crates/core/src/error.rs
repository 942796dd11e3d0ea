use thiserror::Error;

/// Errors raised by group, dynamics and entropy operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Caller misuse: mismatched groups, empty sets, unclosed subgroups.
    #[error("usage error: {0}")]
    Usage(String),

    /// A closure or product grew past the permitted number of elements.
    #[error("budget exceeded: {what} exceeds {limit} elements")]
    BudgetExceeded { what: String, limit: usize },

    /// A group or endomorphism description could not be built.
    #[error("construction error: {0}")]
    Construction(String),

    #[error("cannot parse element: {0}")]
    Parse(String),

    /// A subgroup is not mapped into itself; the witness is rendered in the owning group.
    #[error("invariance violated: {subgroup} is not mapped into itself (witness {witness})")]
    Invariance { subgroup: String, witness: String },

    /// A normal-subgroup description or canonicalizer is inconsistent.
    #[error("specification error: {0}")]
    Specification(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn budget(what: impl Into<String>, limit: usize) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            limit,
        }
    }
}
