use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
///
/// The three variants map one-to-one onto the CLI exit codes
/// (1 = invalid input, 2 = precondition, 3 = size guard).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("size guard: {what} is {actual}, limit {limit} (use force to override)")]
    SizeGuard {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

/// Whether exhaustive operations honor their size limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Guard {
    #[default]
    Enforce,
    Force,
}

impl Guard {
    pub fn check(self, what: &'static str, actual: usize, limit: usize) -> Result<()> {
        if self == Guard::Enforce && actual > limit {
            return Err(Error::SizeGuard {
                what,
                actual,
                limit,
            });
        }
        Ok(())
    }
}
