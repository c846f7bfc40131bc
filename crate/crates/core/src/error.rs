use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A construction would exceed the configured simplex or basis ceiling.
    #[error("budget exceeded: {what} needs {needed}, ceiling is {ceiling}")]
    Budget {
        what: String,
        needed: u128,
        ceiling: u128,
    },
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("simplicial identities violated ({count} violations), first: {first}")]
    Validation { count: usize, first: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
