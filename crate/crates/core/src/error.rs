use thiserror::Error;

/// Errors raised across the workbench.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown token `{0}`")]
    UnknownToken(String),
    #[error("factor {factor}: {msg}")]
    BadFactor { factor: String, msg: String },
    #[error("relator {0} is the identity")]
    IdentityRelator(usize),
    #[error("symmetrized sets must be non-empty")]
    EmptyRelators,
    #[error("Dehn condition 1 >= 3*lambda*(M+1) fails for lambda = {lambda}, M = {m}")]
    DehnConditionFails { lambda: String, m: usize },
    #[error("length {l} does not exceed ell0 = {ell0}")]
    BelowEll0 { l: usize, ell0: usize },
    #[error("budget misconfiguration: {0}")]
    Budget(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
