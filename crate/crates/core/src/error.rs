use thiserror::Error;

/// Errors raised by the kernel.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("undeclared generator `{0}`")]
    UndeclaredGenerator(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("inconsistent presentation: {0}")]
    Inconsistent(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Syntax { line, col, msg: msg.into() }
    }
}
