use thiserror::Error;

/// Error type shared by every module in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request is valid but exceeds an exact-representation budget.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// A configuration file or run specification is invalid.
    #[error("configuration error: {0}")]
    Config(String),

    /// Malformed input data (CSV structure, unparseable stream, ...).
    #[error("format error{}: {msg}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Format { line: Option<u64>, msg: String },

    /// No usable data remained after ingestion.
    #[error("empty data: {0}")]
    EmptyData(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Process exit code for the CLI: 2 for usage/format/configuration
    /// problems, 3 when no usable data was found.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::EmptyData(_) => 3,
            _ => 2,
        }
    }
}
