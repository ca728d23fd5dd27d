use std::fmt;

/// Error categories used across the crate. The CLI maps these onto stable
/// exit codes: contract/configuration problems exit 2, data and I/O problems
/// exit 3, numerical failures exit 4.
#[derive(Debug)]
pub enum Error {
    /// A caller violated an operation's precondition (dimension mismatch,
    /// non-symmetric input, empty candidate list, ...).
    Contract(String),
    /// A user-supplied setting is invalid (bad bandwidth, unknown design,
    /// malformed candidate spec, infeasible grid, ...).
    Config(String),
    /// A file failed to parse or its contents are inconsistent.
    Data(String),
    /// An iterative routine failed to converge or produced non-finite values.
    Numerical(String),
    Io(std::io::Error),
}

impl Error {
    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }
    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// Stable exit code for the CLI contract.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Contract(_) | Error::Config(_) => 2,
            Error::Data(_) | Error::Io(_) => 3,
            Error::Numerical(_) => 4,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Contract(m) => write!(f, "contract violation: {m}"),
            Error::Config(m) => write!(f, "configuration error: {m}"),
            Error::Data(m) => write!(f, "data error: {m}"),
            Error::Numerical(m) => write!(f, "numerical failure: {m}"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
