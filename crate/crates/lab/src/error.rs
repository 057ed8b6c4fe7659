use std::fmt;

/// Exit codes of the command-line tool.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug)]
pub enum LabError {
    /// The configuration does not parse or describes an invalid object.
    Config(String),
    /// An enumeration or horizon budget ran out.
    Budget(String),
    Io(std::io::Error),
    Numeric(String),
}

impl LabError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) => EXIT_CONFIG,
            LabError::Budget(_) => EXIT_BUDGET,
            LabError::Io(_) | LabError::Numeric(_) => EXIT_FAILURE,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            LabError::Config(_) => "config",
            LabError::Budget(_) => "budget",
            LabError::Io(_) => "io",
            LabError::Numeric(_) => "numeric",
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        LabError::Config(msg.into())
    }
}

impl fmt::Display for LabError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabError::Config(m) => write!(f, "config error: {m}"),
            LabError::Budget(m) => write!(f, "budget exhausted: {m}"),
            LabError::Io(e) => write!(f, "io error: {e}"),
            LabError::Numeric(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl std::error::Error for LabError {}

impl From<cocycle_core::Error> for LabError {
    fn from(e: cocycle_core::Error) -> Self {
        use cocycle_core::Error as E;
        if e.is_budget() {
            return LabError::Budget(e.to_string());
        }
        match e {
            E::EmptyAlphabet
            | E::DuplicateSymbol(_)
            | E::UnknownSymbol(_)
            | E::EmptyWord
            | E::MissingRule(_)
            | E::NonPrimitiveSubstitution
            | E::ContinuedFractionTooShort { .. }
            | E::InvalidToeplitz(_)
            | E::IllegalWindow(_)
            | E::WindowLength { .. }
            | E::InsufficientConfiguration { .. }
            | E::NonPositiveDeterminant(_)
            | E::NotSupported(_)
            | E::InvalidArgument(_) => LabError::Config(e.to_string()),
            _ => LabError::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for LabError {
    fn from(e: std::io::Error) -> Self {
        LabError::Io(e)
    }
}

impl From<serde_json::Error> for LabError {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            LabError::Io(e.into())
        } else {
            LabError::Config(e.to_string())
        }
    }
}

impl From<csv::Error> for LabError {
    fn from(e: csv::Error) -> Self {
        LabError::Io(std::io::Error::other(e))
    }
}

pub type LabResult<T> = Result<T, LabError>;
