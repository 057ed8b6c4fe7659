use alloc::string::String;
use core::fmt;

use crate::subshift::Word;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    EmptyAlphabet,
    DuplicateSymbol(char),
    UnknownSymbol(char),
    EmptyWord,
    MissingRule(char),
    NonPrimitiveSubstitution,
    ContinuedFractionTooShort { terms: usize, required: usize },
    InvalidToeplitz(&'static str),
    LengthExceeded { requested: usize, max: usize },
    IllegalWindow(Word),
    WindowLength { expected: usize, found: usize },
    InsufficientConfiguration { needed_from: isize, needed_to: usize, available: usize },
    HorizonExceeded { n: usize, horizon: usize },
    BudgetExceeded { required: u64, budget: u64 },
    NonPositiveDeterminant(f64),
    NonFinite(&'static str),
    DegenerateSingularValues { gap: f64 },
    CoverRefinementFailed { cover: usize, error: f64 },
    BlendedDeterminant { energy: f64, det: f64 },
    NotSupported(&'static str),
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for errors caused by the enumeration or horizon budget.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. } | Error::HorizonExceeded { .. } | Error::LengthExceeded { .. })
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyAlphabet => write!(f, "alphabet is empty"),
            Error::DuplicateSymbol(c) => write!(f, "duplicate symbol '{c}' in alphabet"),
            Error::UnknownSymbol(c) => write!(f, "symbol '{c}' is not in the alphabet"),
            Error::EmptyWord => write!(f, "word must be nonempty"),
            Error::MissingRule(c) => write!(f, "substitution has no rule for '{c}'"),
            Error::NonPrimitiveSubstitution => write!(f, "substitution rule is not primitive"),
            Error::ContinuedFractionTooShort { terms, required } => write!(
                f,
                "continued fraction has {terms} partial quotients, at least {required} required"
            ),
            Error::InvalidToeplitz(msg) => write!(f, "invalid Toeplitz coding: {msg}"),
            Error::LengthExceeded { requested, max } => {
                write!(f, "requested length {requested} exceeds the maximum {max}")
            }
            Error::IllegalWindow(w) => write!(f, "window \"{w}\" is not a legal factor"),
            Error::WindowLength { expected, found } => {
                write!(f, "window has length {found}, expected {expected}")
            }
            Error::InsufficientConfiguration { needed_from, needed_to, available } => write!(
                f,
                "configuration too short: indices {needed_from}..{needed_to} needed, {available} symbols available; supply a longer prefix"
            ),
            Error::HorizonExceeded { n, horizon } => {
                write!(f, "product length {n} exceeds the horizon {horizon}")
            }
            Error::BudgetExceeded { required, budget } => write!(
                f,
                "enumeration needs {required} matrix products, budget is {budget}; use a sampled estimate instead"
            ),
            Error::NonPositiveDeterminant(d) => write!(f, "matrix determinant {d} is not positive"),
            Error::NonFinite(what) => write!(f, "non-finite value in {what}"),
            Error::DegenerateSingularValues { gap } => {
                write!(f, "singular gap {gap:e} below tolerance; no hyperbolic splitting at this scale")
            }
            Error::CoverRefinementFailed { cover, error } => write!(
                f,
                "energy cover of size {cover} still has sup error {error:e}; refinement limit reached"
            ),
            Error::BlendedDeterminant { energy, det } => write!(
                f,
                "blended matrix at E = {energy} has determinant {det} <= 0; choose a finer cover"
            ),
            Error::NotSupported(msg) => write!(f, "not supported: {msg}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
