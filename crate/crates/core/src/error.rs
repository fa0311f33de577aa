use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised anywhere in the pipeline. Each variant maps to one of five
/// exit classes (see [`Error::exit_code`]).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("function field is not separable in these coordinates: {0}")]
    Inseparable(String),

    #[error("{stage} did not finish within {cap} iterations")]
    IterationLimit { stage: &'static str, cap: usize },

    #[error("field context mismatch: {0}")]
    Context(String),

    #[error("polynomial ring mismatch")]
    RingMismatch,

    #[error("division by zero")]
    DivisionByZero,

    #[error("leading term of the zero polynomial is undefined")]
    ZeroLeadingTerm,

    #[error("degree {got} exceeds the allowed bound {bound}")]
    Degree { got: i64, bound: i64 },

    #[error("polynomial is not a p-th power")]
    NotPthPower,

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("element is not in the ideal")]
    NotInIdeal,

    #[error("matrix is not unimodular")]
    NotUnimodular,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("rank mismatch: expected {expected}, found {found}")]
    Rank { expected: usize, found: usize },

    #[error("chart at infinity: {0}")]
    Chart(String),

    #[error("{module}: {msg}")]
    Internal { module: &'static str, msg: String },
}

impl Error {
    pub fn internal(module: &'static str, msg: impl Into<String>) -> Self {
        Error::Internal {
            module,
            msg: msg.into(),
        }
    }

    /// Process exit code: 1 parse, 2 validation, 3 inseparability,
    /// 4 iteration limit, 5 internal inconsistency.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 1,
            Error::Validation(_) | Error::Degree { .. } | Error::Chart(_) => 2,
            Error::Inseparable(_) | Error::SingularMatrix => 3,
            Error::IterationLimit { .. } => 4,
            _ => 5,
        }
    }

    /// Module in which this kind of error originates.
    pub fn module(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "cli",
            Error::Validation(_) | Error::Inseparable(_) | Error::Chart(_) => "forms",
            Error::IterationLimit { .. } => "normalize",
            Error::Context(_) | Error::DivisionByZero => "field",
            Error::RingMismatch
            | Error::ZeroLeadingTerm
            | Error::Degree { .. }
            | Error::NotPthPower => "poly",
            Error::Dimension(_) => "groebner",
            Error::NotInIdeal => "modgb",
            Error::NotUnimodular | Error::SingularMatrix | Error::Rank { .. } => "linalg",
            Error::Internal { module, .. } => module,
        }
    }
}
