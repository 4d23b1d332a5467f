use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed rational literal.
    #[error("invalid rational `{0}`: expected `p/q` or `p`")]
    BadRational(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("invalid JSON input: {0}")]
    Json(String),

    /// An invariant polynomial failed one of its structural checks.
    #[error("{kind} violation: {witness}")]
    InvalidInvariant { kind: InvariantViolation, witness: String },

    #[error("invalid partition {partition:?}: {reason}")]
    InvalidPartition { partition: Vec<u32>, reason: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("argument out of range: {0}")]
    Argument(String),

    #[error("polynomial is not a unit: constant term is zero")]
    NonUnit,

    #[error("polynomial is not reducible to the generator basis: {0}")]
    NotReducible(String),

    #[error("degenerate weight: {0}")]
    Degenerate(String),

    #[error("incomplete integration oracle on component `{component}`: no entry for `{monomial}`")]
    IncompleteOracle { component: String, monomial: String },

    #[error("invalid oracle key `{key}` on component `{component}`: {reason}")]
    BadOracleKey { component: String, key: String, reason: String },

    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),

    #[error("unsupported stratum: {0}")]
    UnsupportedStratum(String),

    #[error("irrational skeigen-value: {0}")]
    IrrationalSkeigen(String),

    #[error("matrix is not skew-symmetric: entry ({row}, {col})")]
    NotSkew { row: usize, col: usize },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantViolation {
    Homogeneity,
    Symmetry,
    SignFlip,
}

impl std::fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            InvariantViolation::Homogeneity => "homogeneity",
            InvariantViolation::Symmetry => "symmetry",
            InvariantViolation::SignFlip => "sign-flip invariance",
        })
    }
}

impl Error {
    /// True for errors caused by malformed or invalid user input (as opposed
    /// to violated mathematical preconditions on otherwise well-formed data).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::BadRational(_)
                | Error::Syntax { .. }
                | Error::Json(_)
                | Error::InvalidInvariant { .. }
                | Error::InvalidPartition { .. }
                | Error::BadOracleKey { .. }
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
