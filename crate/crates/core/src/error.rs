use thiserror::Error;

/// Errors raised by the library.
///
/// Mathematical negative outcomes (a module that is not stable, a cocycle
/// class that does not vanish) are never errors; they are values in the
/// respective verdict types.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("dimension mismatch in {op}: {detail}")]
    Dimension { op: &'static str, detail: String },

    #[error("modulus mismatch: {0} vs {1}")]
    Modulus(u32, u32),

    #[error("size limit exceeded: {what} would need {needed}, cap is {cap}")]
    SizeLimit { what: &'static str, needed: usize, cap: usize },

    #[error("invalid permutation: {0}")]
    InvalidPerm(String),

    #[error("element {0} is not in the group")]
    NotInGroup(String),

    #[error("subgroup is not normal: {0}")]
    NotNormal(String),

    #[error("relation violated along word {word:?}")]
    RelationViolation { word: Vec<usize> },

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid input at {path}: {message}")]
    Validation { path: String, message: String },

    #[error("schema mismatch: expected {expected}, found {found}")]
    Schema { expected: String, found: String },

    #[error("json: {0}")]
    Json(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Validation { .. } => "validation",
            Error::Schema { .. } => "schema",
            Error::SizeLimit { .. } => "size-limit",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
            _ => "error",
        }
    }

    /// The offending input field, for validation errors.
    pub fn path(&self) -> Option<&str> {
        match self {
            Error::Validation { path, .. } => Some(path),
            _ => None,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn certify(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Certification(what()))
    }
}
