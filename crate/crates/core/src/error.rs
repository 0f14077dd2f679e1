use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter too small: {0}")]
    ParamTooSmall(String),
    #[error("cotangent pole at integer argument {0}")]
    IntegerPole(String),
    #[error("tangent pole at half-integer argument {0}")]
    HalfIntegerPole(String),
    #[error("value expected rational but is not: {0}")]
    IrrationalResult(String),
    #[error("polynomiality violated: {0}")]
    PolynomialityViolation(String),
    #[error("identity violated: {0}")]
    IdentityViolation(String),
    #[error("unsupported subgroup pair: {0}")]
    UnsupportedPair(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("missing correlator(s): {0}")]
    MissingCorrelator(String),
    #[error("missing seed: {0}")]
    MissingSeed(String),
    #[error("singular system: {0}")]
    SingularSystem(String),
    #[error("internal mismatch between computation paths: {0}")]
    InternalMismatch(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("corrupt cache: {0}")]
    CorruptCache(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
