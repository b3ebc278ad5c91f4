use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown point id `{0}`")]
    UnknownPoint(String),
    #[error("nonpositive edge length {len} on edge ({a}, {b})")]
    NonpositiveEdgeLength { a: String, b: String, len: f64 },
    #[error("graph is disconnected: point `{0}` unreachable from `{1}`")]
    Disconnected(String, String),
    #[error("negative value {value} for field `{field}` at point `{point}`")]
    NegativeFieldValue {
        point: String,
        field: &'static str,
        value: f64,
    },
    #[error("soliton field `{field}` present on some nodes but missing at `{point}`")]
    PartialSolitonField {
        point: String,
        field: &'static str,
    },
    #[error("soliton fields present but document has no `kind`")]
    MissingKind,
    #[error("unknown soliton kind `{0}` (expected steady|shrinking)")]
    UnknownKind(String),
    #[error("empty-ball: ball of radius {radius} at `{point}` is empty")]
    EmptyBall { point: String, radius: f64 },
    #[error("zero-start: field vanishes at start point `{0}`")]
    ZeroStart(String),
    #[error("missing per-point field `{0}` for this operation")]
    MissingField(&'static str),
    #[error("negative value {value} under square root at point `{point}`")]
    NegativeSqrt { point: String, value: f64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("operation requires a finite group, got one of positive rank")]
    InfiniteGroup,
    #[error("group order {order} exceeds configured cap {cap}")]
    CapExceeded { order: u128, cap: u128 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("quaternion closure exceeded {limit} elements (expected order {expected}); bad generators")]
    ClosureOverflow { expected: usize, limit: usize },
    #[error("presentation mismatch: {0}")]
    PresentationMismatch(String),
    #[error("no admissible radius at `{0}`")]
    NoAdmissibleRadius(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
