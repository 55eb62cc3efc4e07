use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("data length {len} is not a multiple of dimension {dim}")]
    RaggedData { len: usize, dim: usize },

    #[error("non-finite component at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("duplicate points: rows {first} and {second} are at distance 0")]
    DuplicatePoints { first: u32, second: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dataset has {n} points, above the quadratic build cap of {max}")]
    TooLarge { n: usize, max: usize },

    #[error("query {query}: nearest-neighbor distance {nn_distance} exceeds tau = {tau}")]
    QueryOutsideTau {
        query: usize,
        nn_distance: f64,
        tau: f64,
    },

    #[error("vertex {vertex} cannot be attached to the reachable part of the graph")]
    Irreparable { vertex: u32 },

    #[error("malformed data at byte {offset}: {reason}")]
    Format { offset: u64, reason: String },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
