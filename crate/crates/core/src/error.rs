use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid comparison set: {0}")]
    InvalidSet(String),

    /// A matrix instance only defines pairwise probabilities.
    #[error("listwise comparison over {size} items is not supported by a pairwise matrix instance")]
    ListwiseUnsupported { size: usize },

    #[error("cannot build a preference interval tree from an empty list")]
    EmptyList,

    #[error("item {item} was not inserted after {attempts} attempts")]
    ScheduleExhausted { item: usize, attempts: u32 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
