use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum SlamError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed row {row}: {reason}")]
    MalformedRow { row: usize, reason: String },
    #[error("duplicate spot id `{id}` at row {row}")]
    DuplicateSpotId { id: String, row: usize },
    #[error("attribute dimension mismatch at row {row}: expected {expected}, got {got}")]
    DimensionMismatch {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("non-finite value at row {row}, column `{column}`")]
    NonFinite { row: usize, column: String },
    #[error("labeling is missing spot `{id}`")]
    MissingSpot { id: String },
    #[error("labeling references unknown spot `{id}`")]
    UnknownSpot { id: String },
    #[error("empty label token for spot `{id}`")]
    EmptyLabel { id: String },
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("k = {k} must be smaller than the number of nodes ({n})")]
    KTooLarge { k: usize, n: usize },
    #[error("graph needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("reassignment exhausted: truth label `{0}` cannot be matched")]
    ReassignmentExhausted(String),
    #[error("attributes required for cosine similarity but absent")]
    AttributesRequired,
    #[error("attribute vectors have different dimensions: {0} vs {1}")]
    AttributeDimMismatch(usize, usize),
    #[error("edge label {0} outside dense range 1..={1}")]
    LabelOutOfRange(usize, usize),
    #[error("metric `{metric}` undefined: {reason}")]
    MetricUndefined { metric: String, reason: String },
    #[error("degenerate Q range (r = 0) for metric `{0}`")]
    DegenerateRange(String),
    #[error("unknown case id `{0}`")]
    UnknownCase(String),
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<SlamError>,
    },
}

impl SlamError {
    /// Tag an error with the pipeline stage it came from.
    pub fn at_stage(self, stage: &'static str) -> SlamError {
        SlamError::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, SlamError>;
