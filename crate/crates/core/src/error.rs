use std::path::PathBuf;

/// Errors produced anywhere in the scoring pipeline or the evaluation harness.
#[derive(Debug, thiserror::Error)]
pub enum IqaError {
    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("reference is {ref_width}x{ref_height} but test is {test_width}x{test_height}")]
    PairMismatch {
        ref_width: usize,
        ref_height: usize,
        test_width: usize,
        test_height: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Both saliency maps are identically zero, so the pooling weights are undefined.
    #[error("saliency weights sum to zero")]
    DegenerateSaliency,

    #[error("degenerate series: {0}")]
    DegenerateSeries(String),

    #[error("series lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("reports are not comparable: {0}")]
    IncompatibleReports(String),

    #[error("unknown method `{0}`")]
    UnknownMethod(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("report serialization: {0}")]
    Serialization(#[from] serde_json::Error),
}

impl IqaError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        IqaError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = IqaError> = std::result::Result<T, E>;
