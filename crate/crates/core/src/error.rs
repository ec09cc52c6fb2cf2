use thiserror::Error;

/// Everything that can go wrong while evaluating a classifier.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A class has no positives or no negatives in one-vs-rest form, so its
    /// rates divide by zero.
    #[error("class {class} is degenerate ({positives} positives, {negatives} negatives)")]
    DegenerateClass {
        class: usize,
        positives: u64,
        negatives: u64,
    },

    /// Probability-form table with zero prevalence or zero complement.
    #[error("degenerate table: prevalence {prevalence} leaves a rate undefined")]
    DegenerateStats { prevalence: f64 },

    #[error("{0} curves do not have monotone x and cannot be integrated")]
    UnsupportedKind(&'static str),

    /// Malformed input. `line` is 1-based and counts the header.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
