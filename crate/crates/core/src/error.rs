use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("could not generate a connected graph after {attempts} attempts")]
    GenerationFailure { attempts: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("unknown preset `{id}`; valid presets: {}", valid.join(", "))]
    UnknownPreset { id: String, valid: Vec<&'static str> },

    #[error("grid point {index} ({params}): {source}")]
    Point {
        index: usize,
        params: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True when the failure (possibly wrapped in a grid point) is a graph
    /// generation failure rather than bad input.
    pub fn is_generation_failure(&self) -> bool {
        match self {
            Error::GenerationFailure { .. } => true,
            Error::Point { source, .. } => source.is_generation_failure(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
