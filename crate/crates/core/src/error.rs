use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("point {point} out of range 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("permutation pair is not transitive; orbits: {orbits:?}")]
    Intransitive { orbits: Vec<Vec<usize>> },

    #[error("coset enumeration exceeded {limit} cosets (index may be infinite)")]
    ResourceLimit { limit: usize },

    #[error("structure is disconnected; components: {components:?}")]
    Disconnected { components: Vec<Vec<usize>> },

    #[error("not a generalized polygon: {0}")]
    NotPolygon(String),

    #[error("unknown geometry name {0:?}")]
    UnknownGeometry(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
