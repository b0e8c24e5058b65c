use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("constraint violated: mu^2 + nu^2 > 1 for P({mu},{nu})")]
    Constraint { mu: f64, nu: f64 },

    /// A cell of an information system failed validation.
    #[error(
        "invalid cell at row {row}, column {col} (agent {agent:?}, issue {issue:?}): {source}"
    )]
    Cell {
        row: usize,
        col: usize,
        agent: String,
        issue: String,
        #[source]
        source: Box<Error>,
    },

    #[error("weight error: {0}")]
    Weight(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown agent {0:?}")]
    UnknownAgent(String),

    #[error("threshold error: {0}")]
    Threshold(String),

    #[error("loss function satisfies no monotonicity mode: {0}")]
    LossOrder(String),

    #[error("unknown regime {0:?}")]
    UnknownRegime(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
