use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("radius {0} is outside (0, 1/sqrt(pi)]")]
    InvalidRadius(f64),

    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: String,
    },

    #[error("profile is not strictly increasing near u = {u}")]
    NotMonotone { u: f64 },

    #[error("invalid sample table: {0}")]
    InvalidTable(String),

    #[error("relation {relation} needs a profile with {required_turns} turns, got {turns}")]
    DomainMismatch {
        relation: &'static str,
        required_turns: f64,
        turns: f64,
    },

    #[error("u = {0} is outside (0, 1]")]
    OutOfDomain(f64),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("unknown preset {0:?}")]
    UnknownPreset(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
