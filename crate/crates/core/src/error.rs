use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid issue `{issue}`: {reason}")]
    InvalidIssue { issue: String, reason: String },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("issue `{0}` has a real-valued domain; unpredictable partial offers cannot be enumerated")]
    UnsupportedDomain(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("a team needs at least {min} member(s), got {got}")]
    TeamTooSmall { min: usize, got: usize },

    #[error(
        "could not generate a {class} team within {attempts} attempts \
         (team dissimilarity band {lo:.4}..{hi:.4})"
    )]
    GenerationFailed {
        class: String,
        attempts: usize,
        lo: f64,
        hi: f64,
    },

    #[error("predictable issue `{0}` is not compatible among team members")]
    Incompatible(String),

    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),

    #[error("outcome space has {points} points, above the budget of {budget}; use a coarser grid")]
    BudgetExceeded { points: usize, budget: usize },

    #[error("{0}")]
    Invalid(String),

    #[error("unanimity violated in run {run_id}: {detail}")]
    UnanimityViolation { run_id: String, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    TomlDe(#[from] toml::de::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
