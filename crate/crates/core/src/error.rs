use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("leagues have different sizes ({x} vs {y})")]
    UnequalLeagues { x: usize, y: usize },

    #[error("team {0} has no coordinates")]
    MissingCoordinates(String),

    #[error("invalid coordinates for team {name}: ({lat}, {lon})")]
    InvalidCoordinates { name: String, lat: f64, lon: f64 },

    #[error("instance invariant violated: {invariant} ({detail})")]
    InvariantViolation {
        invariant: &'static str,
        detail: String,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("team {team} and opponent {opponent} belong to the same league")]
    LeagueMismatch { team: usize, opponent: usize },

    #[error("team index {0} out of range")]
    TeamOutOfRange(usize),

    #[error("no feasible (m, d) exists for n = {0}")]
    NoFeasibleParams(usize),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("malformed schedule shape: {0}")]
    Shape(String),

    #[error("schedule is for n = {schedule} but instance has n = {instance}")]
    ShapeMismatch { schedule: usize, instance: usize },

    #[error("team {team} has an away run of {len} games starting on day {day}")]
    RunTooLong { team: usize, day: usize, len: usize },

    #[error("cycle packing needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),

    #[error("vertex count {0} is not divisible by 3")]
    NotDivisibleBy3(usize),

    #[error("instance too large for exact search (n = {0})")]
    TooLarge(usize),

    #[error("no feasible schedule exists for n = {0}")]
    Infeasible(usize),

    #[error("division by zero: lower bound is 0")]
    DivisionByZero,

    #[error("internal error: {0}")]
    Internal(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
