use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown base")]
    UnknownBase,
    #[error("stable letter index {0} out of range")]
    StableIndexOutOfRange(u32),
    #[error("malformed exponent")]
    MalformedExponent,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} in token {token:?} at byte {position}")]
pub struct ParseError {
    pub token: String,
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("ball entry cap {cap} exceeded; completed radius {completed_radius}")]
    BallCapExceeded { cap: usize, completed_radius: u32 },
    #[error("enumeration would exceed {cap} words")]
    EnumerationCapExceeded { cap: usize },
    #[error("distance exceeds cap {cap}")]
    CapExceeded { cap: u32 },
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable category used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidSpec(_) => "invalid_spec",
            Error::Parse(_) => "parse",
            Error::BallCapExceeded { .. } => "ball_cap_exceeded",
            Error::EnumerationCapExceeded { .. } => "enumeration_cap_exceeded",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::InvalidAutomaton(_) => "invalid_automaton",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
            Error::Io(_) => "io",
        }
    }
}
