use thiserror::Error;

/// Failure modes shared across the crate. Resource-cap overruns are kept
/// separate from bad input so callers can map them to distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cap exceeded: {cap} (limit {limit}, needed {needed})")]
    CapExceeded {
        cap: &'static str,
        limit: u64,
        needed: u64,
    },
    #[error("{what} index {index} out of range (max {max})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },
    #[error("tuple length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{element} is not a member of {container}")]
    NotAMember { element: String, container: String },
    #[error("tuple entry {entry} lies outside the subgroup")]
    EntryNotInSubgroup { entry: String },
    #[error("splitting number undefined: subgroup meets no element of class {class}")]
    OmegaUndefined { class: usize },
    #[error("degree mismatch: {detail}")]
    DegreeMismatch { detail: String },
    #[error("operation requires {required}; got {got}")]
    SettingViolated { required: &'static str, got: String },
    #[error("insufficient data: {detail}")]
    InsufficientData { detail: String },
    #[error("entry {entry} is not a transposition")]
    NonTransposition { entry: String },
    #[error("table too small: need degree {needed}, have {have}")]
    TableTooSmall { needed: u32, have: u32 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
