use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("kappa must be at least 3 (got {0})")]
    KappaTooSmall(u32),
    #[error("kappa {0} is not supported here: {1}")]
    KappaUnsupported(u32, &'static str),
    #[error("color {color} is out of range for kappa {kappa}")]
    ColorOutOfRange { color: u32, kappa: u32 },
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("site {0} lies outside the window")]
    SiteOutside(i64),
    #[error("a walk orientation is required for path integrals on a cycle")]
    OrientationRequired,
    #[error("edge {edge} flips at time {time}; the burn-in period has not elapsed")]
    Flip { time: u64, edge: i64 },
    #[error("unknown particle label {0}")]
    UnknownLabel(u32),
    #[error("time stamps disagree: {0} vs {1}")]
    TimeMismatch(u64, u64),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("no root bracket found for u = {0}")]
    NoBracket(String),
    #[error("i/o failure at {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
