use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    #[error("degenerate profile: {0}")]
    DegenerateProfile(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("no sign change of J_{alpha} in [{lo}, {hi}]")]
    NoSignChange { alpha: f64, lo: f64, hi: f64 },

    #[error("shooting bracket failure for p = {p}, d = {d}: {msg}")]
    BracketFailure { p: f64, d: usize, msg: String },

    #[error("non-finite state at r = {r} (step too large?)")]
    NonFinite { r: f64 },

    #[error("step refinement did not reach tolerance {tol} (last difference {diff})")]
    NoConvergence { tol: f64, diff: f64 },

    #[error("integration window too narrow: tail mass {tail} exceeds {limit}")]
    InsufficientWindow { tail: f64, limit: f64 },

    #[error("no envelope crossing in [{lo}, {hi}]; one envelope dominates globally")]
    NoCrossing { lo: f64, hi: f64 },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Error {
    Error::Domain {
        op,
        msg: msg.into(),
    }
}
