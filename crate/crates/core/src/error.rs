use thiserror::Error;

/// Errors raised by the exact and analytic engines.
///
/// The CLI maps `ImproperIntersection` to exit code 2, `Precision` to 3 and
/// everything else to 1 (see [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid discriminant {0}: {1}")]
    Discriminant(i64, &'static str),

    #[error("discriminant {0} is not fundamental")]
    NotFundamental(i64),

    #[error("invalid quadratic form [{a},{b},{c}]: {why}")]
    Form {
        a: i64,
        b: i64,
        c: i64,
        why: &'static str,
    },

    #[error("congruence failure: {0}")]
    Congruence(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("prime {p} splits in Q(sqrt({d}))")]
    SplitPrime { p: u64, d: i64 },

    #[error("improper intersection: n = {n} gives n^2 = d*D for (d, r) = ({d}, {r})")]
    ImproperIntersection { d: i64, r: i64, n: i64 },

    #[error("insufficient precision: {0}")]
    Precision(String),

    #[error("point outside the domain of evaluation: {0}")]
    Domain(String),

    #[error("integer too large for machine arithmetic: {0}")]
    Overflow(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ImproperIntersection { .. } => 2,
            Error::Precision(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
