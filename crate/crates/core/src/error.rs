use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid counts r1={r1}, n1={n1}, r2={r2}, n2={n2}: {reason}")]
    InvalidCounts {
        r1: u64,
        n1: u64,
        r2: u64,
        n2: u64,
        reason: &'static str,
    },

    #[error("margin {0} is outside the open interval (-1, 1)")]
    InvalidMargin(f64),

    #[error("confidence level {0} is outside the open interval (0, 1)")]
    InvalidLevel(f64),

    #[error("cubic does not have three real roots (arc-cosine argument {argument})")]
    NotThreeRealRoots { argument: f64 },

    #[error("no cubic root {roots:?} lies in the feasible interval [{lower}, {upper}]")]
    NoFeasibleRoot {
        roots: [f64; 3],
        lower: f64,
        upper: f64,
    },

    #[error("null variance is zero with nonzero numerator {numerator}")]
    DegenerateVariance { numerator: f64 },

    #[error("pooled proportion is 0 or 1; the 2x2 table has an empty column")]
    DegenerateTable,

    #[error("probability {0} is outside the open interval (0, 1)")]
    OutOfDomain(f64),

    #[error("closed-form interval requires both arms at 0 or both at 1")]
    WrongCase,

    #[error("no sign change of the inverted statistic on [{lower}, {upper}]")]
    BracketingFailure { lower: f64, upper: f64 },

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// Stable machine-readable name, used in CLI error records.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidCounts { .. } => "InvalidCounts",
            Error::InvalidMargin(_) => "InvalidMargin",
            Error::InvalidLevel(_) => "InvalidLevel",
            Error::NotThreeRealRoots { .. } => "NotThreeRealRoots",
            Error::NoFeasibleRoot { .. } => "NoFeasibleRoot",
            Error::DegenerateVariance { .. } => "DegenerateVariance",
            Error::DegenerateTable => "DegenerateTable",
            Error::OutOfDomain(_) => "OutOfDomain",
            Error::WrongCase => "WrongCase",
            Error::BracketingFailure { .. } => "BracketingFailure",
            Error::InvalidConfig(_) => "InvalidConfig",
        }
    }

    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotThreeRealRoots { .. }
                | Error::NoFeasibleRoot { .. }
                | Error::DegenerateVariance { .. }
                | Error::DegenerateTable
                | Error::BracketingFailure { .. }
        )
    }
}
