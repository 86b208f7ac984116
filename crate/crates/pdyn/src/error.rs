//! Error type shared by every module.

use std::fmt;

/// Admissibility rule identifiers for marked grids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Rule {
    Ma,
    Mb,
    Mc,
    Md,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::Ma => "Ma",
            Rule::Mb => "Mb",
            Rule::Mc => "Mc",
            Rule::Md => "Md",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unsupported extension: {0}")]
    UnsupportedExtension(String),
    #[error("indeterminate valuation: {0}")]
    IndeterminateValuation(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("not a level-{level} point: {detail}")]
    NotALevelNPoint { level: usize, detail: String },
    #[error("depth budget {0} exceeded")]
    DepthBudgetExceeded(usize),
    #[error("grid violates rule {rule} at ({row}, {col})")]
    Violation { rule: Rule, row: usize, col: usize },
    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),
    #[error("parameter outside the strip: Im T = {0}")]
    OutsideStrip(f64),
    #[error("no escape after {0} iterations")]
    MaxIterationsWithoutEscape(usize),
    #[error("resolution insufficient: {0}")]
    ResolutionInsufficient(String),
    #[error("product diverged: {0}")]
    ProductDiverged(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// The machine-readable name of the error, as used in CLI reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::UnsupportedExtension(_) => "UnsupportedExtension",
            Error::IndeterminateValuation(_) => "IndeterminateValuation",
            Error::NoConvergence(_) => "NoConvergence",
            Error::NotALevelNPoint { .. } => "NotALevelNPoint",
            Error::DepthBudgetExceeded(_) => "DepthBudgetExceeded",
            Error::Violation { .. } => "Violation",
            Error::PrecisionInsufficient(_) => "PrecisionInsufficient",
            Error::OutsideStrip(_) => "OutsideStrip",
            Error::MaxIterationsWithoutEscape(_) => "MaxIterationsWithoutEscape",
            Error::ResolutionInsufficient(_) => "ResolutionInsufficient",
            Error::ProductDiverged(_) => "ProductDiverged",
            Error::Parse(_) => "Parse",
        }
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::UnsupportedExtension(msg.into())
    }

    pub(crate) fn indeterminate(msg: impl Into<String>) -> Self {
        Error::IndeterminateValuation(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
