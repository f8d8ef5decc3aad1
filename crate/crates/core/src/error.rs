use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    ParseAt {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("vertex set mismatch: {0}")]
    VertexMismatch(String),
    #[error("NonMonomialRelations: {0}")]
    NonMonomialRelations(String),
    #[error("NotGentle: {0}")]
    NotGentle(String),
    #[error("NotCompleteGentle: {0}")]
    NotCompleteGentle(String),
    #[error("CompletionFailed: {0}")]
    CompletionFailed(String),
    #[error("InvalidRankSequence: {0}")]
    InvalidRankSequence(String),
    #[error("NotComparable: {0}")]
    NotComparable(String),
    #[error("BudgetExceeded: {0}")]
    BudgetExceeded(String),
    #[error("GenericityFailure: {0}")]
    GenericityFailure(String),
    #[error("SplitInconclusive: {0}")]
    SplitInconclusive(String),
    #[error("Unidentified: {0}")]
    Unidentified(String),
    #[error("ThetaMismatch: {0}")]
    ThetaMismatch(String),
    #[error("GenericPointUnstable: {0}")]
    GenericPointUnstable(String),
    #[error("SummandNotStable: {0}")]
    SummandNotStable(String),
    #[error("NoGoodPrime: {0}")]
    NoGoodPrime(String),
}

impl Error {
    /// Short name used by the command-line reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Parse(_) | Error::ParseAt { .. } => "ParseError",
            Error::InvalidInput(_) => "InvalidInput",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::VertexMismatch(_) => "VertexMismatch",
            Error::NonMonomialRelations(_) => "NonMonomialRelations",
            Error::NotGentle(_) => "NotGentle",
            Error::NotCompleteGentle(_) => "NotCompleteGentle",
            Error::CompletionFailed(_) => "CompletionFailed",
            Error::InvalidRankSequence(_) => "InvalidRankSequence",
            Error::NotComparable(_) => "NotComparable",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::GenericityFailure(_) => "GenericityFailure",
            Error::SplitInconclusive(_) => "SplitInconclusive",
            Error::Unidentified(_) => "Unidentified",
            Error::ThetaMismatch(_) => "ThetaMismatch",
            Error::GenericPointUnstable(_) => "GenericPointUnstable",
            Error::SummandNotStable(_) => "SummandNotStable",
            Error::NoGoodPrime(_) => "NoGoodPrime",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
