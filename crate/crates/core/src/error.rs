use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("partition {partition} has {rows} rows but the local dimension is {d}")]
    TooManyRows {
        partition: String,
        rows: usize,
        d: usize,
    },

    #[error("weight mismatch: {left} != {right}")]
    WeightMismatch { left: usize, right: usize },

    #[error("letter {letter} is outside 1..={d}")]
    LetterOutOfRange { letter: usize, d: usize },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("rate {rate} is outside [0, {max}]")]
    RateOutOfRange { rate: f64, max: f64 },

    #[error("{what} requires {required} but the budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        required: u128,
        budget: u128,
    },

    #[error("outcome probability {0:e} is below the 1e-12 floor")]
    DegenerateOutcome(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Whether the error reports a resource budget rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
