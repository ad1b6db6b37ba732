use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: u8 },

    #[error("rank {0} is not supported (expected 1..=26)")]
    InvalidRank(usize),

    #[error("cannot combine {left} with {right}")]
    VariantMismatch {
        left: &'static str,
        right: &'static str,
    },

    #[error("numeric degradation: {0}")]
    NumericDegradation(String),

    #[error("indeterminate classification: |trace| = {trace} is within tolerance of 2")]
    IndeterminateClassification { trace: f64 },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("enumeration budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: f64, budget: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("certificate refuted: {0}")]
    CertificateRefuted(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
