use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    /// The requested quantity is undefined for this scenario.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("operation requires {expected} direction")]
    Direction { expected: &'static str },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid steps differ: {0:e} vs {1:e}")]
    StepMismatch(f64, f64),

    /// A density lost or gained too much mass on its grid, which means the grid
    /// does not resolve or cover it.
    #[error("pdf integral {integral:.9} drifts from 1 by more than {tolerance:e}")]
    NormalizationDrift { integral: f64, tolerance: f64 },

    #[error("no pairwise error probability for distance {0}")]
    MissingDistance(u32),

    #[error("invalid distance spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("length error: {0}")]
    Length(String),

    #[error("distance search exceeded its budget of {steps} trellis steps")]
    SearchBudgetExceeded { steps: usize },

    #[error("at least {required} bits are needed, configuration tests {available}")]
    InsufficientBits { required: u64, available: u64 },

    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),
}
