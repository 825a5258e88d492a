use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A matrix operation received a non-square matrix where a square one is required.
    #[error("expected a square matrix, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    /// Grid vectors must be strictly increasing (and, where required, of equal length).
    #[error("invalid grid: {0}")]
    Grid(String),

    /// An argument fell outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation requires pairwise-distinct parameters.
    #[error("operation requires pairwise-distinct parameters")]
    RequiresDistinct,

    /// Degenerate input (repeated nodes, vanishing leading coefficient, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Input data is not consistent with any genuine parameter vector.
    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    /// A kernel was sampled at a point where it is unbounded.
    #[error("kernel is unbounded at difference {difference}")]
    Unbounded { difference: f64 },

    /// Minor enumeration would exceed the configured budget.
    #[error("minor enumeration budget exceeded: {required} minors requested, budget {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    /// An option combination is not valid for the requested operation.
    #[error("invalid mode: {0}")]
    Mode(String),
}

pub type Result<T> = std::result::Result<T, Error>;
