use crate::pietsch::PietschSolution;

/// Errors shared by all modules of the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("a sequence must contain at least one vector")]
    EmptySequence,

    #[error("vectors must have dimension at least 1")]
    ZeroDimension,

    #[error("non-finite entry encountered")]
    NonFinite,

    #[error("exact enumeration needs N <= {cap}, got N = {n}")]
    EnumerationCapExceeded { n: usize, cap: usize },

    #[error("matrix is not Hermitian (max asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not positive semidefinite (lambda_min = {lambda_min:.3e})")]
    NotPositiveSemidefinite { lambda_min: f64 },

    #[error("problem size {n} exceeds the supported maximum {max}")]
    TooLarge { n: usize, max: usize },

    /// The solver ran out of its iteration budget before certifying the
    /// requested duality gap.  The best iterate is attached so callers can
    /// still inspect (and report) the uncertified result.
    #[error("solver stopped with duality gap {gap:.3e} above tolerance")]
    NotCertified {
        gap: f64,
        solution: Box<PietschSolution>,
    },

    #[error("row {row} of B has l1 norm {norm} exceeding 1")]
    RowNormViolation { row: usize, norm: f64 },

    #[error("weight at index {index} is negative ({value})")]
    NegativeWeight { index: usize, value: f64 },

    #[error("vector at index {0} must be nonzero")]
    ZeroVector(usize),

    #[error("witness margin {margin} is below 1")]
    WitnessMarginTooSmall { margin: f64 },

    #[error("nonzero symbol at index {index} requires nonzero vectors there")]
    ZeroVectorWithNonzeroSymbol { index: usize },

    #[error("measure is degenerate at index {index}")]
    DegenerateMeasure { index: usize },

    #[error("zero factorization weight at index {index} with nonzero symbol")]
    ZeroWeight { index: usize },

    #[error("basis is not orthonormal (max deviation {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },

    #[error("measure weights must be nonnegative and sum to 1 (sum = {sum})")]
    InvalidMeasureWeights { sum: f64 },

    #[error("measure point {index} lies outside the closed unit ball (norm {norm})")]
    PointOutsideUnitBall { index: usize, norm: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
