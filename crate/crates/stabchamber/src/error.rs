use thiserror::Error;

/// Engine-level failures. Violations of data invariants are reported as
/// values, not errors; these variants are contract breaches by the caller
/// or genuine impossibilities.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("dimension mismatch: class of length {left} paired with length {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("exceptional index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("invalid blow-up configuration: {0}")]
    InvalidConfiguration(String),

    #[error("contraction set {set} is not valid: {reason}")]
    InvalidContraction { set: String, reason: String },

    #[error("orthogonality violated: {0}")]
    Orthogonality(String),

    #[error("class {class} is not supported on the contracted span of {set}")]
    UnsupportedDivisor { set: String, class: String },

    #[error(
        "automatic negative-curve enumeration is capped at n <= 8 (got n = {n}); \
         declare the curve classes explicitly via extra_curves"
    )]
    EnumerationCap { n: usize },

    #[error("contraction enumeration is capped at n <= 16 (got n = {n})")]
    ContractionCap { n: usize },

    #[error("pivot {index} has relative type II (kappa = {kappa}) and cannot be contracted last")]
    PivotNotTypeI { index: usize, kappa: usize },

    #[error("argument error: {0}")]
    Argument(String),

    #[error("central charge {z} lies outside the upper half slit; phase undefined")]
    Positivity { z: String },

    #[error("no generators: the contraction set is empty")]
    EmptyGenerators,

    #[error("degenerate slice basis: u and v span less than a plane")]
    DegenerateBasis,

    #[error("failed to certify a witness for {set}: {reason}")]
    WitnessSearch { set: String, reason: String },

    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, EngineError>;
