use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the engine can report.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("a probability space needs at least one atom")]
    EmptySpace,
    #[error("atom `{label}` has non-positive probability {prob}")]
    ZeroProbabilityAtom { label: String, prob: f64 },
    #[error("atom probabilities sum to {sum}, expected 1")]
    ProbSum { sum: f64 },
    #[error("duplicate atom label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown atom label `{0}`")]
    UnknownAtom(String),
    #[error("blocks do not partition the atoms: {0}")]
    NotAPartition(String),
    #[error("block {0} is empty")]
    EmptyBlock(usize),
    #[error("operands live on different probability spaces or algebras")]
    SpaceMismatch,
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },
    #[error("NaN is not an extended real")]
    NotANumber,
    #[error("empty family")]
    EmptyFamily,
    #[error("eps must be strictly positive on every atom")]
    NonPositiveEps,
    #[error("partition block {0} is not a union of conditioning blocks")]
    PartitionNotInF(usize),
    #[error("expected {expected} parts, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("{0} is not measurable with respect to the conditioning algebra")]
    NotMeasurable(&'static str),
    #[error("norm exponent {0} is below 1")]
    BadExponent(f64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid cone: {0}")]
    InvalidCone(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("generated set has no generators")]
    EmptyGenerators,
    #[error("operation requires the {0} closure flag")]
    MissingClosure(&'static str),
    #[error("target lies in the set on block {block}; no separating functional exists")]
    NotSeparable { block: usize },
    #[error("linear program failed: {0}")]
    LpFailure(String),
    #[error("undefined extended arithmetic (+inf) - (+inf)")]
    InfMinusInf,
    #[error("optimizer failure: {0}")]
    OptimizerFailure(String),
    #[error("dual element is not admissible on block {block}")]
    NotAdmissible { block: usize },
    #[error("sequence does not approach the limit on atom `{atom}` (deviation {deviation})")]
    NotConvergent { atom: String, deviation: f64 },
    #[error("sequence exceeds its bound on atom `{atom}`")]
    NotBounded { atom: String },
    #[error("custom risk measure violates its axioms ({violations} violations)")]
    AxiomViolation { violations: usize },
    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("file not found: {0}")]
    FileNotFound(String),
}

impl Error {
    /// Stable variant name used in machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptySpace => "EmptySpace",
            Error::ZeroProbabilityAtom { .. } => "ZeroProbabilityAtom",
            Error::ProbSum { .. } => "ProbSum",
            Error::DuplicateLabel { .. } => "DuplicateLabel",
            Error::UnknownAtom { .. } => "UnknownAtom",
            Error::NotAPartition { .. } => "NotAPartition",
            Error::EmptyBlock { .. } => "EmptyBlock",
            Error::SpaceMismatch => "SpaceMismatch",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::NonFinite { .. } => "NonFinite",
            Error::NotANumber => "NotANumber",
            Error::EmptyFamily => "EmptyFamily",
            Error::NonPositiveEps => "NonPositiveEps",
            Error::PartitionNotInF { .. } => "PartitionNotInF",
            Error::ArityMismatch { .. } => "ArityMismatch",
            Error::NotMeasurable { .. } => "NotMeasurable",
            Error::BadExponent { .. } => "BadExponent",
            Error::ShapeMismatch { .. } => "ShapeMismatch",
            Error::InvalidCone { .. } => "InvalidCone",
            Error::BadParameter { .. } => "BadParameter",
            Error::EmptyGenerators => "EmptyGenerators",
            Error::MissingClosure { .. } => "MissingClosure",
            Error::NotSeparable { .. } => "NotSeparable",
            Error::LpFailure { .. } => "LpFailure",
            Error::InfMinusInf => "InfMinusInf",
            Error::OptimizerFailure { .. } => "OptimizerFailure",
            Error::NotAdmissible { .. } => "NotAdmissible",
            Error::NotConvergent { .. } => "NotConvergent",
            Error::NotBounded { .. } => "NotBounded",
            Error::AxiomViolation { .. } => "AxiomViolation",
            Error::Schema { .. } => "SchemaError",
            Error::FileNotFound { .. } => "FileNotFound",
        }
    }
}
