use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is reducible")]
    ReducibleModulus(String),
    #[error("field with {0} elements is too small (need at least 4)")]
    FieldTooSmall(u64),
    #[error("field order {0} exceeds the supported maximum")]
    FieldTooLarge(u64),
    #[error("ring descriptor mismatch: expected {expected}, found {found}")]
    DescriptorMismatch { expected: String, found: String },
    #[error("invalid ring descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("index ({0}, {1}) out of range for this group")]
    IndexOutOfRange(usize, usize),
    #[error("{0} is not a unit")]
    NotAUnit(String),
    #[error("group tag mismatch: {0}")]
    TagMismatch(String),
    #[error("element is not unipotent")]
    NotUnipotent,
    #[error("enumeration of {requested} elements exceeds the cap of {cap}")]
    SizeCapExceeded { requested: u128, cap: u128 },
    #[error("automorphism signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("block size {block} does not divide window dimension {dim}")]
    BlockMismatch { block: usize, dim: usize },
    #[error("window is not invariant under the map: {0}")]
    WindowNotInvariant(String),
    #[error("polynomial {0} is reducible")]
    ReducibleP(String),
    #[error("det(I - a*C_P) vanishes for a = {0}")]
    LulaFails(String),
    #[error("torsion-to-free block is nonzero")]
    SplittingViolation,
    #[error("family members {i} and {j} are twisted conjugate")]
    CertificationFailed { i: usize, j: usize },
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o failure: {0}")]
    IoFailure(String),
    #[error("schema violation: {0}")]
    SchemaViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
