//! Library-wide error type with stable machine-readable codes.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("polynomial degree {got} exceeds cap {cap}")]
    DegreeOverflow { got: usize, cap: usize },
    #[error("rational height {got} bits exceeds cap {cap}")]
    HeightOverflow { got: u64, cap: u64 },
    #[error("anti-automorphism incompatible with ring: {0}")]
    IncompatibleAntiAuto(String),
    #[error("pair not admissible: {0}")]
    NotAdmissible(String),
    #[error("admissible pair mismatch")]
    PairMismatch,
    #[error("scaling a quaternion pair requires a central (rational) scalar")]
    NonCentralScale,
    #[error("subgroup generator not in the circle-vector part of the coset group: {0}")]
    GeneratorNotCircVector(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("gram matrix not reflexive at entry ({0}, {1})")]
    NotReflexive(usize, usize),
    #[error("sesquilinearization not trace-valued: diagonal entry {0}")]
    NotTraceValued(usize),
    #[error("gram diagonal inconsistent with basis value at index {0}")]
    GramValueMismatch(usize),
    #[error("full co-defect: sesquilinearization is not unique")]
    FullCodefect,
    #[error("sesquilinearization check failed: {0}")]
    SesquiCheckFailed(String),
    #[error("basis vector {0} is not singular")]
    BasisNotSingular(usize),
    #[error("vectors do not form a basis")]
    NotABasis,
    #[error("no singular basis found")]
    NoSingularBasis,
    #[error("quotient not defined: {0}")]
    QuotientNotDefined(String),
    #[error("subgroups do not decompose the co-defect as a direct sum: {0}")]
    NotADirectSum(String),
    #[error("element not in the expected subgroup: {0}")]
    NotInSubgroup(String),
    #[error("enumeration requires a finite field")]
    InfiniteRing,
    #[error("projective space too large: {0} points exceeds cap")]
    SizeCapExceeded(u128),
    #[error("ambient spaces do not match")]
    AmbientMismatch,
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("grid geometries over fields with more than 4 elements are not classified")]
    GridNotSupported,
    #[error("no reflexive form found for the geometry")]
    NoFormFound,
    #[error("form recovery ambiguous: solution space has dimension {0}")]
    AmbiguousRecovery(usize),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("automorphism does not stabilize the pair: {0}")]
    AutomorphismUnstable(String),
    #[error("operation unsupported for this ring: {0}")]
    Unsupported(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    /// Stable machine-readable code, used in CLI reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division-by-zero",
            Error::RingMismatch(_) => "ring-mismatch",
            Error::DegreeOverflow { .. } => "degree-overflow",
            Error::HeightOverflow { .. } => "height-overflow",
            Error::IncompatibleAntiAuto(_) => "incompatible-antiauto",
            Error::NotAdmissible(_) => "not-admissible",
            Error::PairMismatch => "pair-mismatch",
            Error::NonCentralScale => "non-central-scale",
            Error::GeneratorNotCircVector(_) => "generator-not-circ-vector",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::NotReflexive(_, _) => "not-reflexive",
            Error::NotTraceValued(_) => "not-trace-valued",
            Error::GramValueMismatch(_) => "gram-value-mismatch",
            Error::FullCodefect => "full-codefect",
            Error::SesquiCheckFailed(_) => "sesqui-check-failed",
            Error::BasisNotSingular(_) => "basis-not-singular",
            Error::NotABasis => "not-a-basis",
            Error::NoSingularBasis => "no-singular-basis",
            Error::QuotientNotDefined(_) => "quotient-not-defined",
            Error::NotADirectSum(_) => "not-a-direct-sum",
            Error::NotInSubgroup(_) => "not-in-subgroup",
            Error::InfiniteRing => "infinite-ring",
            Error::SizeCapExceeded(_) => "size-cap-exceeded",
            Error::AmbientMismatch => "ambient-mismatch",
            Error::InvalidGeometry(_) => "invalid-geometry",
            Error::GridNotSupported => "grid-not-supported",
            Error::NoFormFound => "no-form-found",
            Error::AmbiguousRecovery(_) => "ambiguous-recovery",
            Error::VerificationFailed(_) => "verification-failed",
            Error::AutomorphismUnstable(_) => "automorphism-unstable",
            Error::Unsupported(_) => "unsupported",
            Error::Parse { .. } => "parse-error",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
