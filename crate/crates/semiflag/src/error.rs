use thiserror::Error;

/// Errors raised by the library. Variant names follow the failure they
/// witness; the payload carries a human-readable description of the witness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("semifield tag mismatch: {0}")]
    TagMismatch(String),
    #[error("division by absent value: {0}")]
    DivisionByAbsent(String),
    #[error("evaluation is not strictly positive: {0}")]
    NonPositiveEvaluation(String),
    #[error("value is not in the positive rational-function semifield: {0}")]
    NotInSemifield(String),
    #[error("parse error: {0}")]
    Parse(String),

    #[error("Weyl group enumeration bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("v is not Bruhat-below w: {0}")]
    NotBruhatBelow(String),
    #[error("invalid diagram automorphism: {0}")]
    InvalidAutomorphism(String),

    #[error("unsupported Cartan type for built-in construction: {0}")]
    UnsupportedType(String),
    #[error("structure constant positivity violated: {0}")]
    PositivityViolation(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("representation data schema error: {0}")]
    SchemaError(String),
    #[error("map is not a basis permutation: {0}")]
    NotAPermutation(String),
    #[error("extremal vector computation failed: {0}")]
    NotExtremal(String),
    #[error("cross-check mismatch: {0}")]
    CrossCheckMismatch(String),
    #[error("representation invariant violated: {0}")]
    InvariantViolation(String),

    #[error("bijection invoked off its domain: {0}")]
    DomainViolation(String),
    #[error("relation failure: {0}")]
    RelationFailure(String),
    #[error("injectivity failure: {0}")]
    InjectivityFailure(String),
    #[error("cannot projectivize the zero vector")]
    ZeroVector,

    #[error("intermediate vector escapes the tau domain: {0}")]
    IntermediateDomainViolation(String),
    #[error("theta oracle mismatch: {0}")]
    OracleMismatch(String),
    #[error("cell support is not h-independent: {0}")]
    SupportInstability(String),
    #[error("cell support depends on the reduced word: {0}")]
    ReducedWordDependence(String),
    #[error("vector is not in the cell: {0}")]
    NotInCell(String),
    #[error("peeling failed: {0}")]
    PeelFailure(String),
    #[error("support matches no census entry: {0}")]
    UnknownSupport(String),
    #[error("two cells share a support set: {0}")]
    DuplicateSupport(String),

    #[error("tensor is not rank one: {0}")]
    NotDecomposable(String),
    #[error("intertwiner construction failed: {0}")]
    IntertwinerFailure(String),

    #[error("lambda is not fixed by the diagram automorphism: {0}")]
    LambdaNotFixed(String),
    #[error("fixed-point characterization failed: {0}")]
    FixedPointMismatch(String),

    #[error("lambda must be very dominant (all coordinates >= 1): {0}")]
    LambdaNotVeryDominant(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
