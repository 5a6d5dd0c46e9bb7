use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("{0} is not a usable prime modulus")]
    NotPrime(u64),
    #[error("coefficient fields differ: F_{0} vs F_{1}")]
    FieldMismatch(u64, u64),
    #[error("the zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("all input polynomials are zero")]
    AllZeroInput,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("basis element {0} is not monic")]
    NotMonic(usize),
    #[error("not a Groebner basis: {0}")]
    NotGroebner(String),
    #[error("term {0} lies outside the leading-term ideal")]
    NormalTerm(String),
    #[error("masking decomposition does not sum to the queried term")]
    BadDecomposition,
    #[error("public set inconsistent with oracle: {0}")]
    InconsistentPublicSet(String),
    #[error("delta {delta} too small, need at least {min}")]
    DeltaTooSmall { delta: u32, min: u32 },
    #[error("term order {0} is not degree compatible")]
    NotDegreeCompatible(String),
    #[error("ideal is the whole ring")]
    UnitIdeal,
    #[error("not enough normal terms: wanted {wanted}, found {found}")]
    NotEnoughNormalTerms { wanted: usize, found: usize },
    #[error("message term {0} is not a published normal term")]
    UnsupportedMessageTerm(String),
    #[error("degree bound must be at least 1")]
    InvalidBound,
    #[error("{0}")]
    Invalid(String),
}
