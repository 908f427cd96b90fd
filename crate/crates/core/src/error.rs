use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("polynomial is not irreducible over the base field")]
    Reducible,
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("field has {0} elements, above the enumeration cap of {1}")]
    FieldTooLarge(u128, u128),
    #[error("cannot embed a field of degree {source_degree} into one of degree {target_degree}")]
    NotEmbeddable {
        source_degree: usize,
        target_degree: usize,
    },
    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("infinite valuation (zero element)")]
    InfiniteValuation,
    #[error("element is not integral at the prime")]
    NotIntegral,
    #[error("needs an integral model first: coefficient {index} is not integral")]
    NeedsIntegralModel { index: usize },
    #[error("reduction is not a Drinfeld module (all positive-degree coefficients vanish)")]
    DegenerateReduction,
    #[error("invalid Drinfeld module: {0}")]
    InvalidModule(String),
    #[error("rank must be at least {min}, got {got}")]
    RankTooSmall { min: usize, got: usize },
    #[error("base field has generic A-characteristic")]
    GenericCharacteristic,
    #[error("insufficient precision")]
    InsufficientPrecision,
    #[error("Hensel lifting inapplicable: {0}")]
    HenselInapplicable(String),
    #[error("need at least two points with finite ordinate at the extremes")]
    TooFewPoints,
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("singular matrix")]
    Singular,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("prime {0} is excluded: {1}")]
    BadPrime(String, String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
