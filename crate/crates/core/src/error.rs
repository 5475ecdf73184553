use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("irreducible factor of degree >= 3: {0}")]
    UnresolvedFactor(String),
    #[error("series constant term is not 1")]
    NonUnitConstantTerm,
    #[error("invalid quadratic discriminant {0}")]
    InvalidDiscriminant(i64),
    #[error("{0} is not a singular candidate of the operator")]
    NotASingularCandidate(String),
    #[error("irregular singularity at {0}")]
    Irregular(String),
    #[error("indicial factor {0} has roots outside Q and quadratic fields")]
    IrrationalExponent(String),
    #[error("unclassified local pattern: exponents {exponents}, Jordan blocks {blocks:?}")]
    UnclassifiedPattern { exponents: String, blocks: Vec<usize> },
    #[error("operator is not even in t")]
    NotEven,
    #[error("Yukawa coupling is not a rational power product: {0}")]
    NonrationalYukawa(String),
    #[error("P(0,0,0,0) vanishes")]
    VanishingConstantTerm,
    #[error("need at least {needed} terms, got {got}")]
    InsufficientTerms { needed: usize, got: usize },
    #[error("form {0} has no eta-product expansion")]
    NoEtaProduct(String),
    #[error("p = {0} is not an odd prime")]
    EvenPrime(u64),
    #[error("chain broken at step {step}: {detail}")]
    ChainBroken { step: String, detail: String },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
