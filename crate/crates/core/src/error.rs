use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial is not symmetric in root block {block}")]
    NotSymmetric { block: usize },
    #[error("series has nonzero constant term")]
    NonzeroConstantTerm,
    #[error("multiplicative series must have constant term 1")]
    ConstantTermNotOne,
    #[error("degree-0 part must equal 1 to invert")]
    UnitPartNotOne,
    #[error("unknown bundle `{0}`")]
    UnknownBundle(String),
    #[error("malformed virtual bundle: {0}")]
    MalformedVirtualBundle(String),
    #[error("degree {degree} exceeds truncation {truncation}")]
    Truncated { degree: u32, truncation: u32 },
    #[error("truncation {truncation} is below rank {rank}")]
    TruncationTooLow { rank: usize, truncation: u32 },
    #[error("invalid setup: {0}")]
    InvalidSetup(String),
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("Euler characteristic {0} is not an integer")]
    NonIntegralResult(String),
    #[error("symmetry sign needs L_i = L_j")]
    UnequalBundles,
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    #[error("expected {expected} line bundles, got {got}")]
    WrongBundleCount { expected: usize, got: usize },
    #[error("automorphism chain does not stabilize: {0}")]
    ChainNotStabilized(String),
    #[error("translation {0} is not a homomorphism")]
    NonHomomorphicTranslation(usize),
    #[error("sign data invalid: {0}")]
    InvalidSign(String),
    #[error("matrix does not define a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub type Result<T> = std::result::Result<T, Error>;
