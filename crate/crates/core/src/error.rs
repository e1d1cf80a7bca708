use thiserror::Error;

/// Errors surfaced by the algebraic and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid rational `{0}`")]
    InvalidRational(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("invalid ring descriptor: {0}")]
    InvalidRing(String),
    #[error("element does not belong to ring {0}")]
    DescriptorMismatch(String),
    #[error("unbound generator `{0}`")]
    UnboundGenerator(String),
    #[error("expression parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid piecewise-linear map: {0}")]
    InvalidPl(String),
    #[error("invalid permutation: {0}")]
    InvalidPerm(String),
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("{0} is not a normal subgroup")]
    NotNormal(String),
    #[error("budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("index sort mismatch")]
    SortMismatch,
    #[error("coefficient group mismatch")]
    CoeffMismatch,
    #[error("index {0} outside the domain of the acting element")]
    IndexOutOfDomain(String),
    #[error("the identity has a cofinite level set")]
    IdentityLevelSet,
    #[error("set kind mismatch: {0}")]
    KindMismatch(String),
    #[error("product of the acting elements is not the identity")]
    ProductNotIdentity,
    #[error("unsupported ring for identity verification: {0}")]
    UnsupportedRing(String),
    #[error("invalid witness input: {0}")]
    InvalidInput(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
