use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("missing algebra action on module")]
    MissingAction,
    #[error("subgroup is not stable under the algebra action")]
    ActionNotPreserved,
    #[error("not a commutative monoid with zero: {0}")]
    NotAMonoid(String),
    #[error("addition facts collapse elements {0} and {1} in the universal ring")]
    NotEmbeddable(String, String),
    #[error("map is not multiplicative: {0}")]
    NotMultiplicative(String),
    #[error("no ring extension: {0}")]
    NoRingExtension(String),
    #[error("enumeration bound exceeded: {size} > {bound}")]
    BoundExceeded { size: usize, bound: usize },
    #[error("congruence is not prime")]
    NotPrime,
    #[error("element is not a root of the polynomial")]
    NotARoot,
    #[error("search space {size} exceeds cap {cap}")]
    CapTooLarge { size: u128, cap: u128 },
    #[error("morphism is not injective: {0}")]
    NotInjective(String),
    #[error("sesquiad is not simple")]
    NotSimple,
    #[error("point map does not commute with the monoid action: {0}")]
    NotEquivariant(String),
    #[error("point map admits no linear extension")]
    NoLinearExtension,
    #[error("not a submodule: {0}")]
    NotASubmodule(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("modules live over different sesquiads")]
    BaseMismatch,
    #[error("map is not bilinear: {0}")]
    NotBilinear(String),
    #[error("morphisms are not composable: {0}")]
    NotComposable(String),
    #[error("sheaf is not flabby: {0}")]
    NotFlabby(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
