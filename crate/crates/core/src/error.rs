use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime power below 2^32")]
    InvalidModulus(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("dimension {0} is not supported (1..=4)")]
    DimensionUnsupported(usize),
    #[error("matrix is not invertible modulo {0}")]
    NonUnit(u64),
    #[error("element order exceeds cap {0}")]
    OrderCapExceeded(u64),
    #[error("group closure exceeds cap of {0} elements")]
    ClosureCapExceeded(usize),
    #[error("lower central series does not reach the trivial group")]
    NotNilpotent,
    #[error("group order {0} is not a power of {1}")]
    NotPGroup(usize, u64),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("group is not powerful")]
    NotPowerful,
    #[error("group order {order} exceeds subgroup enumeration budget {budget}")]
    BudgetExceeded { order: usize, budget: usize },
    #[error("basic commutator basis exceeds size cap {0}")]
    BasisTooLarge(usize),
    #[error("need at least {needed} distinct sample values, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("no catalog entry for family {family:?} with c = {c}")]
    NotInCatalog { family: String, c: u32 },
    #[error("catalog: {0}")]
    Catalog(String),
}

pub type Result<T> = std::result::Result<T, Error>;
