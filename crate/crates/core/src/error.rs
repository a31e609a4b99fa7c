use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(i64),
    #[error("modulus {m} exceeds the supported maximum {max}")]
    ModulusTooLarge { m: u32, max: u32 },
    #[error("weight list is empty")]
    EmptyWeights,
    #[error("expected {expected} weights, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("at least {min} weights required, got {found}")]
    TooFewWeights { min: usize, found: usize },
    #[error("modulus mismatch: set lives in Z_{set}, instance uses Z_{instance}")]
    ModulusMismatch { set: u32, instance: u32 },
    #[error("residue {residue} out of range for Z_{m}")]
    ResidueOutOfRange { residue: i64, m: u32 },
    #[error("duplicate residue {0}")]
    DuplicateResidue(u32),
    #[error("{q} does not divide {m}")]
    NotDivisor { q: u32, m: u32 },
    #[error("no complement-balanced set exists for {0}")]
    NoBalancedSet(String),
    #[error("m = {m} exceeds the search bound {bound}")]
    BoundExceeded { m: u32, bound: u32 },
    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),
}
