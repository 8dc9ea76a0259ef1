use thiserror::Error;

/// Errors raised by field construction, geometry routines and verifiers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    CompositeCharacteristic(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("q = {q} exceeds the supported capacity (q <= {max})")]
    CapacityExceeded { q: u64, max: u32 },
    #[error("modulus {coeffs:?} is not a monic polynomial of degree {degree}")]
    MalformedModulus { coeffs: Vec<u8>, degree: usize },
    #[error("modulus {0:?} is reducible")]
    ReducibleModulus(Vec<u8>),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element index {index} out of range for a field of order {order}")]
    ElementOutOfRange { index: u32, order: u32 },
    #[error("{0} is not a nonzero element of the base field")]
    InvalidNormValue(u32),
    #[error("cover parameters a and b must differ")]
    EqualPoles,
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("malformed plane key: {0}")]
    MalformedKey(String),
    #[error("points span a subspace of rank {0}, expected 3")]
    RankDeficient(usize),
    #[error("spread partition violated: {0}")]
    PartitionViolation(String),
    #[error("inconsistent point tally: {0}")]
    InconsistentTally(String),
    #[error("switching property violated: {0}")]
    SwitchingViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
