use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("GF({p}^{m}) exceeds the 2^20 element limit")]
    FieldTooLarge { p: u32, m: u32 },
    #[error("no Conway polynomial shipped for GF({p}^{m})")]
    MissingModulus { p: u32, m: u32 },
    #[error("modulus of GF({p}^{m}) is malformed: {reason}")]
    BadModulus { p: u32, m: u32, reason: &'static str },
    #[error("modulus of GF({p}^{m}) is reducible over GF({p})")]
    ReducibleModulus { p: u32, m: u32 },
    #[error("modulus of GF({p}^{m}) is irreducible but x is not primitive")]
    NonPrimitiveModulus { p: u32, m: u32 },
    #[error("GF({p}^{m}) has no subfield of index 2")]
    NoSubfield { p: u32, m: u32 },
    #[error("squareness is trivial in characteristic 2 and must not drive a condition check")]
    CharacteristicTwo,
    #[error("element encoding {value} is out of range for a field of order {order}")]
    ElementOutOfRange { value: u32, order: u32 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("{what} needs {needed} work units but the budget allows {cap}")]
    Budget { what: &'static str, needed: u64, cap: u64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no valid (alpha, beta) pair exists for q = {q}, r = {r}")]
    NoValidParams { q: u32, r: usize },
    #[error("point index {0} is not on the variety")]
    NotOnVariety(u32),
    #[error("source points span a subspace of rank {rank}, need {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("the primal code is not minimal (hyperplane {witness} fails the span test)")]
    NotMinimal { witness: u32 },
    #[error("requested level {level} is outside 1..={max}")]
    BadLevel { level: usize, max: usize },
    #[error("participant set is not qualified to recover the secret")]
    NotQualified,
    #[error("share values are not the restriction of any codeword")]
    InconsistentShares,
    #[error("participant {index} is out of range 1..={degree}")]
    IndexOutOfRange { index: u32, degree: u32 },
    #[error("malformed permutation: {0}")]
    BadPermutation(String),
}
