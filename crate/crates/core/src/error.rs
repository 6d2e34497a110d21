use num_bigint::{BigInt, BigUint};
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The caller supplied something outside the domain of the operation.
    InvalidInput,
    /// A configured capacity (subset count, coefficient memory, oracle size) was exceeded.
    Capacity,
    /// An internal consistency check failed. Never expected on valid input.
    Verification,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("EmptyTuple: at least one entry is required")]
    EmptyTuple,
    #[error("EntryBelowTwo: entry {index} is {value}, every entry must be at least 2")]
    EntryBelowTwo { index: usize, value: BigInt },
    #[error("NotIncreasing: entry {index} ({value}) does not exceed its predecessor")]
    NotIncreasing { index: usize, value: BigUint },
    #[error("NotCoprime({a},{b}): entries {i} and {j} share the factor {gcd}")]
    NotCoprime {
        i: usize,
        j: usize,
        a: BigUint,
        b: BigUint,
        gcd: BigUint,
    },
    #[error("TupleTooLarge: k = {k} exceeds the subset cap {cap}")]
    TupleTooLarge { k: usize, cap: usize },
    #[error("DegreeCapExceeded: degree {degree} needs more than {cap} coefficients")]
    DegreeCapExceeded { degree: BigUint, cap: usize },
    #[error("OverflowInFastPath: 64-bit coefficient overflow with promotion disabled")]
    OverflowInFastPath,
    #[error("NonzeroRemainder: polynomial division is not exact")]
    NonzeroRemainder,
    #[error("NonInvertibleLeading: divisor leading coefficient {0} is not a unit")]
    NonInvertibleLeading(BigInt),
    #[error("OracleCapExceeded: m = {m} exceeds the oracle cap {cap}")]
    OracleCapExceeded { m: BigUint, cap: u64 },
    #[error("CongruenceNotSatisfied: entry {index} ({q}) is {residue} mod {modulus}")]
    CongruenceNotSatisfied {
        index: usize,
        q: BigUint,
        residue: BigUint,
        modulus: BigUint,
    },
    #[error("IdentityMismatch: evaluation routes disagree ({direct} vs {product})")]
    IdentityMismatch { direct: f64, product: f64 },
    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),
    #[error("CapExceeded: {0}")]
    CapExceeded(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::EmptyTuple
            | Error::EntryBelowTwo { .. }
            | Error::NotIncreasing { .. }
            | Error::NotCoprime { .. }
            | Error::NonInvertibleLeading(_)
            | Error::InvalidParameter(_) => ErrorClass::InvalidInput,
            Error::TupleTooLarge { .. }
            | Error::DegreeCapExceeded { .. }
            | Error::OverflowInFastPath
            | Error::OracleCapExceeded { .. }
            | Error::CapExceeded(_) => ErrorClass::Capacity,
            Error::NonzeroRemainder
            | Error::IdentityMismatch { .. }
            | Error::CongruenceNotSatisfied { .. } => ErrorClass::Verification,
        }
    }
}
