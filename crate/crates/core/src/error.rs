use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {p}^{n} does not fit the 2^31 word bound")]
    ModulusTooLarge { p: u64, n: u32 },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("map is not well defined: {0}")]
    IllDefined(String),
    #[error("maps are not composable at position {0}")]
    NotComposable(usize),
    #[error("enumeration guard exceeded: {needed} elements requested, cap is {cap}")]
    Guard { needed: u128, cap: u128 },
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not reduced: {0}")]
    NotReduced(String),
    #[error("truncation overflow: product of degree {degree} exceeds bound {bound}")]
    Truncation { degree: u32, bound: u32 },
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("consistency check failed: {0}")]
    Check(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Default enumeration cap, overridable through `WITTKIT_GUARD`.
pub const DEFAULT_CAP: u64 = 1 << 20;

pub fn enumeration_cap() -> u64 {
    std::env::var("WITTKIT_GUARD")
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .unwrap_or(DEFAULT_CAP)
}

pub(crate) fn guard(needed: u128, cap: u64) -> Result<()> {
    if needed > cap as u128 {
        Err(Error::Guard { needed, cap: cap as u128 })
    } else {
        Ok(())
    }
}
