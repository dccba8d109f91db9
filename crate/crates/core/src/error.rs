use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{value} is not p-integral for p = {p}")]
    NotPIntegral { value: String, p: u64 },

    #[error("index {n} is not invertible modulo {p}; residue mode needs n < p")]
    IndexNotInvertible { n: u64, p: u64 },

    #[error("modulus {p}^{k} does not fit in 63 bits")]
    ModulusTooLarge { p: u64, k: u32 },

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("residues live in different rings: {0}^{1} vs {2}^{3}")]
    RingMismatch(u64, u32, u64, u32),

    #[error("cannot parse composition {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
