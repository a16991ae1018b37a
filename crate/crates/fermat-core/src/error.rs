//! Error types, one enum per subject area.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("vector or lattice is not contained in the given ambient lattice")]
    NotSublattice,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CyclotomicError {
    #[error("conductor mismatch: {left} vs {right}")]
    ConductorMismatch { left: u64, right: u64 },
    #[error("division by zero in a cyclotomic ring")]
    DivisionByZero,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CmError {
    #[error("modulus must be at least 3, got {modulus}")]
    InvalidModulus { modulus: u64 },
    #[error("modulus {modulus} is divisible by 4; only odd and twice-odd moduli are supported")]
    UnsupportedModulus { modulus: u64 },
    #[error("operation requires an odd modulus, got {modulus}")]
    OddModulusRequired { modulus: u64 },
    #[error("set is not a CM type modulo {modulus}")]
    NotACmType { modulus: u64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MtError {
    #[error("ledger does not belong to this projection matrix: {0}")]
    LedgerMismatch(String),
    #[error("unknown factor label '{0}'")]
    UnknownFactor(String),
    #[error(transparent)]
    Cm(#[from] CmError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HodgeError {
    #[error("codimension {codim} out of range 0..={genus}")]
    CodimOutOfRange { codim: usize, genus: usize },
    #[error("genus {genus} exceeds the census cap {max} (2^genus subsets per codimension)")]
    GenusTooLarge { genus: usize, max: usize },
    #[error("monomial index {index} outside 1..={genus}")]
    MonomialIndexOutOfRange { index: u16, genus: usize },
    #[error("monomial index {index} repeated")]
    DuplicateMonomialIndex { index: u16 },
    #[error(transparent)]
    Cm(#[from] CmError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MomentError {
    #[error("maximum moment {requested} exceeds the configured bound {bound}")]
    MomentBoundExceeded { requested: usize, bound: usize },
    #[error("matrix is not a symplectic signed permutation: {0}")]
    NotSymplectic(String),
    #[error("matrix does not normalize the embedded torus: {0}")]
    NotNormalizing(String),
    #[error("dimension mismatch: representative is {left}x{left}, torus embeds in dimension {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("no power of the representative up to {cap} lands in the torus")]
    ComponentGroupNotClosed { cap: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrobeniusError {
    #[error("prime {p} is not coprime to 2m = {two_m}")]
    BadPrime { p: u64, two_m: u64 },
    #[error("required prime power {q} exceeds the configured bound {bound}")]
    BoundExceeded { q: u128, bound: u64 },
    #[error("prime {p} does not satisfy the congruence {p} = 1 mod {m}")]
    CongruenceViolation { p: u64, m: u64 },
    #[error("{q} is not an odd prime power with exponent at most {max_exp}")]
    NotAPrimePower { q: u64, max_exp: u32 },
    #[error("eigenvalue orbit needs an extension of degree {degree}, beyond the implemented cap {max}")]
    OrbitDegreeTooLarge { degree: u32, max: u32 },
    #[error("character index {index} outside 1..{m}")]
    BadCharacterIndex { index: u64, m: u64 },
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Cm(#[from] CmError),
}
