use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Modulus exponent outside the supported `1..=64` window.
    #[error("modulus exponent {0} outside the supported range 1..=64")]
    ModulusRange(u32),

    /// Two residues with different moduli were combined.
    #[error("mismatched moduli: 2^{0} vs 2^{1}")]
    ModulusMismatch(u32, u32),

    /// Inversion of an even residue, which is not a unit in `Z/2^k`.
    #[error("{0} is even, hence not invertible modulo a power of two")]
    NotAUnit(u64),

    /// The 2-adic valuation of zero is not defined.
    #[error("2-adic valuation of zero is undefined")]
    ValuationOfZero,

    /// Double factorial of an even or out-of-domain argument.
    #[error("double factorial argument must be odd and >= -1, got {0}")]
    EvenDoubleFactorial(i128),

    /// An index exceeded a configured oracle bound.
    #[error("index {index} exceeds the configured bound {bound}")]
    IndexOutOfRange { index: u64, bound: u64 },

    /// A rank too large for direct (unclamped) evaluation.
    #[error("rank {0} exceeds the direct-evaluation limit {1}")]
    RankOutOfRange(u64, u64),

    /// A caller-supplied parameter violated an operation precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A proved invariant failed at runtime; always an implementation bug.
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
