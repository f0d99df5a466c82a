use thiserror::Error;

/// Errors raised by the matchers, rankers and planning routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("floor_log2 of zero is undefined")]
    ZeroArgument,

    #[error("element out of range: {element} not in 1..={n}")]
    ElementOutOfRange { element: usize, n: usize },

    #[error("duplicate element {0} in subset")]
    DuplicateElement(usize),

    #[error("rank out of range: must be below C({n}, {w})")]
    RankOutOfRange { n: usize, w: usize },

    #[error("weight {w} exceeds length {n}")]
    WeightTooLarge { n: usize, w: usize },

    #[error("wrong input length: expected {expected}, got {actual}")]
    WrongLength { expected: usize, actual: usize },

    #[error("composition mismatch: expected {expected:?}, got {actual:?}")]
    CompositionMismatch {
        expected: Vec<usize>,
        actual: Vec<usize>,
    },

    #[error("symbol index {symbol} outside alphabet of size {m}")]
    SymbolOutOfRange { symbol: usize, m: usize },

    #[error("sequence is a valid composition but lies outside the 2^{k}-word codebook")]
    NotInCodebook { k: u64 },

    #[error("invalid permutation of 0..{m}: {ordering:?}")]
    InvalidPermutation { m: usize, ordering: Vec<usize> },

    #[error("{m} amplitudes is too many for exhaustive ordering search (max {max})")]
    TooManyAmplitudes { m: usize, max: usize },

    #[error("alphabet size {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("empty composition")]
    EmptyComposition,

    #[error("invalid probability mass function: {0}")]
    InvalidPmf(String),

    #[error("invalid bit string: {0}")]
    InvalidBits(String),
}

pub type Result<T> = std::result::Result<T, Error>;
