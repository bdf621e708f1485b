use thiserror::Error;

use crate::bits::BitString;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown register `{0}`")]
    UnknownRegister(String),

    #[error("duplicate register name `{0}`")]
    DuplicateRegister(String),

    #[error("register `{0}` must be at least 1 bit wide")]
    EmptyRegister(String),

    #[error("layout needs {requested} bits, configured maximum is {max}")]
    TooManyBits { requested: usize, max: usize },

    #[error("dimension mismatch: state is {state}, operator is {operator}")]
    DimensionMismatch { state: usize, operator: usize },

    #[error("bit position {position} out of range for width {width}")]
    BitPositionOutOfRange { position: usize, width: usize },

    #[error("bit-string has width {got}, expected {expected}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("invalid bit-string `{0}`")]
    InvalidBitString(String),

    #[error("state has zero norm and cannot be normalized")]
    ZeroNorm,

    #[error("amplitude vector length {got} is not the layout dimension {expected}")]
    BadAmplitudeCount { expected: usize, got: usize },

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("matrix is not unitary (max |U\u{2020}U - I| = {0:.3e})")]
    NotUnitary(f64),

    #[error("bit count must be even for halving, got {0}")]
    OddBits(usize),

    #[error("candidate set is empty")]
    ZeroCandidates,

    #[error("ball {0} is not in the candidate set")]
    BallNotInCandidates(BitString),

    #[error("selected outcome has zero weight")]
    ZeroWeightOutcome,

    #[error("separation unitary is not a tensor product of local unitaries")]
    NonLocalUnitary,

    #[error("initial state is not maximally entangled")]
    NotMaximallyEntangled,

    #[error("life-compatible set admits no completion for any initial value")]
    UnsatisfiableUniverse,

    #[error("{0} must be positive")]
    NonPositiveInput(&'static str),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// Process exit code for the CLI: 1 usage, 2 domain.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidConfig(_) | Error::InvalidBitString(_) => 1,
            _ => 2,
        }
    }
}
