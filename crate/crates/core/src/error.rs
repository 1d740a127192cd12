use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty Hilbert space")]
    EmptyHilbertSpace,

    #[error("invalid mode system: {0}")]
    InvalidModeSystem(String),

    #[error("mode index {index} out of range for {modes} modes")]
    ModeOutOfRange { index: usize, modes: usize },

    #[error("occupancy pattern {0:?} is not in the basis")]
    NotInBasis(Vec<u32>),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("unknown subsystem `{0}`")]
    UnknownSubsystem(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("operator is not Hermitian (residual {0:.3e})")]
    NotHermitian(f64),

    #[error("operator is not diagonal in the occupation basis (off-diagonal norm {0:.3e})")]
    NotDiagonal(f64),

    #[error("state is not normalized (norm {0:.15})")]
    NotNormalized(f64),

    #[error("trace is {0:.15}, expected 1")]
    InvalidTrace(f64),

    #[error("not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("purity {0:.15} exceeds 1")]
    PurityAboveOne(f64),

    #[error("zero-probability conditioning (probability {0:.3e})")]
    ZeroProbability(f64),

    #[error("insufficient cutoff {cutoff}: Poisson tail {tail:.3e} exceeds {limit:.0e}")]
    InsufficientCutoff { cutoff: u32, tail: f64, limit: f64 },

    #[error("invalid probabilities: {0}")]
    InvalidProbabilities(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Hamiltonian does not conserve the weighted number (commutator norm {0:.3e})")]
    NotConserving(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
