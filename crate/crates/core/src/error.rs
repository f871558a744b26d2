use thiserror::Error;

/// Errors raised by state validation, invariant evaluation and the decision procedures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |M - M^dagger| = {residual:e}")]
    NotHermitian { residual: f64 },

    #[error("trace is not 1: got {trace} (|tr - 1| = {residual:e})")]
    TraceNotOne { trace: f64, residual: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Bloch vector lies outside the unit ball: norm {norm}")]
    OutsideBall { norm: f64 },

    #[error("coordinate vector has length {found}, basis expects {expected}")]
    BadCoordinateLength { expected: usize, found: usize },

    #[error("matrix is not in SU(2): residual {residual:e}")]
    NotSpecialUnitary { residual: f64 },

    #[error("matrix is not in SO(3): residual {residual:e}")]
    NotRotation { residual: f64 },

    #[error("mixing weight {0} is outside [0, 1]")]
    WeightOutOfRange(f64),

    #[error("multi-state must contain at least one state")]
    EmptyMultiState,

    #[error("label sequence must not be empty")]
    EmptySequence,

    #[error("label {label} is out of range for a multi-state of {count} states")]
    BadLabel { label: usize, count: usize },

    #[error("overlap matrix is not symmetric: residual {residual:e}")]
    AsymmetricInput { residual: f64 },

    #[error("overlap entry ({row}, {col}) = {value} is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: f64 },

    #[error("rank test and commutator test disagree (rank {rank}, max commutator norm {commutator:e})")]
    InternalDisagreement { rank: usize, commutator: f64 },

    #[error("multi-state has imaginarity (Gram rank {rank}); no real basis exists")]
    HasImaginarity { rank: usize },

    #[error("real-basis certificate residual {0:e} exceeds 1e-9")]
    CertificateResidual(f64),

    #[error("not a permutation of {len} positions: {perm:?}")]
    BadPermutation { perm: Vec<usize>, len: usize },

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("Gram matrix rank {rank} exceeds 3; not a qubit multi-state")]
    RankTooHigh { rank: usize },

    #[error("candidate enumeration ({candidate}) and grid search ({grid}) disagree")]
    MethodDisagreement { candidate: f64, grid: f64 },

    #[error("wrong order: expected one of {expected:?}, found {found}")]
    WrongOrder { expected: Vec<usize>, found: usize },

    #[error("overlap table is not realizable by qubits: {0}")]
    NotQubitRealizable(String),

    #[error("quadratic certificate failed: {0}")]
    CertificateFailed(String),

    #[error("instrument has {instrument} outcomes, measurement has {measurement}")]
    LabelCountMismatch { instrument: usize, measurement: usize },

    #[error("instrument is not trace preserving: residual {residual:e}")]
    InvalidInstrument { residual: f64 },

    #[error("measurement is invalid: {0}")]
    InvalidMeasurement(String),

    #[error("best real reference success probability {0:e} is too small to divide by")]
    ZeroDenominator(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
