use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("spectrum is not Hermitian: imaginary residue {residue:.3e} (relative)")]
    NonHermitianSpectrum { residue: f64 },

    #[error("classical Hölder norm needs a non-integer order, got {0}")]
    IntegerOrder(f64),

    #[error("input must be strictly positive: {0}")]
    NonPositiveInput(String),

    #[error("field contains non-finite values ({0})")]
    NonFiniteField(&'static str),

    #[error("velocity provider cannot serve time {0}")]
    VelocityUnavailable(f64),

    #[error("Picard iteration diverged at t = {time}: residuals {residuals:?}")]
    PicardDivergence { time: f64, residuals: Vec<f64> },

    #[error("blowup suspected at t = {time}: Y-norm {y_norm:.6e} exceeds bound {bound:.6e}")]
    BlowupSuspected { time: f64, y_norm: f64, bound: f64 },

    #[error("trace too short: need at least {needed} stored times, got {got}")]
    InsufficientTrace { needed: usize, got: usize },

    #[error("inequality check needs a nonzero field")]
    ZeroField,

    #[error("spectrum escapes the annulus of block {j}: leaked energy fraction {fraction:.3e}")]
    SpectrumLeak { j: i32, fraction: f64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("missing report: {0}")]
    MissingReport(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed snapshot: {0}")]
    MalformedSnapshot(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}
