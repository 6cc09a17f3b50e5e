use thiserror::Error;

/// Failures raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("expected a {expected}D field, got {got}D")]
    DimensionMismatch { expected: usize, got: usize },

    /// The annulus of shell `shell` reaches past the grid's Nyquist frequency.
    #[error("shell {shell} needs |xi| up to {needed:.3} but the grid Nyquist frequency is {nyquist:.3}")]
    UnresolvedShell { shell: i32, needed: f64, nyquist: f64 },

    /// Characteristics are about to cross: `1 + t * min u0'` is below the required margin.
    #[error("characteristics too close to crossing: monotonicity margin {margin:.4} < {required}")]
    ShockTooClose { margin: f64, required: f64 },

    #[error("flow-map inversion failed at x = {x}: no sign change on the bracket")]
    NewtonDivergence { x: f64 },

    #[error("time step {dt:.3e} exceeds the stability limit {limit:.3e}")]
    CflViolation { dt: f64, limit: f64 },

    #[error("initial velocity is not divergence-free (max |div u| = {divergence:.3e})")]
    NonDivergenceFree { divergence: f64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
