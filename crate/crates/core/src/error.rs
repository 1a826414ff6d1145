use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("time {t} is outside the tabulated range [{start}, {end}]")]
    Range { t: f64, start: f64, end: f64 },

    #[error("interval length is not positive (L = {length}) at t = {t}")]
    DegenerateDomain { t: f64, length: f64 },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("position {x} lies outside the interval [{left}, {right}] at t = {t}")]
    OutsideDomain { x: f64, left: f64, right: f64, t: f64 },

    #[error("inconsistent inputs: {0}")]
    Consistency(String),

    #[error("time step too large at t = {t}: row {row} lost diagonal dominance ({detail}); reduce dt or refine the grid")]
    StepSize { t: f64, row: usize, detail: String },

    #[error("solution diverged (non-finite value) at t = {t}")]
    Divergence { t: f64 },

    #[error("quadrature on [{a}, {b}] did not reach tolerance {tol:e}; achieved error estimate {achieved:e}")]
    Quadrature { a: f64, b: f64, tol: f64, achieved: f64 },

    #[error("drift speed |c| = {c} is not below 2*sqrt(D f'(0)) = {limit}; the drifting critical length is undefined")]
    SupercriticalDrift { c: f64, limit: f64 },

    #[error("shooting bracket failed: {0}")]
    Bracketing(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    Tolerance { iterations: usize, residual: f64 },

    #[error("rate fit failed: {0}")]
    Fit(String),

    #[error("missing dependency: {0}")]
    Dependency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
