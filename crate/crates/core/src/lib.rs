//! Reaction–diffusion on an interval with moving boundaries.
//!
//! The interval is `A(t) < x < A(t) + L(t)` with homogeneous Dirichlet data.
//! Solutions are computed on the fixed reference interval `[0, L₀]`, and
//! explicit sub- and supersolution envelopes, persistence/extinction
//! verdicts and steady states are built on top of the same motion ledger.
//!
//! Data-parallel entry points ([`solver::run_batch`], [`steady::scan`],
//! [`envelope::envelope_series`]) take an [`Exec`] policy; without the
//! `parallel` feature both policies run sequentially.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classifier;
pub mod diagnostics;
pub mod envelope;
pub mod error;
pub mod exec;
pub mod grid;
pub mod motion;
pub mod quadrature;
pub mod reaction;
pub mod solver;
pub mod steady;
pub mod transform;
pub mod tridiag;

pub use classifier::{classify, classify_drifting, classify_linear, classify_nonlinear, Outcome, Verdict};
pub use diagnostics::{fit_rate, fourier_coefficient, ObservableSeries};
pub use envelope::{persistence_floor, theorem_bounds, EnvelopeBounds, Sandwich};
pub use error::{Error, Result};
pub use exec::Exec;
pub use grid::{Field, Grid};
pub use motion::{CriticalLength, DomainMotion, IntegralLedger, MotionState};
pub use reaction::ReactionTerm;
pub use solver::{run, run_batch, InitialProfile, Scenario, Trajectory};
pub use steady::{solve_steady, SteadyOutcome, SteadyState};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
