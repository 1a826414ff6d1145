//! Crank–Nicolson integration of the problem pulled back to `(0, L₀)`:
//!
//! ```text
//! u_t = D (L₀/L)² u_ξξ + ((Ȧ L₀ + ξ L̇)/L) u_ξ + f(u),   u(0,t) = u(L₀,t) = 0
//! ```
//!
//! Coefficients are frozen at the half step. Advection is centred and solved
//! in the same tridiagonal system as diffusion. A linear reaction is folded
//! into that system; nonlinear reactions are explicit, with a predictor solve
//! followed by a corrector that averages `f` at both ends of the step. Both
//! solves share one factorization.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::grid::{Field, Grid};
use crate::motion::{ledger_series, CriticalLength, DomainMotion, IntegralLedger};
use crate::quadrature::QuadratureConfig;
use crate::reaction::ReactionTerm;
use crate::tridiag::Tridiagonal;

/// Iterates below this are clipped to zero and counted.
pub const NEGATIVITY_TOL: f64 = -1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum InitialProfile {
    /// `amplitude · sin(πξ/L₀)`
    SineMode { amplitude: f64 },
    /// Smooth compactly supported bump `height · exp(1 − 1/(1 − r²))`,
    /// `r = (ξ − center)/(width/2)`, in reference coordinates.
    Bump { center: f64, width: f64, height: f64 },
    /// `(ξ, u)` samples, linearly interpolated; must cover `[0, L₀]`.
    Tabulated(Vec<(f64, f64)>),
}

impl Default for InitialProfile {
    fn default() -> Self {
        Self::SineMode { amplitude: 1.0 }
    }
}

impl InitialProfile {
    pub fn sample(&self, grid: &Grid) -> Result<Field> {
        let l0 = grid.l0;
        let field = match self {
            Self::SineMode { amplitude } => {
                let mode = grid.principal_mode();
                Field::new(0.0, *grid, mode.into_iter().map(|s| amplitude * s).collect())?
            }
            Self::Bump { center, width, height } => {
                let half = 0.5 * width;
                Field::from_fn(0.0, *grid, |xi| {
                    let r = (xi - center) / half;
                    if r.abs() < 1.0 {
                        height * (1.0 - 1.0 / (1.0 - r * r)).exp()
                    } else {
                        0.0
                    }
                })
            }
            Self::Tabulated(samples) => {
                if samples.len() < 2 {
                    return Err(Error::Argument("tabulated initial data needs at least two samples".into()));
                }
                let (first, last) = (samples[0].0, samples[samples.len() - 1].0);
                if first > 0.0 || last < l0 * (1.0 - 1e-12) {
                    return Err(Error::Argument(format!(
                        "tabulated initial data covers [{first}, {last}] but the interval is [0, {l0}]"
                    )));
                }
                let mut values = Vec::with_capacity(grid.nodes());
                for xi in grid.xis() {
                    let i = samples.partition_point(|s| s.0 <= xi).clamp(1, samples.len() - 1);
                    let (x0, y0) = samples[i - 1];
                    let (x1, y1) = samples[i];
                    let w = if x1 > x0 { ((xi - x0) / (x1 - x0)).clamp(0.0, 1.0) } else { 0.0 };
                    values.push(y0 + w * (y1 - y0));
                }
                if values[0].abs() > 1e-12 || values[grid.cells].abs() > 1e-12 {
                    return Err(Error::Argument("initial data must vanish at both ends".into()));
                }
                values[0] = 0.0;
                values[grid.cells] = 0.0;
                Field::new(0.0, *grid, values)?
            }
        };
        if let Some(v) = field.values.iter().find(|v| !(**v >= 0.0)) {
            return Err(Error::Argument(format!("initial data must be non-negative, found {v}")));
        }
        Ok(field)
    }
}

/// A full problem instance.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub motion: DomainMotion,
    pub reaction: ReactionTerm,
    pub d: f64,
    pub initial: InitialProfile,
    pub horizon: f64,
    /// Number of grid cells (even, ≥ 16).
    pub cells: usize,
    pub dt: f64,
    /// Number of output intervals; snapshots are taken at `horizon · i / outputs`.
    pub outputs: usize,
    pub quadrature: QuadratureConfig,
}

pub const DEFAULT_OUTPUTS: usize = 200;

impl Scenario {
    pub fn new(motion: DomainMotion, reaction: ReactionTerm, d: f64, horizon: f64) -> Self {
        Self {
            motion,
            reaction,
            d,
            initial: InitialProfile::default(),
            horizon,
            cells: 256,
            dt: 1e-3,
            outputs: DEFAULT_OUTPUTS,
            quadrature: QuadratureConfig::default(),
        }
    }

    pub fn with_grid(mut self, cells: usize, dt: f64) -> Self {
        self.cells = cells;
        self.dt = dt;
        self
    }

    pub fn with_initial(mut self, initial: InitialProfile) -> Self {
        self.initial = initial;
        self
    }

    pub fn with_outputs(mut self, outputs: usize) -> Self {
        self.outputs = outputs;
        self
    }

    /// Reference length `L₀ = L(0)`.
    pub fn l0(&self) -> Result<f64> {
        Ok(self.motion.eval(0.0)?.l)
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.cells, self.l0()?)
    }

    /// Critical length for this diffusivity and slope, using the motion's
    /// drift speed when it is subcritical. For supercritical drift the
    /// stationary value is returned; it only enters diagnostic integrals.
    pub fn critical_length(&self) -> Result<CriticalLength> {
        CriticalLength::drifting(self.d, self.reaction.slope, self.motion.drift_speed())
            .or_else(|_| CriticalLength::new(self.d, self.reaction.slope))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d > 0.0 && self.d.is_finite()) {
            return Err(Error::Argument(format!("diffusivity must be positive, got {}", self.d)));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::Argument(format!("horizon must be positive, got {}", self.horizon)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Argument(format!("time step must be positive, got {}", self.dt)));
        }
        if self.outputs == 0 {
            return Err(Error::Argument("at least one output interval is required".into()));
        }
        self.motion.validate_on(self.horizon)?;
        self.grid()?;
        self.initial.sample(&self.grid()?)?;
        Ok(())
    }

    /// Output times and the number of steps between consecutive outputs.
    /// The step is shrunk so that outputs fall on step boundaries.
    pub fn schedule(&self) -> (Vec<f64>, usize, f64) {
        let interval = self.horizon / self.outputs as f64;
        let per_output = ((interval / self.dt) - 1e-9).ceil().max(1.0) as usize;
        let dt = interval / per_output as f64;
        let times = (0..=self.outputs).map(|i| self.horizon * i as f64 / self.outputs as f64).collect();
        (times, per_output, dt)
    }
}

/// Reusable Crank–Nicolson stepper for one scenario.
#[derive(Debug, Clone)]
pub struct Stepper {
    grid: Grid,
    d: f64,
    reaction: ReactionTerm,
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    /// explicit operator bands: (I + dt/2 A)
    e_lower: Vec<f64>,
    e_diag: Vec<f64>,
    e_upper: Vec<f64>,
    lu: Option<Tridiagonal>,
    base: Vec<f64>,
    work: Vec<f64>,
    react_now: Vec<f64>,
    clipped: usize,
}

impl Stepper {
    pub fn new(grid: Grid, d: f64, reaction: ReactionTerm) -> Self {
        let n = grid.cells - 1;
        Self {
            grid,
            d,
            reaction,
            lower: vec![0.0; n],
            diag: vec![0.0; n],
            upper: vec![0.0; n],
            e_lower: vec![0.0; n],
            e_diag: vec![0.0; n],
            e_upper: vec![0.0; n],
            lu: None,
            base: vec![0.0; n],
            work: vec![0.0; n],
            react_now: vec![0.0; n],
            clipped: 0,
        }
    }

    /// Number of entries clipped below [`NEGATIVITY_TOL`] so far.
    pub fn clipped(&self) -> usize {
        self.clipped
    }

    fn assemble(&mut self, motion: &DomainMotion, t: f64, dt: f64) -> Result<()> {
        let s = motion.eval(t + 0.5 * dt)?;
        let h = self.grid.spacing();
        let l0 = self.grid.l0;
        let kappa = self.d * (l0 / s.l).powi(2) / (h * h);
        let implicit_slope = if self.reaction.is_linear() { self.reaction.slope } else { 0.0 };
        let half = 0.5 * dt;
        for r in 0..self.diag.len() {
            let xi = self.grid.xi(r + 1);
            let v = (s.a_dot * l0 + xi * s.l_dot) / s.l / (2.0 * h);
            let (west, east, centre) = (kappa - v, kappa + v, -2.0 * kappa + implicit_slope);
            self.lower[r] = -half * west;
            self.upper[r] = -half * east;
            self.diag[r] = 1.0 - half * centre;
            self.e_lower[r] = half * west;
            self.e_upper[r] = half * east;
            self.e_diag[r] = 1.0 + half * centre;
            let off = self.lower[r].abs() + self.upper[r].abs();
            if self.diag[r].abs() < off * (1.0 - 1e-14) {
                return Err(Error::StepSize {
                    t,
                    row: r + 1,
                    detail: format!("|diag| = {:.6e} < |off-diagonal| = {:.6e}", self.diag[r].abs(), off),
                });
            }
        }
        match &mut self.lu {
            Some(lu) => lu.refactor(&self.lower, &self.diag, &self.upper)?,
            None => self.lu = Some(Tridiagonal::factor(&self.lower, &self.diag, &self.upper)?),
        }
        Ok(())
    }

    /// Advance `state` by `dt`.
    pub fn step(&mut self, motion: &DomainMotion, state: &Field, dt: f64) -> Result<Field> {
        if state.grid != self.grid {
            return Err(Error::Consistency("field and stepper grids differ".into()));
        }
        let t = state.t;
        self.assemble(motion, t, dt)?;
        let u = &state.values;
        let n = self.diag.len();
        for r in 0..n {
            let j = r + 1;
            self.base[r] = self.e_lower[r] * u[j - 1] + self.e_diag[r] * u[j] + self.e_upper[r] * u[j + 1];
        }
        let lu = self.lu.as_ref().expect("assembled above");
        if self.reaction.is_linear() {
            self.work.copy_from_slice(&self.base);
            lu.solve_in_place(&mut self.work);
        } else {
            for r in 0..n {
                self.react_now[r] = self.reaction.rate(u[r + 1]);
                self.work[r] = self.base[r] + dt * self.react_now[r];
            }
            lu.solve_in_place(&mut self.work);
            for r in 0..n {
                let predicted = self.reaction.rate(self.work[r]);
                self.work[r] = self.base[r] + 0.5 * dt * (self.react_now[r] + predicted);
            }
            lu.solve_in_place(&mut self.work);
        }
        let mut values = vec![0.0; self.grid.nodes()];
        for r in 0..n {
            let mut v = self.work[r];
            if !v.is_finite() {
                return Err(Error::Divergence { t: t + dt });
            }
            if v < NEGATIVITY_TOL {
                self.clipped += 1;
                v = 0.0;
            }
            values[r + 1] = v;
        }
        Ok(Field { t: t + dt, grid: self.grid, values })
    }
}

/// Advance `state` by one step of size `dt` under `scenario`.
pub fn step(state: &Field, scenario: &Scenario, dt: f64) -> Result<Field> {
    Stepper::new(state.grid, scenario.d, scenario.reaction.clone()).step(&scenario.motion, state, dt)
}

/// Output of [`run`]: snapshots with the motion ledger at the same times.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub fields: Vec<Field>,
    pub ledgers: Vec<IntegralLedger>,
    pub critical: CriticalLength,
    /// The step actually used (adjusted to land on output times).
    pub dt: f64,
    pub clipped: usize,
    /// Set when stepping stopped early; `fields` then holds the partial run.
    pub failure: Option<Error>,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.fields.iter().map(|f| f.t).collect()
    }

    pub fn last(&self) -> &Field {
        self.fields.last().expect("a trajectory holds at least the initial field")
    }

    pub fn is_complete(&self) -> bool {
        self.failure.is_none()
    }
}

/// Integrate a scenario over its horizon.
pub fn run(s: &Scenario) -> Result<Trajectory> {
    s.validate()?;
    let grid = s.grid()?;
    let critical = s.critical_length()?;
    let (times, per_output, dt) = s.schedule();
    let mut stepper = Stepper::new(grid, s.d, s.reaction.clone());
    let mut current = s.initial.sample(&grid)?;
    let mut fields = Vec::with_capacity(times.len());
    fields.push(current.clone());
    let mut failure = None;
    'outer: for k in 0..s.outputs {
        for i in 0..per_output {
            let t_next = times[k] + (i + 1) as f64 * dt;
            match stepper.step(&s.motion, &current, dt) {
                Ok(mut next) => {
                    next.t = if i + 1 == per_output { times[k + 1] } else { t_next };
                    current = next;
                }
                Err(e) => {
                    failure = Some(e);
                    break 'outer;
                }
            }
        }
        fields.push(current.clone());
    }
    let done: Vec<f64> = fields.iter().map(|f| f.t).collect();
    let ledgers = ledger_series(&s.motion, &critical, &done, &s.quadrature)?;
    Ok(Trajectory { fields, ledgers, critical, dt, clipped: stepper.clipped(), failure })
}

/// Run independent scenarios under the given execution policy.
pub fn run_batch(scenarios: &[Scenario], policy: Exec) -> Vec<Result<Trajectory>> {
    exec::map(policy, scenarios, run)
}

/// `sin(πx/L) e^{(f'(0) − Dπ²/L²) t}` on a fixed interval with linear growth,
/// sampled on `grid` (whose `l0` must equal `L`).
pub fn separable_solution(grid: &Grid, d: f64, slope: f64, t: f64) -> Field {
    let rate = slope - d * PI * PI / (grid.l0 * grid.l0);
    let mode = grid.principal_mode();
    Field { t, grid: *grid, values: mode.into_iter().map(|v| v * (rate * t).exp()).collect() }
}
