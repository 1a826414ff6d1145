//! Closed-form sub- and supersolution envelopes for the linear problem.
//!
//! Given `b sin(πξ/L₀) ≤ w(ξ, t₀) ≤ a sin(πξ/L₀)`, for `t ≥ t₀`
//!
//! ```text
//! u ≥ b sin(πξ/L₀) (L₀/L)^{1/2} exp(f'(0)(t−t₀) − ∫Ȧ²/4D − ∫(Dπ²/L² + Q̲/2D)) exp(−ξ²L̇L/(4DL₀²) − ξȦL/(2DL₀))
//! u ≤ a sin(πξ/L₀) (L₀/L)^{1/2} exp(f'(0)(t−t₀) − ∫Ȧ²/4D − ∫(Dπ²/L² − Q̄/2D)) exp(−ξ²L̇L/(4DL₀²) − ξȦL/(2DL₀))
//! ```
//!
//! with every integral over `[t₀, t]`. The scalar part of each exponent is
//! kept separately (`lower_exponent`, `upper_exponent`).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::grid::{Field, Grid};
use crate::motion::{
    accumulate_integrals, curvature_extremes, ledger_series, scan_times, CriticalLength, DomainMotion,
    IntegralLedger,
};
use crate::quadrature::QuadratureConfig;
use crate::transform::{quadratic_exponent, GaugeFactors};

/// Constants of the initial sandwich of `w` between multiples of the principal mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sandwich {
    pub a: f64,
    pub b: f64,
    /// Time at which the sandwich holds; envelopes start here.
    pub t0: f64,
}

impl Sandwich {
    pub fn new(a: f64, b: f64, t0: f64) -> Result<Self> {
        if !(b > 0.0 && b <= a && a.is_finite()) {
            return Err(Error::Argument(format!("sandwich constants need 0 < b <= a, got a = {a}, b = {b}")));
        }
        Ok(Self { a, b, t0 })
    }

    /// Extract `a`, `b` from a field, taking the gauge origin at the field's time.
    ///
    /// `a`, `b` are the extremes of `w/sin(πξ/L₀)` over interior nodes, together
    /// with its limits at the two ends estimated by second-order one-sided
    /// differences. Fails when the lower constant is not positive (for instance
    /// compactly supported data at `t₀ = 0`); restart from a later time instead.
    pub fn from_field(field: &Field, m: &DomainMotion, crit: &CriticalLength) -> Result<Self> {
        let grid = field.grid;
        let origin = IntegralLedger::default();
        let gauge = GaugeFactors::new(m, crit, field.t, &origin, &grid)?;
        let w = crate::transform::u_to_w(field, &gauge)?;
        let n = grid.cells;
        let mode = grid.principal_mode();
        let scale = grid.l0 / (PI * 2.0 * grid.spacing());
        let mut ratios: Vec<f64> = (1..n).map(|j| w.values[j] / mode[j]).collect();
        ratios.push((4.0 * w.values[1] - w.values[2]) * scale);
        ratios.push((4.0 * w.values[n - 1] - w.values[n - 2]) * scale);
        let b = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let a = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !(b > 0.0) {
            return Err(Error::Argument(format!(
                "data at t = {} does not dominate a positive multiple of the principal mode (b = {b:e}); \
                 take the sandwich from a later time",
                field.t
            )));
        }
        Self::new(a, b, field.t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeBounds {
    pub t: f64,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub lower_exponent: f64,
    pub upper_exponent: f64,
    pub a: f64,
    pub b: f64,
}

fn check_times(sandwich: &Sandwich, t: f64) -> Result<()> {
    if t < sandwich.t0 {
        return Err(Error::Argument(format!(
            "envelope requested at t = {t}, before the sandwich time {}",
            sandwich.t0
        )));
    }
    Ok(())
}

/// Envelopes at `t`, from the ledger integrals over `[t₀, t]`.
pub fn theorem_bounds_from_ledger(
    m: &DomainMotion,
    crit: &CriticalLength,
    sandwich: &Sandwich,
    since_t0: &IntegralLedger,
    t: f64,
    grid: &Grid,
) -> Result<EnvelopeBounds> {
    check_times(sandwich, t)?;
    if (since_t0.t - (t - sandwich.t0)).abs() > 1e-9 * (1.0 + t) {
        return Err(Error::Dependency(format!(
            "ledger spans {} time units, expected {}",
            since_t0.t,
            t - sandwich.t0
        )));
    }
    let s = m.eval(t)?;
    let common = 0.5 * (grid.l0 / s.l).ln() + crit.f_prime_0 * since_t0.t - since_t0.drift - since_t0.diffusion;
    let lower_exponent = common - since_t0.q_lower;
    let upper_exponent = common + since_t0.q_upper;
    let mode = grid.principal_mode();
    let mut lower = Vec::with_capacity(grid.nodes());
    let mut upper = Vec::with_capacity(grid.nodes());
    for (j, xi) in grid.xis().into_iter().enumerate() {
        let gauge = -quadratic_exponent(&s, crit.d, grid.l0, xi);
        lower.push(sandwich.b * mode[j] * (lower_exponent + gauge).exp());
        upper.push(sandwich.a * mode[j] * (upper_exponent + gauge).exp());
    }
    Ok(EnvelopeBounds {
        t,
        lower,
        upper,
        lower_exponent,
        upper_exponent,
        a: sandwich.a,
        b: sandwich.b,
    })
}

/// Envelopes at `t`, computing the ledger integrals as needed.
pub fn theorem_bounds(
    m: &DomainMotion,
    crit: &CriticalLength,
    sandwich: &Sandwich,
    t: f64,
    grid: &Grid,
    quad: &QuadratureConfig,
) -> Result<EnvelopeBounds> {
    check_times(sandwich, t)?;
    let at_t0 = accumulate_integrals(m, crit, sandwich.t0, quad)?;
    let at_t = accumulate_integrals(m, crit, t, quad)?;
    theorem_bounds_from_ledger(m, crit, sandwich, &at_t.since(&at_t0), t, grid)
}

/// Envelopes at each of `times` (all `≥ t₀`, non-decreasing).
pub fn envelope_series(
    m: &DomainMotion,
    crit: &CriticalLength,
    sandwich: &Sandwich,
    times: &[f64],
    grid: &Grid,
    quad: &QuadratureConfig,
    policy: Exec,
) -> Result<Vec<EnvelopeBounds>> {
    let mut all = vec![sandwich.t0];
    all.extend_from_slice(times);
    let ledgers = ledger_series(m, crit, &all, quad)?;
    let base = ledgers[0];
    let jobs: Vec<(f64, IntegralLedger)> = times.iter().copied().zip(ledgers[1..].iter().map(|l| l.since(&base))).collect();
    exec::map(policy, &jobs, |(t, led)| theorem_bounds_from_ledger(m, crit, sandwich, led, *t, grid))
        .into_iter()
        .collect()
}

/// Largest worst-case violation of `lower − tol·‖u‖ ≤ u ≤ upper + tol·‖u‖`,
/// reported relative to `‖u‖∞` at the same time. Zero means no violation.
pub fn relative_violation(u: &Field, bounds: &EnvelopeBounds) -> f64 {
    let norm = u.sup_norm();
    if norm == 0.0 {
        return 0.0;
    }
    u.values
        .iter()
        .zip(bounds.lower.iter().zip(&bounds.upper))
        .map(|(v, (lo, hi))| (lo - v).max(v - hi).max(0.0))
        .fold(0.0, f64::max)
        / norm
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloorOptions {
    pub t_max: f64,
    /// Relative change allowed between the infima over `[0, t_max/2]` and `[0, t_max]`.
    pub rel_tol: f64,
    pub quadrature: QuadratureConfig,
}

impl Default for FloorOptions {
    fn default() -> Self {
        Self { t_max: 1e4, rel_tol: 1e-2, quadrature: QuadratureConfig::default() }
    }
}

/// Lower constant `B` with `u(ξ,t) ≥ B sin(πξ/L₀)` for all sampled `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistenceFloor {
    /// `B`, or zero when the infimum did not stabilize.
    pub value: f64,
    pub inf_half: f64,
    pub inf_full: f64,
    pub stable: bool,
    pub t_max: f64,
}

/// Per-time factor `B(t)/b`: the lower exponent plus the minimum over `ξ` of
/// the gauge term, which is a quadratic in `ξ/L₀` on `[0, 1]`.
fn floor_factor(m: &DomainMotion, crit: &CriticalLength, l0: f64, t: f64, led: &IntegralLedger) -> Result<f64> {
    let s = m.eval(t)?;
    let exponent = 0.5 * (l0 / s.l).ln() + crit.f_prime_0 * led.t - led.drift - led.diffusion - led.q_lower;
    let p = s.l_dot * s.l / (2.0 * crit.d);
    let q = s.a_dot * s.l / (2.0 * crit.d);
    let (max_g, _) = curvature_extremes(p, q);
    Ok((exponent - max_g).exp())
}

/// Infimum over time of the lower envelope's principal-mode factor, scaled by `b`.
/// The sandwich is taken at `t = 0` and `L₀ = L(0)`.
pub fn persistence_floor(m: &DomainMotion, crit: &CriticalLength, b: f64, opts: &FloorOptions) -> Result<PersistenceFloor> {
    if !(b > 0.0) {
        return Err(Error::Argument(format!("sandwich constant b must be positive, got {b}")));
    }
    let t_max = opts.t_max.min(m.time_limit());
    let l0 = m.eval(0.0)?.l;
    let times = scan_times(t_max);
    let ledgers = ledger_series(m, crit, &times, &opts.quadrature)?;
    let mut inf_half = f64::INFINITY;
    let mut inf_full = f64::INFINITY;
    for (t, led) in times.iter().zip(&ledgers) {
        let v = b * floor_factor(m, crit, l0, *t, led)?;
        inf_full = inf_full.min(v);
        if *t <= 0.5 * t_max {
            inf_half = inf_half.min(v);
        }
    }
    let stable = inf_full > 0.0 && (inf_half - inf_full) <= opts.rel_tol * inf_full;
    Ok(PersistenceFloor { value: if stable { inf_full } else { 0.0 }, inf_half, inf_full, stable, t_max })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn crit() -> CriticalLength {
        CriticalLength::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn critical_fixed_interval_envelopes_are_the_mode() {
        let c = crit();
        let m = DomainMotion::fixed(c.value).unwrap();
        let g = Grid::new(32, c.value).unwrap();
        let s = Sandwich::new(1.0, 1.0, 0.0).unwrap();
        let e = theorem_bounds(&m, &c, &s, 17.0, &g, &QuadratureConfig::default()).unwrap();
        let mode = g.principal_mode();
        for ((lo, hi), m) in e.lower.iter().zip(&e.upper).zip(&mode) {
            assert!((lo - m).abs() < 1e-12 && (hi - m).abs() < 1e-12);
        }
    }

    #[test]
    fn non_critical_fixed_interval_matches_separable_solution() {
        let c = crit();
        let l = 0.8 * PI;
        let m = DomainMotion::fixed(l).unwrap();
        let g = Grid::new(32, l).unwrap();
        let s = Sandwich::new(1.0, 1.0, 0.0).unwrap();
        let t = 3.0;
        let e = theorem_bounds(&m, &c, &s, t, &g, &QuadratureConfig::default()).unwrap();
        let exact = crate::solver::separable_solution(&g, 1.0, 1.0, t);
        for j in 0..g.nodes() {
            assert!((e.lower[j] - exact.values[j]).abs() < 1e-12);
            assert!((e.upper[j] - exact.values[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn exponents_differ_by_q_integrals() {
        let c = crit();
        let m = DomainMotion::drifting(0.0, 0.0, DomainMotion::power(PI, 0.5, 2.0).unwrap()).unwrap();
        let l0 = m.eval(0.0).unwrap().l;
        let g = Grid::new(32, l0).unwrap();
        let s = Sandwich::new(2.0, 0.5, 0.0).unwrap();
        let q = QuadratureConfig::default();
        let e = theorem_bounds(&m, &c, &s, 9.0, &g, &q).unwrap();
        let led = accumulate_integrals(&m, &c, 9.0, &q).unwrap();
        assert!(((e.upper_exponent - e.lower_exponent) - (led.q_upper + led.q_lower)).abs() < 1e-10);
    }

    #[test]
    fn envelopes_scale_linearly_in_constants() {
        let c = crit();
        let m = DomainMotion::exponential(PI, 0.3, 1.0).unwrap();
        let l0 = m.eval(0.0).unwrap().l;
        let g = Grid::new(32, l0).unwrap();
        let q = QuadratureConfig::default();
        let e1 = theorem_bounds(&m, &c, &Sandwich::new(1.0, 1.0, 0.0).unwrap(), 4.0, &g, &q).unwrap();
        let e2 = theorem_bounds(&m, &c, &Sandwich::new(3.0, 0.5, 0.0).unwrap(), 4.0, &g, &q).unwrap();
        for j in 0..g.nodes() {
            assert_eq!(e2.lower[j], 0.5 * e1.lower[j]);
            assert!((e2.upper[j] - 3.0 * e1.upper[j]).abs() <= 4.0 * f64::EPSILON * e2.upper[j]);
            assert!(e1.lower[j] <= e1.upper[j]);
        }
        assert_eq!(e1.lower[0], 0.0);
        assert_eq!(e1.upper[g.cells], 0.0);
    }

    #[test]
    fn exponential_approach_lower_exponent_converges() {
        let c = crit();
        let m = DomainMotion::exponential(PI, 0.3, 1.0).unwrap();
        let l0 = m.eval(0.0).unwrap().l;
        let g = Grid::new(32, l0).unwrap();
        let s = Sandwich::new(1.0, 1.0, 0.0).unwrap();
        let q = QuadratureConfig::default();
        let e50 = theorem_bounds(&m, &c, &s, 50.0, &g, &q).unwrap();
        let e100 = theorem_bounds(&m, &c, &s, 100.0, &g, &q).unwrap();
        assert!(e100.lower_exponent.is_finite());
        assert!((e50.lower_exponent - e100.lower_exponent).abs() < 1e-6);
    }

    #[test]
    fn sandwich_from_sine_data() {
        let c = crit();
        let m = DomainMotion::fixed(2.0).unwrap();
        let g = Grid::new(64, 2.0).unwrap();
        let f = Field::new(0.0, g, g.principal_mode().into_iter().map(|v| 3.0 * v).collect()).unwrap();
        let s = Sandwich::from_field(&f, &m, &c).unwrap();
        // the boundary limits carry an O(h²) one-sided difference error
        assert!((s.a - 3.0).abs() < 5e-3 && (s.b - 3.0).abs() < 1e-12, "{s:?}");
        assert!(s.b <= 3.0 + 1e-12 && s.a >= 3.0 - 1e-12);
    }

    #[test]
    fn bump_data_has_degenerate_sandwich() {
        let c = crit();
        let m = DomainMotion::fixed(2.0).unwrap();
        let g = Grid::new(64, 2.0).unwrap();
        let f = crate::solver::InitialProfile::Bump { center: 1.0, width: 0.5, height: 1.0 }.sample(&g).unwrap();
        assert!(Sandwich::from_field(&f, &m, &c).is_err());
    }

    #[test]
    fn envelope_before_sandwich_time_is_rejected() {
        let c = crit();
        let m = DomainMotion::fixed(2.0).unwrap();
        let g = Grid::new(16, 2.0).unwrap();
        let s = Sandwich::new(1.0, 1.0, 5.0).unwrap();
        assert!(theorem_bounds(&m, &c, &s, 1.0, &g, &QuadratureConfig::default()).is_err());
    }

    #[test]
    fn floor_on_critical_interval_is_b() {
        let c = crit();
        let m = DomainMotion::fixed(c.value).unwrap();
        let f = persistence_floor(&m, &c, 1.0, &FloorOptions { t_max: 200.0, ..Default::default() }).unwrap();
        assert!(f.stable);
        assert!((f.value - 1.0).abs() < 1e-10);
    }
}
