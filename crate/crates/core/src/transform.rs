//! Changes of variables: the pullback `ξ = (x − A) L₀ / L` onto the fixed
//! reference interval, and the exponential gauge taking `u` to `w`.
//!
//! The gauge is
//!
//! ```text
//! w = u (L/L₀)^{1/2} exp(−f'(0) t + ∫ Ȧ²/4D) exp(ξ² L̇ L / (4 D L₀²) + ξ Ȧ L / (2 D L₀))
//! ```
//!
//! and removes the advection term, leaving `w_t = D (L₀/L)² w_ξξ + (ξ² L̈ L/(4DL₀²) + ξ Ä L/(2DL₀)) w`.
//! Factors are stored as logarithms; for long horizons the individual
//! exponentials leave the range of `f64` while their products do not.

use crate::error::{Error, Result};
use crate::grid::{Field, Grid};
use crate::motion::{CriticalLength, DomainMotion, IntegralLedger, MotionState};

/// Map a physical position to the reference coordinate.
pub fn to_reference(x: f64, m: &DomainMotion, t: f64, l0: f64) -> Result<f64> {
    let s = m.eval(t)?;
    let (left, right) = (s.a, s.a + s.l);
    let slack = 1e-12 * s.l;
    if !(x >= left - slack && x <= right + slack) {
        return Err(Error::OutsideDomain { x, left, right, t });
    }
    Ok(((x - s.a) * l0 / s.l).clamp(0.0, l0))
}

/// Inverse of [`to_reference`].
pub fn from_reference(xi: f64, m: &DomainMotion, t: f64, l0: f64) -> Result<f64> {
    if !(0.0..=l0).contains(&xi) {
        return Err(Error::Argument(format!("reference coordinate {xi} outside [0, {l0}]")));
    }
    let s = m.eval(t)?;
    Ok(s.a + xi * s.l / l0)
}

/// Logarithms of the three gauge factors at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeFactors {
    pub t: f64,
    /// ln (L/L₀)^{1/2}
    pub log_volume: f64,
    /// −f'(0)(t − t₀) + ∫_{t₀}^t Ȧ²/4D
    pub log_growth: f64,
    /// ξ² L̇ L/(4DL₀²) + ξ Ȧ L/(2DL₀), per node
    pub log_quadratic: Vec<f64>,
}

/// `ξ² L̇ L/(4DL₀²) + ξ Ȧ L/(2DL₀)` at one node.
#[inline]
pub(crate) fn quadratic_exponent(s: &MotionState, d: f64, l0: f64, xi: f64) -> f64 {
    xi * xi * s.l_dot * s.l / (4.0 * d * l0 * l0) + xi * s.a_dot * s.l / (2.0 * d * l0)
}

impl GaugeFactors {
    /// Gauge at time `t`. `since_origin` holds the ledger integrals from the
    /// gauge origin `t₀` to `t` (its `t` field is the elapsed time `t − t₀`).
    pub fn new(
        m: &DomainMotion,
        crit: &CriticalLength,
        t: f64,
        since_origin: &IntegralLedger,
        grid: &Grid,
    ) -> Result<Self> {
        if since_origin.t > t * (1.0 + 1e-12) + 1e-12 || since_origin.t < 0.0 {
            return Err(Error::Consistency(format!(
                "ledger covers {} time units but the gauge is requested at t = {t}",
                since_origin.t
            )));
        }
        let s = m.eval(t)?;
        Ok(Self {
            t,
            log_volume: 0.5 * (s.l / grid.l0).ln(),
            log_growth: -crit.f_prime_0 * since_origin.t + since_origin.drift,
            log_quadratic: grid
                .xis()
                .into_iter()
                .map(|xi| quadratic_exponent(&s, crit.d, grid.l0, xi))
                .collect(),
        })
    }

    pub fn log_factor(&self, j: usize) -> f64 {
        self.log_volume + self.log_growth + self.log_quadratic[j]
    }

    fn check(&self, f: &Field) -> Result<()> {
        if f.values.len() != self.log_quadratic.len() {
            return Err(Error::Consistency(format!(
                "field has {} nodes, gauge has {}",
                f.values.len(),
                self.log_quadratic.len()
            )));
        }
        if (f.t - self.t).abs() > 1e-12 * (1.0 + self.t.abs()) {
            return Err(Error::Consistency(format!("field at t = {} but gauge at t = {}", f.t, self.t)));
        }
        Ok(())
    }
}

pub fn u_to_w(u: &Field, gauge: &GaugeFactors) -> Result<Field> {
    gauge.check(u)?;
    let values = u
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| v * gauge.log_factor(j).exp())
        .collect();
    Field::new(u.t, u.grid, values)
}

pub fn w_to_u(w: &Field, gauge: &GaugeFactors) -> Result<Field> {
    gauge.check(w)?;
    let values = w
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| v * (-gauge.log_factor(j)).exp())
        .collect();
    Field::new(w.t, w.grid, values)
}
