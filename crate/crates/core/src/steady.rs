//! Positive steady states `DU″ + f(U) = 0`, `U(0) = U(L) = 0` on a fixed
//! interval, by shooting on `U′(0)`.
//!
//! The profile is symmetric about `L/2`, so the ODE is integrated with RK4
//! from `0` to `L/2` only and the slope is bisected on whether `U′` has
//! turned non-positive by the midpoint. For KPP reactions the half-period
//! grows with amplitude, so an early turn means the slope was too small.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::quadrature::simpson_uniform;
use crate::reaction::ReactionTerm;

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub length: f64,
    pub d: f64,
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
    pub sup_norm: f64,
    pub shoot_slope: f64,
    /// `|U′(L/2)|` of the returned profile.
    pub midpoint_slope: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SteadyOutcome {
    /// Only `U ≡ 0` exists.
    Trivial { length: f64 },
    Positive(SteadyState),
}

impl SteadyOutcome {
    pub fn length(&self) -> f64 {
        match self {
            SteadyOutcome::Trivial { length } => *length,
            SteadyOutcome::Positive(s) => s.length,
        }
    }

    pub fn sup_norm(&self) -> f64 {
        match self {
            SteadyOutcome::Trivial { .. } => 0.0,
            SteadyOutcome::Positive(s) => s.sup_norm,
        }
    }

    pub fn shoot_slope(&self) -> f64 {
        match self {
            SteadyOutcome::Trivial { .. } => 0.0,
            SteadyOutcome::Positive(s) => s.shoot_slope,
        }
    }

    pub fn state(&self) -> Option<&SteadyState> {
        match self {
            SteadyOutcome::Trivial { .. } => None,
            SteadyOutcome::Positive(s) => Some(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingOptions {
    /// RK4 steps on `[0, L/2]`; derived from `max_step` when `None`.
    pub half_steps: Option<usize>,
    pub max_step: f64,
    pub max_bisections: usize,
    pub max_expansions: usize,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        Self { half_steps: None, max_step: 1e-3, max_bisections: 200, max_expansions: 10 }
    }
}

impl ShootingOptions {
    fn steps(&self, length: f64) -> usize {
        self.half_steps.unwrap_or_else(|| ((0.5 * length / self.max_step).ceil() as usize).max(16))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shot {
    /// `U′ ≤ 0` at or before the midpoint.
    Turned,
    /// Still rising at the midpoint, or blew up.
    Overshot,
}

struct Shooter<'a> {
    r: &'a ReactionTerm,
    d: f64,
    h: f64,
    steps: usize,
}

impl Shooter<'_> {
    #[inline]
    fn rhs(&self, u: f64, v: f64) -> (f64, f64) {
        (v, -self.r.rate(u) / self.d)
    }

    fn rk4(&self, u: f64, v: f64) -> (f64, f64) {
        let h = self.h;
        let (k1u, k1v) = self.rhs(u, v);
        let (k2u, k2v) = self.rhs(u + 0.5 * h * k1u, v + 0.5 * h * k1v);
        let (k3u, k3v) = self.rhs(u + 0.5 * h * k2u, v + 0.5 * h * k2v);
        let (k4u, k4v) = self.rhs(u + h * k3u, v + h * k3v);
        (
            u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
            v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
        )
    }

    fn shoot(&self, slope: f64) -> (Shot, f64) {
        let (mut u, mut v) = (0.0, slope);
        for _ in 0..self.steps {
            (u, v) = self.rk4(u, v);
            if !(u.is_finite() && v.is_finite()) {
                return (Shot::Overshot, f64::INFINITY);
            }
            if v <= 0.0 {
                return (Shot::Turned, v);
            }
        }
        (Shot::Overshot, v)
    }

    /// Half profile `(U, U′)` at the `steps + 1` nodes of `[0, L/2]`.
    fn profile(&self, slope: f64) -> (Vec<f64>, Vec<f64>) {
        let mut u = vec![0.0; self.steps + 1];
        let mut v = vec![0.0; self.steps + 1];
        v[0] = slope;
        for j in 0..self.steps {
            (u[j + 1], v[j + 1]) = self.rk4(u[j], v[j]);
        }
        (u, v)
    }

    fn diagnostics(&self, lo: f64, hi: f64) -> String {
        (0..=8)
            .map(|i| {
                let s = lo * (hi / lo).powf(i as f64 / 8.0);
                let (shot, v) = self.shoot(s);
                format!("{s:.3e}:{shot:?}({v:.2e})")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Positive steady state of length `l`, or [`SteadyOutcome::Trivial`] when
/// `l` does not exceed the critical length. For reactions linear near zero,
/// small multiples of the principal mode are also steady when `l` equals the
/// critical length; the trivial outcome is reported there as well.
pub fn solve_steady(r: &ReactionTerm, d: f64, l: f64) -> Result<SteadyOutcome> {
    solve_steady_with(r, d, l, &ShootingOptions::default())
}

pub fn solve_steady_with(r: &ReactionTerm, d: f64, l: f64, opts: &ShootingOptions) -> Result<SteadyOutcome> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::Argument(format!("diffusivity must be positive, got {d}")));
    }
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::Argument(format!("interval length must be positive, got {l}")));
    }
    if r.is_linear() || !r.validate_kpp().passed() {
        return Err(Error::Argument("steady states need a reaction of KPP type".into()));
    }
    let lc = PI * (d / r.slope).sqrt();
    if l <= lc * (1.0 + 1e-12) {
        return Ok(SteadyOutcome::Trivial { length: l });
    }
    let steps = opts.steps(l);
    let sh = Shooter { r, d, h: 0.5 * l / steps as f64, steps };

    let mut lo = 1e-8;
    let mut hi = 2.0 * (r.slope * l).max(1.0);
    let mut expansions = 0;
    loop {
        let lo_ok = sh.shoot(lo).0 == Shot::Turned;
        let hi_ok = sh.shoot(hi).0 == Shot::Overshot;
        if lo_ok && hi_ok {
            break;
        }
        if expansions == opts.max_expansions {
            return Err(Error::Bracketing(format!(
                "no sign change of U'(L/2) for slopes in [{lo:e}, {hi:e}] at L = {l}; scan: {}",
                sh.diagnostics(lo, hi)
            )));
        }
        if !lo_ok {
            lo *= 0.5;
        }
        if !hi_ok {
            hi *= 2.0;
        }
        expansions += 1;
    }

    let mut iterations = 0;
    while hi - lo > 4.0 * f64::EPSILON * hi {
        if iterations == opts.max_bisections {
            return Err(Error::Tolerance { iterations, residual: hi - lo });
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match sh.shoot(mid).0 {
            Shot::Turned => lo = mid,
            Shot::Overshot => hi = mid,
        }
        iterations += 1;
    }

    let (ul, vl) = sh.profile(lo);
    let (uh, vh) = sh.profile(hi);
    let (slope, half_u, half_v) =
        if vl[steps].abs() <= vh[steps].abs() { (lo, ul, vl) } else { (hi, uh, vh) };
    let nodes = 2 * steps + 1;
    let mut u = vec![0.0; nodes];
    let mut du = vec![0.0; nodes];
    for j in 0..=steps {
        u[j] = half_u[j];
        du[j] = half_v[j];
        u[nodes - 1 - j] = half_u[j];
        du[nodes - 1 - j] = -half_v[j];
    }
    du[steps] = half_v[steps];
    let x = (0..nodes).map(|j| j as f64 * sh.h).collect();
    let sup_norm = u.iter().copied().fold(0.0, f64::max);
    Ok(SteadyOutcome::Positive(SteadyState {
        length: l,
        d,
        x,
        u,
        du,
        sup_norm,
        shoot_slope: slope,
        midpoint_slope: half_v[steps].abs(),
    }))
}

/// Integrals of the energy identity `∫DU′² = ∫f(U)U`, together with the
/// linearized bound `∫f'(0)U²` and the Poincaré lower bound `(Dπ²/L²)∫U²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyResidual {
    pub lhs: f64,
    pub rhs: f64,
    pub linearized: f64,
    pub poincare: f64,
}

impl EnergyResidual {
    pub fn relative_mismatch(&self) -> f64 {
        let scale = self.lhs.abs().max(self.rhs.abs());
        if scale == 0.0 {
            0.0
        } else {
            (self.lhs - self.rhs).abs() / scale
        }
    }
}

pub fn energy_residual(st: &SteadyOutcome, r: &ReactionTerm) -> Result<EnergyResidual> {
    let Some(s) = st.state() else {
        return Ok(EnergyResidual { lhs: 0.0, rhs: 0.0, linearized: 0.0, poincare: 0.0 });
    };
    let h = s.x[1] - s.x[0];
    let integral = |g: &dyn Fn(usize) -> f64| -> Result<f64> {
        let v: Vec<f64> = (0..s.u.len()).map(g).collect();
        simpson_uniform(&v, h)
    };
    let lhs = integral(&|j| s.d * s.du[j] * s.du[j])?;
    let rhs = integral(&|j| r.rate(s.u[j]) * s.u[j])?;
    let sq = integral(&|j| s.u[j] * s.u[j])?;
    Ok(EnergyResidual {
        lhs,
        rhs,
        linearized: r.slope * sq,
        poincare: s.d * PI * PI / (s.length * s.length) * sq,
    })
}

/// Steady states for each length, in order.
pub fn scan(r: &ReactionTerm, d: f64, lengths: &[f64], opts: &ShootingOptions, policy: Exec) -> Vec<Result<SteadyOutcome>> {
    exec::map(policy, lengths, |&l| solve_steady_with(r, d, l, opts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn logistic() -> ReactionTerm {
        ReactionTerm::logistic(1.0).unwrap()
    }

    #[test]
    fn critical_length_is_trivial() {
        let st = solve_steady(&logistic(), 1.0, PI).unwrap();
        assert_eq!(st, SteadyOutcome::Trivial { length: PI });
        let e = energy_residual(&st, &logistic()).unwrap();
        assert_eq!((e.lhs, e.rhs), (0.0, 0.0));
    }

    #[test]
    fn long_interval_profile_is_symmetric_and_positive() {
        let st = solve_steady(&logistic(), 1.0, 4.0 * PI).unwrap();
        let s = st.state().unwrap();
        assert!(s.sup_norm > 0.5 && s.sup_norm < 1.0);
        assert_eq!(s.u[0], 0.0);
        assert_eq!(*s.u.last().unwrap(), 0.0);
        assert!(s.u.iter().all(|&v| v >= 0.0));
        let n = s.u.len();
        for j in 0..n {
            assert!((s.u[j] - s.u[n - 1 - j]).abs() <= 1e-8 * s.sup_norm);
        }
        assert!((s.x[n - 1] - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn energy_identity() {
        let r = logistic();
        let st = solve_steady(&r, 1.0, 4.0 * PI).unwrap();
        let e = energy_residual(&st, &r).unwrap();
        assert!(e.relative_mismatch() < 1e-6, "{e:?}");
        assert!(e.lhs < e.linearized);
        assert!(e.lhs >= e.poincare);
    }

    #[test]
    fn amplitude_shrinks_towards_critical_length() {
        let r = logistic();
        let norms: Vec<f64> = [0.4, 0.2, 0.1, 0.05]
            .iter()
            .map(|e| solve_steady(&r, 1.0, PI * (1.0 + e)).unwrap().sup_norm())
            .collect();
        for w in norms.windows(2) {
            assert!(w[1] < w[0]);
            // Θ(ε): halving ε roughly halves the amplitude
            let ratio = w[0] / w[1];
            assert!(ratio > 1.5 && ratio < 2.5, "{norms:?}");
        }
    }

    #[test]
    fn poincare_gap_closes_near_critical() {
        let r = logistic();
        let gap = |e: f64| {
            let st = solve_steady(&r, 1.0, PI * (1.0 + e)).unwrap();
            let en = energy_residual(&st, &r).unwrap();
            (en.lhs - en.poincare) / en.lhs
        };
        let (g1, g2) = (gap(0.1), gap(0.05));
        assert!(g1 >= 0.0 && g2 >= 0.0);
        assert!(g2 < g1);
    }

    #[test]
    fn piecewise_reaction_has_steady_states() {
        let r = ReactionTerm::piecewise_linear(1.0, 0.25).unwrap();
        let s = solve_steady(&r, 1.0, 1.5 * PI).unwrap();
        assert!(s.sup_norm() > 0.25 && s.sup_norm() < 1.0);
        assert_eq!(solve_steady(&r, 1.0, 0.9 * PI).unwrap().sup_norm(), 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(solve_steady(&ReactionTerm::linear(1.0).unwrap(), 1.0, 5.0).is_err());
        assert!(solve_steady(&logistic(), 0.0, 5.0).is_err());
        assert!(solve_steady(&logistic(), 1.0, -1.0).is_err());
    }

    #[test]
    fn bisection_budget_is_enforced() {
        let opts = ShootingOptions { max_bisections: 5, ..Default::default() };
        assert!(matches!(solve_steady_with(&logistic(), 1.0, 2.0 * PI, &opts), Err(Error::Tolerance { .. })));
    }

    #[test]
    fn scan_matches_pointwise() {
        let r = logistic();
        let ls = [1.2 * PI, 1.5 * PI, 2.0 * PI];
        let opts = ShootingOptions::default();
        let seq = scan(&r, 1.0, &ls, &opts, Exec::Sequential);
        let par = scan(&r, 1.0, &ls, &opts, Exec::Parallel);
        for (a, b) in seq.iter().zip(&par) {
            assert_eq!(a.as_ref().unwrap(), b.as_ref().unwrap());
        }
    }
}
