//! Prescribed motion of the interval `A(t) < x < A(t) + L(t)`.
//!
//! A [`DomainMotion`] evaluates the left end `A`, the length `L` and their first
//! two time derivatives. The quantities the comparison envelopes need (the
//! extremes `Q̄`, `Q̲` of the curvature quadratic and the running integrals in
//! [`IntegralLedger`]) are computed here as well.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadratureConfig};
use crate::tridiag::Tridiagonal;

/// `A`, `L` and their first two derivatives at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MotionState {
    pub a: f64,
    pub a_dot: f64,
    pub a_ddot: f64,
    pub l: f64,
    pub l_dot: f64,
    pub l_ddot: f64,
}

/// User supplied motion. Must be C² with `L > 0`.
pub type MotionFn = Arc<dyn Fn(f64) -> MotionState + Send + Sync>;

/// Natural cubic spline through `(t, L)` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthSpline {
    t: Vec<f64>,
    l: Vec<f64>,
    second: Vec<f64>,
}

/// Relative tolerance for the spline derivative self-check.
pub const SPLINE_DERIVATIVE_TOL: f64 = 1e-6;

impl LengthSpline {
    pub fn new(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 4 {
            return Err(Error::Argument(format!(
                "tabulated motion needs at least 4 samples, got {}",
                samples.len()
            )));
        }
        for w in samples.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::Argument(format!(
                    "tabulated times must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        if let Some(&(t, l)) = samples.iter().find(|s| !(s.1 > 0.0) || !s.1.is_finite() || !s.0.is_finite()) {
            return Err(Error::DegenerateDomain { t, length: l });
        }
        let t: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let l: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let n = t.len();
        let mut second = vec![0.0; n];
        let m = n - 2;
        let mut lower = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut upper = vec![0.0; m];
        let mut rhs = vec![0.0; m];
        for r in 0..m {
            let i = r + 1;
            let h0 = t[i] - t[i - 1];
            let h1 = t[i + 1] - t[i];
            lower[r] = h0;
            diag[r] = 2.0 * (h0 + h1);
            upper[r] = h1;
            rhs[r] = 6.0 * ((l[i + 1] - l[i]) / h1 - (l[i] - l[i - 1]) / h0);
        }
        Tridiagonal::factor(&lower, &diag, &upper)?.solve_in_place(&mut rhs);
        second[1..=m].copy_from_slice(&rhs);
        let spline = Self { t, l, second };
        spline.check_derivatives()?;
        Ok(spline)
    }

    pub fn start(&self) -> f64 {
        self.t[0]
    }

    pub fn end(&self) -> f64 {
        self.t[self.t.len() - 1]
    }

    /// Value, first and second derivative at `t`.
    pub fn eval(&self, t: f64) -> Result<(f64, f64, f64)> {
        if !(t >= self.start() && t <= self.end()) {
            return Err(Error::Range { t, start: self.start(), end: self.end() });
        }
        let i = match self.t.partition_point(|&x| x <= t) {
            0 => 0,
            p => (p - 1).min(self.t.len() - 2),
        };
        let h = self.t[i + 1] - self.t[i];
        let a = (self.t[i + 1] - t) / h;
        let b = (t - self.t[i]) / h;
        let (m0, m1) = (self.second[i], self.second[i + 1]);
        let (y0, y1) = (self.l[i], self.l[i + 1]);
        let value = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let slope = (y1 - y0) / h - (3.0 * a * a - 1.0) * h * m0 / 6.0 + (3.0 * b * b - 1.0) * h * m1 / 6.0;
        let curvature = a * m0 + b * m1;
        Ok((value, slope, curvature))
    }

    /// Compare the closed-form spline derivatives with central differences of
    /// the spline itself at every interior midpoint.
    fn check_derivatives(&self) -> Result<()> {
        let mut worst = [0.0f64; 2];
        let mut scale = [0.0f64; 2];
        let mut rows = Vec::new();
        for w in self.t.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let d = 1e-4 * (w[1] - w[0]);
            let (_, s, c) = self.eval(mid)?;
            let (lp, sp, _) = self.eval(mid + d)?;
            let (lm, sm, _) = self.eval(mid - d)?;
            let fd_slope = (lp - lm) / (2.0 * d);
            let fd_curv = (sp - sm) / (2.0 * d);
            scale[0] = scale[0].max(fd_slope.abs());
            scale[1] = scale[1].max(fd_curv.abs());
            rows.push([(s - fd_slope).abs(), (c - fd_curv).abs()]);
        }
        for r in rows {
            for k in 0..2 {
                let s = scale[k].max(f64::MIN_POSITIVE);
                worst[k] = worst[k].max(r[k] / s);
            }
        }
        if worst[0] > SPLINE_DERIVATIVE_TOL || worst[1] > SPLINE_DERIVATIVE_TOL {
            return Err(Error::Consistency(format!(
                "spline derivatives disagree with finite differences (relative {:.3e}, {:.3e})",
                worst[0], worst[1]
            )));
        }
        Ok(())
    }
}

/// The families of interval motion.
#[derive(Clone)]
pub enum DomainMotion {
    /// `A ≡ 0`, `L ≡ length`.
    Fixed { length: f64 },
    /// `L(t) = target (1 - ε e^{-αt})`.
    ExponentialApproach { target: f64, epsilon: f64, alpha: f64 },
    /// `L(t) = target (1 - ε (1+t)^{-k})`.
    PowerApproach { target: f64, epsilon: f64, k: f64 },
    /// Translation at constant speed: `A(t) = a0 + c t`, length from `inner`.
    Drifting { a0: f64, c: f64, inner: Box<DomainMotion> },
    /// `A ≡ 0`, `L` from a natural cubic spline.
    Tabulated(LengthSpline),
    Custom(MotionFn),
}

impl fmt::Debug for DomainMotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fixed { length } => f.debug_struct("Fixed").field("length", length).finish(),
            Self::ExponentialApproach { target, epsilon, alpha } => f
                .debug_struct("ExponentialApproach")
                .field("target", target)
                .field("epsilon", epsilon)
                .field("alpha", alpha)
                .finish(),
            Self::PowerApproach { target, epsilon, k } => f
                .debug_struct("PowerApproach")
                .field("target", target)
                .field("epsilon", epsilon)
                .field("k", k)
                .finish(),
            Self::Drifting { a0, c, inner } => f
                .debug_struct("Drifting")
                .field("a0", a0)
                .field("c", c)
                .field("inner", inner)
                .finish(),
            Self::Tabulated(s) => f.debug_tuple("Tabulated").field(&s.t.len()).finish(),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Argument(format!("{name} must be positive and finite, got {v}")))
    }
}

fn unit_open(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::Argument(format!("{name} must lie in (0, 1), got {v}")))
    }
}

impl DomainMotion {
    pub fn fixed(length: f64) -> Result<Self> {
        positive("length", length)?;
        Ok(Self::Fixed { length })
    }

    pub fn exponential(target: f64, epsilon: f64, alpha: f64) -> Result<Self> {
        positive("target length", target)?;
        unit_open("epsilon", epsilon)?;
        positive("alpha", alpha)?;
        Ok(Self::ExponentialApproach { target, epsilon, alpha })
    }

    pub fn power(target: f64, epsilon: f64, k: f64) -> Result<Self> {
        positive("target length", target)?;
        unit_open("epsilon", epsilon)?;
        positive("k", k)?;
        Ok(Self::PowerApproach { target, epsilon, k })
    }

    pub fn drifting(a0: f64, c: f64, inner: DomainMotion) -> Result<Self> {
        if !a0.is_finite() || !c.is_finite() {
            return Err(Error::Argument("drift offset and speed must be finite".into()));
        }
        if matches!(inner, Self::Drifting { .. }) {
            return Err(Error::Argument("drifting motions cannot be nested".into()));
        }
        Ok(Self::Drifting { a0, c, inner: Box::new(inner) })
    }

    pub fn tabulated(samples: &[(f64, f64)]) -> Result<Self> {
        Ok(Self::Tabulated(LengthSpline::new(samples)?))
    }

    pub fn custom(f: impl Fn(f64) -> MotionState + Send + Sync + 'static) -> Self {
        Self::Custom(Arc::new(f))
    }

    /// Drift speed `c` (zero unless the motion is [`DomainMotion::Drifting`]).
    pub fn drift_speed(&self) -> f64 {
        match self {
            Self::Drifting { c, .. } => *c,
            _ => 0.0,
        }
    }

    /// The motion of the length alone, with any translation removed.
    pub fn length_motion(&self) -> &DomainMotion {
        match self {
            Self::Drifting { inner, .. } => inner,
            other => other,
        }
    }

    /// Latest time at which the motion can be evaluated.
    pub fn time_limit(&self) -> f64 {
        match self {
            Self::Tabulated(s) => s.end(),
            Self::Drifting { inner, .. } => inner.time_limit(),
            _ => f64::INFINITY,
        }
    }

    /// Evaluate `(A, Ȧ, Ä, L, L̇, L̈)` at `t ≥ 0`.
    pub fn eval(&self, t: f64) -> Result<MotionState> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Argument(format!("time must be finite and non-negative, got {t}")));
        }
        let state = self.eval_unchecked(t)?;
        if !(state.l > 0.0) || !state.l.is_finite() {
            return Err(Error::DegenerateDomain { t, length: state.l });
        }
        Ok(state)
    }

    fn eval_unchecked(&self, t: f64) -> Result<MotionState> {
        Ok(match self {
            Self::Fixed { length } => MotionState { l: *length, ..Default::default() },
            Self::ExponentialApproach { target, epsilon, alpha } => {
                let e = epsilon * (-alpha * t).exp();
                MotionState {
                    l: target * (1.0 - e),
                    l_dot: target * e * alpha,
                    l_ddot: -target * e * alpha * alpha,
                    ..Default::default()
                }
            }
            Self::PowerApproach { target, epsilon, k } => {
                let s = 1.0 + t;
                let p = epsilon * s.powf(-k);
                MotionState {
                    l: target * (1.0 - p),
                    l_dot: target * k * p / s,
                    l_ddot: -target * k * (k + 1.0) * p / (s * s),
                    ..Default::default()
                }
            }
            Self::Drifting { a0, c, inner } => {
                let mut s = inner.eval_unchecked(t)?;
                s.a += a0 + c * t;
                s.a_dot += c;
                s
            }
            Self::Tabulated(spline) => {
                let (l, l_dot, l_ddot) = spline.eval(t)?;
                MotionState { l, l_dot, l_ddot, ..Default::default() }
            }
            Self::Custom(f) => f(t),
        })
    }

    /// Check `L > 0` on `[0, horizon]`: analytic families are positive by
    /// construction, the others are sampled at 10⁴ evenly spaced points.
    pub fn validate_on(&self, horizon: f64) -> Result<()> {
        if horizon > self.time_limit() {
            return Err(Error::Range { t: horizon, start: 0.0, end: self.time_limit() });
        }
        match self.length_motion() {
            Self::Fixed { .. } | Self::ExponentialApproach { .. } | Self::PowerApproach { .. } => {
                self.eval(0.0).map(|_| ())
            }
            _ => {
                const SAMPLES: usize = 10_000;
                for i in 0..=SAMPLES {
                    self.eval(horizon * i as f64 / SAMPLES as f64)?;
                }
                Ok(())
            }
        }
    }
}

/// Extremes of `g(η) = η² p / 2 + η q` over `η ∈ [0, 1]`, returned as
/// `(max g, -min g)`, where `p = L̈L` and `q = ÄL`.
pub fn curvature_extremes(p: f64, q: f64) -> (f64, f64) {
    let g1 = 0.5 * p + q;
    let mut hi = 0.0f64.max(g1);
    let mut lo = 0.0f64.min(g1);
    if p != 0.0 {
        let vertex = -q / p;
        if vertex > 0.0 && vertex < 1.0 {
            let gv = vertex * (0.5 * p * vertex + q);
            hi = hi.max(gv);
            lo = lo.min(gv);
        }
    }
    (hi, -lo)
}

/// `(Q̄(t), Q̲(t))`, both non-negative.
pub fn q_bounds(m: &DomainMotion, t: f64) -> Result<(f64, f64)> {
    let s = m.eval(t)?;
    Ok(q_bounds_of(&s))
}

pub(crate) fn q_bounds_of(s: &MotionState) -> (f64, f64) {
    curvature_extremes(s.l_ddot * s.l, s.a_ddot * s.l)
}

/// Critical length `π √(D / (f'(0) − c²/4D))` of an interval drifting at speed `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalLength {
    pub d: f64,
    pub f_prime_0: f64,
    pub c: f64,
    pub value: f64,
}

impl CriticalLength {
    pub fn new(d: f64, f_prime_0: f64) -> Result<Self> {
        Self::drifting(d, f_prime_0, 0.0)
    }

    pub fn drifting(d: f64, f_prime_0: f64, c: f64) -> Result<Self> {
        positive("diffusivity D", d)?;
        positive("reaction slope f'(0)", f_prime_0)?;
        let limit = 2.0 * (d * f_prime_0).sqrt();
        if !(c.abs() < limit) {
            return Err(Error::SupercriticalDrift { c: c.abs(), limit });
        }
        let value = if c == 0.0 {
            PI * (d / f_prime_0).sqrt()
        } else {
            PI * (d / (f_prime_0 - c * c / (4.0 * d))).sqrt()
        };
        Ok(Self { d, f_prime_0, c, value })
    }

    /// The same diffusivity and slope with a different drift speed.
    pub fn with_drift(&self, c: f64) -> Result<Self> {
        Self::drifting(self.d, self.f_prime_0, c)
    }

    /// Growth rate `f'(0) − Dπ²/L²` of the principal mode on a fixed interval of length `l`.
    pub fn fixed_domain_rate(&self, l: f64) -> f64 {
        self.f_prime_0 - self.d * PI * PI / (l * l)
    }
}

/// Running integrals from 0 to `t` of the quantities the comparison results use.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IntegralLedger {
    pub t: f64,
    /// ∫ (1/L² − 1/L_crit²)
    pub inv_sq_excess: f64,
    /// ∫ L [L̈]⁻
    pub curvature_neg: f64,
    /// ∫ L [L̈]⁺
    pub curvature_pos: f64,
    /// ∫ Q̲ / 2D
    pub q_lower: f64,
    /// ∫ Q̄ / 2D
    pub q_upper: f64,
    /// ∫ Dπ² / L²
    pub diffusion: f64,
    /// ∫ L̇ / 2L
    pub log_stretch: f64,
    /// ∫ Ȧ² / 4D
    pub drift: f64,
    /// Accumulated quadrature error estimate.
    pub error_estimate: f64,
}

const LEDGER_TERMS: usize = 8;

impl IntegralLedger {
    fn from_parts(t: f64, v: [f64; LEDGER_TERMS], error_estimate: f64) -> Self {
        Self {
            t,
            inv_sq_excess: v[0],
            curvature_neg: v[1],
            curvature_pos: v[2],
            q_lower: v[3],
            q_upper: v[4],
            diffusion: v[5],
            log_stretch: v[6],
            drift: v[7],
            error_estimate,
        }
    }

    fn parts(&self) -> [f64; LEDGER_TERMS] {
        [
            self.inv_sq_excess,
            self.curvature_neg,
            self.curvature_pos,
            self.q_lower,
            self.q_upper,
            self.diffusion,
            self.log_stretch,
            self.drift,
        ]
    }

    /// Integrals over `[earlier.t, self.t]`.
    pub fn since(&self, earlier: &IntegralLedger) -> IntegralLedger {
        let a = self.parts();
        let b = earlier.parts();
        Self::from_parts(
            self.t - earlier.t,
            std::array::from_fn(|i| a[i] - b[i]),
            self.error_estimate + earlier.error_estimate,
        )
    }

    /// Integrand of the extinction condition, integrated:
    /// ∫ (Dπ²/L² − Dπ²/L_crit² − L[L̈]⁺/4D + L̇/2L).
    pub fn extinction_integral(&self, crit: &CriticalLength) -> f64 {
        crit.d * PI * PI * self.inv_sq_excess - self.curvature_pos / (4.0 * crit.d) + self.log_stretch
    }
}

fn ledger_integrand(m: &DomainMotion, crit: &CriticalLength, t: f64) -> Result<[f64; LEDGER_TERMS]> {
    let s = m.eval(t)?;
    let d = crit.d;
    let inv_l2 = 1.0 / (s.l * s.l);
    let (q_hi, q_lo) = q_bounds_of(&s);
    Ok([
        inv_l2 - 1.0 / (crit.value * crit.value),
        s.l * (-s.l_ddot).max(0.0),
        s.l * s.l_ddot.max(0.0),
        q_lo / (2.0 * d),
        q_hi / (2.0 * d),
        d * PI * PI * inv_l2,
        s.l_dot / (2.0 * s.l),
        s.a_dot * s.a_dot / (4.0 * d),
    ])
}

/// Evaluate every ledger integral over `[0, horizon]`.
pub fn accumulate_integrals(
    m: &DomainMotion,
    crit: &CriticalLength,
    horizon: f64,
    quad: &QuadratureConfig,
) -> Result<IntegralLedger> {
    if !(horizon >= 0.0) {
        return Err(Error::Argument(format!("ledger horizon must be non-negative, got {horizon}")));
    }
    let est = quadrature::integrate(|t| ledger_integrand(m, crit, t), 0.0, horizon, quad)?;
    Ok(IntegralLedger::from_parts(horizon, est.value, est.error))
}

/// Cumulative ledgers at each of the non-decreasing `times`.
///
/// The absolute tolerance of `quad` is shared among the segments in
/// proportion to their length.
pub fn ledger_series(
    m: &DomainMotion,
    crit: &CriticalLength,
    times: &[f64],
    quad: &QuadratureConfig,
) -> Result<Vec<IntegralLedger>> {
    let Some(&last) = times.last() else {
        return Ok(Vec::new());
    };
    let total = last.max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(times.len());
    let mut acc = [0.0; LEDGER_TERMS];
    let mut err = 0.0;
    let mut prev = 0.0;
    for &t in times {
        if !(t >= prev) {
            return Err(Error::Argument(format!("ledger times must be non-decreasing and non-negative ({prev} then {t})")));
        }
        if t > prev {
            let seg = QuadratureConfig { abs_tol: quad.abs_tol * (t - prev) / total, ..*quad };
            let est = quadrature::integrate(|s| ledger_integrand(m, crit, s), prev, t, &seg)?;
            for (a, v) in acc.iter_mut().zip(est.value) {
                *a += v;
            }
            err += est.error;
        }
        out.push(IntegralLedger::from_parts(t, acc, err));
        prev = t;
    }
    Ok(out)
}

/// Time grid used for long-horizon ledger scans: spacing 0.05 near the origin,
/// growing geometrically by 1% per step, ending exactly at `t_max`.
pub fn scan_times(t_max: f64) -> Vec<f64> {
    let mut times = vec![0.0];
    let mut t = 0.0f64;
    while t < t_max {
        t = (t + (0.01 * t).max(0.05)).min(t_max);
        times.push(t);
    }
    times
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn fixed_motion_is_constant() {
        let s = DomainMotion::fixed(PI).unwrap().eval(3.0).unwrap();
        assert_eq!(s, MotionState { l: PI, ..Default::default() });
    }

    #[test]
    fn power_approach_derivatives_at_origin() {
        let m = DomainMotion::power(PI, 0.5, 2.0).unwrap();
        let s = m.eval(0.0).unwrap();
        assert_close(s.l, PI / 2.0, 1e-15);
        assert_close(s.l_dot, PI, 1e-14);
        assert_close(s.l_ddot, -3.0 * PI, 1e-14);
        // cross-check against central differences of L and L̇
        let h = 1e-5;
        let t = 0.7;
        let (p, q, c) = (m.eval(t + h).unwrap(), m.eval(t - h).unwrap(), m.eval(t).unwrap());
        assert_close((p.l - q.l) / (2.0 * h), c.l_dot, 1e-8);
        assert_close((p.l_dot - q.l_dot) / (2.0 * h), c.l_ddot, 1e-8);
    }

    #[test]
    fn exponential_approach_limit() {
        let s = DomainMotion::exponential(PI, 0.3, 1.0).unwrap().eval(50.0).unwrap();
        assert_close(s.l, PI, 1e-15);
        assert_close(s.l_dot, 0.0, 1e-15);
        assert_close(s.l_ddot, 0.0, 1e-15);
    }

    #[test]
    fn drifting_adds_translation() {
        let inner = DomainMotion::fixed(2.0).unwrap();
        let s = DomainMotion::drifting(1.0, 0.5, inner).unwrap().eval(4.0).unwrap();
        assert_eq!((s.a, s.a_dot, s.a_ddot, s.l), (3.0, 0.5, 0.0, 2.0));
        let nested = DomainMotion::drifting(0.0, 1.0, DomainMotion::drifting(0.0, 1.0, DomainMotion::fixed(1.0).unwrap()).unwrap());
        assert!(nested.is_err());
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(DomainMotion::fixed(0.0).is_err());
        assert!(DomainMotion::exponential(PI, 1.0, 1.0).is_err());
        assert!(DomainMotion::power(PI, 0.5, 0.0).is_err());
        assert!(DomainMotion::fixed(1.0).unwrap().eval(-1.0).is_err());
    }

    #[test]
    fn custom_degenerate_length_is_an_error() {
        let m = DomainMotion::custom(|t| MotionState { l: 1.0 - t, l_dot: -1.0, ..Default::default() });
        assert!(m.eval(0.5).is_ok());
        assert!(matches!(m.eval(1.5), Err(Error::DegenerateDomain { .. })));
        assert!(m.validate_on(2.0).is_err());
    }

    #[test]
    fn q_bounds_examples() {
        assert_eq!(curvature_extremes(0.0, 0.0), (0.0, 0.0));
        assert_eq!(curvature_extremes(-2.0, 0.0), (0.0, 1.0));
        let (hi, lo) = curvature_extremes(-4.0, 1.0);
        assert_close(hi, 0.125, 1e-15);
        assert_close(lo, 1.0, 1e-15);
        // linear g: extremes at the ends
        assert_eq!(curvature_extremes(0.0, -3.0), (0.0, 3.0));
    }

    #[test]
    fn q_bounds_vertex_example_matches_dense_scan() {
        let n = 1_000_000;
        let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
        for i in 0..=n {
            let eta = i as f64 / n as f64;
            let g = eta * eta * (-4.0) / 2.0 + eta;
            hi = hi.max(g);
            lo = lo.min(g);
        }
        let (qh, ql) = curvature_extremes(-4.0, 1.0);
        assert_close(qh, hi, 1e-9);
        assert_close(ql, -lo, 1e-9);
    }

    #[test]
    fn critical_length_forms() {
        let c = CriticalLength::new(1.0, 1.0).unwrap();
        assert_eq!(c.value, PI);
        let c2 = CriticalLength::new(2.0, 0.5).unwrap();
        assert_eq!(c2.value, PI * (2.0f64 / 0.5).sqrt());
        let drift = CriticalLength::drifting(1.0, 1.0, 1.0).unwrap();
        assert_close(drift.value, 2.0 * PI / 3f64.sqrt(), 1e-14);
        assert!(matches!(
            CriticalLength::drifting(1.0, 1.0, 2.0),
            Err(Error::SupercriticalDrift { .. })
        ));
    }

    #[test]
    fn ledger_on_fixed_critical_interval() {
        let crit = CriticalLength::new(1.0, 1.0).unwrap();
        let m = DomainMotion::fixed(crit.value).unwrap();
        let led = accumulate_integrals(&m, &crit, 7.0, &QuadratureConfig::default()).unwrap();
        assert_close(led.inv_sq_excess, 0.0, 1e-14);
        assert_eq!(led.curvature_neg, 0.0);
        assert_eq!(led.curvature_pos, 0.0);
        assert_eq!(led.q_lower, 0.0);
        assert_eq!(led.q_upper, 0.0);
        assert_eq!(led.log_stretch, 0.0);
        assert_eq!(led.drift, 0.0);
        assert_close(led.diffusion, 7.0, 1e-12);
    }

    /// Antiderivative of 1/(π²(1 − ε/(1+t))²) − 1/π², written with s = 1 + t:
    /// (1/π²) [ 2ε ln(s − ε) − ε²/(s − ε) ] + const.
    fn power_k1_antiderivative(t: f64, eps: f64) -> f64 {
        let s = 1.0 + t;
        (2.0 * eps * (s - eps).ln() - eps * eps / (s - eps)) / (PI * PI)
    }

    #[test]
    fn ledger_matches_symbolic_antiderivative() {
        let crit = CriticalLength::new(1.0, 1.0).unwrap();
        let m = DomainMotion::power(PI, 0.5, 1.0).unwrap();
        let horizon = 10f64.exp() - 1.0;
        let led = accumulate_integrals(&m, &crit, horizon, &QuadratureConfig::default()).unwrap();
        let exact = power_k1_antiderivative(horizon, 0.5) - power_k1_antiderivative(0.0, 0.5);
        assert!(((led.inv_sq_excess - exact) / exact).abs() < 1e-6, "{} vs {}", led.inv_sq_excess, exact);
    }

    #[test]
    fn curvature_integral_converges_for_exponential_approach() {
        let crit = CriticalLength::new(1.0, 1.0).unwrap();
        let m = DomainMotion::exponential(PI, 0.3, 1.0).unwrap();
        let q = QuadratureConfig::default();
        let a = accumulate_integrals(&m, &crit, 50.0, &q).unwrap();
        let b = accumulate_integrals(&m, &crit, 100.0, &q).unwrap();
        assert!((a.curvature_neg - b.curvature_neg).abs() < 1e-8);
    }

    #[test]
    fn series_is_consistent_with_single_integration() {
        let crit = CriticalLength::new(1.0, 1.0).unwrap();
        let m = DomainMotion::drifting(0.0, 0.5, DomainMotion::power(PI, 0.5, 1.5).unwrap()).unwrap();
        let q = QuadratureConfig::default();
        let series = ledger_series(&m, &crit, &[0.0, 1.0, 2.5, 10.0], &q).unwrap();
        let direct = accumulate_integrals(&m, &crit, 10.0, &q).unwrap();
        let last = series.last().unwrap();
        assert_close(last.diffusion, direct.diffusion, 1e-9);
        assert_close(last.drift, 0.5 * 0.5 / 4.0 * 10.0, 1e-12);
        assert_eq!(series[0].inv_sq_excess, 0.0);
    }

    #[test]
    fn spline_reproduces_cubic_interior_and_rejects_short_tables() {
        assert!(LengthSpline::new(&[(0.0, 1.0), (1.0, 1.0), (2.0, 1.0)]).is_err());
        let samples: Vec<(f64, f64)> = (0..=40).map(|i| {
            let t = i as f64 * 0.25;
            (t, 2.0 + (0.3 * t).sin())
        }).collect();
        let s = LengthSpline::new(&samples).unwrap();
        let (l, dl, _) = s.eval(5.1).unwrap();
        assert_close(l, 2.0 + (0.3f64 * 5.1).sin(), 1e-4);
        assert_close(dl, 0.3 * (0.3f64 * 5.1).cos(), 1e-3);
        assert!(matches!(s.eval(10.5), Err(Error::Range { .. })));
    }

    #[test]
    fn tabulated_rejects_non_positive_lengths() {
        let bad = [(0.0, 1.0), (1.0, 0.0), (2.0, 1.0), (3.0, 1.0)];
        assert!(matches!(LengthSpline::new(&bad), Err(Error::DegenerateDomain { .. })));
    }

    #[test]
    fn scan_times_end_exactly() {
        let ts = scan_times(1000.0);
        assert_eq!(ts[0], 0.0);
        assert_eq!(*ts.last().unwrap(), 1000.0);
        assert!(ts.windows(2).all(|w| w[1] > w[0]));
    }
}
