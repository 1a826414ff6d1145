//! Adaptive composite Simpson quadrature.
//!
//! Integrands are vector valued so that every running integral of the motion
//! ledger is accumulated from a single evaluation of the motion per node.

use crate::error::{Error, Result};

/// Controls for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Absolute tolerance on each component over the whole integration range.
    pub abs_tol: f64,
    /// Maximum bisection depth inside one panel.
    pub max_depth: u32,
    /// Integration ranges are first split into panels no wider than this.
    pub panel_width: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            max_depth: 40,
            panel_width: 1.0,
        }
    }
}

/// Result of a quadrature call: the integral and a componentwise error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<const K: usize> {
    pub value: [f64; K],
    pub error: f64,
}

struct Node<const K: usize> {
    x: f64,
    f: [f64; K],
}

fn simpson<const K: usize>(h: f64, fa: &[f64; K], fm: &[f64; K], fb: &[f64; K]) -> [f64; K] {
    std::array::from_fn(|i| h / 6.0 * (fa[i] + 4.0 * fm[i] + fb[i]))
}

fn max_abs_diff<const K: usize>(a: &[f64; K], b: &[f64; K]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn max_abs<const K: usize>(a: &[f64; K]) -> f64 {
    a.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Relative level below which a panel comparison is dominated by round-off.
const ROUNDOFF: f64 = 1e-13;

struct Tally<const K: usize> {
    value: [f64; K],
    error: f64,
    /// Sum of the round-off floors of accepted leaves.
    floor: f64,
}

#[allow(clippy::too_many_arguments)]
fn refine<const K: usize, F>(
    f: &mut F,
    a: &Node<K>,
    m: &Node<K>,
    b: &Node<K>,
    whole: [f64; K],
    tol: f64,
    depth: u32,
    cfg: &QuadratureConfig,
    out: &mut Tally<K>,
) -> Result<()>
where
    F: FnMut(f64) -> Result<[f64; K]>,
{
    let h = b.x - a.x;
    let lm = Node { x: 0.5 * (a.x + m.x), f: f(0.5 * (a.x + m.x))? };
    let rm = Node { x: 0.5 * (m.x + b.x), f: f(0.5 * (m.x + b.x))? };
    let left = simpson(0.5 * h, &a.f, &lm.f, &m.f);
    let right = simpson(0.5 * h, &m.f, &rm.f, &b.f);
    let halves: [f64; K] = std::array::from_fn(|i| left[i] + right[i]);
    let delta = max_abs_diff(&halves, &whole) / 15.0;
    let roundoff = ROUNDOFF * max_abs(&halves);
    let exhausted = depth >= cfg.max_depth || h < 1e-13 * (1.0 + a.x.abs());
    if delta <= tol.max(roundoff) || exhausted {
        // exhausted leaves are kept; the global check in `integrate` decides
        for i in 0..K {
            out.value[i] += halves[i] + (halves[i] - whole[i]) / 15.0;
        }
        out.error += delta;
        out.floor += roundoff;
        return Ok(());
    }
    refine(f, a, &lm, m, left, 0.5 * tol, depth + 1, cfg, out)?;
    refine(f, m, &rm, b, right, 0.5 * tol, depth + 1, cfg, out)
}

/// Integrate a vector-valued function over `[a, b]`.
///
/// Fails with [`Error::Quadrature`] when the accumulated error estimate
/// exceeds `abs_tol` plus the round-off floor of the accepted panels.
pub fn integrate<const K: usize, F>(mut f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Estimate<K>>
where
    F: FnMut(f64) -> Result<[f64; K]>,
{
    if !(b >= a) {
        return Err(Error::Argument(format!("integration range [{a}, {b}] is reversed")));
    }
    let mut tally = Tally { value: [0.0; K], error: 0.0, floor: 0.0 };
    if b == a {
        return Ok(Estimate { value: tally.value, error: 0.0 });
    }
    let length = b - a;
    let panels = (length / cfg.panel_width).ceil().max(1.0) as usize;
    let width = length / panels as f64;
    let mut left = Node { x: a, f: f(a)? };
    for p in 0..panels {
        let xb = if p + 1 == panels { b } else { a + width * (p + 1) as f64 };
        let right = Node { x: xb, f: f(xb)? };
        let xm = 0.5 * (left.x + right.x);
        let mid = Node { x: xm, f: f(xm)? };
        let whole = simpson(right.x - left.x, &left.f, &mid.f, &right.f);
        let tol = cfg.abs_tol * (right.x - left.x) / length;
        refine(&mut f, &left, &mid, &right, whole, tol, 0, cfg, &mut tally)?;
        left = right;
    }
    if !(tally.error <= cfg.abs_tol + tally.floor) {
        return Err(Error::Quadrature { a, b, tol: cfg.abs_tol, achieved: tally.error });
    }
    Ok(Estimate { value: tally.value, error: tally.error })
}

/// Scalar convenience wrapper around [`integrate`].
pub fn integrate_scalar<F>(mut f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Estimate<1>>
where
    F: FnMut(f64) -> f64,
{
    integrate(|x| Ok([f(x)]), a, b, cfg)
}

/// Composite Simpson rule on uniformly spaced samples. `values.len() - 1` must be even.
pub fn simpson_uniform(values: &[f64], h: f64) -> Result<f64> {
    let n = values.len();
    if n < 3 || !(n - 1).is_multiple_of(2) {
        return Err(Error::Argument(format!(
            "composite Simpson needs an even number of intervals, got {}",
            n.saturating_sub(1)
        )));
    }
    let mut sum = values[0] + values[n - 1];
    for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
        sum += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    Ok(sum * h / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let est = integrate_scalar(|x| 3.0 * x * x - x, 0.0, 2.0, &QuadratureConfig::default()).unwrap();
        assert!((est.value[0] - 6.0).abs() < 1e-13);
    }

    #[test]
    fn smooth_decay_over_long_range() {
        let est = integrate_scalar(|x| (-x).exp(), 0.0, 50.0, &QuadratureConfig::default()).unwrap();
        assert!((est.value[0] - (1.0 - (-50.0f64).exp())).abs() < 1e-10);
    }

    #[test]
    fn kink_is_resolved() {
        let est = integrate_scalar(|x| (x - 0.3).abs(), 0.0, 1.0, &QuadratureConfig::default()).unwrap();
        assert!((est.value[0] - (0.045 + 0.245)).abs() < 1e-10);
    }

    #[test]
    fn vector_components_are_independent() {
        let est = integrate(|x| Ok([x, x.cos()]), 0.0, 1.0, &QuadratureConfig::default()).unwrap();
        assert!((est.value[0] - 0.5).abs() < 1e-12);
        assert!((est.value[1] - 1f64.sin()).abs() < 1e-10);
    }

    #[test]
    fn non_convergence_is_reported() {
        let cfg = QuadratureConfig { max_depth: 2, ..Default::default() };
        let err = integrate_scalar(|x| (1.0 / (x + 1e-6)).sin(), 0.0, 1.0, &cfg).unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }

    #[test]
    fn simpson_uniform_requires_even_intervals() {
        assert!(simpson_uniform(&[0.0, 1.0], 1.0).is_err());
        let xs: Vec<f64> = (0..=4).map(|i| (i as f64 * 0.25).powi(2)).collect();
        assert!((simpson_uniform(&xs, 0.25).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }
}
