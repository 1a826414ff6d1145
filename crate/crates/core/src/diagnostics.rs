//! Observables of a trajectory: the first Fourier sine coefficient on the
//! moving interval, sup-norms, trailing floors and fitted exponential rates.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::Field;
use crate::motion::DomainMotion;
use crate::quadrature::simpson_uniform;
use crate::solver::Trajectory;

/// Fraction of the horizon used as the trailing window of the floor estimate.
pub const FLOOR_WINDOW_FRACTION: f64 = 0.25;

/// `(2/L₀) ∫₀^{L₀} u sin(πξ/L₀) dξ` by composite Simpson on the field's grid.
pub fn fourier_coefficient(field: &Field) -> f64 {
    let g = field.grid;
    let mode = g.principal_mode();
    let integrand: Vec<f64> = field.values.iter().zip(&mode).map(|(u, s)| u * s).collect();
    // Grid enforces an even cell count, so Simpson always applies.
    2.0 / g.l0 * simpson_uniform(&integrand, g.spacing()).expect("even cell count")
}

/// The same coefficient computed in physical coordinates:
/// `(2/L) ∫_A^{A+L} ψ sin(π(x − A)/L) dx`, with `ψ` pulled back onto the
/// physical nodes `x_j = A + ξ_j L/L₀`.
pub fn fourier_coefficient_physical(field: &Field, motion: &DomainMotion) -> Result<f64> {
    let s = motion.eval(field.t)?;
    let g = field.grid;
    let dx = s.l / g.cells as f64;
    let integrand: Vec<f64> = (0..g.nodes())
        .map(|j| {
            let x = s.a + j as f64 * dx;
            field.values[j] * (PI * (x - s.a) / s.l).sin()
        })
        .collect();
    Ok(2.0 / s.l * simpson_uniform(&integrand, dx)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSeries {
    pub times: Vec<f64>,
    pub fourier1: Vec<f64>,
    pub sup_norm: Vec<f64>,
    /// Running minimum of `fourier1` over the trailing window.
    pub floor_estimate: Vec<f64>,
    pub window: f64,
}

impl ObservableSeries {
    pub fn from_fields(fields: &[Field], window: f64) -> Self {
        let times: Vec<f64> = fields.iter().map(|f| f.t).collect();
        let fourier1: Vec<f64> = fields.iter().map(fourier_coefficient).collect();
        let sup_norm = fields.iter().map(Field::sup_norm).collect();
        let floor_estimate = trailing_min(&times, &fourier1, window);
        Self { times, fourier1, sup_norm, floor_estimate, window }
    }

    /// Series with the default window (a quarter of the trajectory's span).
    pub fn from_trajectory(traj: &Trajectory) -> Self {
        let span = traj.last().t - traj.fields[0].t;
        Self::from_fields(&traj.fields, FLOOR_WINDOW_FRACTION * span)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn peak_sup(&self) -> f64 {
        self.sup_norm.iter().copied().fold(0.0, f64::max)
    }

    /// Index of the first sample at or after `t`.
    pub fn index_at(&self, t: f64) -> Option<usize> {
        self.times.iter().position(|&s| s >= t - 1e-9 * (1.0 + t.abs()))
    }
}

fn trailing_min(times: &[f64], values: &[f64], window: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut start = 0;
    for i in 0..values.len() {
        while times[i] - times[start] > window * (1.0 + 1e-12) {
            start += 1;
        }
        out.push(values[start..=i].iter().copied().fold(f64::INFINITY, f64::min));
    }
    out
}

/// Least-squares slope of `ln fourier1` against `t` over `[t1, t2]`.
pub fn fit_rate(series: &ObservableSeries, window: (f64, f64)) -> Result<f64> {
    let (t1, t2) = window;
    let pts: Vec<(f64, f64)> = series
        .times
        .iter()
        .zip(&series.fourier1)
        .filter(|(t, _)| **t >= t1 - 1e-12 && **t <= t2 + 1e-12)
        .map(|(t, v)| (*t, *v))
        .collect();
    if pts.len() < 2 {
        return Err(Error::Fit(format!("fewer than two samples in [{t1}, {t2}]")));
    }
    if let Some((t, v)) = pts.iter().find(|(_, v)| !(*v > 0.0)) {
        return Err(Error::Fit(format!("non-positive coefficient {v} at t = {t}")));
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (t, v) in &pts {
        sxy += (t - mt) * (v.ln() - my);
        sxx += (t - mt) * (t - mt);
    }
    Ok(sxy / sxx)
}
