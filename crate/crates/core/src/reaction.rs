//! Reaction terms: linear growth and KPP-type nonlinearities.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default linear range `k₀` of [`ReactionKind::PiecewiseLinearKpp`].
pub const DEFAULT_K0: f64 = 0.25;

/// User supplied reaction rate.
pub type RateFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum ReactionKind {
    /// `f(k) = slope · k`
    Linear,
    /// `f(k) = slope · k (1 − k)`
    Logistic,
    /// `f(k) = slope · k` on `[0, k₀]`, then linear down to `f(1) = 0`.
    PiecewiseLinearKpp { k0: f64 },
    /// Arbitrary rate with self-declared structure.
    Custom {
        rate: RateFn,
        /// `f(k) < f'(0) k` on some `(0, k₀)`.
        strict_near_zero: bool,
        /// `f(k) = f'(0) k` on `[0, k₀]`, when known.
        linear_up_to: Option<f64>,
    },
}

/// A reaction term `f` with declared slope `f'(0) > 0`.
#[derive(Clone)]
pub struct ReactionTerm {
    pub kind: ReactionKind,
    pub slope: f64,
}

impl fmt::Debug for ReactionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            ReactionKind::Linear => "Linear".to_string(),
            ReactionKind::Logistic => "Logistic".to_string(),
            ReactionKind::PiecewiseLinearKpp { k0 } => format!("PiecewiseLinearKpp(k0={k0})"),
            ReactionKind::Custom { .. } => "Custom".to_string(),
        };
        f.debug_struct("ReactionTerm").field("kind", &kind).field("slope", &self.slope).finish()
    }
}

fn check_slope(slope: f64) -> Result<()> {
    if slope > 0.0 && slope.is_finite() {
        Ok(())
    } else {
        Err(Error::Argument(format!("reaction slope f'(0) must be positive, got {slope}")))
    }
}

impl ReactionTerm {
    pub fn linear(slope: f64) -> Result<Self> {
        check_slope(slope)?;
        Ok(Self { kind: ReactionKind::Linear, slope })
    }

    pub fn logistic(slope: f64) -> Result<Self> {
        check_slope(slope)?;
        Ok(Self { kind: ReactionKind::Logistic, slope })
    }

    pub fn piecewise_linear(slope: f64, k0: f64) -> Result<Self> {
        check_slope(slope)?;
        if !(k0 > 0.0 && k0 < 1.0) {
            return Err(Error::Argument(format!("k0 must lie in (0, 1), got {k0}")));
        }
        Ok(Self { kind: ReactionKind::PiecewiseLinearKpp { k0 }, slope })
    }

    pub fn custom(
        slope: f64,
        rate: impl Fn(f64) -> f64 + Send + Sync + 'static,
        strict_near_zero: bool,
        linear_up_to: Option<f64>,
    ) -> Result<Self> {
        check_slope(slope)?;
        Ok(Self {
            kind: ReactionKind::Custom { rate: Arc::new(rate), strict_near_zero, linear_up_to },
            slope,
        })
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.kind, ReactionKind::Linear)
    }

    /// Whether `f(k) < f'(0) k` just above zero, as declared by the kind.
    pub fn is_strict_near_zero(&self) -> bool {
        match &self.kind {
            ReactionKind::Linear | ReactionKind::PiecewiseLinearKpp { .. } => false,
            ReactionKind::Logistic => true,
            ReactionKind::Custom { strict_near_zero, .. } => *strict_near_zero,
        }
    }

    /// `k₀` such that `f(k) = f'(0) k` on `[0, k₀]`, if the kind has one.
    pub fn linear_range(&self) -> Option<f64> {
        match &self.kind {
            ReactionKind::PiecewiseLinearKpp { k0 } => Some(*k0),
            ReactionKind::Custom { linear_up_to, .. } => *linear_up_to,
            _ => None,
        }
    }

    /// `f(k)` for a density `k ≥ 0`.
    pub fn eval(&self, k: f64) -> Result<f64> {
        if !(k >= 0.0) {
            return Err(Error::Argument(format!("densities are non-negative, got {k}")));
        }
        Ok(self.rate(k))
    }

    /// The rate formula without the sign check; used by the solver, whose
    /// iterates may carry round-off below zero.
    #[inline]
    pub(crate) fn rate(&self, k: f64) -> f64 {
        match &self.kind {
            ReactionKind::Linear => self.slope * k,
            ReactionKind::Logistic => self.slope * k * (1.0 - k),
            ReactionKind::PiecewiseLinearKpp { k0 } => {
                if k <= *k0 {
                    self.slope * k
                } else {
                    self.slope * k0 * (1.0 - k) / (1.0 - k0)
                }
            }
            ReactionKind::Custom { rate, .. } => rate(k),
        }
    }

    /// Check the KPP structure on a grid of 10³ points in `(0, 1]`.
    pub fn validate_kpp(&self) -> ValidationReport {
        const GRID: usize = 1000;
        const SLACK: f64 = 1e-12;
        let f = |k: f64| self.rate(k);
        let mut checks = Vec::new();

        let f0 = f(0.0);
        checks.push(Check::new(KppCondition::ZeroAtOrigin, f0.abs() <= SLACK, 0.0, f0));

        if self.is_linear() {
            checks.push(Check {
                condition: KppCondition::ZeroAtOne,
                status: CheckStatus::NotApplicable,
                witness: None,
            });
        } else {
            let f1 = f(1.0);
            checks.push(Check::new(KppCondition::ZeroAtOne, f1.abs() <= SLACK, 1.0, f1));
        }

        // declared slope against a one-sided difference quotient
        let h = 1e-7;
        let quotient = f(h) / h;
        let slope_ok = self.slope > 0.0 && (quotient - self.slope).abs() <= 1e-5 * self.slope.max(1.0);
        checks.push(Check::new(KppCondition::PositiveSlope, slope_ok, h, quotient));

        let mut mono = None;
        let mut bound = None;
        let mut prev_ratio = f64::INFINITY;
        for i in 1..=GRID {
            let k = i as f64 / GRID as f64;
            let fk = f(k);
            let ratio = fk / k;
            if mono.is_none() && ratio > prev_ratio + SLACK {
                mono = Some((k, ratio));
            }
            if bound.is_none() && fk > self.slope * k + SLACK {
                bound = Some((k, fk));
            }
            prev_ratio = ratio;
        }
        checks.push(match mono {
            None => Check::pass(KppCondition::RatioNonIncreasing),
            Some((k, r)) => Check::new(KppCondition::RatioNonIncreasing, false, k, r),
        });
        checks.push(match bound {
            None => Check::pass(KppCondition::BelowLinearization),
            Some((k, v)) => Check::new(KppCondition::BelowLinearization, false, k, v),
        });
        ValidationReport { checks }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KppCondition {
    ZeroAtOrigin,
    ZeroAtOne,
    PositiveSlope,
    RatioNonIncreasing,
    BelowLinearization,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

/// One structural check. On failure `witness` holds `(k, observed value)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub condition: KppCondition,
    pub status: CheckStatus,
    pub witness: Option<(f64, f64)>,
}

impl Check {
    fn new(condition: KppCondition, ok: bool, k: f64, v: f64) -> Self {
        if ok {
            Self::pass(condition)
        } else {
            Self { condition, status: CheckStatus::Fail, witness: Some((k, v)) }
        }
    }

    fn pass(condition: KppCondition) -> Self {
        Self { condition, status: CheckStatus::Pass, witness: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn get(&self, c: KppCondition) -> &Check {
        self.checks.iter().find(|x| x.condition == c).expect("every condition is checked")
    }

    /// No check failed (not-applicable checks are ignored).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }
}
