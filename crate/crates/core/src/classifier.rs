//! Persistence / extinction verdicts from the comparison envelopes.
//!
//! Conditions are evaluated in closed form for the analytic motion families.
//! Tabulated and custom motions fall back to a numerical surrogate that
//! compares each running quantity over `[0, T/2]` against `[0, T]`; such
//! checks can come back undetermined, and then so does the verdict.

use std::f64::consts::PI;
use std::fmt;

use crate::envelope::{persistence_floor, FloorOptions, PersistenceFloor};
use crate::error::Result;
use crate::motion::{ledger_series, scan_times, CriticalLength, DomainMotion, IntegralLedger, MotionState};
use crate::quadrature::QuadratureConfig;
use crate::reaction::{ReactionTerm, ReactionKind};

/// Relative tolerance for "the target length equals the critical length".
const CRITICAL_MATCH: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Persists,
    Extinct,
    Inconclusive,
}

/// The comparison result a verdict rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// Lower envelope bounded away from zero, stationary interval.
    LinearPersistence,
    /// Upper envelope decays, stationary interval.
    LinearExtinction,
    DriftingPersistence,
    DriftingExtinction,
    /// The linear solution is a supersolution for KPP reactions.
    KppExtinction,
    /// Capped lower envelope for reactions linear on `[0, k₀]`.
    ThresholdPersistence,
    /// Comparison with near-critical steady states for strictly sublinear reactions.
    StrictKppExtinction,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::LinearPersistence => "linear-persistence",
            Rule::LinearExtinction => "linear-extinction",
            Rule::DriftingPersistence => "drifting-persistence",
            Rule::DriftingExtinction => "drifting-extinction",
            Rule::KppExtinction => "kpp-extinction",
            Rule::ThresholdPersistence => "threshold-persistence",
            Rule::StrictKppExtinction => "strict-kpp-extinction",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// `L` bounded above.
    LengthBoundedAbove,
    /// `L̇L` bounded above.
    StretchBoundedAbove,
    /// `cL` bounded above.
    DriftLengthBoundedAbove,
    /// `∫(1/L² − 1/L_crit²)` bounded above.
    ExcessBoundedAbove,
    /// `∫ L[L̈]⁻ < ∞`.
    ConcavityIntegrable,
    /// `L̇L` bounded below.
    StretchBoundedBelow,
    /// `cL` bounded below.
    DriftLengthBoundedBelow,
    /// `∫(Dπ²/L² − Dπ²/L_crit² − L[L̈]⁺/4D + L̇/2L) → ∞`.
    ExtinctionIntegralDiverges,
    /// `A ≡ 0` (custom motions may translate).
    StationaryInterval,
    KppStructure,
    /// `f(k) = f'(0)k` on `[0, k₀]`.
    LinearNearZero,
    /// `0 < m₁ ≤ L ≤ m₂ < ∞`.
    LengthBounds,
    /// `|L̇L| ≤ M`.
    StretchBounded,
    /// `|∫(1/L² − 1/L_crit²)| ≤ I₁`.
    ExcessBounded,
    /// `∫ L[L̈]⁻ ≤ I₂`.
    ConcavityBounded,
    /// `f(k) < f'(0)k` near zero.
    StrictNearZero,
    /// `limsup L ≤ L_crit`.
    LimsupAtMostCritical,
}

impl Condition {
    pub fn id(self) -> &'static str {
        match self {
            Condition::LengthBoundedAbove => "length-bounded-above",
            Condition::StretchBoundedAbove => "stretch-bounded-above",
            Condition::DriftLengthBoundedAbove => "drift-length-bounded-above",
            Condition::ExcessBoundedAbove => "excess-integral-bounded-above",
            Condition::ConcavityIntegrable => "concavity-integrable",
            Condition::StretchBoundedBelow => "stretch-bounded-below",
            Condition::DriftLengthBoundedBelow => "drift-length-bounded-below",
            Condition::ExtinctionIntegralDiverges => "extinction-integral-diverges",
            Condition::StationaryInterval => "stationary-interval",
            Condition::KppStructure => "kpp-structure",
            Condition::LinearNearZero => "linear-near-zero",
            Condition::LengthBounds => "length-bounds",
            Condition::StretchBounded => "stretch-bounded",
            Condition::ExcessBounded => "excess-integral-bounded",
            Condition::ConcavityBounded => "concavity-bounded",
            Condition::StrictNearZero => "strict-near-zero",
            Condition::LimsupAtMostCritical => "limsup-at-most-critical",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Satisfied,
    Violated,
    Undetermined,
}

impl Status {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Satisfied
        } else {
            Status::Violated
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionCheck {
    pub condition: Condition,
    pub rule: Rule,
    pub status: Status,
    pub witness: Vec<(&'static str, f64)>,
}

impl ConditionCheck {
    fn new(condition: Condition, rule: Rule, status: Status, witness: Vec<(&'static str, f64)>) -> Self {
        Self { condition, rule, status, witness }
    }

    fn with_rule(mut self, rule: Rule) -> Self {
        self.rule = rule;
        self
    }
}

/// Constants of the capped lower envelope for reactions linear near zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdConstants {
    pub k0: f64,
    pub m1: f64,
    pub m2: f64,
    /// `sup |L̇L|`
    pub stretch: f64,
    pub i1: f64,
    pub i2: f64,
    /// Sandwich constant of the initial data.
    pub b_init: f64,
    /// `min(b_init, k₀ (m₁/L₀)^{1/2} exp(−Dπ²I₁ − M/4D))`
    pub b_hat: f64,
    /// `b̂ (L₀/m₂)^{1/2} exp(−Dπ²I₁ − I₂/4D − M/4D)`
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub outcome: Outcome,
    /// Rule that fired; `None` for inconclusive verdicts.
    pub rule: Option<Rule>,
    pub conditions: Vec<ConditionCheck>,
    /// Envelope floor `B` for persistence verdicts.
    pub floor: Option<PersistenceFloor>,
    pub threshold: Option<ThresholdConstants>,
    pub advisory: Vec<String>,
}

impl Verdict {
    fn from_checks(conditions: Vec<ConditionCheck>, order: &[(Rule, Outcome)]) -> Self {
        let mut outcome = Outcome::Inconclusive;
        let mut rule = None;
        for &(r, o) in order {
            let mine: Vec<_> = conditions.iter().filter(|c| c.rule == r).collect();
            if !mine.is_empty() && mine.iter().all(|c| c.status == Status::Satisfied) {
                outcome = o;
                rule = Some(r);
                break;
            }
        }
        Self { outcome, rule, conditions, floor: None, threshold: None, advisory: Vec::new() }
    }

    pub fn condition(&self, c: Condition) -> Option<&ConditionCheck> {
        self.conditions.iter().find(|x| x.condition == c)
    }

    /// Structured text report: one line per field, one condition per line.
    pub fn report(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Persists => "persists",
            Outcome::Extinct => "extinct",
            Outcome::Inconclusive => "inconclusive",
        })
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Satisfied => "satisfied",
            Status::Violated => "violated",
            Status::Undetermined => "undetermined",
        })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "outcome {}", self.outcome)?;
        writeln!(f, "rule {}", self.rule.map_or("none", Rule::id))?;
        for c in &self.conditions {
            write!(f, "condition {} {} {}", c.rule.id(), c.condition.id(), c.status)?;
            for (k, v) in &c.witness {
                write!(f, " {k}={v:e}")?;
            }
            writeln!(f)?;
        }
        if let Some(fl) = &self.floor {
            writeln!(
                f,
                "floor value={:e} stable={} inf_half={:e} inf_full={:e} t_max={:e}",
                fl.value, fl.stable, fl.inf_half, fl.inf_full, fl.t_max
            )?;
        }
        if let Some(t) = &self.threshold {
            writeln!(
                f,
                "threshold k0={:e} m1={:e} m2={:e} M={:e} I1={:e} I2={:e} b_init={:e} b_hat={:e} bound={:e}",
                t.k0, t.m1, t.m2, t.stretch, t.i1, t.i2, t.b_init, t.b_hat, t.bound
            )?;
        }
        for a in &self.advisory {
            writeln!(f, "advisory {a}")?;
        }
        Ok(())
    }
}

/// Settings of the numerical surrogate for unbounded-horizon conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurrogateOptions {
    pub t_max: f64,
    /// Growth from `T/2` to `T` counted as divergence: relative ...
    pub divergence_rel: f64,
    /// ... and absolute.
    pub divergence_abs: f64,
    /// Growth counted as bounded, relative to `max(1, |value|)`.
    pub bounded_tol: f64,
}

impl Default for SurrogateOptions {
    fn default() -> Self {
        Self { t_max: 1e4, divergence_rel: 0.1, divergence_abs: 1.0, bounded_tol: 1e-2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    /// Sandwich constant `b` of the initial data, used for floors and `b̂`.
    pub initial_b: f64,
    pub surrogate: SurrogateOptions,
    pub floor: FloorOptions,
    pub quadrature: QuadratureConfig,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            initial_b: 1.0,
            surrogate: SurrogateOptions::default(),
            floor: FloorOptions::default(),
            quadrature: QuadratureConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Trend {
    Bounded,
    Divergent,
    Unclear,
}

fn trend(half: f64, full: f64, o: &SurrogateOptions) -> Trend {
    let growth = full - half;
    if !full.is_finite() {
        Trend::Divergent
    } else if growth <= o.bounded_tol * half.abs().max(1.0) {
        Trend::Bounded
    } else if growth > o.divergence_rel * half.abs() && growth > o.divergence_abs {
        Trend::Divergent
    } else {
        Trend::Unclear
    }
}

/// Samples of a motion on the scan grid, for the surrogate checks.
struct Samples {
    times: Vec<f64>,
    states: Vec<MotionState>,
    ledgers: Vec<IntegralLedger>,
    half: usize,
}

impl Samples {
    fn new(m: &DomainMotion, crit: &CriticalLength, opts: &ClassifyOptions) -> Result<Self> {
        let t_max = opts.surrogate.t_max.min(m.time_limit());
        let times = scan_times(t_max);
        let states = times.iter().map(|&t| m.eval(t)).collect::<Result<Vec<_>>>()?;
        let ledgers = ledger_series(m, crit, &times, &opts.quadrature)?;
        let half = times.iter().rposition(|&t| t <= 0.5 * t_max).unwrap_or(0);
        Ok(Self { times, states, ledgers, half })
    }

    fn t_max(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// Running sup of `q` over `[0, T/2]` and `[0, T]`.
    fn sups(&self, q: impl Fn(&MotionState, &IntegralLedger) -> f64) -> (f64, f64) {
        let mut half = f64::NEG_INFINITY;
        let mut full = f64::NEG_INFINITY;
        for (i, (s, l)) in self.states.iter().zip(&self.ledgers).enumerate() {
            let v = q(s, l);
            full = full.max(v);
            if i <= self.half {
                half = half.max(v);
            }
        }
        (half, full)
    }

    fn bounded_above(
        &self,
        cond: Condition,
        rule: Rule,
        o: &SurrogateOptions,
        q: impl Fn(&MotionState, &IntegralLedger) -> f64,
    ) -> ConditionCheck {
        let (half, full) = self.sups(q);
        let status = match trend(half, full, o) {
            Trend::Bounded => Status::Satisfied,
            Trend::Divergent => Status::Violated,
            Trend::Unclear => Status::Undetermined,
        };
        ConditionCheck::new(cond, rule, status, vec![("sup_half", half), ("sup_full", full), ("t_max", self.t_max())])
    }

    fn extinction_divergence(&self, crit: &CriticalLength, rule: Rule, o: &SurrogateOptions) -> ConditionCheck {
        let half = self.ledgers[self.half].extinction_integral(crit);
        let full = self.ledgers.last().unwrap().extinction_integral(crit);
        let (sup_half, sup_full) = self.sups(|_, l| l.extinction_integral(crit));
        let status = match trend(half, full, o) {
            Trend::Divergent => Status::Satisfied,
            _ if trend(sup_half, sup_full, o) == Trend::Bounded => Status::Violated,
            _ => Status::Undetermined,
        };
        ConditionCheck::new(
            Condition::ExtinctionIntegralDiverges,
            rule,
            status,
            vec![("value_half", half), ("value_full", full), ("t_max", self.t_max())],
        )
    }
}

/// `(target, family tail)` for the analytic families approaching a target length.
enum Family {
    Fixed(f64),
    Exponential { target: f64, epsilon: f64, alpha: f64 },
    Power { target: f64, epsilon: f64, k: f64 },
}

fn family(m: &DomainMotion) -> Option<Family> {
    match m {
        DomainMotion::Fixed { length } => Some(Family::Fixed(*length)),
        DomainMotion::ExponentialApproach { target, epsilon, alpha } => {
            Some(Family::Exponential { target: *target, epsilon: *epsilon, alpha: *alpha })
        }
        DomainMotion::PowerApproach { target, epsilon, k } => {
            Some(Family::Power { target: *target, epsilon: *epsilon, k: *k })
        }
        _ => None,
    }
}

/// Sign of `target − L_crit`, with near-equality treated as equality.
fn compare_critical(target: f64, lc: f64) -> std::cmp::Ordering {
    if (target - lc).abs() <= CRITICAL_MATCH * lc {
        std::cmp::Ordering::Equal
    } else {
        target.partial_cmp(&lc).unwrap()
    }
}

impl Family {
    fn target(&self) -> f64 {
        match *self {
            Family::Fixed(l) => l,
            Family::Exponential { target, .. } | Family::Power { target, .. } => target,
        }
    }

    /// Whether `∫(1/L² − 1/L_crit²)` stays bounded (in absolute value).
    fn excess_bounded(&self, lc: f64) -> bool {
        use std::cmp::Ordering::*;
        match (self, compare_critical(self.target(), lc)) {
            (_, Less) | (_, Greater) => false,
            (Family::Power { k, .. }, Equal) => *k > 1.0,
            (_, Equal) => true,
        }
    }

    /// Whether `∫(1/L² − 1/L_crit²)` is bounded above.
    fn excess_bounded_above(&self, lc: f64) -> bool {
        compare_critical(self.target(), lc) == std::cmp::Ordering::Greater || self.excess_bounded(lc)
    }

    /// Whether the extinction integral diverges to `+∞`. The curvature and
    /// stretch terms are bounded for every family, so only `∫Dπ²(1/L² − 1/L_crit²)` matters.
    fn extinction_diverges(&self, lc: f64) -> bool {
        use std::cmp::Ordering::*;
        match (self, compare_critical(self.target(), lc)) {
            (_, Less) => true,
            (Family::Power { k, .. }, Equal) => *k <= 1.0,
            _ => false,
        }
    }

    fn witness(&self, lc: f64) -> Vec<(&'static str, f64)> {
        let mut w = vec![("target", self.target()), ("critical", lc)];
        match *self {
            Family::Exponential { epsilon, alpha, .. } => w.extend([("epsilon", epsilon), ("alpha", alpha)]),
            Family::Power { epsilon, k, .. } => w.extend([("epsilon", epsilon), ("k", k)]),
            Family::Fixed(_) => {}
        }
        w
    }

    /// `sup L̇L`, attained in closed form for the exponential family.
    fn stretch_sup(&self, samples: &[MotionState]) -> f64 {
        match *self {
            Family::Fixed(_) => 0.0,
            Family::Exponential { target, epsilon, alpha } => {
                let s = epsilon.min(0.5);
                target * target * alpha * s * (1.0 - s)
            }
            Family::Power { target, epsilon, k } => {
                // `p(1−p)/(1+t)` with `p = ε(1+t)^{-k}` is decreasing once `p ≤ 1/2`
                let at0 = target * target * k * epsilon * (1.0 - epsilon);
                samples.iter().map(|s| s.l_dot * s.l).fold(at0, f64::max)
            }
        }
    }

    /// Upper bounds on `∫_T^∞ (1/L² − 1/λ²)` and `∫_T^∞ L[L̈]⁻` for target-approaching families.
    fn tails(&self, t: f64) -> (f64, f64) {
        match *self {
            Family::Fixed(_) => (0.0, 0.0),
            Family::Exponential { target, epsilon, alpha } => {
                let s = epsilon * (-alpha * t).exp();
                let l2 = target * target;
                (2.0 * s / (alpha * l2 * (1.0 - s).powi(2)), l2 * alpha * s)
            }
            Family::Power { target, epsilon, k } => {
                let s = epsilon * (1.0 + t).powf(-k);
                let l2 = target * target;
                let i1 = if k > 1.0 {
                    2.0 * epsilon * (1.0 + t).powf(1.0 - k) / (l2 * (1.0 - s).powi(2) * (k - 1.0))
                } else {
                    f64::INFINITY
                };
                (i1, l2 * k * s / (1.0 + t))
            }
        }
    }
}

fn drift_checks(c: f64, rule_p: Rule, rule_e: Rule, length_bounded: Status) -> [ConditionCheck; 2] {
    // L > 0 always, so cL is bounded on the side where c·L ≤ 0.
    let above = if c <= 0.0 { Status::Satisfied } else { length_bounded };
    let below = if c >= 0.0 { Status::Satisfied } else { length_bounded };
    [
        ConditionCheck::new(Condition::DriftLengthBoundedAbove, rule_p, above, vec![("c", c)]),
        ConditionCheck::new(Condition::DriftLengthBoundedBelow, rule_e, below, vec![("c", c)]),
    ]
}

/// Condition checks of the persistence and extinction rules for the length
/// motion `lm` drifting at speed `c`, against `crit`.
fn linear_checks(
    lm: &DomainMotion,
    c: f64,
    crit: &CriticalLength,
    rule_p: Rule,
    rule_e: Rule,
    opts: &ClassifyOptions,
) -> Vec<ConditionCheck> {
    let lc = crit.value;
    let mut out = Vec::new();
    if let Some(fam) = family(lm) {
        let w = fam.witness(lc);
        let sat = || Status::Satisfied;
        out.push(ConditionCheck::new(Condition::LengthBoundedAbove, rule_p, sat(), w.clone()));
        out.push(ConditionCheck::new(Condition::StretchBoundedAbove, rule_p, sat(), w.clone()));
        out.push(ConditionCheck::new(
            Condition::ExcessBoundedAbove,
            rule_p,
            Status::from_bool(fam.excess_bounded_above(lc)),
            w.clone(),
        ));
        out.push(ConditionCheck::new(Condition::ConcavityIntegrable, rule_p, sat(), w.clone()));
        out.push(ConditionCheck::new(Condition::StretchBoundedBelow, rule_e, sat(), w.clone()));
        out.push(ConditionCheck::new(
            Condition::ExtinctionIntegralDiverges,
            rule_e,
            Status::from_bool(fam.extinction_diverges(lc)),
            w,
        ));
        if c != 0.0 {
            out.extend(drift_checks(c, rule_p, rule_e, Status::Satisfied));
        }
        return out;
    }

    let o = &opts.surrogate;
    let samples = match Samples::new(lm, crit, opts) {
        Ok(s) => s,
        Err(_) => {
            // the motion could not be sampled over the surrogate horizon
            for (cond, rule) in [
                (Condition::LengthBoundedAbove, rule_p),
                (Condition::ExtinctionIntegralDiverges, rule_e),
            ] {
                out.push(ConditionCheck::new(cond, rule, Status::Undetermined, vec![]));
            }
            return out;
        }
    };
    let (ad_half, ad_full) = samples.sups(|s, _| s.a_dot.abs());
    let stationary = ad_half == 0.0 && ad_full == 0.0;
    for rule in [rule_p, rule_e] {
        out.push(ConditionCheck::new(
            Condition::StationaryInterval,
            rule,
            Status::from_bool(stationary),
            vec![("sup_abs_a_dot", ad_full)],
        ));
    }
    let length = samples.bounded_above(Condition::LengthBoundedAbove, rule_p, o, |s, _| s.l);
    let length_status = length.status;
    out.push(length);
    out.push(samples.bounded_above(Condition::StretchBoundedAbove, rule_p, o, |s, _| s.l_dot * s.l));
    out.push(samples.bounded_above(Condition::ExcessBoundedAbove, rule_p, o, |_, l| l.inv_sq_excess));
    out.push(samples.bounded_above(Condition::ConcavityIntegrable, rule_p, o, |_, l| l.curvature_neg));
    out.push(samples.bounded_above(Condition::StretchBoundedBelow, rule_e, o, |s, _| -s.l_dot * s.l));
    out.push(samples.extinction_divergence(crit, rule_e, o));
    if c != 0.0 {
        let [above, below] = drift_checks(c, rule_p, rule_e, length_status);
        out.push(above);
        // cL bounded below needs L bounded above when c < 0; mirror of the check above
        out.push(below);
    }
    out
}

fn attach_floor(v: &mut Verdict, m: &DomainMotion, crit: &CriticalLength, opts: &ClassifyOptions) {
    if v.outcome != Outcome::Persists {
        return;
    }
    match persistence_floor(m, crit, opts.initial_b, &opts.floor) {
        Ok(f) => {
            if !f.stable {
                v.advisory.push(format!(
                    "envelope floor did not stabilize by t = {:e} (inf over half horizon {:e}, full {:e})",
                    f.t_max, f.inf_half, f.inf_full
                ));
            }
            v.floor = Some(f);
        }
        Err(e) => v.advisory.push(format!("envelope floor unavailable: {e}")),
    }
}

fn fixed_rate_advisory(v: &mut Verdict, lm: &DomainMotion, crit: &CriticalLength) {
    if let DomainMotion::Fixed { length } = lm {
        let rate = crit.f_prime_0 - crit.c * crit.c / (4.0 * crit.d) - crit.d * PI * PI / (length * length);
        v.advisory.push(format!("fixed-domain principal-mode rate f'(0) - c^2/4D - D pi^2/L^2 = {rate:e}"));
    }
}

/// Verdict for the linear problem on a stationary interval.
///
/// A drifting motion with `c = 0` is classified through its length motion;
/// one with `c ≠ 0` is outside this rule set and comes back inconclusive
/// (see [`classify_drifting`]).
pub fn classify_linear(m: &DomainMotion, crit: &CriticalLength) -> Verdict {
    classify_linear_with(m, crit, &ClassifyOptions::default())
}

pub fn classify_linear_with(m: &DomainMotion, crit: &CriticalLength, opts: &ClassifyOptions) -> Verdict {
    let c = m.drift_speed();
    let lm = m.length_motion();
    if c != 0.0 {
        let mut v = Verdict::from_checks(
            vec![ConditionCheck::new(
                Condition::StationaryInterval,
                Rule::LinearPersistence,
                Status::Violated,
                vec![("c", c)],
            )],
            &[],
        );
        v.advisory.push("interval drifts; use the drifting classification".into());
        return v;
    }
    let checks = linear_checks(lm, 0.0, crit, Rule::LinearPersistence, Rule::LinearExtinction, opts);
    let mut v = Verdict::from_checks(
        checks,
        &[(Rule::LinearPersistence, Outcome::Persists), (Rule::LinearExtinction, Outcome::Extinct)],
    );
    attach_floor(&mut v, lm, crit, opts);
    fixed_rate_advisory(&mut v, lm, crit);
    v
}

/// Verdict for the linear problem on an interval drifting at constant speed,
/// against the shifted critical length. Stationary motions reduce exactly to
/// [`classify_linear`].
pub fn classify_drifting(m: &DomainMotion, crit: &CriticalLength) -> Result<Verdict> {
    classify_drifting_with(m, crit, &ClassifyOptions::default())
}

pub fn classify_drifting_with(m: &DomainMotion, crit: &CriticalLength, opts: &ClassifyOptions) -> Result<Verdict> {
    let c = m.drift_speed();
    let shifted = crit.with_drift(c)?;
    if c == 0.0 {
        return Ok(classify_linear_with(m.length_motion(), &shifted, opts));
    }
    let lm = m.length_motion();
    let checks = linear_checks(lm, c, &shifted, Rule::DriftingPersistence, Rule::DriftingExtinction, opts);
    let mut v = Verdict::from_checks(
        checks,
        &[(Rule::DriftingPersistence, Outcome::Persists), (Rule::DriftingExtinction, Outcome::Extinct)],
    );
    attach_floor(&mut v, m, &shifted, opts);
    fixed_rate_advisory(&mut v, lm, &shifted);
    Ok(v)
}

/// The constants `m₁, m₂, M, I₁, I₂` with per-constant statuses.
fn threshold_checks(
    lm: &DomainMotion,
    crit: &CriticalLength,
    opts: &ClassifyOptions,
) -> (Vec<ConditionCheck>, Option<[f64; 5]>) {
    let rule = Rule::ThresholdPersistence;
    let lc = crit.value;
    let samples = match Samples::new(lm, crit, opts) {
        Ok(s) => s,
        Err(_) => {
            return (
                vec![ConditionCheck::new(Condition::LengthBounds, rule, Status::Undetermined, vec![])],
                None,
            )
        }
    };
    let t_max = samples.t_max();
    let last = samples.ledgers.last().unwrap();
    let mut checks = Vec::new();
    let values;
    if let Some(fam) = family(lm) {
        let m1 = samples.states[0].l;
        let m2 = fam.target();
        let stretch = fam.stretch_sup(&samples.states);
        let (tail1, tail2) = fam.tails(t_max);
        let bounded = fam.excess_bounded(lc);
        // bounded only when L ≤ λ = L_crit, so the running integral is non-decreasing
        let i1 = if bounded { last.inv_sq_excess + tail1 } else { f64::INFINITY };
        let i2 = last.curvature_neg + tail2;
        let w = fam.witness(lc);
        checks.push(ConditionCheck::new(Condition::LengthBounds, rule, Status::Satisfied, vec![("m1", m1), ("m2", m2)]));
        checks.push(ConditionCheck::new(Condition::StretchBounded, rule, Status::Satisfied, vec![("M", stretch)]));
        let mut wi = w.clone();
        wi.push(("I1", i1));
        checks.push(ConditionCheck::new(Condition::ExcessBounded, rule, Status::from_bool(bounded), wi));
        checks.push(ConditionCheck::new(Condition::ConcavityBounded, rule, Status::Satisfied, vec![("I2", i2)]));
        values = [m1, m2, stretch, i1, i2];
    } else {
        let o = &opts.surrogate;
        let (ad_half, ad_full) = samples.sups(|s, _| s.a_dot.abs());
        checks.push(ConditionCheck::new(
            Condition::StationaryInterval,
            rule,
            Status::from_bool(ad_half == 0.0 && ad_full == 0.0),
            vec![("sup_abs_a_dot", ad_full)],
        ));
        let upper = |cond, q: &dyn Fn(&MotionState, &IntegralLedger) -> f64| {
            let c = samples.bounded_above(cond, rule, o, q);
            let v = c.witness[1].1;
            (c, v)
        };
        let (c_m2, m2) = upper(Condition::LengthBounds, &|s, _| s.l);
        let (c_m1, neg_m1) = upper(Condition::LengthBounds, &|s, _| -s.l);
        let (c_m, stretch) = upper(Condition::StretchBounded, &|s, _| (s.l_dot * s.l).abs());
        let (c_i1, i1) = upper(Condition::ExcessBounded, &|_, l| l.inv_sq_excess.abs());
        let (c_i2, i2) = upper(Condition::ConcavityBounded, &|_, l| l.curvature_neg);
        let m1 = -neg_m1;
        let length_status = match (c_m1.status, c_m2.status) {
            (Status::Satisfied, Status::Satisfied) if m1 > 0.0 => Status::Satisfied,
            (Status::Violated, _) | (_, Status::Violated) => Status::Violated,
            _ => Status::Undetermined,
        };
        checks.push(ConditionCheck::new(Condition::LengthBounds, rule, length_status, vec![("m1", m1), ("m2", m2)]));
        checks.extend([c_m, c_i1, c_i2]);
        values = [m1, m2, stretch, i1, i2];
    }
    (checks, Some(values))
}

/// `limsup L ≤ L_crit`: analytic for the families, otherwise the maximum over
/// the second half of the available horizon.
fn limsup_check(lm: &DomainMotion, crit: &CriticalLength, opts: &ClassifyOptions) -> ConditionCheck {
    let rule = Rule::StrictKppExtinction;
    let lc = crit.value;
    if let Some(fam) = family(lm) {
        let ok = compare_critical(fam.target(), lc) != std::cmp::Ordering::Greater;
        return ConditionCheck::new(Condition::LimsupAtMostCritical, rule, Status::from_bool(ok), fam.witness(lc));
    }
    let t_max = opts.surrogate.t_max.min(lm.time_limit());
    let times = scan_times(t_max);
    let tail: Result<Vec<f64>> =
        times.iter().filter(|&&t| t >= 0.5 * t_max).map(|&t| lm.eval(t).map(|s| s.l)).collect();
    match tail {
        Ok(ls) => {
            let sup = ls.into_iter().fold(f64::NEG_INFINITY, f64::max);
            ConditionCheck::new(
                Condition::LimsupAtMostCritical,
                rule,
                Status::from_bool(sup <= lc * (1.0 + CRITICAL_MATCH)),
                vec![("sup_tail", sup), ("critical", lc), ("t_max", t_max)],
            )
        }
        Err(_) => ConditionCheck::new(Condition::LimsupAtMostCritical, rule, Status::Undetermined, vec![]),
    }
}

/// Verdict for a KPP reaction term.
///
/// Rules are tried in order: extinction through the linear supersolution,
/// then the capped lower envelope (reactions linear on `[0, k₀]`), then
/// comparison with near-critical steady states (strictly sublinear
/// reactions). The last two apply to stationary intervals only. A linear
/// reaction is delegated to the linear rules.
pub fn classify_nonlinear(m: &DomainMotion, crit: &CriticalLength, r: &ReactionTerm) -> Result<Verdict> {
    classify_nonlinear_with(m, crit, r, &ClassifyOptions::default())
}

pub fn classify_nonlinear_with(
    m: &DomainMotion,
    crit: &CriticalLength,
    r: &ReactionTerm,
    opts: &ClassifyOptions,
) -> Result<Verdict> {
    if r.is_linear() {
        return classify_drifting_with(m, crit, opts);
    }
    let c = m.drift_speed();
    let shifted = crit.with_drift(c)?;
    let lm = m.length_motion();
    let kpp = r.validate_kpp();
    let kpp_status = Status::from_bool(kpp.passed());
    let failed: Vec<(&'static str, f64)> = kpp
        .checks
        .iter()
        .filter_map(|ch| ch.witness.map(|(k, _)| ("failing_k", k)))
        .collect();

    let mut checks = Vec::new();
    let linear_rules = if c == 0.0 {
        (Rule::LinearPersistence, Rule::LinearExtinction)
    } else {
        (Rule::DriftingPersistence, Rule::DriftingExtinction)
    };
    for ch in linear_checks(lm, c, &shifted, linear_rules.0, linear_rules.1, opts) {
        if ch.rule == linear_rules.1 {
            checks.push(ch.with_rule(Rule::KppExtinction));
        }
    }
    for rule in [Rule::KppExtinction, Rule::ThresholdPersistence, Rule::StrictKppExtinction] {
        checks.push(ConditionCheck::new(Condition::KppStructure, rule, kpp_status, failed.clone()));
    }

    let mut threshold = None;
    let stationary = Status::from_bool(c == 0.0);
    let k0 = r.linear_range();
    checks.push(ConditionCheck::new(
        Condition::LinearNearZero,
        Rule::ThresholdPersistence,
        Status::from_bool(k0.is_some()),
        k0.map(|k| vec![("k0", k)]).unwrap_or_default(),
    ));
    if let (Some(k0), 0.0) = (k0, c) {
        let (tc, values) = threshold_checks(lm, &shifted, opts);
        let all_ok = tc.iter().all(|x| x.status == Status::Satisfied);
        checks.extend(tc);
        if let (true, Some([m1, m2, stretch, i1, i2])) = (all_ok, values) {
            let d = shifted.d;
            let l0 = lm.eval(0.0)?.l;
            let dpi2 = d * PI * PI;
            let cap = k0 * (m1 / l0).sqrt() * (-dpi2 * i1 - stretch / (4.0 * d)).exp();
            let b_hat = opts.initial_b.min(cap);
            let bound = b_hat * (l0 / m2).sqrt() * (-dpi2 * i1 - i2 / (4.0 * d) - stretch / (4.0 * d)).exp();
            threshold = Some(ThresholdConstants {
                k0,
                m1,
                m2,
                stretch,
                i1,
                i2,
                b_init: opts.initial_b,
                b_hat,
                bound,
            });
        }
    } else {
        checks.push(ConditionCheck::new(Condition::StationaryInterval, Rule::ThresholdPersistence, stationary, vec![("c", c)]));
    }

    checks.push(ConditionCheck::new(
        Condition::StrictNearZero,
        Rule::StrictKppExtinction,
        Status::from_bool(r.is_strict_near_zero()),
        vec![],
    ));
    checks.push(ConditionCheck::new(Condition::StationaryInterval, Rule::StrictKppExtinction, stationary, vec![("c", c)]));
    checks.push(limsup_check(lm, &shifted, opts));

    let mut v = Verdict::from_checks(
        checks,
        &[
            (Rule::KppExtinction, Outcome::Extinct),
            (Rule::ThresholdPersistence, Outcome::Persists),
            (Rule::StrictKppExtinction, Outcome::Extinct),
        ],
    );
    v.threshold = threshold;
    if let (Some(t), Outcome::Persists) = (&threshold, v.outcome) {
        v.floor = Some(PersistenceFloor { value: t.bound, inf_half: t.bound, inf_full: t.bound, stable: true, t_max: f64::INFINITY });
    }
    if v.outcome == Outcome::Inconclusive {
        if let DomainMotion::Fixed { length } = lm {
            if *length > shifted.value && matches!(r.kind, ReactionKind::Logistic | ReactionKind::PiecewiseLinearKpp { .. } | ReactionKind::Custom { .. }) {
                v.advisory.push(format!(
                    "fixed length {length:e} exceeds the critical length {:e}: a positive steady state exists",
                    shifted.value
                ));
            }
        }
    }
    Ok(v)
}

/// Dispatch on reaction kind and drift.
pub fn classify(m: &DomainMotion, crit: &CriticalLength, r: &ReactionTerm, opts: &ClassifyOptions) -> Result<Verdict> {
    if r.is_linear() {
        classify_drifting_with(m, crit, opts)
    } else {
        classify_nonlinear_with(m, crit, r, opts)
    }
}
