//! Scenario configuration (TOML).
//!
//! Every key has a default except the parameters a motion family needs
//! (`epsilon` with `alpha` or `k`, or `table`). [`Config::resolved`] fills in all defaults so the manifest
//! can record exactly what was run.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use rd_interval::classifier::ClassifyOptions;
use rd_interval::steady::ShootingOptions;
use rd_interval::{CriticalLength, DomainMotion, InitialProfile, ReactionTerm, Scenario};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub scenario: ScenarioSection,
    #[serde(default)]
    pub motion: MotionSection,
    #[serde(default)]
    pub reaction: ReactionSection,
    #[serde(default)]
    pub initial: InitialSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classify: Option<ClassifySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub envelope: Option<EnvelopeSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steady: Option<SteadySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    #[serde(rename = "D", skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    #[default]
    Fixed,
    Exponential,
    Power,
    Tabulated,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotionSection {
    pub family: Family,
    /// Length of a fixed interval (defaults to `L_crit`).
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    /// Target length of the approach families (defaults to the critical length).
    #[serde(rename = "L_crit", skip_serializing_if = "Option::is_none")]
    pub l_crit: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(rename = "A0", skip_serializing_if = "Option::is_none")]
    pub a0: Option<f64>,
    /// Two-column CSV `t,L`, relative to the config file.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReactionKind {
    #[default]
    Linear,
    Logistic,
    PiecewiseLinear,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReactionSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<ReactionKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k0: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    #[default]
    Sine,
    Bump,
    Table,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<InitialKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub height: Option<f64>,
    /// Two-column CSV `xi,u`, relative to the config file.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub cells: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outputs: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifySection {
    /// Sandwich constant `b` of the initial data; derived from it when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_b: Option<f64>,
    /// Horizon of the numerical surrogate for tabulated motions.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvelopeSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    /// Time at which the sandwich is taken; the solver is run up to it when
    /// `a`, `b` are not given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sandwich_from_time: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SteadySection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lengths: Option<Vec<f64>>,
    /// Relative excess over the critical length: `L = L_crit (1 + ε)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profiles: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParameter {
    #[serde(rename = "L")]
    L,
    #[serde(rename = "L_crit")]
    LCrit,
    #[serde(rename = "epsilon")]
    Epsilon,
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "k")]
    K,
    #[serde(rename = "c")]
    C,
    #[serde(rename = "k0")]
    K0,
    #[serde(rename = "D")]
    D,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            Self::L => "L",
            Self::LCrit => "L_crit",
            Self::Epsilon => "epsilon",
            Self::Alpha => "alpha",
            Self::K => "k",
            Self::C => "c",
            Self::K0 => "k0",
            Self::D => "D",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub parameter: SweepParameter,
    #[serde(default)]
    pub values: Vec<f64>,
    /// Also simulate each point (otherwise classify only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simulate: Option<bool>,
}

fn key(key: &str, message: impl Into<String>) -> CliError {
    CliError::Key { key: key.to_string(), message: message.into() }
}

fn require(name: &str, v: Option<f64>, why: &str) -> Result<f64> {
    v.ok_or_else(|| key(name, format!("required {why}")))
}

fn reject(name: &str, v: Option<f64>, why: &str) -> Result<()> {
    match v {
        Some(_) => Err(key(name, format!("not used {why}"))),
        None => Ok(()),
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(key(name, format!("must be positive and finite, got {v}")))
    }
}

/// Read a headered or bare two-column numeric CSV.
fn read_pairs(path: &Path, what: &str) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| key(what, format!("cannot read {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| key(what, format!("{}: {e}", path.display())))?;
        if rec.len() != 2 {
            return Err(key(what, format!("{}:{}: expected 2 columns, found {}", path.display(), i + 1, rec.len())));
        }
        match (rec[0].parse::<f64>(), rec[1].parse::<f64>()) {
            (Ok(a), Ok(b)) => out.push((a, b)),
            // a header line
            _ if i == 0 => {}
            _ => return Err(key(what, format!("{}:{}: not a number pair", path.display(), i + 1))),
        }
    }
    Ok(out)
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
            e => e,
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn d(&self) -> f64 {
        self.scenario.d.unwrap_or(1.0)
    }

    pub fn slope(&self) -> f64 {
        self.reaction.slope.unwrap_or(1.0)
    }

    pub fn base_critical(&self) -> Result<CriticalLength> {
        Ok(CriticalLength::new(positive("scenario.D", self.d())?, positive("reaction.slope", self.slope())?)?)
    }

    /// Copy with every default made explicit and the parameters validated.
    pub fn resolved(&self) -> Result<Config> {
        let mut r = self.clone();
        let d = positive("scenario.D", self.d())?;
        r.scenario.d = Some(d);
        r.scenario.horizon = Some(positive("scenario.horizon", self.scenario.horizon.unwrap_or(100.0))?);

        let kind = self.reaction.kind.unwrap_or_default();
        r.reaction.kind = Some(kind);
        r.reaction.slope = Some(positive("reaction.slope", self.slope())?);
        match kind {
            ReactionKind::PiecewiseLinear => {
                positive("reaction.k0", require("reaction.k0", self.reaction.k0, "for kind = \"piecewise_linear\"")?)?;
            }
            _ => reject("reaction.k0", self.reaction.k0, "by this reaction kind")?,
        }

        let m = &self.motion;
        let c = m.c.unwrap_or(0.0);
        if !c.is_finite() {
            return Err(key("motion.c", "must be finite"));
        }
        r.motion.c = Some(c);
        r.motion.a0 = Some(m.a0.unwrap_or(0.0));
        let crit = self.base_critical()?;
        // default target: the critical length for this drift, when it exists
        let lc = crit.with_drift(c).unwrap_or(crit).value;
        let fam = format!("by family = \"{}\"", family_name(m.family));
        match m.family {
            Family::Fixed => {
                r.motion.l = Some(positive("motion.L", m.l.or(m.l_crit).unwrap_or(lc))?);
                r.motion.l_crit = None;
                for (n, v) in [("motion.epsilon", m.epsilon), ("motion.alpha", m.alpha), ("motion.k", m.k)] {
                    reject(n, v, &fam)?;
                }
            }
            Family::Exponential | Family::Power => {
                reject("motion.L", m.l, &fam)?;
                r.motion.l_crit = Some(positive("motion.L_crit", m.l_crit.unwrap_or(lc))?);
                let e = require("motion.epsilon", m.epsilon, &format!("for family = \"{}\"", family_name(m.family)))?;
                if !(e > 0.0 && e < 1.0) {
                    return Err(key("motion.epsilon", format!("must lie in (0, 1), got {e}")));
                }
                let (needed, unused) = if m.family == Family::Exponential { ("alpha", "k") } else { ("k", "alpha") };
                let (nv, uv) = if m.family == Family::Exponential { (m.alpha, m.k) } else { (m.k, m.alpha) };
                let name = format!("motion.{needed}");
                positive(&name, require(&name, nv, &format!("for family = \"{}\"", family_name(m.family)))?)?;
                reject(&format!("motion.{unused}"), uv, &fam)?;
            }
            Family::Tabulated => {
                if m.table.is_none() {
                    return Err(key("motion.table", "required for family = \"tabulated\""));
                }
                for (n, v) in [
                    ("motion.L", m.l),
                    ("motion.L_crit", m.l_crit),
                    ("motion.epsilon", m.epsilon),
                    ("motion.alpha", m.alpha),
                    ("motion.k", m.k),
                ] {
                    reject(n, v, &fam)?;
                }
            }
        }
        if m.family != Family::Tabulated && m.table.is_some() {
            return Err(key("motion.table", format!("not used {fam}")));
        }

        let ik = self.initial.kind.unwrap_or_default();
        r.initial.kind = Some(ik);
        let i = &self.initial;
        let by = |n: &str| format!("by initial kind \"{n}\"");
        match ik {
            InitialKind::Sine => {
                r.initial.amplitude = Some(i.amplitude.unwrap_or(1.0));
                for (n, v) in [("initial.center", i.center), ("initial.width", i.width), ("initial.height", i.height)] {
                    reject(n, v, &by("sine"))?;
                }
            }
            InitialKind::Bump => {
                reject("initial.amplitude", i.amplitude, &by("bump"))?;
                // placed relative to L₀, filled in by `scenario`
                r.initial.height = Some(i.height.unwrap_or(1.0));
            }
            InitialKind::Table => {
                if i.table.is_none() {
                    return Err(key("initial.table", "required for kind = \"table\""));
                }
                for (n, v) in [
                    ("initial.amplitude", i.amplitude),
                    ("initial.center", i.center),
                    ("initial.width", i.width),
                    ("initial.height", i.height),
                ] {
                    reject(n, v, &by("table"))?;
                }
            }
        }
        if ik != InitialKind::Table && i.table.is_some() {
            return Err(key("initial.table", "only used by kind = \"table\""));
        }

        r.grid.cells = Some(self.grid.cells.unwrap_or(256));
        r.grid.dt = Some(positive("grid.dt", self.grid.dt.unwrap_or(1e-3))?);
        r.grid.outputs = Some(self.grid.outputs.unwrap_or(200));
        let cells = r.grid.cells.unwrap();
        if cells < 16 || !cells.is_multiple_of(2) {
            return Err(key("grid.N", format!("must be even and at least 16, got {cells}")));
        }
        if r.grid.outputs == Some(0) {
            return Err(key("grid.outputs", "must be at least 1"));
        }

        if let Some(cl) = &mut r.classify {
            if let Some(b) = cl.initial_b {
                positive("classify.initial_b", b)?;
            }
            cl.t_max = Some(positive("classify.t_max", cl.t_max.unwrap_or(1e4))?);
        }
        if let Some(e) = &mut r.envelope {
            match (e.a, e.b) {
                (Some(a), Some(b)) => {
                    positive("envelope.b", b)?;
                    if a < b {
                        return Err(key("envelope.a", format!("must be at least envelope.b = {b}, got {a}")));
                    }
                }
                (None, None) => {}
                _ => return Err(key("envelope", "give both a and b, or neither")),
            }
            let t0 = e.sandwich_from_time.unwrap_or(0.0);
            if !(t0 >= 0.0 && t0 < r.scenario.horizon.unwrap()) {
                return Err(key("envelope.sandwich_from_time", format!("must lie in [0, horizon), got {t0}")));
            }
            e.sandwich_from_time = Some(t0);
        }
        if let Some(s) = &mut r.steady {
            if s.lengths.is_some() == s.epsilons.is_some() {
                return Err(key("steady", "give exactly one of lengths or epsilons"));
            }
            for &l in s.lengths.iter().flatten() {
                positive("steady.lengths", l)?;
            }
            for &e in s.epsilons.iter().flatten() {
                if !(e > -1.0 && e.is_finite()) {
                    return Err(key("steady.epsilons", format!("must exceed -1, got {e}")));
                }
            }
            s.profiles = Some(s.profiles.unwrap_or(false));
        }
        if let Some(s) = &mut r.sweep {
            s.simulate = Some(s.simulate.unwrap_or(true));
        }
        Ok(r)
    }

    /// The config with one parameter replaced, for a sweep point.
    pub fn with_parameter(&self, p: SweepParameter, v: f64) -> Config {
        let mut c = self.clone();
        match p {
            SweepParameter::L => c.motion.l = Some(v),
            SweepParameter::LCrit => c.motion.l_crit = Some(v),
            SweepParameter::Epsilon => c.motion.epsilon = Some(v),
            SweepParameter::Alpha => c.motion.alpha = Some(v),
            SweepParameter::K => c.motion.k = Some(v),
            SweepParameter::C => c.motion.c = Some(v),
            SweepParameter::K0 => c.reaction.k0 = Some(v),
            SweepParameter::D => c.scenario.d = Some(v),
        }
        c
    }

    /// Motion of a resolved config.
    pub fn motion(&self, base: &Path) -> Result<DomainMotion> {
        let m = &self.motion;
        let length = match m.family {
            Family::Fixed => DomainMotion::fixed(m.l.unwrap()),
            Family::Exponential => DomainMotion::exponential(m.l_crit.unwrap(), m.epsilon.unwrap(), m.alpha.unwrap()),
            Family::Power => DomainMotion::power(m.l_crit.unwrap(), m.epsilon.unwrap(), m.k.unwrap()),
            Family::Tabulated => {
                let path = base.join(m.table.as_ref().unwrap());
                DomainMotion::tabulated(&read_pairs(&path, "motion.table")?)
            }
        }
        .map_err(|e| key("motion", e.to_string()))?;
        let (c, a0) = (m.c.unwrap_or(0.0), m.a0.unwrap_or(0.0));
        if c == 0.0 && a0 == 0.0 {
            return Ok(length);
        }
        DomainMotion::drifting(a0, c, length).map_err(|e| key("motion", e.to_string()))
    }

    pub fn reaction(&self) -> Result<ReactionTerm> {
        let s = self.slope();
        let r = match self.reaction.kind.unwrap_or_default() {
            ReactionKind::Linear => ReactionTerm::linear(s),
            ReactionKind::Logistic => ReactionTerm::logistic(s),
            ReactionKind::PiecewiseLinear => ReactionTerm::piecewise_linear(s, self.reaction.k0.unwrap_or(f64::NAN)),
        };
        r.map_err(|e| key("reaction", e.to_string()))
    }

    /// Scenario of a resolved config; bump defaults are filled in from `L₀`.
    pub fn scenario(&mut self, base: &Path) -> Result<Scenario> {
        let motion = self.motion(base)?;
        let l0 = motion.eval(0.0).map_err(|e| key("motion", e.to_string()))?.l;
        let i = &mut self.initial;
        let initial = match i.kind.unwrap_or_default() {
            InitialKind::Sine => InitialProfile::SineMode { amplitude: i.amplitude.unwrap_or(1.0) },
            InitialKind::Bump => {
                let center = *i.center.get_or_insert(0.5 * l0);
                let width = *i.width.get_or_insert(0.5 * l0);
                InitialProfile::Bump { center, width, height: i.height.unwrap_or(1.0) }
            }
            InitialKind::Table => {
                InitialProfile::Tabulated(read_pairs(&base.join(i.table.as_ref().unwrap()), "initial.table")?)
            }
        };
        let s = Scenario::new(motion, self.reaction()?, self.d(), self.scenario.horizon.unwrap_or(100.0))
            .with_grid(self.grid.cells.unwrap_or(256), self.grid.dt.unwrap_or(1e-3))
            .with_outputs(self.grid.outputs.unwrap_or(200))
            .with_initial(initial);
        s.validate().map_err(|e| key("scenario", e.to_string()))?;
        Ok(s)
    }

    pub fn classify_options(&self, initial_b: f64) -> ClassifyOptions {
        let mut o = ClassifyOptions { initial_b, ..Default::default() };
        if let Some(t) = self.classify.as_ref().and_then(|c| c.t_max) {
            o.surrogate.t_max = t;
        }
        o
    }

    /// Lengths of the steady scan of a resolved config.
    pub fn steady_lengths(&self) -> Result<Vec<f64>> {
        let s = self.steady.as_ref().ok_or_else(|| key("steady", "section required by the steady command"))?;
        if let Some(l) = &s.lengths {
            return Ok(l.clone());
        }
        let lc = PI * (self.d() / self.slope()).sqrt();
        Ok(s.epsilons.iter().flatten().map(|e| lc * (1.0 + e)).collect())
    }

    pub fn shooting_options(&self) -> ShootingOptions {
        ShootingOptions { half_steps: self.steady.as_ref().and_then(|s| s.half_steps), ..Default::default() }
    }
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Fixed => "fixed",
        Family::Exponential => "exponential",
        Family::Power => "power",
        Family::Tabulated => "tabulated",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLES: [(&str, &str); 5] = [
        ("simulate", include_str!("../../../configs/simulate.toml")),
        ("envelope", include_str!("../../../configs/envelope.toml")),
        ("classify", include_str!("../../../configs/classify.toml")),
        ("steady", include_str!("../../../configs/steady.toml")),
        ("sweep", include_str!("../../../configs/sweep.toml")),
    ];

    #[test]
    fn examples_round_trip() {
        for (name, text) in EXAMPLES {
            let c = Config::from_toml(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            let again = Config::from_toml(&c.to_toml().unwrap()).unwrap();
            assert_eq!(c, again, "{name}");
            let r = c.resolved().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(Config::from_toml(&r.to_toml().unwrap()).unwrap(), r, "{name}");
        }
    }

    #[test]
    fn unknown_keys_are_rejected_with_location() {
        let err = Config::from_toml("[motion]\nfamily = \"fixed\"\nlenght = 3.0\n").unwrap_err().to_string();
        assert!(err.contains("lenght") && err.contains("line 3"), "{err}");
        let err = Config::from_toml("[motion]\nfamily = \"fixed\"\n[extra]\n").unwrap_err().to_string();
        assert!(err.contains("extra"), "{err}");
    }

    #[test]
    fn family_parameters_are_checked() {
        let c = Config::from_toml("[motion]\nfamily = \"power\"\nepsilon = 0.5\n").unwrap();
        assert!(c.resolved().unwrap_err().to_string().contains("motion.k"));
        let c = Config::from_toml("[motion]\nfamily = \"power\"\nepsilon = 0.5\nk = 2.0\nalpha = 1.0\n").unwrap();
        assert!(c.resolved().unwrap_err().to_string().contains("motion.alpha"));
        let c = Config::from_toml("[motion]\nfamily = \"exponential\"\nepsilon = 1.5\nalpha = 1.0\n").unwrap();
        assert!(c.resolved().unwrap_err().to_string().contains("motion.epsilon"));
        let c = Config::from_toml("[scenario]\nD = -1.0\n[motion]\nfamily = \"fixed\"\n").unwrap();
        assert!(c.resolved().unwrap_err().to_string().contains("scenario.D"));
    }

    #[test]
    fn defaults_are_made_explicit() {
        let r = Config::from_toml("[motion]\nfamily = \"fixed\"\n").unwrap().resolved().unwrap();
        assert_eq!(r.scenario.d, Some(1.0));
        assert_eq!(r.motion.l, Some(PI));
        assert_eq!(r.grid.cells, Some(256));
        assert_eq!(r.reaction.kind, Some(ReactionKind::Linear));
        assert_eq!(r.initial.amplitude, Some(1.0));
    }

    #[test]
    fn drifting_default_target_uses_the_shifted_length() {
        let r = Config::from_toml("[motion]\nfamily = \"exponential\"\nepsilon = 0.3\nalpha = 1.0\nc = 1.0\n")
            .unwrap()
            .resolved()
            .unwrap();
        assert!((r.motion.l_crit.unwrap() - 2.0 * PI / 3f64.sqrt()).abs() < 1e-12);
    }
}
