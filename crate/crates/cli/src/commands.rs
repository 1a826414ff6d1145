use std::path::Path;
use std::time::Instant;

use rd_interval::classifier::Outcome;
use rd_interval::envelope::{envelope_series, persistence_floor, FloorOptions};
use rd_interval::exec::{self, Exec};
use rd_interval::steady::scan;
use rd_interval::{run, CriticalLength, ObservableSeries, Sandwich, Scenario, SteadyOutcome, Trajectory};
use serde_json::{json, Value};

use crate::config::Config;
use crate::error::{CliError, Result};
use crate::output::{num, write_csv, write_json};

fn key(key: &str, message: impl Into<String>) -> CliError {
    CliError::Key { key: key.to_string(), message: message.into() }
}

fn manifest(out: &Path, command: &str, cfg: &Config, extra: Value, files: &[String], start: Instant) -> Result<()> {
    let config = serde_json::to_value(cfg).map_err(|e| key("config", e.to_string()))?;
    let mut m = json!({
        "command": command,
        "versions": {
            "rd-interval": rd_interval::VERSION,
            "rd-interval-cli": env!("CARGO_PKG_VERSION"),
        },
        "config": config,
        "files": files,
    });
    if let (Value::Object(m), Value::Object(extra)) = (&mut m, extra) {
        m.extend(extra);
    }
    m["wall_time_s"] = json!(start.elapsed().as_secs_f64());
    // the same scenario with every default explicit, ready to re-run
    crate::output::write_atomic(&out.join("resolved.toml"), cfg.to_toml()?.as_bytes())?;
    write_json(&out.join("manifest.json"), &m)
}

/// The sandwich constant `b` of the initial data, unless configured.
fn initial_b(cfg: &Config, s: &Scenario) -> Result<f64> {
    if let Some(b) = cfg.classify.as_ref().and_then(|c| c.initial_b) {
        return Ok(b);
    }
    let field = s.initial.sample(&s.grid()?)?;
    Sandwich::from_field(&field, &s.motion, &s.critical_length()?)
        .map(|sw| sw.b)
        .map_err(|e| key("classify.initial_b", format!("cannot derive it from the initial data ({e}); set it explicitly")))
}

fn write_observables(path: &Path, series: &ObservableSeries) -> Result<()> {
    let rows = (0..series.len()).map(|i| {
        [series.times[i], series.fourier1[i], series.sup_norm[i], series.floor_estimate[i]].map(num)
    });
    write_csv(path, &["t", "fourier1", "sup_norm", "floor_estimate"], rows)
}

fn write_trajectory(path: &Path, tr: &Trajectory) -> Result<()> {
    let rows = tr.fields.iter().flat_map(|f| {
        f.grid.xis().into_iter().zip(&f.values).map(move |(xi, u)| [num(f.t), num(xi), num(*u)])
    });
    write_csv(path, &["t", "xi", "u"], rows)
}

fn partial(tr: &Trajectory) -> Result<()> {
    match &tr.failure {
        Some(e) => Err(CliError::Partial { t: tr.last().t, source: e.clone() }),
        None => Ok(()),
    }
}

pub fn simulate(cfg: &Config, base: &Path, out: &Path) -> Result<()> {
    let start = Instant::now();
    let mut r = cfg.resolved()?;
    let s = r.scenario(base)?;
    let tr = run(&s)?;
    write_trajectory(&out.join("trajectory.csv"), &tr)?;
    let series = ObservableSeries::from_trajectory(&tr);
    write_observables(&out.join("observables.csv"), &series)?;

    // the persistence floor B of the envelopes, where it is defined
    let drift_ok = CriticalLength::drifting(s.d, s.reaction.slope, s.motion.drift_speed()).is_ok();
    let floor = (s.reaction.is_linear() && drift_ok)
        .then(|| Sandwich::from_field(&tr.fields[0], &s.motion, &tr.critical).ok())
        .flatten()
        .and_then(|sw| persistence_floor(&s.motion, &tr.critical, sw.b, &FloorOptions::default()).ok())
        .map(|f| json!({ "value": f.value, "stable": f.stable, "t_max": f.t_max }));

    let (_, per_output, dt) = s.schedule();
    let grid = s.grid()?;
    let extra = json!({
        "derived": {
            "L0": grid.l0,
            "critical_length": tr.critical.value,
            "grid_spacing": grid.spacing(),
            "nodes": grid.nodes(),
            "dt_used": dt,
            "steps_per_output": per_output,
            "floor_window": series.window,
            "quadrature": {
                "abs_tol": s.quadrature.abs_tol,
                "max_depth": s.quadrature.max_depth,
                "panel_width": s.quadrature.panel_width,
            },
        },
        "envelope_floor": floor,
        "clipped_values": tr.clipped,
        "failure": tr.failure.as_ref().map(|e| e.to_string()),
    });
    let files = ["trajectory.csv", "observables.csv"].map(String::from);
    manifest(out, "simulate", &r, extra, &files, start)?;
    partial(&tr)
}

pub fn envelope(cfg: &Config, base: &Path, out: &Path) -> Result<()> {
    let start = Instant::now();
    let mut cfg = cfg.clone();
    cfg.envelope.get_or_insert_with(Default::default);
    let mut r = cfg.resolved()?;
    let s = r.scenario(base)?;
    let e = r.envelope.clone().unwrap();
    let crit = s.critical_length()?;
    let grid = s.grid()?;
    let t0 = e.sandwich_from_time.unwrap_or(0.0);
    let sandwich = match (e.a, e.b) {
        (Some(a), Some(b)) => Sandwich::new(a, b, t0)?,
        _ => {
            let field = if t0 == 0.0 {
                s.initial.sample(&grid)?
            } else {
                let mut pre = s.clone();
                pre.horizon = t0;
                pre.outputs = 1;
                let tr = run(&pre)?;
                partial(&tr)?;
                tr.last().clone()
            };
            Sandwich::from_field(&field, &s.motion, &crit)
                .map_err(|e| key("envelope", format!("{e}; give envelope.a and envelope.b explicitly")))?
        }
    };
    let n = s.outputs;
    let times: Vec<f64> = (0..=n).map(|i| t0 + (s.horizon - t0) * i as f64 / n as f64).collect();
    let bounds = envelope_series(&s.motion, &crit, &sandwich, &times, &grid, &s.quadrature, Exec::Parallel)?;
    let xis = grid.xis();
    let rows = bounds.iter().flat_map(|b| {
        xis.iter().enumerate().map(move |(j, xi)| [num(b.t), num(*xi), num(b.lower[j]), num(b.upper[j])])
    });
    write_csv(&out.join("bounds.csv"), &["t", "xi", "lower", "upper"], rows)?;
    let extra = json!({
        "sandwich": { "a": sandwich.a, "b": sandwich.b, "t0": sandwich.t0 },
        "critical_length": crit.value,
    });
    manifest(out, "envelope", &r, extra, &["bounds.csv".to_string()], start)
}

pub fn classify(cfg: &Config, base: &Path, out: &Path) -> Result<Outcome> {
    let start = Instant::now();
    let mut cfg = cfg.clone();
    cfg.classify.get_or_insert_with(Default::default);
    let mut r = cfg.resolved()?;
    let s = r.scenario(base)?;
    let b = initial_b(&r, &s)?;
    r.classify.as_mut().unwrap().initial_b = Some(b);
    let v = rd_interval::classify(&s.motion, &r.base_critical()?, &s.reaction, &r.classify_options(b))?;
    let report = v.report();
    crate::output::write_atomic(&out.join("report.txt"), report.as_bytes())?;
    print!("{report}");
    let extra = json!({ "outcome": v.outcome.to_string(), "rule": v.rule.map(|r| r.id()) });
    manifest(out, "classify", &r, extra, &["report.txt".to_string()], start)?;
    Ok(v.outcome)
}

pub fn steady(cfg: &Config, out: &Path) -> Result<()> {
    let start = Instant::now();
    let r = cfg.resolved()?;
    let lengths = r.steady_lengths()?;
    let reaction = r.reaction()?;
    let results = scan(&reaction, r.d(), &lengths, &r.shooting_options(), Exec::Parallel);
    let mut rows = Vec::with_capacity(lengths.len());
    let mut files = vec!["steady.csv".to_string()];
    let profiles = r.steady.as_ref().and_then(|s| s.profiles).unwrap_or(false);
    for (i, (l, res)) in lengths.iter().zip(results).enumerate() {
        let st = res.map_err(|e| key("steady", format!("L = {l}: {e}")))?;
        rows.push([num(*l), num(st.sup_norm()), num(st.shoot_slope())]);
        if let (true, SteadyOutcome::Positive(p)) = (profiles, &st) {
            let name = format!("profile_{i:03}.csv");
            let pr = p.x.iter().zip(&p.u).map(|(x, u)| [num(*x), num(*u)]);
            write_csv(&out.join(&name), &["x", "U"], pr)?;
            files.push(name);
        }
    }
    write_csv(&out.join("steady.csv"), &["L", "sup_norm", "shoot_slope"], rows)?;
    let extra = json!({ "lengths": lengths, "critical_length": r.base_critical()?.value });
    manifest(out, "steady", &r, extra, &files, start)
}

struct Point {
    outcome: String,
    rule: String,
    bound: Option<f64>,
    observed: Option<[f64; 3]>,
}

fn sweep_point(cfg: &Config, base: &Path, out: &Path, i: usize, simulate: bool) -> Result<Point> {
    let mut r = cfg.resolved()?;
    let s = r.scenario(base)?;
    let b = initial_b(&r, &s)?;
    let v = rd_interval::classify(&s.motion, &r.base_critical()?, &s.reaction, &r.classify_options(b))?;
    let dir = out.join(format!("point_{i:03}"));
    crate::output::write_atomic(&dir.join("report.txt"), v.report().as_bytes())?;
    let observed = if simulate {
        let tr = run(&s)?;
        partial(&tr)?;
        let series = ObservableSeries::from_trajectory(&tr);
        write_observables(&dir.join("observables.csv"), &series)?;
        let last = series.len() - 1;
        Some([series.sup_norm[last] / series.peak_sup(), series.fourier1[last], series.floor_estimate[last]])
    } else {
        None
    };
    Ok(Point {
        outcome: v.outcome.to_string(),
        rule: v.rule.map_or(String::new(), |r| r.id().to_string()),
        bound: v.floor.map(|f| f.value),
        observed,
    })
}

pub fn sweep(cfg: &Config, base: &Path, out: &Path) -> Result<()> {
    let start = Instant::now();
    let sw = cfg.sweep.clone().ok_or_else(|| key("sweep", "section required by the sweep command"))?;
    let simulate = sw.simulate.unwrap_or(true);
    let points: Vec<(usize, f64)> = sw.values.iter().copied().enumerate().collect();
    let results = exec::map(Exec::Parallel, &points, |&(i, v)| {
        sweep_point(&cfg.with_parameter(sw.parameter, v), base, out, i, simulate)
    });
    let opt = |v: Option<f64>| v.map_or(String::new(), num);
    let rows = points.iter().zip(&results).map(|(&(i, v), res)| match res {
        Ok(p) => vec![
            i.to_string(),
            num(v),
            p.outcome.clone(),
            p.rule.clone(),
            opt(p.bound),
            opt(p.observed.map(|o| o[0])),
            opt(p.observed.map(|o| o[1])),
            opt(p.observed.map(|o| o[2])),
            String::new(),
        ],
        Err(e) => {
            let mut row = vec![i.to_string(), num(v), "error".to_string()];
            row.extend(std::iter::repeat_n(String::new(), 5));
            row.push(e.to_string());
            row
        }
    });
    let header = [
        "index",
        sw.parameter.name(),
        "outcome",
        "rule",
        "floor_bound",
        "sup_end_over_peak",
        "fourier1_end",
        "floor_estimate_end",
        "error",
    ];
    write_csv(&out.join("summary.csv"), &header, rows)?;
    let mut sweep_cfg = cfg.clone();
    sweep_cfg.sweep.as_mut().unwrap().simulate = Some(simulate);
    let mut files = vec!["summary.csv".to_string()];
    for ((i, _), res) in points.iter().zip(&results) {
        if res.is_ok() {
            files.push(format!("point_{i:03}/report.txt"));
            if simulate {
                files.push(format!("point_{i:03}/observables.csv"));
            }
        }
    }
    let extra = json!({ "failed_points": results.iter().filter(|r| r.is_err()).count() });
    manifest(out, "sweep", &sweep_cfg, extra, &files, start)
}
