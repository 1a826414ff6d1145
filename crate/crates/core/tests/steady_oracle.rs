use std::f64::consts::PI;

use rd_interval::solver::{run, InitialProfile, Scenario};
use rd_interval::steady::{energy_residual, scan, solve_steady_with, ShootingOptions};
use rd_interval::{DomainMotion, Exec, ReactionTerm};

fn logistic() -> ReactionTerm {
    ReactionTerm::logistic(1.0).unwrap()
}

#[test]
fn amplitude_increases_with_length() {
    let lengths: Vec<f64> = (0..=40).map(|i| PI * (1.01 + 0.99 * i as f64 / 40.0)).collect();
    let out = scan(&logistic(), 1.0, &lengths, &ShootingOptions::default(), Exec::Parallel);
    let norms: Vec<f64> = out.into_iter().map(|s| s.unwrap().sup_norm()).collect();
    for w in norms.windows(2) {
        assert!(w[1] > w[0] + 1e-8, "{norms:?}");
    }
}

#[test]
fn shooting_is_fourth_order() {
    // self-convergence of the midpoint value under step halving
    let l = 2.0 * PI;
    let norms: Vec<f64> = [20, 40, 80, 160]
        .iter()
        .map(|&n| {
            let opts = ShootingOptions { half_steps: Some(n), ..Default::default() };
            solve_steady_with(&logistic(), 1.0, l, &opts).unwrap().sup_norm()
        })
        .collect();
    let diffs: Vec<f64> = norms.windows(2).map(|w| (w[0] - w[1]).abs()).collect();
    for w in diffs.windows(2) {
        let ratio = w[0] / w[1];
        assert!((10.0..=22.0).contains(&ratio), "{norms:?} {diffs:?}");
    }
}

#[test]
fn parabolic_flow_reaches_the_shooting_profile() {
    let cells = 256;
    for l in [1.5 * PI, 2.0 * PI, 4.0 * PI] {
        let opts = ShootingOptions { half_steps: Some(cells / 2 * 8), ..Default::default() };
        let st = solve_steady_with(&logistic(), 1.0, l, &opts).unwrap();
        let st = st.state().unwrap();
        let sigma = 1.0 - PI * PI / (l * l);
        let s = Scenario::new(DomainMotion::fixed(l).unwrap(), logistic(), 1.0, 30.0 / sigma)
            .with_grid(cells, 1e-2)
            .with_outputs(1)
            .with_initial(InitialProfile::SineMode { amplitude: 0.5 });
        let tr = run(&s).unwrap();
        let u = &tr.last().values;
        let diff = (0..=cells).map(|j| (u[j] - st.u[8 * j]).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-3, "L = {l}: {diff}");
    }
}

#[test]
fn energy_identity_along_the_near_critical_family() {
    let r = logistic();
    for eps in [0.4, 0.2, 0.1, 0.05] {
        let st = solve_steady_with(&r, 1.0, PI * (1.0 + eps), &ShootingOptions::default()).unwrap();
        let e = energy_residual(&st, &r).unwrap();
        assert!(e.relative_mismatch() < 1e-6, "eps = {eps}: {e:?}");
        assert!(e.lhs < e.linearized && e.lhs >= e.poincare);
    }
}
