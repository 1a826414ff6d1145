use std::f64::consts::PI;

use rd_interval::solver::{run, separable_solution, InitialProfile, Scenario};
use rd_interval::transform::{u_to_w, GaugeFactors};
use rd_interval::{DomainMotion, Field, ReactionTerm};

fn last(s: &Scenario) -> Field {
    let tr = run(s).unwrap();
    assert!(tr.is_complete(), "{:?}", tr.failure);
    tr.last().clone()
}

fn max_diff_on_coarse(coarse: &Field, fine: &Field) -> f64 {
    let stride = fine.grid.cells / coarse.grid.cells;
    coarse
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| (v - fine.values[j * stride]).abs())
        .fold(0.0, f64::max)
}

fn ratios(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| w[0] / w[1]).collect()
}

fn assert_second_order(errors: &[f64]) {
    for r in ratios(errors) {
        assert!((3.3..=4.7).contains(&r), "errors {errors:?}, ratios {:?}", ratios(errors));
    }
}

#[test]
fn spatial_order_against_separable_solution() {
    let l = 0.8 * PI;
    let t = 0.5;
    let errors: Vec<f64> = [16, 32, 64, 128]
        .iter()
        .map(|&n| {
            let s = Scenario::new(DomainMotion::fixed(l).unwrap(), ReactionTerm::linear(1.0).unwrap(), 1.0, t)
                .with_grid(n, 1e-4)
                .with_outputs(1);
            let u = last(&s);
            let exact = separable_solution(&u.grid, 1.0, 1.0, t);
            u.values.iter().zip(&exact.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        })
        .collect();
    assert_second_order(&errors);
}

fn temporal_self_convergence(motion: DomainMotion, reaction: ReactionTerm, horizon: f64) -> Vec<f64> {
    let runs: Vec<Field> = [0.02, 0.01, 0.005, 0.0025, 0.00125]
        .iter()
        .map(|&dt| {
            let s = Scenario::new(motion.clone(), reaction.clone(), 1.0, horizon)
                .with_grid(64, dt)
                .with_outputs(1)
                .with_initial(InitialProfile::SineMode { amplitude: 0.5 });
            last(&s)
        })
        .collect();
    runs.windows(2).map(|w| max_diff_on_coarse(&w[0], &w[1])).collect()
}

#[test]
fn temporal_order_linear_moving_domain() {
    let e = temporal_self_convergence(
        DomainMotion::exponential(PI, 0.3, 1.0).unwrap(),
        ReactionTerm::linear(1.0).unwrap(),
        2.0,
    );
    assert_second_order(&e);
}

#[test]
fn temporal_order_logistic() {
    let e = temporal_self_convergence(
        DomainMotion::power(PI, 0.5, 2.0).unwrap(),
        ReactionTerm::logistic(1.0).unwrap(),
        2.0,
    );
    assert_second_order(&e);
}

#[test]
fn joint_refinement_on_drifting_domain() {
    let motion = DomainMotion::drifting(0.0, 1.0, DomainMotion::exponential(4.0, 0.3, 1.0).unwrap()).unwrap();
    let runs: Vec<Field> = [(32, 0.02), (64, 0.01), (128, 0.005), (256, 0.0025)]
        .iter()
        .map(|&(n, dt)| {
            let s = Scenario::new(motion.clone(), ReactionTerm::linear(1.0).unwrap(), 1.0, 1.0)
                .with_grid(n, dt)
                .with_outputs(1);
            last(&s)
        })
        .collect();
    let e: Vec<f64> = runs.windows(2).map(|w| max_diff_on_coarse(&w[0], &w[1])).collect();
    assert_second_order(&e);
}

#[test]
fn ordered_data_stay_ordered() {
    let motion = DomainMotion::exponential(PI, 0.3, 1.0).unwrap();
    for reaction in [ReactionTerm::linear(1.0).unwrap(), ReactionTerm::logistic(1.0).unwrap()] {
        let base = Scenario::new(motion.clone(), reaction, 1.0, 10.0).with_grid(128, 5e-3).with_outputs(50);
        let low = run(&base.clone().with_initial(InitialProfile::SineMode { amplitude: 0.3 })).unwrap();
        let high = run(&base.with_initial(InitialProfile::SineMode { amplitude: 0.6 })).unwrap();
        for (a, b) in low.fields.iter().zip(&high.fields) {
            for (x, y) in a.values.iter().zip(&b.values) {
                assert!(*x <= *y + 1e-10, "t = {}: {x} > {y}", a.t);
            }
        }
    }
}

#[test]
fn bump_data_stay_non_negative() {
    let motion = DomainMotion::power(PI, 0.5, 1.0).unwrap();
    let l0 = motion.eval(0.0).unwrap().l;
    let s = Scenario::new(motion, ReactionTerm::logistic(1.0).unwrap(), 1.0, 5.0)
        .with_grid(128, 1e-3)
        .with_outputs(50)
        .with_initial(InitialProfile::Bump { center: 0.5 * l0, width: 0.4 * l0, height: 1.0 });
    let tr = run(&s).unwrap();
    for f in &tr.fields {
        assert!(f.min() >= 0.0);
    }
    // positivity becomes strict in the interior
    assert!(tr.last().values[1..tr.last().grid.cells].iter().all(|&v| v > 0.0));
}

/// On the critical fixed interval `u` keeps its shape while the gauge
/// variable decays like `e^{-f'(0)t}`.
#[test]
fn critical_interval_gauge_decay() {
    let s = Scenario::new(DomainMotion::fixed(PI).unwrap(), ReactionTerm::linear(1.0).unwrap(), 1.0, 10.0)
        .with_grid(512, 1e-3)
        .with_outputs(10);
    let tr = run(&s).unwrap();
    let u0 = &tr.fields[0];
    let crit = tr.critical;
    for (f, led) in tr.fields.iter().zip(&tr.ledgers) {
        let drift = f.values.iter().zip(&u0.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        // the discrete principal eigenvalue differs from π² by O(h²)
        assert!(drift < 1e-4, "t = {}: {drift}", f.t);
        let g = GaugeFactors::new(&s.motion, &crit, f.t, led, &f.grid).unwrap();
        let w = u_to_w(f, &g).unwrap();
        let mid = f.grid.cells / 2;
        assert!((w.values[mid] / f.values[mid] - (-f.t).exp()).abs() < 1e-12);
    }
}
