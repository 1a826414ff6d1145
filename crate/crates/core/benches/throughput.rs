//! Sequential vs rayon execution of the batch entry points.
//!
//! Build with `--no-default-features` to see the fallback: both policies
//! then run on the calling thread.

use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rd_interval::envelope::{envelope_series, Sandwich};
use rd_interval::quadrature::QuadratureConfig;
use rd_interval::solver::{run_batch, Scenario};
use rd_interval::steady::{scan, ShootingOptions};
use rd_interval::{CriticalLength, DomainMotion, Exec, Grid, ReactionTerm};

const POLICIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn scenarios(c: &mut Criterion) {
    let batch: Vec<Scenario> = (0..16)
        .map(|i| {
            let k = 0.25 + 0.25 * i as f64;
            Scenario::new(DomainMotion::power(PI, 0.5, k).unwrap(), ReactionTerm::logistic(1.0).unwrap(), 1.0, 5.0)
                .with_grid(256, 1e-3)
                .with_outputs(10)
        })
        .collect();
    let mut g = c.benchmark_group("run_batch");
    g.sample_size(10);
    for (name, policy) in POLICIES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &policy, |b, &p| {
            b.iter(|| black_box(run_batch(&batch, p)))
        });
    }
    g.finish();
}

fn steady_scan(c: &mut Criterion) {
    let lengths: Vec<f64> = (0..64).map(|i| PI * (1.05 + 0.05 * i as f64)).collect();
    let r = ReactionTerm::logistic(1.0).unwrap();
    let opts = ShootingOptions::default();
    let mut g = c.benchmark_group("steady_scan");
    g.sample_size(10);
    for (name, policy) in POLICIES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &policy, |b, &p| {
            b.iter(|| black_box(scan(&r, 1.0, &lengths, &opts, p)))
        });
    }
    g.finish();
}

fn envelopes(c: &mut Criterion) {
    let m = DomainMotion::power(PI, 0.5, 1.5).unwrap();
    let crit = CriticalLength::new(1.0, 1.0).unwrap();
    let sw = Sandwich::new(1.0, 1.0, 0.0).unwrap();
    let grid = Grid::new(512, PI * 0.5).unwrap();
    let times: Vec<f64> = (0..400).map(|i| i as f64 * 2.5).collect();
    let quad = QuadratureConfig::default();
    let mut g = c.benchmark_group("envelope_series");
    for (name, policy) in POLICIES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &policy, |b, &p| {
            b.iter(|| black_box(envelope_series(&m, &crit, &sw, &times, &grid, &quad, p)))
        });
    }
    g.finish();
}

criterion_group!(benches, scenarios, steady_scan, envelopes);
criterion_main!(benches);
