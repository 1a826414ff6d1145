use std::f64::consts::PI;

use proptest::prelude::*;

use rd_interval::classifier::{classify_drifting, classify_linear, classify_nonlinear, Outcome, Status};
use rd_interval::envelope::{theorem_bounds, Sandwich};
use rd_interval::motion::{accumulate_integrals, curvature_extremes};
use rd_interval::quadrature::QuadratureConfig;
use rd_interval::{fourier_coefficient, CriticalLength, DomainMotion, Field, Grid, ReactionTerm};

fn crit() -> CriticalLength {
    CriticalLength::new(1.0, 1.0).unwrap()
}

/// Any of the analytic families, with target lengths around the critical one.
fn family() -> impl Strategy<Value = DomainMotion> {
    prop_oneof![
        (0.5f64..2.0).prop_map(|s| DomainMotion::fixed(s * PI).unwrap()),
        (0.8f64..1.2, 0.05f64..0.95, 0.1f64..3.0)
            .prop_map(|(s, e, a)| DomainMotion::exponential(s * PI, e, a).unwrap()),
        (0.8f64..1.2, 0.05f64..0.95, 0.1f64..3.0).prop_map(|(s, e, k)| DomainMotion::power(s * PI, e, k).unwrap()),
        (0.05f64..0.95, 0.1f64..3.0).prop_map(|(e, k)| DomainMotion::power(PI, e, k).unwrap()),
        (0.05f64..0.95, 0.1f64..3.0).prop_map(|(e, a)| DomainMotion::exponential(PI, e, a).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn curvature_extremes_match_dense_scan(p in -10.0f64..10.0, q in -10.0f64..10.0) {
        let (hi, lo) = curvature_extremes(p, q);
        let n = 1_000_000;
        let (mut bhi, mut blo) = (f64::NEG_INFINITY, f64::INFINITY);
        for i in 0..=n {
            let eta = i as f64 / n as f64;
            let g = eta * eta * p / 2.0 + eta * q;
            bhi = bhi.max(g);
            blo = blo.min(g);
        }
        prop_assert!((hi - bhi).abs() < 1e-9);
        prop_assert!((lo + blo).abs() < 1e-9);
    }

    #[test]
    fn stretch_integral_is_log_ratio(m in family(), t in 0.5f64..200.0) {
        let led = accumulate_integrals(&m, &crit(), t, &QuadratureConfig::default()).unwrap();
        let exact = 0.5 * (m.eval(t).unwrap().l / m.eval(0.0).unwrap().l).ln();
        prop_assert!((led.log_stretch - exact).abs() <= 1e-10 + led.error_estimate);
    }

    #[test]
    fn zero_drift_is_the_stationary_verdict(m in family(), a0 in -3.0f64..3.0) {
        let d = DomainMotion::drifting(a0, 0.0, m.clone()).unwrap();
        prop_assert_eq!(classify_drifting(&d, &crit()).unwrap(), classify_linear(&m, &crit()));
    }

    #[test]
    fn verdicts_rest_on_satisfied_conditions(m in family()) {
        let v = classify_linear(&m, &crit());
        match v.rule {
            Some(rule) => {
                prop_assert!(v.outcome != Outcome::Inconclusive);
                prop_assert!(v.conditions.iter().filter(|c| c.rule == rule).all(|c| c.status == Status::Satisfied));
            }
            None => prop_assert_eq!(v.outcome, Outcome::Inconclusive),
        }
        if v.outcome == Outcome::Persists {
            prop_assert!(v.floor.is_some());
        }
    }

    #[test]
    fn threshold_bound_is_linear_in_k0(e in 0.05f64..0.95, a in 0.2f64..3.0, k0 in 0.02f64..0.9) {
        let m = DomainMotion::exponential(PI, e, a).unwrap();
        let full = classify_nonlinear(&m, &crit(), &ReactionTerm::piecewise_linear(1.0, k0).unwrap()).unwrap();
        let half = classify_nonlinear(&m, &crit(), &ReactionTerm::piecewise_linear(1.0, 0.5 * k0).unwrap()).unwrap();
        let (t1, t2) = (full.threshold.unwrap(), half.threshold.unwrap());
        // exact only while the cap by k₀ is the binding constraint
        if t1.b_hat < t1.b_init {
            prop_assert_eq!(t2.b_hat, 0.5 * t1.b_hat);
            prop_assert_eq!(t2.bound, 0.5 * t1.bound);
        }
        prop_assert!(t1.bound <= k0);
    }

    #[test]
    fn envelopes_are_ordered(m in family(), t in 0.0f64..50.0, b in 0.1f64..1.0, spread in 1.0f64..3.0) {
        let c = crit();
        let g = Grid::new(32, m.eval(0.0).unwrap().l).unwrap();
        let s = Sandwich::new(b * spread, b, 0.0).unwrap();
        let e = theorem_bounds(&m, &c, &s, t, &g, &QuadratureConfig::default()).unwrap();
        for (lo, hi) in e.lower.iter().zip(&e.upper) {
            prop_assert!(*lo >= 0.0 && lo <= hi);
        }
        prop_assert!(e.lower_exponent <= e.upper_exponent);
    }

    #[test]
    fn fourier_coefficient_of_non_negative_data(values in proptest::collection::vec(0.0f64..2.0, 63)) {
        let g = Grid::new(64, 2.0).unwrap();
        let mut v = vec![0.0];
        v.extend(values);
        v.push(0.0);
        let f = Field::new(0.0, g, v).unwrap();
        prop_assert!(fourier_coefficient(&f) >= -1e-12);
    }
}
