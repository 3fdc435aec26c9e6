use combicoh::moments::moment;
use combicoh::weights::positivity_grid;
use combicoh::{
    calibrate_constant, cb_weight_eval, positivity_scan, EndpointBehavior, Example,
    QuadratureConfig, SequenceId, WeightSpec,
};
use proptest::prelude::*;
use std::f64::consts::{E, PI};

fn continuous() -> Vec<WeightSpec> {
    Example::ALL
        .iter()
        .map(|&ex| WeightSpec::for_sequence(SequenceId::Example(ex)).unwrap())
        .collect()
}

fn ratio_spread(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

#[test]
fn every_continuous_weight_is_positive_on_the_grid() {
    for spec in continuous() {
        let grid = positivity_grid(&spec, 1000);
        assert_eq!(grid.len(), 1000);
        let min = positivity_scan(&spec, 1000).unwrap();
        assert!(min > 0.0, "{}: minimum {min}", spec.id);
    }
}

#[test]
fn origin_behaviour_matches_declared_exponent() {
    for spec in continuous() {
        let p = spec.endpoint_exponent_zero;
        let scaled = |x: f64| spec.eval(x).unwrap() * x.powf(-p);
        let (a, b) = (scaled(1e-6), scaled(1e-8));
        assert!(a.is_finite() && a > 0.0);
        assert!(ratio_spread(a, b) < 0.01, "{}: {a} vs {b}", spec.id);
    }
}

#[test]
fn upper_endpoint_behaviour_matches_descriptor() {
    for spec in continuous().into_iter().filter(|s| s.has_finite_support()) {
        let r = spec.support_upper;
        let at = |d: f64| spec.eval_with_upper_distance(r - d, d).unwrap();
        match spec.endpoint_exponent_r.unwrap() {
            EndpointBehavior::Power(q) => {
                let scaled = |d: f64| at(d) * d.powf(-q);
                assert!(
                    ratio_spread(scaled(1e-6), scaled(1e-8)) < 0.01,
                    "{}: {} vs {}",
                    spec.id,
                    scaled(1e-6),
                    scaled(1e-8)
                );
            }
            EndpointBehavior::Logarithmic => {
                let (a, b) = (at(1e-6), at(1e-8));
                assert!(a.is_finite() && b.is_finite(), "{}", spec.id);
            }
        }
    }
}

#[test]
fn trinomial_weight_has_a_finite_slope_at_its_upper_endpoint() {
    let spec = WeightSpec::for_sequence(SequenceId::MIDDLE_TRINOMIAL).unwrap();
    let at = |d: f64| spec.eval_with_upper_distance(27.0 - d, d).unwrap();
    let quotient = |d: f64| (at(d) - at(0.1 * d)) / (0.9 * d);
    // corrections to the slope shrink linearly in d: no d·ln d term
    let (s2, s4, s6) = (quotient(1e-2), quotient(1e-4), quotient(1e-6));
    assert!((s2 - s4) / (s4 - s6) > 50.0);
    assert!((s6 / 2.941_093e-4 - 1.0).abs() < 1e-4, "slope {s6}");
}

#[test]
fn calibrated_weights_have_unit_mass() {
    let cfg = QuadratureConfig::default();
    for spec in continuous() {
        let cal = calibrate_constant(&spec, cfg.calibration_tol, &cfg).unwrap();
        let mu0 = moment(&cal.spec, 0, &cfg).unwrap();
        assert!((mu0 - 1.0).abs() < 1e-8, "{}: mu0 = {mu0}", spec.id);
    }
}

#[test]
fn calibration_examples() {
    let cfg = QuadratureConfig::default();
    let at = |n: u8| {
        WeightSpec::for_sequence(SequenceId::Example(Example::from_number(n).unwrap())).unwrap()
    };
    for n in [1, 3] {
        let cal = calibrate_constant(&at(n), 1e-8, &cfg).unwrap();
        assert!(!cal.rescaled);
        assert!((cal.measured_mu0 - 1.0).abs() < 1e-10);
    }
    let cal = calibrate_constant(&at(4), 1e-8, &cfg).unwrap();
    assert!(cal.rescaled);
    assert!((cal.measured_mu0 - 2.0).abs() < 1e-8);
    assert!((cal.spec.normalization_constant - 1.0 / (2.0 * PI)).abs() < 1e-15);
}

fn brute_force_cb(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut factorial = 1.0;
    for k in 1..=200u32 {
        let kf = k as f64;
        factorial *= kf;
        if 4.0 * kf > x {
            sum += ((4.0 * kf - x) / x).sqrt() / (kf * factorial);
        }
    }
    sum / (2.0 * PI * E)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn cb_weight_matches_brute_force(x in 1e-4f64..60.0) {
        prop_assume!((x / 4.0).fract() != 0.0);
        let value = cb_weight_eval(x, 1e-14).unwrap();
        let oracle = brute_force_cb(x);
        prop_assert!(value >= 0.0);
        prop_assert!((value / oracle - 1.0).abs() < 1e-12, "x = {}: {} vs {}", x, value, oracle);
    }

    #[test]
    fn weights_are_positive_inside_the_support(index in 0usize..10, t in 0.0f64..1.0) {
        let spec = continuous().swap_remove(index);
        let x = if spec.has_finite_support() {
            spec.support_upper * (1e-6 + t * (1.0 - 2e-6))
        } else {
            1e-6 * (1e9f64).powf(t)
        };
        prop_assert!(spec.eval(x).unwrap() > 0.0);
    }
}
