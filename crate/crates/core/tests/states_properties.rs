use combicoh::sequences::step_ratio;
use combicoh::{
    normalization, overlap, radius_of_convergence, seq_value, state_coefficients, ExactValue,
    SequenceId, StateParams,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn state_ids() -> Vec<SequenceId> {
    SequenceId::all()
        .into_iter()
        .filter(|id| !matches!(id, SequenceId::Bell | SequenceId::Product(_)))
        .collect()
}

/// Largest |z|² sampled: 90% of R, capped so N stays moderate.
fn x_limit(id: SequenceId) -> f64 {
    (0.9 * radius_of_convergence(id).unwrap()).min(20.0)
}

fn random_label(rng: &mut ChaCha8Rng, limit: f64) -> Complex64 {
    let r = (rng.gen::<f64>() * limit).sqrt();
    Complex64::from_polar(r, rng.gen::<f64>() * std::f64::consts::TAU)
}

#[test]
fn overlaps_obey_cauchy_schwarz_and_hermitian_symmetry() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for id in state_ids() {
        let limit = x_limit(id);
        for _ in 0..500 {
            let z = random_label(&mut rng, limit);
            let w = random_label(&mut rng, limit);
            let zw = overlap(id, z, w, 1e-14).unwrap();
            let wz = overlap(id, w, z, 1e-14).unwrap();
            assert!(zw.norm() < 1.0, "{id}: |<z|w>| = {}", zw.norm());
            assert!((zw - wz.conj()).norm() <= 1e-14, "{id}: asymmetric");
            let zz = overlap(id, z, z, 1e-14).unwrap();
            assert!((zz - 1.0).norm() <= 1e-12, "{id}: <z|z> = {zz}");
        }
    }
}

#[test]
fn normalization_is_increasing() {
    for id in state_ids() {
        let limit = x_limit(id);
        let mut previous = 0.0;
        for i in 0..50 {
            let x = limit * i as f64 / 49.0;
            let v = normalization(id, x, 1e-13).unwrap();
            assert!(v >= 1.0);
            assert!(v > previous, "{id} at {x}");
            previous = v;
        }
    }
}

fn exact_partial_sum(id: SequenceId, x: &BigRational) -> f64 {
    // Σ xⁿ/c(n) in exact arithmetic, stopping once a term is 1e-25 of the sum
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    let tiny = BigRational::new(BigInt::one(), BigInt::from(10).pow(25));
    for n in 1..100_000 {
        sum += &term;
        if term < &sum * &tiny && n > 2 {
            break;
        }
        term = term * x / step_ratio(id, n).unwrap();
    }
    ExactValue::new(sum).to_f64()
}

#[test]
fn normalization_matches_exact_partial_sums() {
    let tol = 1e-12;
    for id in state_ids() {
        let limit = x_limit(id);
        for k in 1..=10 {
            // x = k·limit/10 rounded to a multiple of 1/64
            let numerator = ((k as f64) * limit / 10.0 * 64.0).floor() as i64;
            let x = BigRational::new(BigInt::from(numerator), BigInt::from(64));
            let xf = numerator as f64 / 64.0;
            let exact = exact_partial_sum(id, &x);
            let got = normalization(id, xf, tol).unwrap();
            assert!(
                (got / exact - 1.0).abs() <= 2.0 * tol,
                "{id} at {xf}: {got} vs {exact}"
            );
        }
    }
}

#[test]
fn normalization_closed_form() {
    let ex1 = SequenceId::Example(combicoh::Example::DoubleFactorialEven);
    for i in 0..20 {
        let x = 100.0 * i as f64 / 19.0;
        let v = normalization(ex1, x, 1e-15).unwrap();
        assert!((v / x.sqrt().cosh() - 1.0).abs() <= 1e-12, "x = {x}");
    }
}

#[test]
fn factorial_states_are_poissonian() {
    for x in [0.5f64, 1.0, 4.0] {
        let p = StateParams {
            id: SequenceId::FactorialBaseline,
            z: Complex64::new(x.sqrt(), 0.0),
            n_max: 20,
            series_tol: 1e-13,
        };
        let state = state_coefficients(&p).unwrap();
        let mut poisson = (-x).exp();
        for (n, prob) in state.probabilities().iter().enumerate().take(21) {
            if n > 0 {
                poisson *= x / n as f64;
            }
            assert!((prob - poisson).abs() <= 1e-12, "x = {x}, n = {n}");
        }
    }
}

#[test]
fn catalan_state_at_one() {
    let p = StateParams {
        id: SequenceId::CATALAN,
        z: Complex64::new(1.0, 0.0),
        n_max: 10,
        series_tol: 1e-12,
    };
    let state = state_coefficients(&p).unwrap();
    let total: f64 = state.probabilities().iter().sum();
    assert!((total - 1.0).abs() <= 1e-12);
    assert!(state.truncation_mass >= 0.0 && state.truncation_mass < 1e-12);
}

#[test]
fn catalan_overlap_matches_direct_summation() {
    let id = SequenceId::CATALAN;
    let (z, w) = (Complex64::new(0.5, 0.0), Complex64::new(-0.5, 0.0));
    let got = overlap(id, z, w, 1e-14).unwrap();
    let series = |q: f64| -> f64 {
        (0..60)
            .map(|n| q.powi(n) / seq_value(id, n as u32).to_f64())
            .sum()
    };
    let expected = series(-0.25) / series(0.25);
    assert!(got.im.abs() < 1e-15);
    assert!(got.re > -1.0 && got.re < 1.0);
    assert!((got.re - expected).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn state_probabilities_sum_to_one(index in 0usize..11, r in 0.0f64..1.0, theta in 0.0f64..6.3) {
        let id = state_ids()[index];
        let z = Complex64::from_polar((r * x_limit(id)).sqrt(), theta);
        let state = state_coefficients(&StateParams { id, z, n_max: 0, series_tol: 1e-10 }).unwrap();
        let total: f64 = state.probabilities().iter().sum();
        prop_assert!(total <= 1.0 + 1e-13);
        prop_assert!(state.truncation_mass >= 0.0 && state.truncation_mass < 1e-10);
        prop_assert!((total + state.truncation_mass - 1.0).abs() < 1e-10);
    }

    #[test]
    fn vacuum_overlap_is_inverse_root_normalization(index in 0usize..11, r in 0.0f64..1.0) {
        let id = state_ids()[index];
        let x = r * x_limit(id);
        let w = Complex64::new(x.sqrt(), 0.0);
        let got = overlap(id, Complex64::new(0.0, 0.0), w, 1e-14).unwrap();
        let expected = 1.0 / normalization(id, x, 1e-15).unwrap().sqrt();
        prop_assert!((got.re - expected).abs() < 1e-13 && got.im == 0.0);
    }
}
