use overlap_ecc::reliability::{
    masked_probability, p_i_errors, reliability_at, reliability_curve, FailureTerm,
    ReliabilityParams,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

/// Samples the number of failed bits directly and averages the masked share.
fn monte_carlo(params: &ReliabilityParams, t: f64, trials: u64, seed: u64) -> (f64, f64) {
    let p = 1.0 - (-params.lambda * t).exp();
    let dist = Binomial::new(params.n, p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..trials {
        let i = dist.sample(&mut rng) as usize;
        let x = if (1..=params.sigma()).contains(&i) {
            params.epsilon[i - 1]
        } else {
            0.0
        };
        sum += x;
        sq += x * x;
    }
    let mean = sum / trials as f64;
    let var = sq / trials as f64 - mean * mean;
    (mean, (var / trials as f64).sqrt())
}

#[test]
fn masked_probability_agrees_with_monte_carlo() {
    for (seed, code) in ["2x2", "3x3", "4x4"].into_iter().enumerate() {
        let params = ReliabilityParams::for_builtin(code, 1e-5).unwrap();
        for t in [1000.0, 10000.0] {
            let exact = masked_probability(&params, t);
            let (mean, se) = monte_carlo(&params, t, 1_000_000, seed as u64 * 10 + t as u64);
            assert!(
                (exact - mean).abs() <= 3.0 * se,
                "{code} t={t}: exact {exact} sampled {mean} +- {se}"
            );
        }
    }
}

#[test]
fn reliability_stays_in_unit_interval() {
    for code in ["2x2", "3x3", "4x4"] {
        for term in [FailureTerm::UpToSigma, FailureTerm::AnyError] {
            let p = ReliabilityParams::for_builtin(code, 1e-4)
                .unwrap()
                .with_failure_term(term);
            for j in 0..=100 {
                let r = reliability_at(&p, j as f64 * 2000.0);
                assert!((0.0..=1.0).contains(&r), "{code} {term:?} {r}");
            }
        }
    }
}

#[test]
fn more_bits_means_less_reliable() {
    let eps = vec![1.0, 1.0, 0.2, 0.1];
    let at = |n| {
        let p = ReliabilityParams::new(n, 1e-5, eps.clone())
            .unwrap()
            .with_failure_term(FailureTerm::AnyError);
        reliability_at(&p, 15000.0)
    };
    let rs: Vec<f64> = [12, 19, 28, 40, 64].into_iter().map(at).collect();
    assert!(rs.windows(2).all(|w| w[0] > w[1]), "{rs:?}");
}

#[test]
fn decreasing_in_time_when_every_error_counts() {
    let p = ReliabilityParams::for_builtin("4x4", 1e-5)
        .unwrap()
        .with_failure_term(FailureTerm::AnyError);
    let c = reliability_curve(&p, 20000.0, 500.0).unwrap();
    assert!(c.samples.windows(2).all(|w| w[0].1 >= w[1].1));
}

#[test]
fn correcting_more_helps() {
    let n = 19;
    let none = ReliabilityParams::new(n, 1e-5, vec![0.0; 8]).unwrap();
    let two =
        ReliabilityParams::new(n, 1e-5, vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
    for t in [1000.0, 10000.0, 20000.0] {
        assert!(reliability_at(&two, t) > reliability_at(&none, t));
    }
}

#[test]
fn smaller_code_lasts_longer() {
    let mttf = |code| {
        let p = ReliabilityParams::for_builtin(code, 1e-5).unwrap();
        reliability_curve(&p, 20000.0, 1000.0).unwrap().mttf
    };
    assert!(mttf("2x2") > mttf("3x3"));
    assert!(mttf("3x3") > mttf("4x4"));
}

#[test]
fn probabilities_for_large_codes_stay_finite() {
    let total: f64 = (0..=1000).map(|i| p_i_errors(1000, i, 1e-5, 20000.0)).sum();
    assert!((total - 1.0).abs() < 1e-9);
}
