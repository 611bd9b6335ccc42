//! Reliability over time of a codestruct protected by an overlapped code.
//!
//! Bits fail independently with rate `lambda` (failures per bit per day), so
//! after `t` days each bit has failed with probability `p = 1 - e^(-lambda t)`
//! and the number of failed bits is binomial. A decoder that corrects a
//! fraction `eps(i)` of all `i`-error patterns masks that share of the
//! `i`-error probability.
//!
//! Reliability is `r(t) = 1 - P_fail(t) + N(t)` where
//! `N(t) = sum_{i=1..sigma} P_i(t) * eps(i)`. Two readings of the failure
//! term are offered by [`FailureTerm`].

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Which error counts make up the failure term `P_fail(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureTerm {
    /// `P_fail = sum_{i=1..sigma} P_i`. Patterns with more than `sigma`
    /// errors are outside the model and do not count against reliability.
    /// This is the reading that reproduces the reference curves, so it is
    /// the default; it is only a sound bound while `P(i > sigma)` is small.
    #[default]
    UpToSigma,
    /// `P_fail = 1 - P_0`: any error is a failure unless masked, so
    /// `r = P_0 + N`. Conservative, and monotone in `t` and `n`.
    AnyError,
}

impl std::str::FromStr for FailureTerm {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "up-to-sigma" => Ok(FailureTerm::UpToSigma),
            "any-error" => Ok(FailureTerm::AnyError),
            other => invalid(format!(
                "unknown failure term {other:?} (up-to-sigma, any-error)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityParams {
    /// Codestruct bits.
    pub n: u64,
    /// Failures per bit per day.
    pub lambda: f64,
    /// `epsilon[i - 1]` is the correction rate for `i` errors, in `[0, 1]`.
    /// Its length is `sigma`.
    pub epsilon: Vec<f64>,
    pub failure_term: FailureTerm,
}

impl ReliabilityParams {
    pub fn new(n: u64, lambda: f64, epsilon: Vec<f64>) -> Result<Self> {
        if n < 1 {
            return invalid("codestruct must have at least one bit");
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return invalid(format!("lambda must be positive, got {lambda}"));
        }
        if let Some(e) = epsilon.iter().find(|e| !(0.0..=1.0).contains(*e)) {
            return invalid(format!("correction rate {e} outside [0, 1]"));
        }
        Ok(ReliabilityParams {
            n,
            lambda,
            epsilon,
            failure_term: FailureTerm::default(),
        })
    }

    /// Parameters for a built-in code using its tabulated codestruct
    /// correction rates for 1..=8 errors.
    pub fn for_builtin(code: &str, lambda: f64) -> Result<Self> {
        let cfg = crate::builtin_config(code)?;
        let eps = crate::reference::codestruct_correction_fractions(code).ok_or_else(|| {
            crate::Error::InvalidArgument(format!("no reference rates for {code}"))
        })?;
        ReliabilityParams::new(cfg.n() as u64, lambda, eps)
    }

    pub fn with_failure_term(mut self, term: FailureTerm) -> Self {
        self.failure_term = term;
        self
    }

    pub fn sigma(&self) -> usize {
        self.epsilon.len()
    }
}

/// Natural log of `C(n, i)` as a sum of logs, exact enough for any `n` that
/// fits in memory and free of overflow.
fn ln_binomial(n: u64, i: u64) -> f64 {
    let i = i.min(n - i);
    (0..i)
        .map(|j| ((n - j) as f64).ln() - ((j + 1) as f64).ln())
        .sum()
}

/// Probability of exactly `i` failed bits out of `n` after `t` days:
/// `C(n,i) (1 - e^(-lambda t))^i e^(-lambda t (n - i))`.
pub fn p_i_errors(n: u64, i: u64, lambda: f64, t: f64) -> f64 {
    if i > n {
        return 0.0;
    }
    let x = lambda * t;
    if x <= 0.0 {
        return if i == 0 { 1.0 } else { 0.0 };
    }
    // ln(1 - e^-x) computed without cancellation for small x.
    let ln_p = (-(-x).exp_m1()).ln();
    (ln_binomial(n, i) + i as f64 * ln_p - x * (n - i) as f64).exp()
}

/// Probability mass of errors that the decoder masks.
pub fn masked_probability(params: &ReliabilityParams, t: f64) -> f64 {
    params
        .epsilon
        .iter()
        .enumerate()
        .map(|(idx, eps)| p_i_errors(params.n, idx as u64 + 1, params.lambda, t) * eps)
        .sum()
}

fn failure_probability(params: &ReliabilityParams, t: f64) -> f64 {
    match params.failure_term {
        FailureTerm::AnyError => 1.0 - p_i_errors(params.n, 0, params.lambda, t),
        FailureTerm::UpToSigma => (1..=params.sigma() as u64)
            .map(|i| p_i_errors(params.n, i, params.lambda, t))
            .sum(),
    }
}

pub fn reliability_at(params: &ReliabilityParams, t: f64) -> f64 {
    let r = 1.0 - failure_probability(params, t) + masked_probability(params, t);
    r.clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityCurve {
    /// `(t in days, r(t))`.
    pub samples: Vec<(f64, f64)>,
    /// Trapezoidal integral of `r` over the sampled horizon, in days. This
    /// is a lower bound on the mean time to failure.
    pub mttf: f64,
    pub horizon: f64,
}

/// Samples `r` at `0, step, 2 step, ...` up to and including `t_max`.
pub fn reliability_curve(
    params: &ReliabilityParams,
    t_max: f64,
    step: f64,
) -> Result<ReliabilityCurve> {
    if !(step > 0.0 && step.is_finite()) {
        return invalid(format!("step must be positive, got {step}"));
    }
    if !(t_max >= 0.0 && t_max.is_finite()) {
        return invalid(format!("t_max must be non-negative, got {t_max}"));
    }
    // Integer sample indices avoid drift from repeated float addition.
    let count = (t_max / step + 1e-9).floor() as u64;
    let samples: Vec<(f64, f64)> = (0..=count)
        .map(|j| {
            let t = j as f64 * step;
            (t, reliability_at(params, t))
        })
        .collect();
    let mttf = samples.windows(2).fold(0.0, |acc, w| {
        acc + (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0
    });
    Ok(ReliabilityCurve {
        samples,
        mttf,
        horizon: count as f64 * step,
    })
}
