//! Simulated Bell difference sampling and the low-complexity vs Haar
//! distinguisher.
//!
//! Bell difference sampling is simulated at the distribution level: the
//! outcome of two Bell measurements on four copies, XORed, is distributed as
//! the Weyl distribution `q`, so we draw from the exact `q` table. The
//! two-copy measurement of `W_x ⊗ W_x` has expectation `<psi|W_x|psi>^2` and is
//! drawn as a Bernoulli variable on that exact value.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng;
use crate::spectra::{characteristic_table_fast, weyl_distribution, DistributionTable, TableKind};
use crate::state::StateVector;
use crate::weyl::{weyl_expectation, WeylIndex};

/// Leading constant of the default sample count `60 k^12 ln(1/delta)`.
pub const SAMPLE_CONSTANT: f64 = 60.0;
/// Copies of the state consumed per iteration: four for Bell difference
/// sampling, two for the `W_x ⊗ W_x` measurement.
pub const COPIES_PER_ITERATION: u64 = 6;
pub const DEFAULT_ITERATION_CAP: u64 = 10_000_000;
/// Iterations per RNG substream in [`EtaEstimator::estimate`].
pub const BLOCK_SIZE: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    LowComplexity,
    HaarLike,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::LowComplexity => "LowComplexity",
            Verdict::HaarLike => "HaarLike",
        }
    }
}

/// One run of the distinguisher.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub n: usize,
    pub k: f64,
    pub delta: f64,
    pub m: u64,
    pub eta_hat: f64,
    pub threshold: f64,
    pub verdict: Verdict,
    pub seed: u64,
}

impl ExperimentReport {
    pub const CSV_HEADER: &'static str = "n,k,delta,m,eta_hat,threshold,verdict,seed";

    pub fn csv_fields(&self) -> [String; 8] {
        [
            self.n.to_string(),
            format!("{:?}", self.k),
            format!("{:?}", self.delta),
            self.m.to_string(),
            format!("{:?}", self.eta_hat),
            format!("{:?}", self.threshold),
            self.verdict.as_str().to_string(),
            self.seed.to_string(),
        ]
    }

    pub fn to_csv_row(&self) -> String {
        self.csv_fields().join(",")
    }
}

/// Decision cut `2 / (3 k^6)`.
pub fn threshold(k: f64) -> f64 {
    2.0 / (3.0 * k.powi(6))
}

/// Largest `k` covered by the sample-count analysis at `n` qubits, `(4/5) 2^{n/12}`.
pub fn regime_bound(n: usize) -> f64 {
    0.8 * 2f64.powf(n as f64 / 12.0)
}

fn check_k_delta(k: f64, delta: f64) -> Result<()> {
    if !(k >= 1.0) || !k.is_finite() {
        return Err(Error::InvalidParameter(format!("k must be >= 1, got {k}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(())
}

/// `ceil(60 k^12 ln(1/delta))`, at least one.
pub fn required_samples(k: f64, delta: f64) -> Result<u64> {
    check_k_delta(k, delta)?;
    let m = (SAMPLE_CONSTANT * k.powi(12) * (1.0 / delta).ln()).ceil();
    Ok(if m.is_finite() { (m as u64).max(1) } else { u64::MAX })
}

/// Copies of the state consumed by `m` iterations.
pub fn copies_consumed(m: u64) -> u64 {
    m.saturating_mul(COPIES_PER_ITERATION)
}

/// Repetitions for majority-vote amplification, `ceil((2/3) ln(1/delta))`, at least one.
pub fn majority_repetitions(delta: f64) -> Result<u64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(((2.0 / 3.0 * (1.0 / delta).ln()).ceil() as u64).max(1))
}

/// Inverse-CDF sampler over a Weyl-distribution table.
#[derive(Debug, Clone)]
pub struct BellDifferenceSampler {
    n: usize,
    cdf: Vec<f64>,
}

impl BellDifferenceSampler {
    pub fn new(q: &DistributionTable) -> Result<Self> {
        q.expect_kind(TableKind::Weyl)?;
        q.check_normalized()?;
        let mut acc = 0.0;
        let cdf = q
            .values()
            .iter()
            .map(|v| {
                acc += v;
                acc
            })
            .collect();
        Ok(Self { n: q.n(), cdf })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> WeylIndex {
        let total = *self.cdf.last().expect("nonempty table");
        let u = rng.random::<f64>() * total;
        let i = self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1);
        WeylIndex(i as u64)
    }
}

/// One Bell difference sample from `q`. Builds the CDF on every call; use
/// [`BellDifferenceSampler`] for repeated draws.
pub fn bell_difference_sample<R: Rng + ?Sized>(q: &DistributionTable, rng: &mut R) -> Result<WeylIndex> {
    Ok(BellDifferenceSampler::new(q)?.sample(rng))
}

/// Outcome of measuring `W_x ⊗ W_x` on two copies: `+1` with probability
/// `(1 + <psi|W_x|psi>^2) / 2`.
pub fn two_copy_weyl_measurement<R: Rng + ?Sized>(state: &StateVector, x: WeylIndex, rng: &mut R) -> Result<i8> {
    let e = weyl_expectation(state, x)?;
    let p_plus = 0.5 * (1.0 + e * e);
    Ok(if rng.random::<f64>() < p_plus { 1 } else { -1 })
}

/// Precomputed tables for repeated estimation on one state.
#[derive(Debug, Clone)]
pub struct EtaEstimator {
    state: StateVector,
    sampler: BellDifferenceSampler,
}

impl EtaEstimator {
    pub fn new(state: &StateVector) -> Result<Self> {
        let q = weyl_distribution(&characteristic_table_fast(state)?)?;
        Ok(Self { state: state.clone(), sampler: BellDifferenceSampler::new(&q)? })
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    /// Sum of the `m` measurement outcomes. Iteration block `b` draws from
    /// stream `b + 1` of `seed`, so the sum does not depend on scheduling.
    pub fn outcome_sum(&self, m: u64, seed: u64) -> Result<i64> {
        if m == 0 {
            return Err(Error::InvalidParameter("sample count must be at least 1".into()));
        }
        let blocks = m.div_ceil(BLOCK_SIZE);
        (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut r = rng::stream(seed, b + 1);
                let len = BLOCK_SIZE.min(m - b * BLOCK_SIZE);
                let mut s = 0i64;
                for _ in 0..len {
                    let x = self.sampler.sample(&mut r);
                    s += two_copy_weyl_measurement(&self.state, x, &mut r)? as i64;
                }
                Ok(s)
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))
    }

    /// Unbiased estimate of eta from `m` iterations.
    pub fn estimate(&self, m: u64, seed: u64) -> Result<f64> {
        Ok(self.outcome_sum(m, seed)? as f64 / m as f64)
    }
}

/// `eta_hat = (1/m) sum_i X_i`.
pub fn estimate_eta(state: &StateVector, m: u64, seed: u64) -> Result<f64> {
    EtaEstimator::new(state)?.estimate(m, seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistinguishOptions {
    /// Replaces the default `60 k^12 ln(1/delta)` sample count.
    pub m_override: Option<u64>,
    pub iteration_cap: u64,
}

impl Default for DistinguishOptions {
    fn default() -> Self {
        Self { m_override: None, iteration_cap: DEFAULT_ITERATION_CAP }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistinguishOutcome {
    pub report: ExperimentReport,
    pub warnings: Vec<String>,
}

/// Resolve the sample count and regime warnings without running anything.
pub fn plan(n: usize, k: f64, delta: f64, opts: &DistinguishOptions) -> Result<(u64, Vec<String>)> {
    check_k_delta(k, delta)?;
    let m = match opts.m_override {
        Some(0) => return Err(Error::InvalidParameter("m_override must be at least 1".into())),
        Some(m) => m,
        None => {
            let m = required_samples(k, delta)?;
            if m > opts.iteration_cap {
                return Err(Error::IterationCap { m, cap: opts.iteration_cap });
            }
            m
        }
    };
    let mut warnings = Vec::new();
    if k > regime_bound(n) {
        warnings.push(format!(
            "k = {k} exceeds (4/5) 2^(n/12) = {:.4} at n = {n}; the sample-count guarantee does not apply",
            regime_bound(n)
        ));
    }
    Ok((m, warnings))
}

/// Run the distinguisher with a prepared estimator.
pub fn distinguish_with(
    estimator: &EtaEstimator,
    k: f64,
    delta: f64,
    seed: u64,
    opts: &DistinguishOptions,
) -> Result<DistinguishOutcome> {
    let n = estimator.state.n();
    let (m, warnings) = plan(n, k, delta, opts)?;
    let eta_hat = estimator.estimate(m, seed)?;
    let threshold = threshold(k);
    let verdict = if eta_hat >= threshold { Verdict::LowComplexity } else { Verdict::HaarLike };
    Ok(DistinguishOutcome {
        report: ExperimentReport { n, k, delta, m, eta_hat, threshold, verdict, seed },
        warnings,
    })
}

/// Estimate eta and compare against `2 / (3 k^6)`.
pub fn distinguish(
    state: &StateVector,
    k: f64,
    delta: f64,
    seed: u64,
    opts: &DistinguishOptions,
) -> Result<DistinguishOutcome> {
    // validate before building tables
    plan(state.n(), k, delta, opts)?;
    distinguish_with(&EtaEstimator::new(state)?, k, delta, seed, opts)
}
