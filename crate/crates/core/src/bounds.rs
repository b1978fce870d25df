//! Closed-form concentration bounds, query counts and constants.
//!
//! Probabilities are clamped to `[0, 1]`; at desk-scale parameters most of
//! these bounds are vacuous and would otherwise exceed one. Exponentials are
//! evaluated in log space before clamping so large exponents neither overflow
//! nor lose the clamp.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, LN_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sampler;
use crate::stabset;

/// Smallest `n` for which the Haar branch of the eta bound is proven.
pub const HAAR_REGIME_MIN_QUBITS: usize = 33;

fn clamp_log_probability(log_value: f64) -> f64 {
    if log_value >= 0.0 {
        1.0
    } else {
        log_value.exp()
    }
}

fn levy_exponent(dim: f64, lipschitz: f64, eps: f64) -> f64 {
    (dim * eps * eps) / (9.0 * PI.powi(3) * lipschitz * lipschitz)
}

/// `min(1, 2 exp(-N eps^2 / (9 pi^3 L^2)))` for an `L`-Lipschitz function on
/// the unit sphere of `C^N`.
pub fn levy_bound(dim: f64, lipschitz: f64, eps: f64) -> f64 {
    clamp_log_probability(LN_2 - levy_exponent(dim, lipschitz, eps))
}

/// Unclamped `2 exp(-2^n eps^2 / (36 pi^3))`: a single nonidentity Weyl
/// expectation of a Haar state exceeds `eps` in magnitude.
pub fn haar_single_weyl_bound_unclamped(n: usize, eps: f64) -> f64 {
    2.0 * (-levy_exponent(2f64.powi(n as i32), 2.0, eps)).exp()
}

pub fn haar_single_weyl_bound(n: usize, eps: f64) -> f64 {
    clamp_log_probability(LN_2 - levy_exponent(2f64.powi(n as i32), 2.0, eps))
}

/// Unclamped union bound over all `4^n` Weyl operators, `4^n` times the
/// single-operator bound.
pub fn haar_all_weyl_bound_unclamped(n: usize, eps: f64) -> f64 {
    4f64.powi(n as i32) * haar_single_weyl_bound_unclamped(n, eps)
}

/// `min(1, 2^{2n+1} exp(-2^n eps^2 / (36 pi^3)))`.
pub fn haar_all_weyl_bound(n: usize, eps: f64) -> f64 {
    let log = (2 * n + 1) as f64 * LN_2 - levy_exponent(2f64.powi(n as i32), 2.0, eps);
    clamp_log_probability(log)
}

/// `exp(-2^{n/2 - 15})`, the probability that a Haar state has
/// `eta > 2^{-n/2}`. Only proven for `n >= 33`.
pub fn haar_eta_failure_probability(n: usize) -> f64 {
    (-(2f64.powf(n as f64 / 2.0 - 15.0))).exp()
}

pub fn haar_eta_in_regime(n: usize) -> bool {
    n >= HAAR_REGIME_MIN_QUBITS
}

/// `pi sqrt(eta (1 - eta) + eps) / eps` amplitude-estimation queries for
/// additive error `eps` with probability at least `8 / pi^2`.
pub fn qae_query_count(eta: f64, eps: f64) -> f64 {
    PI * (eta * (1.0 - eta) + eps).sqrt() / eps
}

/// `4 pi k^3`, a query count sufficient for every `eta >= 1/k^6` at accuracy
/// `eta - 2/(3k^6)`.
pub fn qae_sufficient_queries(k: f64) -> f64 {
    4.0 * PI * k.powi(3)
}

/// `log2(1 + 1/sqrt 2)`: a circuit with `K log2 n` T gates has extent at most
/// `n^{alpha K}`.
pub fn pseudorandom_tgate_exponent() -> f64 {
    (1.0 + FRAC_1_SQRT_2).log2()
}

/// Smallest `c` with `cos(pi/8)^{2m} <= (5/8)^{m/c}` for all `m`.
pub fn tightness_constant() -> f64 {
    (5.0f64 / 8.0).ln() / (2.0 * (PI / 8.0).cos().ln())
}

/// `eta` of `|T>^{⊗m}`, `(5/8)^m`.
pub fn magic_eta(m: usize) -> f64 {
    0.625f64.powi(m as i32)
}

/// Stabilizer fidelity of `|T>^{⊗m}`, `cos(pi/8)^{2m}`.
pub fn magic_fidelity(m: usize) -> f64 {
    (PI / 8.0).cos().powi(2 * m as i32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Probability,
    Count,
    Constant,
    Extent,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub kind: BoundKind,
    pub inputs: BTreeMap<String, f64>,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Named parameters for [`evaluate`]; unused fields are ignored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundParams {
    pub dim: Option<f64>,
    pub lipschitz: Option<f64>,
    pub eps: Option<f64>,
    pub n: Option<usize>,
    pub eta: Option<f64>,
    pub t: Option<usize>,
    pub k: Option<f64>,
    pub delta: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub xi_v: Option<f64>,
    pub xi_w: Option<f64>,
}

pub const BOUND_NAMES: &[&str] = &[
    "levy",
    "haar-single-weyl",
    "haar-all-weyl",
    "haar-eta-failure",
    "qae-queries",
    "qae-sufficient",
    "tgate-exponent",
    "tightness",
    "extent-clifford-t",
    "extent-linear-combination",
    "required-samples",
    "threshold",
];

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidParameter(format!("missing parameter `{flag}`")))
}

fn positive(v: f64, flag: &str) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidParameter(format!("`{flag}` must be positive, got {v}")))
    }
}

/// Evaluate a bound by name.
pub fn evaluate(name: &str, p: &BoundParams) -> Result<BoundReport> {
    let mut inputs = BTreeMap::new();
    let mut note = None;
    let (kind, value) = match name {
        "levy" => {
            let dim = positive(need(p.dim, "dim")?, "dim")?;
            let l = positive(need(p.lipschitz, "lipschitz")?, "lipschitz")?;
            let eps = positive(need(p.eps, "eps")?, "eps")?;
            inputs.extend([("dim".into(), dim), ("lipschitz".into(), l), ("eps".into(), eps)]);
            (BoundKind::Probability, levy_bound(dim, l, eps))
        }
        "haar-single-weyl" | "haar-all-weyl" => {
            let n = need(p.n, "n")?;
            let eps = positive(need(p.eps, "eps")?, "eps")?;
            if n == 0 {
                return Err(Error::InvalidQubitCount(0));
            }
            inputs.extend([("n".into(), n as f64), ("eps".into(), eps)]);
            let v = if name == "haar-all-weyl" { haar_all_weyl_bound(n, eps) } else { haar_single_weyl_bound(n, eps) };
            (BoundKind::Probability, v)
        }
        "haar-eta-failure" => {
            let n = need(p.n, "n")?;
            if n == 0 {
                return Err(Error::InvalidQubitCount(0));
            }
            inputs.insert("n".into(), n as f64);
            if !haar_eta_in_regime(n) {
                note = Some(format!("n = {n} is below {HAAR_REGIME_MIN_QUBITS}; the bound is not proven here"));
            }
            (BoundKind::Probability, haar_eta_failure_probability(n))
        }
        "qae-queries" => {
            let eta = need(p.eta, "eta")?;
            if !(0.0..=1.0).contains(&eta) {
                return Err(Error::InvalidParameter(format!("`eta` must lie in [0, 1], got {eta}")));
            }
            let eps = positive(need(p.eps, "eps")?, "eps")?;
            inputs.extend([("eta".into(), eta), ("eps".into(), eps)]);
            (BoundKind::Count, qae_query_count(eta, eps))
        }
        "qae-sufficient" => {
            let k = need(p.k, "k")?;
            inputs.insert("k".into(), k);
            (BoundKind::Count, qae_sufficient_queries(positive(k, "k")?))
        }
        "tgate-exponent" => (BoundKind::Constant, pseudorandom_tgate_exponent()),
        "tightness" => (BoundKind::Constant, tightness_constant()),
        "extent-clifford-t" => {
            let t = need(p.t, "t")?;
            inputs.insert("t".into(), t as f64);
            (BoundKind::Extent, stabset::extent_upper_bound_clifford_t(t))
        }
        "extent-linear-combination" => {
            let (a, b) = (need(p.alpha, "alpha")?, need(p.beta, "beta")?);
            let (xv, xw) = (need(p.xi_v, "xi-v")?, need(p.xi_w, "xi-w")?);
            if xv < 1.0 || xw < 1.0 || a.abs() > 1.0 || b.abs() > 1.0 {
                return Err(Error::InvalidParameter("need xi >= 1 and |alpha|, |beta| <= 1".into()));
            }
            inputs.extend([("alpha".into(), a), ("beta".into(), b), ("xi_v".into(), xv), ("xi_w".into(), xw)]);
            (BoundKind::Extent, stabset::extent_linear_combination_bound(a, xv, b, xw))
        }
        "required-samples" => {
            let (k, delta) = (need(p.k, "k")?, need(p.delta, "delta")?);
            inputs.extend([("k".into(), k), ("delta".into(), delta)]);
            let m = sampler::required_samples(k, delta)?;
            note = Some(format!("{} copies of the state", sampler::copies_consumed(m)));
            (BoundKind::Count, m as f64)
        }
        "threshold" => {
            let k = need(p.k, "k")?;
            if !(k >= 1.0) {
                return Err(Error::InvalidParameter(format!("k must be >= 1, got {k}")));
            }
            inputs.insert("k".into(), k);
            (BoundKind::Constant, sampler::threshold(k))
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown bound `{other}`; expected one of {}",
                BOUND_NAMES.join(", ")
            )))
        }
    };
    Ok(BoundReport { name: name.to_string(), kind, inputs, value, note })
}
