//! Characteristic distribution `p`, Weyl distribution `q`, Fourier
//! coefficients of `p`, and the statistic `eta = E_{x~q} |<psi|W_x|psi>|^2`.
//!
//! Tables are dense over all `4^n` Weyl indices and use the layout of
//! [`WeylIndex`]. Every transform goes through the single unnormalized kernel
//! [`wht_in_place`]; the scaling applied after each call is spelled out next
//! to it.

mod wht;

pub use wht::wht_in_place;

use std::fmt;
use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits;
use crate::state::StateVector;
use crate::weyl::{weyl_expectation, WeylIndex};

/// Entries in `[-CLAMP_TOLERANCE, 0)` are roundoff and are set to zero.
pub const CLAMP_TOLERANCE: f64 = 1e-12;
/// Allowed deviation of a probability table's total mass from one.
pub const SUM_TOLERANCE: f64 = 1e-9;
/// Required agreement between the independent eta computations.
pub const ETA_AGREEMENT: f64 = 1e-9;
/// The direct eta path costs `8^n`; above this it is skipped.
pub const DIRECT_PATH_MAX_QUBITS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    Characteristic,
    Weyl,
    Fourier,
}

impl TableKind {
    pub fn name(self) -> &'static str {
        match self {
            TableKind::Characteristic => "characteristic",
            TableKind::Weyl => "weyl",
            TableKind::Fourier => "fourier",
        }
    }

    fn is_probability(self) -> bool {
        !matches!(self, TableKind::Fourier)
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionTable {
    n: usize,
    kind: TableKind,
    values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableSummary {
    pub kind: TableKind,
    pub sum: f64,
    pub max: f64,
    /// Entries above `1e-15`.
    pub support: usize,
    pub at_identity: f64,
}

impl DistributionTable {
    /// Build a table from raw values. Probability kinds are clamped and must
    /// be normalized.
    pub fn from_values(n: usize, kind: TableKind, mut values: Vec<f64>) -> Result<Self> {
        if n == 0 || n >= 32 {
            return Err(Error::InvalidQubitCount(n));
        }
        if values.len() != 1usize << (2 * n) {
            return Err(Error::InvalidParameter(format!(
                "table for {n} qubits needs {} entries, got {}",
                1usize << (2 * n),
                values.len()
            )));
        }
        if kind.is_probability() {
            clamp_roundoff(&mut values);
            if let Some(v) = values.iter().find(|v| !(**v >= 0.0)) {
                return Err(Error::InvalidParameter(format!("negative or NaN probability {v}")));
            }
        }
        let t = Self { n, kind, values };
        if kind.is_probability() {
            t.check_normalized()?;
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, x: WeylIndex) -> f64 {
        self.values[x.bits() as usize]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn summary(&self) -> TableSummary {
        TableSummary {
            kind: self.kind,
            sum: self.sum(),
            max: self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            support: self.values.iter().filter(|v| **v > 1e-15).count(),
            at_identity: self.values[0],
        }
    }

    pub(crate) fn expect_kind(&self, expected: TableKind) -> Result<()> {
        if self.kind != expected {
            return Err(Error::WrongTableKind { expected: expected.name(), found: self.kind.name() });
        }
        Ok(())
    }

    pub(crate) fn check_normalized(&self) -> Result<()> {
        let sum = self.sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::UnnormalizedTable { sum });
        }
        Ok(())
    }

    /// CSV with header `index,p_value`, one row per Weyl index.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "index,p_value")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{i},{v:?}")?;
        }
        Ok(())
    }
}

fn clamp_roundoff(values: &mut [f64]) {
    for v in values.iter_mut().filter(|v| **v < 0.0 && **v >= -CLAMP_TOLERANCE) {
        *v = 0.0;
    }
}

fn finish_probability(n: usize, kind: TableKind, mut values: Vec<f64>) -> Result<DistributionTable> {
    clamp_roundoff(&mut values);
    let t = DistributionTable { n, kind, values };
    t.check_normalized()?;
    Ok(t)
}

/// `p(x) = 2^{-n} <psi|W_x|psi>^2`, one expectation value per index (`O(8^n)`).
pub fn characteristic_table(state: &StateVector) -> Result<DistributionTable> {
    let n = state.n();
    limits::check_table("characteristic table", n)?;
    let scale = 0.5f64.powi(n as i32);
    let values = (0..1u64 << (2 * n))
        .into_par_iter()
        .map(|x| {
            let e = weyl_expectation(state, WeylIndex(x)).expect("index in range");
            scale * e * e
        })
        .collect();
    finish_probability(n, TableKind::Characteristic, values)
}

/// Same table as [`characteristic_table`] in `O(n 4^n)`.
///
/// For each shift `v`, `<psi|W_{(v,w)}|psi> = i^{v·w} sum_x conj(c_{x^v}) c_x (-1)^{w·x}`,
/// so one WHT of `h_v(x) = conj(c_{x^v}) c_x` gives the whole row `w`. The
/// phase drops out of the modulus.
pub fn characteristic_table_fast(state: &StateVector) -> Result<DistributionTable> {
    let n = state.n();
    limits::check_table("characteristic table", n)?;
    let dim = 1usize << n;
    let scale = 0.5f64.powi(n as i32);
    let amps = state.amplitudes();
    let mut values = vec![0.0f64; dim * dim];
    values.par_chunks_mut(dim).enumerate().for_each_init(
        || vec![Complex64::new(0.0, 0.0); dim],
        |h, (v, row)| {
            for (x, hx) in h.iter_mut().enumerate() {
                *hx = amps[x ^ v].conj() * amps[x];
            }
            wht_in_place(h);
            // |H(w)|^2 is 2^n p(v, w).
            for (out, hw) in row.iter_mut().zip(h.iter()) {
                *out = scale * hw.norm_sqr();
            }
        },
    );
    finish_probability(n, TableKind::Characteristic, values)
}

/// `q(x) = sum_y p(y) p(x ^ y)`, via WHT -> square -> WHT.
pub fn weyl_distribution(p: &DistributionTable) -> Result<DistributionTable> {
    p.expect_kind(TableKind::Characteristic)?;
    let mut t = p.values.clone();
    wht_in_place(&mut t);
    t.iter_mut().for_each(|v| *v *= *v);
    wht_in_place(&mut t);
    // WHT∘WHT = 4^n, so divide once.
    let scale = 0.25f64.powi(p.n as i32);
    t.iter_mut().for_each(|v| *v *= scale);
    finish_probability(p.n, TableKind::Weyl, t)
}

/// `p_hat(x) = 4^{-n} sum_y p(y) (-1)^{x·y}`.
pub fn fourier_table(p: &DistributionTable) -> Result<DistributionTable> {
    p.expect_kind(TableKind::Characteristic)?;
    let mut t = p.values.clone();
    wht_in_place(&mut t);
    let scale = 0.25f64.powi(p.n as i32);
    t.iter_mut().for_each(|v| *v *= scale);
    Ok(DistributionTable { n: p.n, kind: TableKind::Fourier, values: t })
}

/// `2^n sum_x p(x) q(x)`.
pub fn eta_from_tables(p: &DistributionTable, q: &DistributionTable) -> Result<f64> {
    p.expect_kind(TableKind::Characteristic)?;
    q.expect_kind(TableKind::Weyl)?;
    if p.n != q.n {
        return Err(Error::DimensionMismatch { expected: p.n, found: q.n });
    }
    let s: f64 = p.values.iter().zip(&q.values).map(|(a, b)| a * b).sum();
    Ok(s * 2f64.powi(p.n as i32))
}

/// `32^n sum_x p_hat(x)^3`.
pub fn eta_from_fourier(p_hat: &DistributionTable) -> Result<f64> {
    p_hat.expect_kind(TableKind::Fourier)?;
    let s: f64 = p_hat.values.iter().map(|v| v * v * v).sum();
    Ok(s * 32f64.powi(p_hat.n as i32))
}

/// The three independent evaluations of eta.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtaPaths {
    /// `2^n sum p q`.
    pub pairwise: f64,
    /// `32^n sum p_hat^3`.
    pub fourier: f64,
    /// `sum_x q(x) <psi|W_x|psi>^2` with each expectation evaluated directly;
    /// `None` above [`DIRECT_PATH_MAX_QUBITS`].
    pub direct: Option<f64>,
}

impl EtaPaths {
    pub fn max_disagreement(&self) -> f64 {
        let mut vals = vec![self.pairwise, self.fourier];
        vals.extend(self.direct);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        hi - lo
    }
}

/// All tables plus all eta paths for one state.
#[derive(Debug, Clone)]
pub struct Spectra {
    pub p: DistributionTable,
    pub q: DistributionTable,
    pub p_hat: DistributionTable,
    pub eta: EtaPaths,
}

pub fn spectra(state: &StateVector) -> Result<Spectra> {
    let p = characteristic_table_fast(state)?;
    let q = weyl_distribution(&p)?;
    let p_hat = fourier_table(&p)?;
    let pairwise = eta_from_tables(&p, &q)?;
    let fourier = eta_from_fourier(&p_hat)?;
    let direct = if state.n() <= DIRECT_PATH_MAX_QUBITS {
        let mut acc = 0.0;
        for (x, qx) in q.values.iter().enumerate() {
            if *qx != 0.0 {
                let e = weyl_expectation(state, WeylIndex(x as u64))?;
                acc += qx * e * e;
            }
        }
        Some(acc)
    } else {
        None
    };
    Ok(Spectra { p, q, p_hat, eta: EtaPaths { pairwise, fourier, direct } })
}

/// Eta by every available path.
pub fn eta_paths(state: &StateVector) -> Result<EtaPaths> {
    Ok(spectra(state)?.eta)
}

/// Eta from the `p·q` path after checking the other paths agree within
/// [`ETA_AGREEMENT`].
pub fn eta_exact(state: &StateVector) -> Result<f64> {
    let paths = eta_paths(state)?;
    let gap = paths.max_disagreement();
    if !(gap <= ETA_AGREEMENT) {
        return Err(Error::PathDisagreement { detail: format!("{paths:?} (spread {gap:e})") });
    }
    Ok(paths.pairwise)
}

/// `(eta, |c_0|^12)`; the first is never below the second.
pub fn min_c0_bound_check(state: &StateVector) -> Result<(f64, f64)> {
    let eta = eta_exact(state)?;
    let c0 = state.amplitudes()[0].norm_sqr();
    Ok((eta, c0.powi(6)))
}
