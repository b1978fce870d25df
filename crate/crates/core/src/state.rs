//! Dense pure states on `n` qubits.
//!
//! Amplitudes are indexed little-endian: bit `i` of the basis index is qubit
//! `i`. A [`StateVector`] is normalized to within `1e-9` by construction and
//! immutable afterwards.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::limits;

/// Norm tolerance for [`StateVector`] construction.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Norm tolerance of the amplitude file loader (without `normalize`).
pub const FILE_NORM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::BadLength(len));
    }
    Ok(len.trailing_zeros() as usize)
}

fn norm_sqr(amps: &[Complex64]) -> f64 {
    amps.iter().map(|c| c.norm_sqr()).sum()
}

impl StateVector {
    /// Wrap amplitudes that must already be normalized within [`NORM_TOLERANCE`].
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n = qubits_for_len(amps.len())?;
        limits::check_state("state vector", n)?;
        let ns = norm_sqr(&amps);
        if (ns - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr: ns });
        }
        Ok(Self { n, amps })
    }

    /// Rescale arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut amps: Vec<Complex64>) -> Result<Self> {
        let n = qubits_for_len(amps.len())?;
        limits::check_state("state vector", n)?;
        let ns = norm_sqr(&amps);
        if !(ns > 0.0) || !ns.is_finite() {
            return Err(Error::NotNormalized { norm_sqr: ns });
        }
        let s = ns.sqrt().recip();
        amps.iter_mut().for_each(|c| *c *= s);
        Ok(Self { n, amps })
    }

    /// For internal producers whose output is unitary-equivalent to a valid state.
    pub(crate) fn from_normalized_parts(n: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n);
        debug_assert!((norm_sqr(&amps) - 1.0).abs() < 1e-6);
        Self { n, amps }
    }

    /// Computational basis state `|index>`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidQubitCount(0));
        }
        limits::check_state("state vector", n)?;
        if index >> n != 0 {
            return Err(Error::InvalidParameter(format!("basis index {index} needs more than {n} qubits")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// `|0^n>`.
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    /// `|+^n>`.
    pub fn plus(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidQubitCount(0));
        }
        limits::check_state("state vector", n)?;
        let a = (0.5f64).powf(n as f64 / 2.0);
        Ok(Self { n, amps: vec![Complex64::new(a, 0.0); 1 << n] })
    }

    /// The magic state `(|0> + e^{i pi/4}|1>)/sqrt 2`.
    pub fn t_state() -> Self {
        Self {
            n: 1,
            amps: vec![
                Complex64::new(FRAC_1_SQRT_2, 0.0),
                Complex64::from_polar(FRAC_1_SQRT_2, FRAC_PI_4),
            ],
        }
    }

    /// `|T>^{⊗m}`.
    pub fn magic(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidQubitCount(0));
        }
        let t = Self::t_state();
        let mut s = t.clone();
        for _ in 1..m {
            s = tensor(&s, &t)?;
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    pub(crate) fn check_same_n(&self, other: &StateVector) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }
}

/// Haar-random state: i.i.d. standard complex Gaussians, then normalized.
pub fn haar_random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<StateVector> {
    if n == 0 {
        return Err(Error::InvalidQubitCount(0));
    }
    limits::check_state("Haar-random state", n)?;
    let amps = (0..1usize << n)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    StateVector::normalized(amps)
}

/// `<a|b>`, conjugate-linear in `a`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    a.check_same_n(b)?;
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}

/// `a ⊗ b` with `a` on the low qubits: amplitude `(x_b << n_a) | x_a` is `a[x_a] b[x_b]`.
pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let n = a.n + b.n;
    limits::check_state("tensor product", n)?;
    let mut amps = Vec::with_capacity(1 << n);
    for cb in &b.amps {
        amps.extend(a.amps.iter().map(|ca| ca * cb));
    }
    Ok(StateVector { n, amps })
}

/// Parse the amplitude file format: `qubits N` followed by `2^N` lines `re im`.
///
/// Blank lines and `#` comments are ignored. Without `normalize` the squared
/// norm must be within [`FILE_NORM_TOLERANCE`] of one; the state is then
/// rescaled exactly.
pub fn parse_amplitudes(text: &str, normalize: bool) -> Result<StateVector> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let perr = |line, column, message: String| Error::Parse { line, column, message };

    let (hline, header) = lines.next().ok_or_else(|| perr(1, 1, "missing `qubits N` header".into()))?;
    let mut words = header.split_whitespace();
    if !words.next().is_some_and(|w| w.eq_ignore_ascii_case("qubits")) {
        return Err(perr(hline, 1, format!("expected `qubits N`, found `{header}`")));
    }
    let n: usize = words
        .next()
        .and_then(|w| w.parse().ok())
        .filter(|&n| n >= 1)
        .ok_or_else(|| perr(hline, 8, "qubit count must be a positive integer".into()))?;
    if words.next().is_some() {
        return Err(perr(hline, 1, "trailing tokens after qubit count".into()));
    }
    limits::check_state("amplitude file", n)?;

    let dim = 1usize << n;
    let mut amps = Vec::with_capacity(dim);
    for (line, body) in lines {
        if amps.len() == dim {
            return Err(perr(line, 1, format!("more than {dim} amplitude lines")));
        }
        let parts: Vec<&str> = body.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(perr(line, 1, format!("expected `re im`, found `{body}`")));
        }
        let re: f64 = parts[0].parse().map_err(|_| perr(line, 1, format!("bad real part `{}`", parts[0])))?;
        let col = body.find(parts[1]).unwrap_or(0) + 1;
        let im: f64 = parts[1].parse().map_err(|_| perr(line, col, format!("bad imaginary part `{}`", parts[1])))?;
        amps.push(Complex64::new(re, im));
    }
    if amps.len() != dim {
        return Err(perr(0, 0, format!("expected {dim} amplitude lines, found {}", amps.len())));
    }
    let ns = norm_sqr(&amps);
    if !normalize && (ns - 1.0).abs() > FILE_NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm_sqr: ns });
    }
    StateVector::normalized(amps)
}

/// Inverse of [`parse_amplitudes`], with round-trip float formatting.
pub fn render_amplitudes(state: &StateVector) -> String {
    let mut out = format!("qubits {}\n", state.n);
    for c in &state.amps {
        out.push_str(&format!("{:?} {:?}\n", c.re, c.im));
    }
    out
}
