//! Weyl operators `W_x = i^{p·q} X^p Z^q` indexed by points of `F_2^{2n}`.
//!
//! A [`WeylIndex`] packs `x = (p, q)` into one integer: `p` occupies the high
//! `n` bits and `q` the low `n` bits, and qubit `i` corresponds to bit `i` of
//! each half. The same layout is used by every table, CSV dump and test in
//! the crate. Index zero is the identity.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::StateVector;

/// Largest absolute imaginary part tolerated in `<psi|W_x|psi>`.
pub const IMAG_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeylIndex(pub u64);

impl WeylIndex {
    pub const IDENTITY: WeylIndex = WeylIndex(0);

    /// Build `(p, q)` for `n` qubits. Bits of `p` or `q` at or above `n` are rejected.
    pub fn from_parts(n: usize, p: u64, q: u64) -> Result<Self> {
        let mask = half_mask(n);
        if p & !mask != 0 || q & !mask != 0 {
            return Err(Error::IndexOutOfRange { index: (p << n) | q, n });
        }
        Ok(WeylIndex((p << n) | q))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// X part.
    pub fn p(self, n: usize) -> u64 {
        self.0 >> n
    }

    /// Z part.
    pub fn q(self, n: usize) -> u64 {
        self.0 & half_mask(n)
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }

    /// `(p, q) -> (q, p)`, the index map appearing in the Fourier duality of
    /// characteristic distributions.
    pub fn swap_halves(self, n: usize) -> WeylIndex {
        WeylIndex((self.q(n) << n) | self.p(n))
    }

    pub fn check(self, n: usize) -> Result<()> {
        if n >= 32 || self.0 >> (2 * n) != 0 {
            return Err(Error::IndexOutOfRange { index: self.0, n });
        }
        Ok(())
    }

    /// Render as a Pauli string, qubit 0 first, ignoring the phase.
    pub fn pauli_label(self, n: usize) -> String {
        let (p, q) = (self.p(n), self.q(n));
        (0..n)
            .map(|i| match ((p >> i) & 1, (q >> i) & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (1, 1) => 'Y',
                _ => 'Z',
            })
            .collect()
    }
}

impl fmt::Display for WeylIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::ops::BitXor for WeylIndex {
    type Output = WeylIndex;

    fn bitxor(self, rhs: WeylIndex) -> WeylIndex {
        WeylIndex(self.0 ^ rhs.0)
    }
}

#[inline]
pub(crate) fn half_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// `i^k` for `k mod 4`.
#[inline]
pub fn i_pow(k: u32) -> Complex64 {
    match k & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[inline]
fn parity(x: u64) -> bool {
    x.count_ones() & 1 == 1
}

/// `W_x |psi>`.
///
/// Amplitude `j` moves to `j ^ p` with sign `(-1)^{q·j}` and the global
/// phase `i^{p·q}`, where `p·q` is the integer overlap count.
pub fn weyl_apply(state: &StateVector, x: WeylIndex) -> Result<StateVector> {
    let n = state.n();
    x.check(n)?;
    let (p, q) = (x.p(n) as usize, x.q(n));
    let phase = i_pow((x.p(n) & q).count_ones());
    let src = state.amplitudes();
    let mut out = vec![Complex64::new(0.0, 0.0); src.len()];
    for (j, &c) in src.iter().enumerate() {
        let v = phase * c;
        out[j ^ p] = if parity(q & j as u64) { -v } else { v };
    }
    Ok(StateVector::from_normalized_parts(n, out))
}

/// `<psi|W_x|psi>`, which is real because `W_x` is Hermitian.
///
/// # Panics
///
/// If the imaginary residue exceeds [`IMAG_TOLERANCE`]; that can only come
/// from a phase bug.
pub fn weyl_expectation(state: &StateVector, x: WeylIndex) -> Result<f64> {
    let n = state.n();
    x.check(n)?;
    let z = weyl_expectation_complex(state.amplitudes(), n, x);
    assert!(
        z.im.abs() < IMAG_TOLERANCE,
        "imaginary residue {} in <psi|W_{}|psi>",
        z.im,
        x
    );
    Ok(z.re)
}

/// `i^{p·q} sum_j conj(c_{j^p}) c_j (-1)^{q·j}` without range checks.
pub(crate) fn weyl_expectation_complex(amps: &[Complex64], n: usize, x: WeylIndex) -> Complex64 {
    let (p, q) = (x.p(n) as usize, x.q(n));
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, &c) in amps.iter().enumerate() {
        let term = amps[j ^ p].conj() * c;
        if parity(q & j as u64) {
            acc -= term;
        } else {
            acc += term;
        }
    }
    acc * i_pow((x.p(n) & q).count_ones())
}

/// The exponent `k` (mod 4) with `W_x W_y = i^k W_{x ^ y}`.
///
/// `k` is odd-symmetric in the sense that `k(x, y) - k(y, x) = 2 (mod 4)`
/// exactly when the operators anticommute.
pub fn weyl_product_phase(n: usize, x: WeylIndex, y: WeylIndex) -> Result<u32> {
    x.check(n)?;
    y.check(n)?;
    let (px, qx, py, qy) = (x.p(n), x.q(n), y.p(n), y.q(n));
    let dot = |a: u64, b: u64| (a & b).count_ones() as i64;
    // X^px Z^qx X^py Z^qy = (-1)^{qx·py} X^{px^py} Z^{qx^qy}
    let k = dot(px, qx) + dot(py, qy) + 2 * dot(qx, py) - dot(px ^ py, qx ^ qy);
    Ok(k.rem_euclid(4) as u32)
}

/// Whether `W_x` and `W_y` commute (symplectic form vanishes).
pub fn commutes(n: usize, x: WeylIndex, y: WeylIndex) -> bool {
    let s = (x.p(n) & y.q(n)).count_ones() + (x.q(n) & y.p(n)).count_ones();
    s.is_multiple_of(2)
}
