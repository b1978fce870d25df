//! Exhaustive stabilizer states, brute-force stabilizer fidelity and the
//! extent bounds built on it.
//!
//! Every stabilizer state on `n` qubits has the canonical form
//!
//! ```text
//! |phi> = 2^{-k/2} sum_{u in F_2^k} i^{l·u} (-1)^{b·u + sum_{i<j} a_ij u_i u_j} |t + G u>
//! ```
//!
//! where `t + span(G)` is a `k`-dimensional affine subspace. Fixing `G` in
//! reduced row-echelon form and `t` as the coset representative that is zero
//! on the pivot bits makes `(t, G, l, b, a)` unique per state up to global
//! phase, so the enumeration never has to compare amplitudes.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::limits;
use crate::state::StateVector;
use crate::weyl::i_pow;

/// `t + span(basis)`, basis rows in reduced row-echelon form keyed on the
/// highest set bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSubspace {
    pub offset: u64,
    pub basis: Vec<u64>,
}

impl AffineSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Number of distinct phase functions `(l, b, a)` on this subspace.
    pub fn phase_count(&self) -> u64 {
        let k = self.dim() as u32;
        1u64 << (2 * k + k * k.saturating_sub(1) / 2)
    }

    /// `t + G u`.
    pub fn point(&self, u: u64) -> u64 {
        self.basis
            .iter()
            .enumerate()
            .filter(|(i, _)| (u >> i) & 1 == 1)
            .fold(self.offset, |acc, (_, g)| acc ^ g)
    }

    /// All points, in parameter order `u = 0, 1, ...`.
    pub fn points(&self) -> Vec<u64> {
        (0..1u64 << self.dim()).map(|u| self.point(u)).collect()
    }
}

/// Phase of parameter point `u` under phase code `code`: `i^{l·u} (-1)^{b·u + Q(u)}`
/// with `l`, `b` and the upper-triangular `a` packed low to high.
fn phase_exponent(k: usize, code: u64, u: u64) -> u32 {
    let l = code & ((1 << k) - 1);
    let b = (code >> k) & ((1 << k) - 1);
    let a = code >> (2 * k);
    let mut e = (l & u).count_ones() + 2 * (b & u).count_ones();
    let mut bit = 0;
    for i in 0..k {
        for j in i + 1..k {
            if (a >> bit) & 1 == 1 && (u >> i) & 1 == 1 && (u >> j) & 1 == 1 {
                e += 2;
            }
            bit += 1;
        }
    }
    e & 3
}

/// Every `k`-dimensional linear subspace of `F_2^n` as RREF bases.
fn linear_subspaces(n: usize, k: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for pivots in 0u64..1 << n {
        if pivots.count_ones() as usize != k {
            continue;
        }
        let pivot_bits: Vec<usize> = (0..n).filter(|b| (pivots >> b) & 1 == 1).collect();
        // free positions of each row: below its pivot and not a pivot column
        let free: Vec<Vec<usize>> = pivot_bits
            .iter()
            .map(|&c| (0..c).filter(|j| (pivots >> j) & 1 == 0).collect())
            .collect();
        let total_free: usize = free.iter().map(Vec::len).sum();
        for assignment in 0u64..1 << total_free {
            let mut shift = 0;
            let rows = pivot_bits
                .iter()
                .zip(&free)
                .map(|(&c, fr)| {
                    let mut row = 1u64 << c;
                    for (i, &j) in fr.iter().enumerate() {
                        if (assignment >> (shift + i)) & 1 == 1 {
                            row |= 1 << j;
                        }
                    }
                    shift += fr.len();
                    row
                })
                .collect();
            out.push(rows);
        }
    }
    out
}

/// All affine subspaces of `F_2^n`, ordered by dimension.
pub fn affine_subspaces(n: usize) -> Vec<AffineSubspace> {
    let mut out = Vec::new();
    for k in 0..=n {
        for basis in linear_subspaces(n, k) {
            let pivot_mask = basis.iter().fold(0u64, |m, r| m | (1 << (63 - r.leading_zeros())));
            for offset in (0u64..1 << n).filter(|t| t & pivot_mask == 0) {
                out.push(AffineSubspace { offset, basis: basis.clone() });
            }
        }
    }
    out
}

/// `2^n prod_{k=1..n} (2^k + 1)`.
pub fn stabilizer_state_count(n: usize) -> u64 {
    (1..=n as u32).fold(1u64 << n, |acc, k| acc * ((1u64 << k) + 1))
}

fn build_state(n: usize, sub: &AffineSubspace, code: u64) -> StateVector {
    let k = sub.dim();
    let norm = FRAC_1_SQRT_2.powi(k as i32);
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for u in 0..1u64 << k {
        amps[sub.point(u) as usize] = i_pow(phase_exponent(k, code, u)) * norm;
    }
    StateVector::from_normalized_parts(n, amps)
}

/// Streaming enumeration of the stabilizer states on `n` qubits, each exactly
/// once up to global phase.
#[derive(Debug, Clone)]
pub struct StabilizerEnumeration {
    n: usize,
    subspaces: Vec<AffineSubspace>,
    // first enumeration index of each subspace, plus the total at the end
    starts: Vec<u64>,
    sub: usize,
    code: u64,
}

pub fn enumerate_stabilizer_states(n: usize) -> Result<StabilizerEnumeration> {
    if n == 0 {
        return Err(Error::InvalidQubitCount(0));
    }
    limits::check_enum("stabilizer enumeration", n)?;
    let subspaces = affine_subspaces(n);
    let mut starts = Vec::with_capacity(subspaces.len() + 1);
    let mut acc = 0;
    for s in &subspaces {
        starts.push(acc);
        acc += s.phase_count();
    }
    starts.push(acc);
    Ok(StabilizerEnumeration { n, subspaces, starts, sub: 0, code: 0 })
}

impl StabilizerEnumeration {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of states, independent of iteration progress.
    pub fn total(&self) -> u64 {
        *self.starts.last().unwrap_or(&0)
    }

    pub fn subspaces(&self) -> &[AffineSubspace] {
        &self.subspaces
    }

    /// Random access by enumeration index.
    pub fn state_at(&self, index: u64) -> Option<StateVector> {
        if index >= self.total() {
            return None;
        }
        let sub = self.starts.partition_point(|&s| s <= index) - 1;
        Some(build_state(self.n, &self.subspaces[sub], index - self.starts[sub]))
    }
}

impl Iterator for StabilizerEnumeration {
    type Item = StateVector;

    fn next(&mut self) -> Option<StateVector> {
        let sub = self.subspaces.get(self.sub)?;
        let state = build_state(self.n, sub, self.code);
        self.code += 1;
        if self.code == sub.phase_count() {
            self.sub += 1;
            self.code = 0;
        }
        Some(state)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = match self.starts.get(self.sub) {
            Some(&s) if self.sub < self.subspaces.len() => (self.total() - s - self.code) as usize,
            _ => 0,
        };
        (left, Some(left))
    }
}

impl ExactSizeIterator for StabilizerEnumeration {}

/// Result of the brute-force fidelity search.
#[derive(Debug, Clone)]
pub struct FidelityResult {
    pub fidelity: f64,
    /// Enumeration index of the maximizer; ties go to the lowest index.
    pub argmax_index: u64,
    pub argmax: StateVector,
}

/// `max_phi |<phi|psi>|^2` over all stabilizer states.
pub fn stabilizer_fidelity(state: &StateVector) -> Result<f64> {
    Ok(stabilizer_fidelity_argmax(state)?.fidelity)
}

pub fn stabilizer_fidelity_argmax(state: &StateVector) -> Result<FidelityResult> {
    let enumeration = enumerate_stabilizer_states(state.n())?;
    let amps = state.amplitudes();
    let (fidelity, argmax_index) = enumeration
        .subspaces
        .par_iter()
        .enumerate()
        .map(|(si, sub)| {
            let k = sub.dim();
            let norm = 0.5f64.powi(k as i32);
            let restricted: Vec<Complex64> = sub.points().iter().map(|&x| amps[x as usize]).collect();
            let mut best = (-1.0f64, 0u64);
            for code in 0..sub.phase_count() {
                // <phi|psi> = 2^{-k/2} sum_u conj(phase(u)) psi(t + G u)
                let s: Complex64 = restricted
                    .iter()
                    .enumerate()
                    .map(|(u, c)| i_pow(4 - phase_exponent(k, code, u as u64)) * c)
                    .sum();
                let f = s.norm_sqr() * norm;
                if f > best.0 {
                    best = (f, enumeration.starts[si] + code);
                }
            }
            best
        })
        .reduce(|| (-1.0, u64::MAX), |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    let argmax = enumeration.state_at(argmax_index).expect("maximizer index in range");
    Ok(FidelityResult { fidelity, argmax_index, argmax })
}

/// `(1 + 1/sqrt 2)^t`, the extent bound for a Clifford+T state with `t` T gates.
pub fn extent_upper_bound_clifford_t(t: usize) -> f64 {
    (1.0 + FRAC_1_SQRT_2).powi(t as i32)
}

/// `(|alpha| sqrt(xi_v) + |beta| sqrt(xi_w))^2`, the extent bound for
/// `alpha|v> + beta|w>`. Expects `xi_v, xi_w >= 1` and `|alpha|, |beta| <= 1`.
pub fn extent_linear_combination_bound(alpha: f64, xi_v: f64, beta: f64, xi_w: f64) -> f64 {
    (alpha.abs() * xi_v.sqrt() + beta.abs() * xi_w.sqrt()).powi(2)
}

/// `(extent upper bound from the T-count, 1 / F_S)`; the second never exceeds
/// the first.
pub fn fidelity_extent_check(state: &StateVector, t_count: usize) -> Result<(f64, f64)> {
    let f = stabilizer_fidelity(state)?;
    Ok((extent_upper_bound_clifford_t(t_count), 1.0 / f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::inner_product;
    use std::f64::consts::PI;

    #[test]
    fn count_formula() {
        assert_eq!(
            (1..=5).map(stabilizer_state_count).collect::<Vec<_>>(),
            vec![6, 60, 1080, 36720, 2423520]
        );
    }

    #[test]
    fn single_qubit_states() {
        let states: Vec<StateVector> = enumerate_stabilizer_states(1).unwrap().collect();
        assert_eq!(states.len(), 6);
        let h = FRAC_1_SQRT_2;
        let c = |re, im| Complex64::new(re, im);
        let expected = [
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(1.0, 0.0)],
            [c(h, 0.0), c(h, 0.0)],
            [c(h, 0.0), c(0.0, h)],
            [c(h, 0.0), c(-h, 0.0)],
            [c(h, 0.0), c(0.0, -h)],
        ];
        for (s, e) in states.iter().zip(&expected) {
            for (a, b) in s.amplitudes().iter().zip(e) {
                assert!((a - b).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn pairwise_distinct_up_to_phase() {
        for n in 1..=2 {
            let states: Vec<StateVector> = enumerate_stabilizer_states(n).unwrap().collect();
            assert_eq!(states.len() as u64, stabilizer_state_count(n));
            for i in 0..states.len() {
                for j in i + 1..states.len() {
                    let ov = inner_product(&states[i], &states[j]).unwrap().norm();
                    assert!(ov < 1.0 - 1e-9, "{i} and {j} coincide");
                }
            }
        }
    }

    #[test]
    fn random_access_matches_iteration() {
        let e = enumerate_stabilizer_states(3).unwrap();
        let all: Vec<StateVector> = e.clone().collect();
        for idx in [0u64, 7, 8, 100, 500, 1079] {
            assert_eq!(e.state_at(idx).unwrap(), all[idx as usize]);
        }
        assert!(e.state_at(1080).is_none());
        assert_eq!(e.len(), 1080);
    }

    #[test]
    fn size_hint_tracks_progress() {
        let mut e = enumerate_stabilizer_states(2).unwrap();
        for _ in 0..10 {
            e.next();
        }
        assert_eq!(e.len(), 50);
    }

    #[test]
    fn fidelity_examples() {
        for s in enumerate_stabilizer_states(2).unwrap().step_by(7) {
            assert!((stabilizer_fidelity(&s).unwrap() - 1.0).abs() < 1e-9);
        }
        let t = StateVector::t_state();
        let cos2 = (PI / 8.0).cos().powi(2);
        assert!((stabilizer_fidelity(&t).unwrap() - cos2).abs() < 1e-12);
        assert!((stabilizer_fidelity(&t).unwrap() - 0.8535534).abs() < 1e-7);
        let t2 = StateVector::magic(2).unwrap();
        assert!((stabilizer_fidelity(&t2).unwrap() - 0.7285534).abs() < 1e-7);
    }

    #[test]
    fn argmax_is_consistent() {
        let t = StateVector::t_state();
        let r = stabilizer_fidelity_argmax(&t).unwrap();
        let ov = inner_product(&r.argmax, &t).unwrap().norm_sqr();
        assert!((ov - r.fidelity).abs() < 1e-12);
        // |+> (index 2) and |+i> (index 3) tie up to roundoff; the winner is one of them.
        assert!(r.argmax_index == 2 || r.argmax_index == 3);
    }

    #[test]
    fn extent_bounds() {
        assert_eq!(extent_upper_bound_clifford_t(0), 1.0);
        assert!((extent_upper_bound_clifford_t(1) - 1.7071068).abs() < 1e-7);
        assert!((extent_upper_bound_clifford_t(2) - 2.9142136).abs() < 1e-7);
        assert!((extent_linear_combination_bound(1.0, 3.0, 0.0, 7.0) - 3.0).abs() < 1e-12);
        assert!((extent_linear_combination_bound(FRAC_1_SQRT_2, 1.0, FRAC_1_SQRT_2, 1.0) - 2.0).abs() < 1e-12);
        let (c, s) = ((PI / 8.0).cos(), (PI / 8.0).sin());
        assert!((extent_linear_combination_bound(c, 1.0, s, 1.0) - extent_upper_bound_clifford_t(1)).abs() < 1e-12);
    }

    #[test]
    fn fidelity_extent_examples() {
        let (xi, inv) = fidelity_extent_check(&StateVector::zero(2).unwrap(), 0).unwrap();
        assert_eq!(xi, 1.0);
        assert!((inv - 1.0).abs() < 1e-9);
        let (xi, inv) = fidelity_extent_check(&StateVector::t_state(), 1).unwrap();
        assert!((xi - 1.7071068).abs() < 1e-7);
        assert!((inv - 1.1715729).abs() < 1e-7);
        assert!((inv - (4.0 - 2.0 * 2f64.sqrt())).abs() < 1e-12);
        let (xi, inv) = fidelity_extent_check(&StateVector::magic(2).unwrap(), 2).unwrap();
        assert!((xi - 2.9142136).abs() < 1e-7);
        assert!((inv - 1.3725830).abs() < 1e-7);
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(enumerate_stabilizer_states(5), Err(Error::CapExceeded { .. })));
        assert!(enumerate_stabilizer_states(0).is_err());
    }
}
