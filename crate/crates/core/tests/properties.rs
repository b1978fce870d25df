use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

use stabscope::circuit::{apply_gates, parse_circuit, random_clifford_gate, random_clifford_t, simulate, Gate};
use stabscope::rng;
use stabscope::spectra::{
    characteristic_table, characteristic_table_fast, eta_exact, eta_paths, fourier_table, weyl_distribution,
};
use stabscope::stabset::{enumerate_stabilizer_states, extent_upper_bound_clifford_t, stabilizer_fidelity};
use stabscope::state::{haar_random, tensor, StateVector};
use stabscope::weyl::{i_pow, weyl_apply, weyl_expectation, weyl_product_phase, WeylIndex};

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weyl_apply_is_an_involution(n in 1usize..6, seed in any::<u64>(), xr in any::<u64>()) {
        let s = haar_random(n, &mut rng::seeded(seed)).unwrap();
        let x = WeylIndex(xr % (1 << (2 * n)));
        let once = weyl_apply(&s, x).unwrap();
        prop_assert!((once.norm_sqr() - 1.0).abs() < 1e-12);
        let twice = weyl_apply(&once, x).unwrap();
        prop_assert!(max_diff(twice.amplitudes(), s.amplitudes()) < 1e-12);
    }

    #[test]
    fn expectations_are_bounded(n in 1usize..6, seed in any::<u64>()) {
        let s = haar_random(n, &mut rng::seeded(seed)).unwrap();
        for x in 0..1u64 << (2 * n) {
            let e = weyl_expectation(&s, WeylIndex(x)).unwrap();
            prop_assert!(e * e <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn circuit_render_round_trip(n in 1usize..6, t in 0usize..5, depth in 0usize..40, seed in any::<u64>()) {
        let c = random_clifford_t(n, t, depth, &mut rng::seeded(seed)).unwrap();
        prop_assert_eq!(parse_circuit(&c.render()).unwrap(), c);
    }

    #[test]
    fn fast_table_matches_naive(n in 1usize..6, seed in any::<u64>()) {
        let s = haar_random(n, &mut rng::seeded(seed)).unwrap();
        let a = characteristic_table(&s).unwrap();
        let b = characteristic_table_fast(&s).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn eta_paths_agree_and_tables_normalized(n in 1usize..6, seed in any::<u64>()) {
        let s = haar_random(n, &mut rng::seeded(seed)).unwrap();
        let p = characteristic_table_fast(&s).unwrap();
        let q = weyl_distribution(&p).unwrap();
        prop_assert!((p.sum() - 1.0).abs() < 1e-9);
        prop_assert!((q.sum() - 1.0).abs() < 1e-9);
        let paths = eta_paths(&s).unwrap();
        prop_assert!(paths.max_disagreement() < 1e-9);
        // eta >= |c_0|^12
        prop_assert!(paths.pairwise >= s.amplitudes()[0].norm_sqr().powi(6));
    }
}

#[test]
fn product_phase_composition_exhaustive_n2() {
    let n = 2;
    let s = haar_random(n, &mut rng::seeded(31)).unwrap();
    for x in 0..16 {
        for y in 0..16 {
            let (x, y) = (WeylIndex(x), WeylIndex(y));
            let lhs = weyl_apply(&weyl_apply(&s, x).unwrap(), y).unwrap();
            let k = weyl_product_phase(n, y, x).unwrap();
            let rhs: Vec<Complex64> =
                weyl_apply(&s, x ^ y).unwrap().amplitudes().iter().map(|a| i_pow(k) * a).collect();
            assert!(max_diff(lhs.amplitudes(), &rhs) < 1e-12, "x={x} y={y}");
        }
    }
}

#[test]
fn fourier_duality_small() {
    for n in 1..=4 {
        for seed in 0..5 {
            let s = haar_random(n, &mut rng::seeded(seed)).unwrap();
            let p = characteristic_table_fast(&s).unwrap();
            let f = fourier_table(&p).unwrap();
            let scale = 0.5f64.powi(n as i32);
            for x in 0..1u64 << (2 * n) {
                let x = WeylIndex(x);
                assert!((f.get(x) - scale * p.get(x.swap_halves(n))).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn wht_involution_on_tables() {
    let s = haar_random(4, &mut rng::seeded(8)).unwrap();
    let p = characteristic_table_fast(&s).unwrap();
    let mut v = p.values().to_vec();
    stabscope::spectra::wht_in_place(&mut v);
    stabscope::spectra::wht_in_place(&mut v);
    for (a, b) in v.iter().zip(p.values()) {
        assert!((a - 256.0 * b).abs() < 1e-9);
    }
}

#[test]
fn long_circuits_preserve_norm() {
    let c = random_clifford_t(6, 500, 9500, &mut rng::seeded(12)).unwrap();
    assert_eq!(c.gates().len(), 10_000);
    let s = simulate(&c).unwrap();
    assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
}

#[test]
fn clifford_circuits_give_stabilizer_states() {
    let mut r = rng::seeded(100);
    for _ in 0..30 {
        let n = r.random_range(1..=3);
        let depth = r.random_range(0..25);
        let c = random_clifford_t(n, 0, depth, &mut r).unwrap();
        let s = simulate(&c).unwrap();
        assert!((stabilizer_fidelity(&s).unwrap() - 1.0).abs() < 1e-9, "{}", c.render());
        assert!((eta_exact(&s).unwrap() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn eta_is_clifford_invariant() {
    let mut r = rng::seeded(55);
    for _ in 0..20 {
        let n = r.random_range(1..=5);
        let psi = haar_random(n, &mut r).unwrap();
        let gates: Vec<Gate> = (0..30).map(|_| random_clifford_gate(n, &mut r)).collect();
        let moved = apply_gates(&psi, &gates).unwrap();
        assert!((eta_exact(&psi).unwrap() - eta_exact(&moved).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn fidelity_is_clifford_invariant() {
    let mut r = rng::seeded(56);
    for _ in 0..10 {
        let n = r.random_range(1..=3);
        let c = random_clifford_t(n, 2, 15, &mut r).unwrap();
        let base = simulate(&c).unwrap();
        let gates: Vec<Gate> = (0..20).map(|_| random_clifford_gate(n, &mut r)).collect();
        let moved = apply_gates(&base, &gates).unwrap();
        let (a, b) = (stabilizer_fidelity(&base).unwrap(), stabilizer_fidelity(&moved).unwrap());
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
}

#[test]
fn extent_fidelity_ledger_small() {
    let mut r = rng::seeded(57);
    for _ in 0..40 {
        let n = r.random_range(1..=3);
        let t = r.random_range(0..=4);
        let c = random_clifford_t(n, t, 20, &mut r).unwrap();
        let f = stabilizer_fidelity(&simulate(&c).unwrap()).unwrap();
        assert!(1.0 / f <= extent_upper_bound_clifford_t(c.t_count()) + 1e-9);
    }
}

#[test]
fn enumerated_states_are_normalized_with_q_equal_p() {
    for n in 1..=3 {
        for s in enumerate_stabilizer_states(n).unwrap().step_by(11) {
            assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
            let p = characteristic_table_fast(&s).unwrap();
            let q = weyl_distribution(&p).unwrap();
            assert!(p.values().iter().zip(q.values()).all(|(a, b)| (a - b).abs() < 1e-10));
        }
    }
}

#[test]
fn magic_product_matches_circuit() {
    let c = parse_circuit("qubits 3\nH 0\nH 1\nH 2\nT 0\nT 1\nT 2").unwrap();
    let s = simulate(&c).unwrap();
    let m = StateVector::magic(3).unwrap();
    assert!(max_diff(s.amplitudes(), m.amplitudes()) < 1e-12);
    let t = StateVector::t_state();
    let tt = tensor(&tensor(&t, &t).unwrap(), &t).unwrap();
    assert!(max_diff(tt.amplitudes(), m.amplitudes()) < 1e-15);
}
