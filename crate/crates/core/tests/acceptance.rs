//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion.

use std::f64::consts::{E, FRAC_PI_8, SQRT_2};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;

use stabscope::bounds::{haar_eta_failure_probability, pseudorandom_tgate_exponent, tightness_constant};
use stabscope::circuit::{random_clifford_t, simulate};
use stabscope::rng;
use stabscope::sampler::{required_samples, BellDifferenceSampler, DistinguishOptions, EtaEstimator, Verdict, distinguish_with};
use stabscope::spectra::{
    characteristic_table, characteristic_table_fast, eta_exact, eta_paths, fourier_table, weyl_distribution,
};
use stabscope::stabset::{enumerate_stabilizer_states, extent_upper_bound_clifford_t, stabilizer_fidelity, stabilizer_state_count};
use stabscope::state::{haar_random, StateVector};
use stabscope::WeylIndex;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, limit: Duration, detail: String) -> Outcome {
    check(elapsed < limit, format!("{detail}; {:.2?} (limit {:?})", elapsed, limit))
}

fn magic_eta() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for m in 1..=6 {
        let eta = eta_exact(&StateVector::magic(m).unwrap()).unwrap();
        worst = worst.max((eta - 0.625f64.powi(m as i32)).abs());
    }
    if worst >= 1e-9 {
        return Err(format!("max |eta - (5/8)^m| = {worst:e}"));
    }
    within(start.elapsed(), Duration::from_secs(10), format!("max error {worst:e}"))
}

fn fourier_duality() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut r = rng::seeded(2);
    for n in [2usize, 4, 6] {
        for _ in 0..20 {
            let s = haar_random(n, &mut r).unwrap();
            let p = characteristic_table_fast(&s).unwrap();
            let f = fourier_table(&p).unwrap();
            let scale = 0.5f64.powi(n as i32);
            for x in 0..1u64 << (2 * n) {
                let x = WeylIndex(x);
                worst = worst.max((f.get(x) - scale * p.get(x.swap_halves(n))).abs());
            }
        }
    }
    if worst >= 1e-12 {
        return Err(format!("max deviation {worst:e}"));
    }
    within(start.elapsed(), Duration::from_secs(30), format!("max deviation {worst:e}"))
}

fn three_paths() -> Outcome {
    let mut r = rng::seeded(3);
    let mut worst = 0.0f64;
    for i in 0..50 {
        let n = 1 + i % 6;
        let paths = eta_paths(&haar_random(n, &mut r).unwrap()).unwrap();
        if paths.direct.is_none() {
            return Err(format!("direct path missing at n = {n}"));
        }
        worst = worst.max(paths.max_disagreement());
    }
    check(worst < 1e-9, format!("50 states, max disagreement {worst:e}"))
}

fn stabilizer_q_equals_p() -> Outcome {
    let mut r = rng::seeded(4);
    let (mut worst_q, mut worst_eta) = (0.0f64, 0.0f64);
    for n in 1..=4 {
        let states = enumerate_stabilizer_states(n).unwrap();
        for _ in 0..100 {
            let s = states.state_at(r.random_range(0..states.total())).unwrap();
            let p = characteristic_table_fast(&s).unwrap();
            let q = weyl_distribution(&p).unwrap();
            for (a, b) in p.values().iter().zip(q.values()) {
                worst_q = worst_q.max((a - b).abs());
            }
            worst_eta = worst_eta.max((eta_exact(&s).unwrap() - 1.0).abs());
        }
    }
    check(
        worst_q < 1e-10 && worst_eta < 1e-9,
        format!("400 states, max |q-p| {worst_q:e}, max |eta-1| {worst_eta:e}"),
    )
}

fn enumeration_counts() -> Outcome {
    let expected = [6u64, 60, 1080, 36720];
    let mut got = Vec::new();
    for n in 1..=4 {
        let total = enumerate_stabilizer_states(n).unwrap().count() as u64;
        if total != stabilizer_state_count(n) {
            return Err(format!("n = {n}: iterated {total}, formula {}", stabilizer_state_count(n)));
        }
        got.push(total);
    }
    check(got == expected, format!("{got:?}"))
}

fn magic_fidelity() -> Outcome {
    let start = Instant::now();
    let mut fs = Vec::new();
    for m in 1..=3 {
        let f = stabilizer_fidelity(&StateVector::magic(m).unwrap()).unwrap();
        let want = FRAC_PI_8.cos().powi(2 * m as i32);
        if (f - want).abs() >= 1e-9 {
            return Err(format!("m = {m}: F = {f}, expected {want}"));
        }
        fs.push(format!("{f:.7}"));
    }
    if fs[0] != "0.8535534" {
        return Err(format!("m = 1 gives {}", fs[0]));
    }
    within(start.elapsed(), Duration::from_secs(120), format!("F = {}", fs.join(", ")))
}

struct LowComplexitySample {
    eta: f64,
    fidelity: f64,
    t: usize,
}

fn clifford_t_samples() -> Vec<LowComplexitySample> {
    let mut r = rng::seeded(7);
    (0..200)
        .map(|i| {
            let n = 1 + i % 4;
            let t = r.random_range(0..=6);
            let c = random_clifford_t(n, t, 8 * n, &mut r).unwrap();
            let s = simulate(&c).unwrap();
            LowComplexitySample {
                eta: eta_exact(&s).unwrap(),
                fidelity: stabilizer_fidelity(&s).unwrap(),
                t: c.t_count(),
            }
        })
        .collect()
}

fn eta_fidelity_branch(samples: &[LowComplexitySample]) -> Outcome {
    // eta >= 1/k^6 with k = 1/F
    let violations = samples.iter().filter(|s| s.eta < s.fidelity.powi(6) - 1e-12).count();
    let slack = samples.iter().map(|s| s.eta - s.fidelity.powi(6)).fold(f64::INFINITY, f64::min);
    check(violations == 0, format!("{} states, {violations} violations, min slack {slack:.3e}", samples.len()))
}

fn extent_ledger(samples: &[LowComplexitySample]) -> Outcome {
    let violations = samples
        .iter()
        .filter(|s| 1.0 / s.fidelity > extent_upper_bound_clifford_t(s.t) * (1.0 + 1e-12))
        .count();
    check(violations == 0, format!("{} states, {violations} violations", samples.len()))
}

fn haar_surrogate() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (n, seed) in [(8usize, 90u64), (10, 91)] {
        let mut r = rng::seeded(seed);
        let bound = 2f64.powf(-(n as f64) / 2.0);
        let mut violations = 0;
        let mut max_eta = 0.0f64;
        for _ in 0..100 {
            let eta = eta_exact(&haar_random(n, &mut r).unwrap()).unwrap();
            max_eta = max_eta.max(eta);
            if eta >= bound {
                violations += 1;
            }
        }
        ok &= violations == 0;
        parts.push(format!("n = {n}: {violations}/100 violations, max eta {max_eta:.3e} < {bound:.3e}"));
    }
    check(ok, parts.join("; "))
}

fn end_to_end() -> Outcome {
    let start = Instant::now();
    let n = 8;
    let k = 1.0 / FRAC_PI_8.cos().powi(2);
    let opts = DistinguishOptions { m_override: Some(5000), ..Default::default() };
    let mut r = rng::seeded(10);
    let (mut planted_ok, mut haar_ok) = (0, 0);
    for trial in 0..100u64 {
        let planted = simulate(&random_clifford_t(n, 1, 60, &mut r).unwrap()).unwrap();
        let out = distinguish_with(&EtaEstimator::new(&planted).unwrap(), k, 0.05, 1000 + trial, &opts).unwrap();
        planted_ok += (out.report.verdict == Verdict::LowComplexity) as u32;
        let haar = haar_random(n, &mut r).unwrap();
        let out = distinguish_with(&EtaEstimator::new(&haar).unwrap(), k, 0.05, 2000 + trial, &opts).unwrap();
        haar_ok += (out.report.verdict == Verdict::HaarLike) as u32;
    }
    if planted_ok < 95 || haar_ok < 95 {
        return Err(format!("planted {planted_ok}/100, haar {haar_ok}/100"));
    }
    within(start.elapsed(), Duration::from_secs(300), format!("planted {planted_ok}/100, haar {haar_ok}/100"))
}

fn sampling_fidelity() -> Outcome {
    let s = haar_random(4, &mut rng::seeded(11)).unwrap();
    let q = weyl_distribution(&characteristic_table(&s).unwrap()).unwrap();
    let sampler = BellDifferenceSampler::new(&q).unwrap();
    let mut counts = vec![0u64; q.values().len()];
    let mut r = rng::seeded(12);
    let draws = 100_000;
    for _ in 0..draws {
        counts[sampler.sample(&mut r).bits() as usize] += 1;
    }
    let tv = 0.5
        * counts
            .iter()
            .zip(q.values())
            .map(|(&c, &p)| (c as f64 / draws as f64 - p).abs())
            .sum::<f64>();
    check(tv < 0.05, format!("TV distance {tv:.4}"))
}

fn fast_path() -> Outcome {
    let mut r = rng::seeded(13);
    let s6 = haar_random(6, &mut r).unwrap();
    let (a, b) = (characteristic_table(&s6).unwrap(), characteristic_table_fast(&s6).unwrap());
    let worst = a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    if worst >= 1e-10 {
        return Err(format!("n = 6 max deviation {worst:e}"));
    }
    let s10 = haar_random(10, &mut r).unwrap();
    let t0 = Instant::now();
    let naive = characteristic_table(&s10).unwrap();
    let naive_time = t0.elapsed();
    let t1 = Instant::now();
    let fast = characteristic_table_fast(&s10).unwrap();
    let fast_time = t1.elapsed();
    let worst10 = naive.values().iter().zip(fast.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let speedup = naive_time.as_secs_f64() / fast_time.as_secs_f64();
    check(
        speedup >= 10.0 && worst10 < 1e-10,
        format!(
            "n = 6 deviation {worst:e}; n = 10 naive {naive_time:.2?}, fast {fast_time:.2?}, speedup {speedup:.1}x"
        ),
    )
}

fn bound_spot_values() -> Outcome {
    let c = tightness_constant();
    let a = pseudorandom_tgate_exponent();
    let f = haar_eta_failure_probability(33);
    let want = (-2.0 * SQRT_2).exp();
    check(
        format!("{c:.2}") == "2.97" && a > 0.7715 && a <= 0.7716 && (f - want).abs() < 1e-12,
        format!("tightness {c:.6}, exponent {a:.7}, failure(33) {f:.10}"),
    )
}

fn sample_formula() -> Outcome {
    let m = required_samples(1.0, 1.0 / E).unwrap();
    check(m == 60, format!("required_samples(1, 1/e) = {m}; separation covered by criterion 10"))
}

fn main() -> ExitCode {
    let samples = clifford_t_samples();
    let results: Vec<(&str, Outcome)> = vec![
        ("magic-state eta exact", magic_eta()),
        ("Fourier duality", fourier_duality()),
        ("three-path eta agreement", three_paths()),
        ("stabilizer q = p", stabilizer_q_equals_p()),
        ("enumeration counts", enumeration_counts()),
        ("magic-state fidelity", magic_fidelity()),
        ("eta >= F^6 on Clifford+T states", eta_fidelity_branch(&samples)),
        ("1/F <= (1+1/sqrt2)^t", extent_ledger(&samples)),
        ("Haar eta < 2^(-n/2)", haar_surrogate()),
        ("end-to-end distinguisher", end_to_end()),
        ("Bell difference sampling TV", sampling_fidelity()),
        ("fast characteristic table", fast_path()),
        ("bound spot values", bound_spot_values()),
        ("sample-count formula", sample_formula()),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(d) => println!("PASS {:>2} {name}: {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {d}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
