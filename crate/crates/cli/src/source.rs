//! Input state resolution.

use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{ArgGroup, Args};
use rand::Rng;

use stabscope::bounds::magic_fidelity;
use stabscope::circuit::{parse_circuit, random_clifford_t, simulate};
use stabscope::rng;
use stabscope::sampler::Verdict;
use stabscope::state::{haar_random, parse_amplitudes};
use stabscope::StateVector;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Haar,
    Stabilizer,
    /// `None` takes the qubit count from `--n`.
    Magic(Option<usize>),
}

impl FromStr for Builtin {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "haar" => Ok(Builtin::Haar),
            "stabilizer" => Ok(Builtin::Stabilizer),
            "magic" => Ok(Builtin::Magic(None)),
            _ => match s.strip_prefix("magic:") {
                Some(m) => m
                    .parse()
                    .map(|m| Builtin::Magic(Some(m)))
                    .map_err(|_| format!("bad magic-state count {m:?}")),
                None => Err(format!("unknown builtin {s:?} (expected haar, stabilizer or magic:M)")),
            },
        }
    }
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["circuit", "amplitudes", "builtin"])))]
pub struct SourceArgs {
    /// Clifford+T circuit file
    #[arg(long, value_name = "FILE")]
    pub circuit: Option<PathBuf>,
    /// Amplitude file
    #[arg(long, value_name = "FILE")]
    pub amplitudes: Option<PathBuf>,
    /// Generated state: haar, stabilizer or magic:M
    #[arg(long, value_name = "NAME")]
    pub builtin: Option<Builtin>,
    /// Rescale amplitude files that are off by more than the file tolerance
    #[arg(long, requires = "amplitudes")]
    pub normalize: bool,
    /// Qubit count for generated states
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone)]
enum Kind {
    Fixed(StateVector),
    Haar,
    Stabilizer,
}

/// A resolved input. Generated sources produce a fresh state per trial.
#[derive(Debug, Clone)]
pub struct Source {
    kind: Kind,
    n: usize,
    t_count: Option<usize>,
    label: String,
    magic: Option<usize>,
}

impl Source {
    pub fn resolve(args: &SourceArgs) -> Result<Self, CliError> {
        let source = if let Some(path) = &args.circuit {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let circuit = parse_circuit(&text).map_err(|e| CliError::in_file(path, e))?;
            let state = simulate(&circuit)?;
            Source {
                n: state.n(),
                t_count: Some(circuit.t_count()),
                label: format!("circuit:{}", path.display()),
                kind: Kind::Fixed(state),
                magic: None,
            }
        } else if let Some(path) = &args.amplitudes {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let state = parse_amplitudes(&text, args.normalize).map_err(|e| CliError::in_file(path, e))?;
            Source {
                n: state.n(),
                t_count: None,
                label: format!("amplitudes:{}", path.display()),
                kind: Kind::Fixed(state),
                magic: None,
            }
        } else {
            let need_n = || args.n.ok_or_else(|| CliError::Usage("this builtin needs --n".into()));
            match args.builtin.expect("source group is required") {
                Builtin::Haar => {
                    Source { kind: Kind::Haar, n: need_n()?, t_count: None, label: "builtin:haar".into(), magic: None }
                }
                Builtin::Stabilizer => Source {
                    kind: Kind::Stabilizer,
                    n: need_n()?,
                    t_count: Some(0),
                    label: "builtin:stabilizer".into(),
                    magic: None,
                },
                Builtin::Magic(m) => {
                    let m = match m {
                        Some(m) => m,
                        None => need_n()?,
                    };
                    let state = StateVector::magic(m)?;
                    Source {
                        kind: Kind::Fixed(state),
                        n: m,
                        t_count: Some(m),
                        label: format!("builtin:magic:{m}"),
                        magic: Some(m),
                    }
                }
            }
        };
        if let Some(n) = args.n {
            if n != source.n {
                return Err(CliError::Usage(format!("--n {n} conflicts with the {}-qubit input", source.n)));
            }
        }
        Ok(source)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t_count(&self) -> Option<usize> {
        self.t_count
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// State for `trial`; generated sources draw from stream `2 * trial`.
    pub fn state(&self, seed: u64, trial: u64) -> Result<StateVector, CliError> {
        let mut r = rng::stream(seed, 2 * trial);
        Ok(match &self.kind {
            Kind::Fixed(s) => s.clone(),
            Kind::Haar => haar_random(self.n, &mut r)?,
            Kind::Stabilizer => simulate(&random_clifford_t(self.n, 0, 10 * self.n, &mut r)?)?,
        })
    }

    /// Seed for the `rep`-th estimator run of `trial`.
    pub fn estimator_seed(seed: u64, trial: u64, rep: u64) -> u64 {
        let mut r = rng::stream(seed, 2 * trial + 1);
        (0..rep).for_each(|_| {
            r.random::<u64>();
        });
        r.random()
    }

    /// Correct verdict when the source determines it.
    pub fn truth(&self, k: f64) -> Option<Verdict> {
        match (&self.kind, self.magic) {
            (Kind::Haar, _) => Some(Verdict::HaarLike),
            (Kind::Stabilizer, _) => Some(Verdict::LowComplexity),
            (_, Some(m)) if 1.0 / magic_fidelity(m) <= k => Some(Verdict::LowComplexity),
            _ => None,
        }
    }
}
