use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use stabscope::bounds::{self, BoundParams, BoundReport, BOUND_NAMES};
use stabscope::circuit::parse_circuit;
use stabscope::sampler::{
    distinguish_with, majority_repetitions, plan, DistinguishOptions, EtaEstimator, ExperimentReport, Verdict,
};
use stabscope::spectra::{spectra, EtaPaths, Spectra, TableSummary, ETA_AGREEMENT};
use stabscope::stabset::{extent_upper_bound_clifford_t, stabilizer_fidelity_argmax};
use stabscope::state::parse_amplitudes;
use stabscope::Error;

use crate::error::CliError;
use crate::output::{num, CommonArgs, Sink, VERSION};
use crate::source::{Source, SourceArgs};

#[derive(Debug, Clone, Args)]
pub struct EtaArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Independent states to evaluate (generated sources differ per trial)
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    /// Also write each trial's tables as CSV into this directory
    #[arg(long, value_name = "DIR")]
    pub dump_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DistinguishArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    /// Complexity parameter; the cut is 2/(3k^6)
    #[arg(long)]
    pub k: f64,
    /// Failure probability
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    /// Fixed sample count instead of 60 k^12 ln(1/delta)
    #[arg(long)]
    pub m_override: Option<u64>,
    /// Estimator runs per trial, combined by majority vote
    #[arg(long, default_value_t = 1, conflicts_with = "amplify")]
    pub repeats: u64,
    /// Use ceil((2/3) ln(1/delta)) repetitions per trial
    #[arg(long)]
    pub amplify: bool,
}

#[derive(Debug, Clone, Args)]
pub struct FidelityArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    /// Bound to evaluate
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(BOUND_NAMES))]
    pub name: String,
    #[arg(long)]
    pub dim: Option<f64>,
    #[arg(long)]
    pub lipschitz: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub xi_v: Option<f64>,
    #[arg(long)]
    pub xi_w: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ParseCheckArgs {
    /// Files to check
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// Treat the files as amplitude lists rather than circuits
    #[arg(long)]
    pub amplitudes: bool,
}

#[derive(Debug, Clone, Args)]
pub struct DumpArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Directory for p.csv, q.csv and p_hat.csv
    #[arg(long, value_name = "DIR")]
    pub dump_dir: PathBuf,
}

fn check_trials(trials: u64) -> Result<(), CliError> {
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    Ok(())
}

fn write_tables(dir: &Path, sp: &Spectra, suffix: &str) -> Result<Vec<String>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Vec::new();
    for (stem, table) in [("p", &sp.p), ("q", &sp.q), ("p_hat", &sp.p_hat)] {
        let path = dir.join(format!("{stem}{suffix}.csv"));
        let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
        table.write_csv(BufWriter::new(file)).map_err(|e| CliError::io(&path, e))?;
        written.push(path.display().to_string());
    }
    Ok(written)
}

fn checked_spectra(state: &stabscope::StateVector) -> Result<Spectra, CliError> {
    let sp = spectra(state)?;
    let gap = sp.eta.max_disagreement();
    if !(gap <= ETA_AGREEMENT) {
        return Err(Error::PathDisagreement { detail: format!("{:?} (spread {gap:e})", sp.eta) }.into());
    }
    Ok(sp)
}

#[derive(Serialize)]
struct EtaRecord<'a> {
    command: &'static str,
    version: &'static str,
    seed: u64,
    trial: u64,
    n: usize,
    source: &'a str,
    eta: f64,
    paths: EtaPaths,
    max_disagreement: f64,
    p: TableSummary,
    q: TableSummary,
    p_hat: TableSummary,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    files: Vec<String>,
}

pub fn eta(a: &EtaArgs) -> Result<(), CliError> {
    check_trials(a.trials)?;
    let src = Source::resolve(&a.source)?;
    let seed = a.common.seed;
    let records: Vec<EtaRecord> = (0..a.trials)
        .into_par_iter()
        .map(|trial| {
            let sp = checked_spectra(&src.state(seed, trial)?)?;
            let files = match &a.dump_dir {
                Some(dir) => write_tables(dir, &sp, &format!("_{trial}"))?,
                None => Vec::new(),
            };
            Ok(EtaRecord {
                command: "eta",
                version: VERSION,
                seed,
                trial,
                n: src.n(),
                source: src.label(),
                eta: sp.eta.pairwise,
                paths: sp.eta,
                max_disagreement: sp.eta.max_disagreement(),
                p: sp.p.summary(),
                q: sp.q.summary(),
                p_hat: sp.p_hat.summary(),
                files,
            })
        })
        .collect::<Result<_, CliError>>()?;

    let mut sink = Sink::open(&a.common)?;
    sink.csv_row([
        "trial", "n", "source", "eta", "eta_pairwise", "eta_fourier", "eta_direct", "max_disagreement", "p_sum",
        "q_sum", "seed", "version",
    ])?;
    for r in &records {
        sink.json(r)?;
        sink.csv_row([
            r.trial.to_string(),
            r.n.to_string(),
            r.source.to_string(),
            num(r.eta),
            num(r.paths.pairwise),
            num(r.paths.fourier),
            r.paths.direct.map(num).unwrap_or_default(),
            num(r.max_disagreement),
            num(r.p.sum),
            num(r.q.sum),
            r.seed.to_string(),
            VERSION.to_string(),
        ])?;
    }
    sink.finish()
}

#[derive(Serialize)]
struct TrialRecord<'a> {
    command: &'static str,
    version: &'static str,
    trial: u64,
    repetition: u64,
    source: &'a str,
    #[serde(flatten)]
    report: ExperimentReport,
    estimator_seed: u64,
}

#[derive(Serialize)]
struct Summary<'a> {
    command: &'static str,
    version: &'static str,
    seed: u64,
    n: usize,
    source: &'a str,
    truth: &'static str,
    trials: u64,
    repetitions: u64,
    correct: u64,
    accuracy: f64,
}

pub fn distinguish(a: &DistinguishArgs) -> Result<(), CliError> {
    check_trials(a.trials)?;
    let src = Source::resolve(&a.source)?;
    let opts = DistinguishOptions { m_override: a.m_override, ..Default::default() };
    let (_, warnings) = plan(src.n(), a.k, a.delta, &opts)?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let repeats = if a.amplify { majority_repetitions(a.delta)? } else { a.repeats };
    if repeats == 0 {
        return Err(CliError::Usage("--repeats must be at least 1".into()));
    }
    let seed = a.common.seed;

    let trials: Vec<(Vec<TrialRecord>, Verdict)> = (0..a.trials)
        .into_par_iter()
        .map(|trial| {
            let estimator = EtaEstimator::new(&src.state(seed, trial)?)?;
            let mut rows = Vec::new();
            let mut low = 0;
            for rep in 0..repeats {
                let est_seed = Source::estimator_seed(seed, trial, rep);
                let mut report = distinguish_with(&estimator, a.k, a.delta, est_seed, &opts)?.report;
                report.seed = seed;
                low += (report.verdict == Verdict::LowComplexity) as u64;
                rows.push(TrialRecord {
                    command: "distinguish",
                    version: VERSION,
                    trial,
                    repetition: rep,
                    source: src.label(),
                    report,
                    estimator_seed: est_seed,
                });
            }
            let verdict = if 2 * low > repeats { Verdict::LowComplexity } else { Verdict::HaarLike };
            Ok((rows, verdict))
        })
        .collect::<Result<_, CliError>>()?;

    let mut sink = Sink::open(&a.common)?;
    let mut header = vec!["trial".to_string(), "repetition".to_string()];
    header.extend(ExperimentReport::CSV_HEADER.split(',').map(String::from));
    header.extend(["estimator_seed".to_string(), "version".to_string()]);
    sink.csv_row(&header)?;
    for (rows, _) in &trials {
        for r in rows {
            sink.json(r)?;
            let mut fields = vec![r.trial.to_string(), r.repetition.to_string()];
            fields.extend(r.report.csv_fields());
            fields.extend([r.estimator_seed.to_string(), VERSION.to_string()]);
            sink.csv_row(&fields)?;
        }
    }
    if let Some(truth) = src.truth(a.k) {
        let correct = trials.iter().filter(|(_, v)| *v == truth).count() as u64;
        let summary = Summary {
            command: "distinguish-summary",
            version: VERSION,
            seed,
            n: src.n(),
            source: src.label(),
            truth: truth.as_str(),
            trials: a.trials,
            repetitions: repeats,
            correct,
            accuracy: correct as f64 / a.trials as f64,
        };
        if sink.is_csv() {
            eprintln!("accuracy: {correct}/{} {} ({})", a.trials, truth.as_str(), src.label());
        } else {
            sink.json(&summary)?;
        }
    }
    sink.finish()
}

#[derive(Serialize)]
struct FidelityRecord<'a> {
    command: &'static str,
    version: &'static str,
    seed: u64,
    n: usize,
    source: &'a str,
    fidelity: f64,
    inverse_fidelity: f64,
    t_count: Option<usize>,
    extent_bound: Option<f64>,
    within_bound: Option<bool>,
    argmax_index: u64,
    argmax_amplitudes: Vec<[f64; 2]>,
}

pub fn fidelity(a: &FidelityArgs) -> Result<(), CliError> {
    let src = Source::resolve(&a.source)?;
    let seed = a.common.seed;
    let result = stabilizer_fidelity_argmax(&src.state(seed, 0)?)?;
    let inverse = 1.0 / result.fidelity;
    let extent = src.t_count().map(extent_upper_bound_clifford_t);
    let r = FidelityRecord {
        command: "fidelity",
        version: VERSION,
        seed,
        n: src.n(),
        source: src.label(),
        fidelity: result.fidelity,
        inverse_fidelity: inverse,
        t_count: src.t_count(),
        extent_bound: extent,
        within_bound: extent.map(|x| inverse <= x * (1.0 + 1e-12)),
        argmax_index: result.argmax_index,
        argmax_amplitudes: result.argmax.amplitudes().iter().map(|c| [c.re, c.im]).collect(),
    };
    let mut sink = Sink::open(&a.common)?;
    sink.json(&r)?;
    sink.csv_row([
        "source", "fidelity", "inverse_fidelity", "t_count", "extent_bound", "argmax_index", "seed", "n", "version",
    ])?;
    sink.csv_row([
        r.source.to_string(),
        num(r.fidelity),
        num(r.inverse_fidelity),
        r.t_count.map(|t| t.to_string()).unwrap_or_default(),
        r.extent_bound.map(num).unwrap_or_default(),
        r.argmax_index.to_string(),
        seed.to_string(),
        r.n.to_string(),
        VERSION.to_string(),
    ])?;
    sink.finish()
}

#[derive(Serialize)]
struct BoundRecord {
    command: &'static str,
    version: &'static str,
    seed: u64,
    n: Option<usize>,
    #[serde(flatten)]
    report: BoundReport,
}

pub fn bounds(a: &BoundsArgs) -> Result<(), CliError> {
    let params = BoundParams {
        dim: a.dim,
        lipschitz: a.lipschitz,
        eps: a.eps,
        n: a.n,
        eta: a.eta,
        t: a.t,
        k: a.k,
        delta: a.delta,
        alpha: a.alpha,
        beta: a.beta,
        xi_v: a.xi_v,
        xi_w: a.xi_w,
    };
    let report = bounds::evaluate(&a.name, &params)?;
    let mut sink = Sink::open(&a.common)?;
    sink.csv_row(["name", "kind", "value", "seed", "n", "version"])?;
    sink.csv_row([
        report.name.clone(),
        serde_json::to_value(report.kind)?.as_str().unwrap_or_default().to_string(),
        num(report.value),
        a.common.seed.to_string(),
        a.n.map(|n| n.to_string()).unwrap_or_default(),
        VERSION.to_string(),
    ])?;
    sink.json(&BoundRecord { command: "bounds", version: VERSION, seed: a.common.seed, n: a.n, report })?;
    sink.finish()
}

/// Prints `file:line:col` diagnostics; exit status 2 if any file fails.
pub fn parse_check(a: &ParseCheckArgs) -> ExitCode {
    let mut failed = false;
    for path in &a.files {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("{}: error: {e}", path.display());
                failed = true;
                continue;
            }
        };
        let summary = if a.amplitudes {
            parse_amplitudes(&text, false).map(|s| format!("{} qubits, {} amplitudes", s.n(), s.dim()))
        } else {
            parse_circuit(&text)
                .map(|c| format!("{} qubits, {} gates, T-count {}", c.n(), c.gates().len(), c.t_count()))
        };
        match summary {
            Ok(s) => println!("{}: ok, {s}", path.display()),
            Err(Error::Parse { line, column, message }) => {
                eprintln!("{}:{line}:{column}: error: {message}", path.display());
                failed = true;
            }
            Err(e) => {
                eprintln!("{}: error: {e}", path.display());
                failed = true;
            }
        }
    }
    if failed {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

#[derive(Serialize)]
struct DumpRecord<'a> {
    command: &'static str,
    version: &'static str,
    seed: u64,
    n: usize,
    source: &'a str,
    files: Vec<String>,
    p: TableSummary,
    q: TableSummary,
    p_hat: TableSummary,
}

pub fn dump_tables(a: &DumpArgs) -> Result<(), CliError> {
    let src = Source::resolve(&a.source)?;
    let seed = a.common.seed;
    let sp = checked_spectra(&src.state(seed, 0)?)?;
    let files = write_tables(&a.dump_dir, &sp, "")?;
    let mut sink = Sink::open(&a.common)?;
    sink.csv_row(["table", "file", "sum", "max", "support", "seed", "n", "version"])?;
    for ((name, s), file) in [("p", sp.p.summary()), ("q", sp.q.summary()), ("p_hat", sp.p_hat.summary())]
        .iter()
        .zip(&files)
    {
        sink.csv_row([
            name.to_string(),
            file.clone(),
            num(s.sum),
            num(s.max),
            s.support.to_string(),
            seed.to_string(),
            src.n().to_string(),
            VERSION.to_string(),
        ])?;
    }
    sink.json(&DumpRecord {
        command: "dump-tables",
        version: VERSION,
        seed,
        n: src.n(),
        source: src.label(),
        files,
        p: sp.p.summary(),
        q: sp.q.summary(),
        p_hat: sp.p_hat.summary(),
    })?;
    sink.finish()
}
