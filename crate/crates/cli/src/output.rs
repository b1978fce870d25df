use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::error::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Seed recorded in every report
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write reports here instead of stdout
    #[arg(long, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Worker threads (default: machine parallelism)
    #[arg(long)]
    pub jobs: Option<usize>,
}

/// Report stream in the selected format.
pub enum Sink {
    Json(Box<dyn Write>),
    Csv(Box<csv::Writer<Box<dyn Write>>>),
}

impl Sink {
    pub fn open(common: &CommonArgs) -> Result<Self, CliError> {
        let out: Box<dyn Write> = match &common.output {
            Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| CliError::io(path, e))?)),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        Ok(match common.format {
            Format::Json => Sink::Json(out),
            Format::Csv => Sink::Csv(Box::new(csv::Writer::from_writer(out))),
        })
    }

    pub fn json<T: Serialize>(&mut self, record: &T) -> Result<(), CliError> {
        if let Sink::Json(w) = self {
            serde_json::to_writer(&mut *w, record)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn csv_row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        if let Sink::Csv(w) = self {
            w.write_record(fields)?;
        }
        Ok(())
    }

    pub fn is_csv(&self) -> bool {
        matches!(self, Sink::Csv(_))
    }

    pub fn finish(self) -> Result<(), CliError> {
        match self {
            Sink::Json(mut w) => w.flush()?,
            Sink::Csv(mut w) => w.flush()?,
        }
        Ok(())
    }
}

/// Shortest round-trip float text, shared by the CSV outputs.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}
