//! Batch front end for the distortion library: SNR sweeps, reference
//! figures and asymptotic summaries.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod args;
pub mod config;
pub mod csvio;
pub mod error;
pub mod figures;
pub mod report;
pub mod sweep;
pub mod svg;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use args::{Cli, Command};
use error::{CliError, CliResult};

pub const THREADS_ENV: &str = "DISTORTION_LAB_THREADS";

/// Caps the global worker pool from `DISTORTION_LAB_THREADS`.
pub fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("{THREADS_ENV} must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot size worker pool: {e}")))
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Sweep(a) => {
            let (req, out) = sweep::resolve_sweep(&a)?;
            let curve = sweep::run_sweep(&req)?;
            match out {
                Some(p) => {
                    let mut w = BufWriter::new(File::create(&p)?);
                    csvio::write_curve(&mut w, &curve)?;
                    w.flush()?;
                }
                None => csvio::write_curve(io::stdout().lock(), &curve)?,
            }
        }
        Command::Figure(a) => {
            if a.mc_n < mimo_distortion::mcsim::MIN_REALIZATIONS {
                return Err(CliError::Config(format!("--mc-n must be at least {}", mimo_distortion::mcsim::MIN_REALIZATIONS)));
            }
            for p in figures::run_figure(&a)? {
                println!("{}", p.display());
            }
        }
        Command::Asymptotic(link) => {
            let (cfg, corr, _) = sweep::resolve_link(&link)?;
            let r = report::asymptotic_report(&cfg, &corr)?;
            println!("{}", r.human());
            println!("{}", r.json());
        }
    }
    Ok(())
}
