//! Command-line surface and the value parsers shared with config files.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mimo_distortion::detkit::EigenvalueList;
use mimo_distortion::CorrelationSpec;

#[derive(Debug, Parser)]
#[command(name = "distortion-lab", version, about = "Expected end-to-end distortion of outage-free MIMO links")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate distortion over an SNR grid and write CSV.
    Sweep(SweepArgs),
    /// Regenerate one of the reference figures as CSV plus SVG.
    Figure(FigureArgs),
    /// Print regime, exponent and distortion factor of a link.
    Asymptotic(LinkArgs),
}

#[derive(Debug, Default, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct LinkArgs {
    /// Flat key = value file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Transmit antennas.
    #[arg(long)]
    pub nt: Option<usize>,
    /// Receive antennas.
    #[arg(long)]
    pub nr: Option<usize>,
    /// Channel uses per source sample (bandwidth ratio).
    #[arg(long)]
    pub eta: Option<f64>,
    /// Source power.
    #[arg(long)]
    pub ps: Option<f64>,
    /// none | exp:<r> | eig:<v1,v2,..>
    #[arg(long)]
    pub corr: Option<String>,
}

#[derive(Debug, Default, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    #[command(flatten)]
    pub link: LinkArgs,
    /// start:stop:step in dB.
    #[arg(long = "snr-db")]
    pub snr_db: Option<String>,
    /// Comma list from exact, asymptotic, montecarlo.
    #[arg(long)]
    pub modes: Option<String>,
    /// Channel realizations per SNR point.
    #[arg(long = "mc-n")]
    pub mc_n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output CSV path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureName {
    Fig1,
    Fig2,
    Fig3,
    Fig4a,
    Fig4b,
}

impl FigureName {
    pub fn stem(self) -> &'static str {
        match self {
            FigureName::Fig1 => "fig1",
            FigureName::Fig2 => "fig2",
            FigureName::Fig3 => "fig3",
            FigureName::Fig4a => "fig4a",
            FigureName::Fig4b => "fig4b",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    pub name: FigureName,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Channel realizations per Monte Carlo point.
    #[arg(long = "mc-n", default_value_t = 10_000)]
    pub mc_n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Exact,
    Asymptotic,
    MonteCarlo,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Asymptotic => "asymptotic",
            Mode::MonteCarlo => "montecarlo",
        }
    }
}

/// Inclusive dB grid `start, start+step, .., ≤ stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

pub const MAX_GRID_POINTS: usize = 100_000;

impl SnrRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self, String> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err("SNR bounds must be finite".into());
        }
        if start > stop {
            return Err(format!("SNR start {start} exceeds stop {stop}"));
        }
        if !(step > 0.0) {
            return Err(format!("SNR step must be positive, got {step}"));
        }
        let r = Self { start, stop, step };
        if r.count() > MAX_GRID_POINTS {
            return Err(format!("SNR grid has more than {MAX_GRID_POINTS} points"));
        }
        Ok(r)
    }

    fn count(&self) -> usize {
        // small slack so 0:30:0.1 keeps its last point
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.count()).map(|k| self.start + self.step * k as f64).collect()
    }
}

pub fn parse_snr_range(s: &str) -> Result<SnrRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("'{t}' is not a number in SNR range '{s}'"));
    match parts.as_slice() {
        [a] => {
            let v = num(a)?;
            SnrRange::new(v, v, 1.0)
        }
        [a, b, c] => SnrRange::new(num(a)?, num(b)?, num(c)?),
        _ => Err(format!("SNR range '{s}' must be start:stop:step")),
    }
}

pub fn parse_modes(s: &str) -> Result<Vec<Mode>, String> {
    let mut modes = Vec::new();
    for t in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let m = match t.to_ascii_lowercase().as_str() {
            "exact" => Mode::Exact,
            "asymptotic" | "asy" => Mode::Asymptotic,
            "montecarlo" | "mc" => Mode::MonteCarlo,
            _ => return Err(format!("unknown mode '{t}' (expected exact, asymptotic, montecarlo)")),
        };
        modes.push(m);
    }
    modes.sort();
    modes.dedup();
    if modes.is_empty() {
        return Err("at least one mode is required".into());
    }
    Ok(modes)
}

pub fn parse_corr(s: &str) -> Result<CorrelationSpec, String> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("none") {
        return Ok(CorrelationSpec::Uncorrelated);
    }
    if let Some(r) = s.strip_prefix("exp:") {
        let r: f64 = r.trim().parse().map_err(|_| format!("'{r}' is not a correlation coefficient"))?;
        if r == 0.0 {
            return Err("exp:0 is the uncorrelated channel; pass --corr none".into());
        }
        return CorrelationSpec::exponential(r).map_err(|e| e.to_string());
    }
    if let Some(list) = s.strip_prefix("eig:") {
        let v = list
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| format!("'{t}' is not an eigenvalue")))
            .collect::<Result<Vec<_>, _>>()?;
        return EigenvalueList::from_unsorted(v).map(CorrelationSpec::Eigenvalues).map_err(|e| e.to_string());
    }
    Err(format!("correlation '{s}' must be none, exp:<r> or eig:<v1,v2,..>"))
}

pub fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.trim().parse().map_err(|_| format!("'{s}' is not a valid number"))
}
