//! SNR sweeps over any combination of the three evaluation modes.

use std::path::PathBuf;

use mimo_distortion::asymptotic::{distortion_factor_correlated, ed_asymptotic};
use mimo_distortion::exact::ed_exact_correlated;
use mimo_distortion::mcsim::{mc_expected_distortion, MIN_REALIZATIONS};
use mimo_distortion::{db_to_linear, CorrelationSpec, CurveRow, DistortionCurve, SystemConfig};
use rayon::prelude::*;

use crate::args::{parse_corr, parse_modes, parse_num, parse_snr_range, LinkArgs, Mode, SnrRange, SweepArgs};
use crate::config::ConfigFile;
use crate::error::{config_err, CliError, CliResult};

pub const DEFAULT_SNR: &str = "0:30:2";
pub const DEFAULT_MODES: &str = "exact,asymptotic";
pub const DEFAULT_MC_N: usize = 10_000;
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRequest {
    pub cfg: SystemConfig,
    pub corr: CorrelationSpec,
    pub snr: SnrRange,
    pub modes: Vec<Mode>,
    pub mc_n: usize,
    pub seed: u64,
}

impl SweepRequest {
    pub fn new(
        cfg: SystemConfig,
        corr: CorrelationSpec,
        snr: SnrRange,
        modes: Vec<Mode>,
        mc_n: usize,
        seed: u64,
    ) -> CliResult<Self> {
        corr.validate(&cfg).map_err(config_err)?;
        if modes.is_empty() {
            return Err(CliError::Config("at least one mode is required".into()));
        }
        if modes.contains(&Mode::MonteCarlo) && mc_n < MIN_REALIZATIONS {
            return Err(CliError::Config(format!("mc_n must be at least {MIN_REALIZATIONS}, got {mc_n}")));
        }
        Ok(Self { cfg, corr, snr, modes, mc_n, seed })
    }

    fn wants(&self, m: Mode) -> bool {
        self.modes.contains(&m)
    }
}

fn pick<T>(flag: Option<T>, file: &ConfigFile, key: &str, parse: impl Fn(&str) -> Result<T, String>) -> CliResult<Option<T>> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => file.parsed(key, parse),
    }
}

fn flag<T>(v: Option<&String>, key: &str, parse: impl Fn(&str) -> Result<T, String>) -> CliResult<Option<T>> {
    v.map(|s| parse(s).map_err(|e| CliError::Config(format!("--{key}: {e}")))).transpose()
}

fn load_config(link: &LinkArgs) -> CliResult<ConfigFile> {
    link.config.as_deref().map(ConfigFile::load).transpose().map(Option::unwrap_or_default)
}

/// Link and correlation from flags over an optional config file.
pub fn resolve_link(link: &LinkArgs) -> CliResult<(SystemConfig, CorrelationSpec, ConfigFile)> {
    let file = load_config(link)?;
    let required = |name: &str| CliError::Config(format!("missing --{name} (flag or config key)"));
    let nt = pick(link.nt, &file, "nt", parse_num)?.ok_or_else(|| required("nt"))?;
    let nr = pick(link.nr, &file, "nr", parse_num)?.ok_or_else(|| required("nr"))?;
    let eta = pick(link.eta, &file, "eta", parse_num)?.ok_or_else(|| required("eta"))?;
    let ps = pick(link.ps, &file, "ps", parse_num)?.unwrap_or(1.0);
    let corr = match flag(link.corr.as_ref(), "corr", parse_corr)? {
        Some(c) => Some(c),
        None => file.parsed("corr", parse_corr)?,
    }
    .unwrap_or(CorrelationSpec::Uncorrelated);
    let cfg = SystemConfig::new(nt, nr, eta, ps).map_err(config_err)?;
    corr.validate(&cfg).map_err(config_err)?;
    Ok((cfg, corr, file))
}

/// Builds the request and output path for `sweep`.
pub fn resolve_sweep(args: &SweepArgs) -> CliResult<(SweepRequest, Option<PathBuf>)> {
    let (cfg, corr, file) = resolve_link(&args.link)?;
    let snr = match flag(args.snr_db.as_ref(), "snr-db", parse_snr_range)? {
        Some(r) => r,
        None => file.parsed("snr_db", parse_snr_range)?.map_or_else(|| parse_snr_range(DEFAULT_SNR).map_err(CliError::Config), Ok)?,
    };
    let modes = match flag(args.modes.as_ref(), "modes", parse_modes)? {
        Some(m) => m,
        None => file.parsed("modes", parse_modes)?.map_or_else(|| parse_modes(DEFAULT_MODES).map_err(CliError::Config), Ok)?,
    };
    let mc_n = pick(args.mc_n, &file, "mc_n", parse_num)?.unwrap_or(DEFAULT_MC_N);
    let seed = pick(args.seed, &file, "seed", parse_num)?.unwrap_or(DEFAULT_SEED);
    let out = args.out.clone().or_else(|| file.get("out").map(PathBuf::from));
    Ok((SweepRequest::new(cfg, corr, snr, modes, mc_n, seed)?, out))
}

/// Seed of the `k`-th grid point, so points carry independent sample paths.
pub fn point_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_add((k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn run_sweep(req: &SweepRequest) -> CliResult<DistortionCurve> {
    let grid = req.snr.grid();
    let at = |snr_db: f64, mode: Mode| move |source| CliError::AtPoint { snr_db, mode: mode.label(), source };

    let exact = if req.wants(Mode::Exact) {
        let vals: Vec<_> = grid.par_iter().map(|&db| ed_exact_correlated(&req.cfg, &req.corr, db_to_linear(db))).collect();
        let mut out = Vec::with_capacity(grid.len());
        for (v, &db) in vals.into_iter().zip(&grid) {
            out.push(v.map_err(at(db, Mode::Exact))?);
        }
        Some(out)
    } else {
        None
    };

    let asymptotic = if req.wants(Mode::Asymptotic) {
        let form = distortion_factor_correlated(&req.cfg, &req.corr).map_err(at(grid[0], Mode::Asymptotic))?;
        let mut out = Vec::with_capacity(grid.len());
        for &db in &grid {
            out.push(ed_asymptotic(&form, db_to_linear(db)).map_err(at(db, Mode::Asymptotic))?);
        }
        Some(out)
    } else {
        None
    };

    let mc = if req.wants(Mode::MonteCarlo) {
        let mut out = Vec::with_capacity(grid.len());
        for (k, &db) in grid.iter().enumerate() {
            let e = mc_expected_distortion(&req.cfg, &req.corr, db_to_linear(db), req.mc_n, point_seed(req.seed, k))
                .map_err(at(db, Mode::MonteCarlo))?;
            out.push(e);
        }
        Some(out)
    } else {
        None
    };

    let mut curve = DistortionCurve::new();
    for (k, &db) in grid.iter().enumerate() {
        let m = mc.as_ref().map(|v| v[k]);
        curve
            .push(CurveRow {
                snr_db: db,
                ed_exact: exact.as_ref().map(|v| v[k]),
                ed_asymptotic: asymptotic.as_ref().map(|v| v[k]),
                ed_mc: m.map(|e| e.mean),
                mc_std_error: m.map(|e| e.std_error),
            })
            .map_err(config_err)?;
    }
    Ok(curve)
}
