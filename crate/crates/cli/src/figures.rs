//! Reference figures: each writes a CSV table and one or more SVG charts.

use std::fs;
use std::path::{Path, PathBuf};

use mimo_distortion::asymptotic::{distortion_factor_uncorrelated, ed_asymptotic};
use mimo_distortion::exact::ed_exact_uncorrelated;
use mimo_distortion::mcsim::{ed_alm, ed_sm, mc_expected_distortion};
use mimo_distortion::{db_to_linear, CorrelationSpec, DistortionCurve, SystemConfig};
use rayon::prelude::*;

use crate::args::{FigureArgs, FigureName, Mode, SnrRange};
use crate::csvio::{curve_cells, curve_columns, fmt_f64, write_table};
use crate::error::{config_err, CliError, CliResult};
use crate::svg::{render, Chart, Series, Style};
use crate::sweep::{point_seed, run_sweep, SweepRequest};

pub const FIG1_SNR_DB: f64 = 30.0;
pub const FIG1_ETA: f64 = 4.0;
pub const FIG1_FIXED: usize = 5;
pub const FIG1_MAX: usize = 8;
pub const CORRELATIONS: [f64; 5] = [0.0, 0.3, 0.5, 0.9, 0.99];

#[derive(Debug, Clone, PartialEq)]
pub struct AntennaRow {
    /// `"nt"` when the transmit count varies, `"nr"` otherwise.
    pub varying: &'static str,
    pub n_t: usize,
    pub n_r: usize,
    pub delta: f64,
    pub mu: f64,
    pub ed_exact: f64,
    pub ed_asymptotic: f64,
    pub ed_mc: f64,
    pub mc_std_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeRow {
    pub snr_db: f64,
    pub ed_alm: f64,
    pub ed_sm: f64,
}

fn link(nt: usize, nr: usize, eta: f64) -> CliResult<SystemConfig> {
    SystemConfig::new(nt, nr, eta, 1.0).map_err(config_err)
}

/// Antenna sweep at 30 dB with one side held at five antennas.
pub fn antenna_sweep(mc_n: usize, seed: u64) -> CliResult<Vec<AntennaRow>> {
    let rho = db_to_linear(FIG1_SNR_DB);
    let links: Vec<(&'static str, usize, usize)> = (1..=FIG1_MAX)
        .map(|k| ("nt", k, FIG1_FIXED))
        .chain((1..=FIG1_MAX).map(|k| ("nr", FIG1_FIXED, k)))
        .collect();
    let at = |mode: Mode| move |source| CliError::AtPoint { snr_db: FIG1_SNR_DB, mode: mode.label(), source };
    let analytic: Vec<_> = links
        .par_iter()
        .map(|&(_, nt, nr)| {
            let cfg = link(nt, nr, FIG1_ETA)?;
            let form = distortion_factor_uncorrelated(&cfg).map_err(at(Mode::Asymptotic))?;
            let asy = ed_asymptotic(&form, rho).map_err(at(Mode::Asymptotic))?;
            let exact = ed_exact_uncorrelated(&cfg, rho).map_err(at(Mode::Exact))?;
            Ok((cfg, form, exact, asy))
        })
        .collect::<CliResult<_>>()?;
    let mut rows = Vec::with_capacity(links.len());
    for (k, ((varying, _, _), (cfg, form, exact, asy))) in links.into_iter().zip(analytic).enumerate() {
        let mc = mc_expected_distortion(&cfg, &CorrelationSpec::Uncorrelated, rho, mc_n, point_seed(seed, k))
            .map_err(at(Mode::MonteCarlo))?;
        rows.push(AntennaRow {
            varying,
            n_t: cfg.n_t,
            n_r: cfg.n_r,
            delta: form.delta,
            mu: form.mu,
            ed_exact: exact,
            ed_asymptotic: asy,
            ed_mc: mc.mean,
            mc_std_error: mc.std_error,
        });
    }
    Ok(rows)
}

/// Alamouti against spatial multiplexing on the 2x2, η=1 link.
pub fn scheme_comparison(snr: SnrRange) -> CliResult<Vec<SchemeRow>> {
    snr.grid()
        .into_iter()
        .map(|db| {
            let rho = db_to_linear(db);
            let at = |mode: &'static str| move |source| CliError::AtPoint { snr_db: db, mode, source };
            Ok(SchemeRow { snr_db: db, ed_alm: ed_alm(rho).map_err(at("alamouti"))?, ed_sm: ed_sm(rho).map_err(at("multiplexing"))? })
        })
        .collect()
}

/// One full-mode sweep per correlation coefficient; `r = 0` is the uncorrelated link.
pub fn correlation_sweep(cfg: SystemConfig, snr: SnrRange, mc_n: usize, seed: u64) -> CliResult<Vec<(f64, DistortionCurve)>> {
    CORRELATIONS
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            let corr = if r == 0.0 { CorrelationSpec::Uncorrelated } else { CorrelationSpec::exponential(r).map_err(config_err)? };
            let modes = vec![Mode::Exact, Mode::Asymptotic, Mode::MonteCarlo];
            let req = SweepRequest::new(cfg, corr, snr, modes, mc_n, seed.wrapping_add(k as u64 * 0x1_0000))?;
            Ok((r, run_sweep(&req)?))
        })
        .collect()
}

fn grid(start: f64, stop: f64, step: f64) -> SnrRange {
    SnrRange::new(start, stop, step).expect("figure grids are valid")
}

fn series(label: String, points: Vec<(f64, f64)>, style: Style, color: usize) -> Series {
    Series { label, points, style, color }
}

fn curve_series(curve: &DistortionCurve, tag: &str, color: usize) -> Vec<Series> {
    let pick = |f: fn(&mimo_distortion::CurveRow) -> Option<f64>| -> Vec<(f64, f64)> {
        curve.rows().iter().filter_map(|r| f(r).map(|v| (r.snr_db, v))).collect()
    };
    vec![
        series(format!("exact{tag}"), pick(|r| r.ed_exact), Style::Solid, color),
        series(format!("asymptotic{tag}"), pick(|r| r.ed_asymptotic), Style::Dashed, color),
        series(format!("Monte Carlo{tag}"), pick(|r| r.ed_mc), Style::Markers, color),
    ]
}

/// File stem, header and pre-formatted rows.
type Table = (String, Vec<&'static str>, Vec<Vec<String>>);

struct Output {
    tables: Vec<Table>,
    charts: Vec<(String, Chart)>,
}

fn fig1(mc_n: usize, seed: u64) -> CliResult<Output> {
    let rows = antenna_sweep(mc_n, seed)?;
    let header = vec!["varying", "n_t", "n_r", "delta", "mu", "ed_exact", "ed_asymptotic", "ed_mc", "mc_std_error"];
    let cells = rows
        .iter()
        .map(|r| {
            let mut v = vec![r.varying.to_string(), r.n_t.to_string(), r.n_r.to_string()];
            v.extend([r.delta, r.mu, r.ed_exact, r.ed_asymptotic, r.ed_mc, r.mc_std_error].map(fmt_f64));
            v
        })
        .collect();
    let mut s = Vec::new();
    for (color, side, fixed) in [(0, "nt", "N_r"), (1, "nr", "N_t")] {
        let part: Vec<&AntennaRow> = rows.iter().filter(|r| r.varying == side).collect();
        let x = |r: &AntennaRow| (if side == "nt" { r.n_t } else { r.n_r }) as f64;
        let tag = format!(", {fixed}={FIG1_FIXED}");
        s.push(series(format!("exact{tag}"), part.iter().map(|r| (x(r), r.ed_exact)).collect(), Style::Solid, color));
        s.push(series(format!("asymptotic{tag}"), part.iter().map(|r| (x(r), r.ed_asymptotic)).collect(), Style::Dashed, color));
        s.push(series(format!("Monte Carlo{tag}"), part.iter().map(|r| (x(r), r.ed_mc)).collect(), Style::Markers, color));
    }
    let chart = Chart {
        title: format!("Uncorrelated link at {FIG1_SNR_DB} dB, eta={FIG1_ETA}"),
        x_label: "antennas on the varying side".into(),
        y_label: "expected distortion".into(),
        log_x: false,
        series: s,
    };
    Ok(Output { tables: vec![("fig1".into(), header, cells)], charts: vec![("fig1".into(), chart)] })
}

fn fig2() -> CliResult<Output> {
    let rows = scheme_comparison(grid(0.0, 40.0, 1.0))?;
    let header = vec!["snr_db", "ed_alm", "ed_sm", "difference", "ratio"];
    let cells = rows.iter().map(|r| [r.snr_db, r.ed_alm, r.ed_sm, r.ed_alm - r.ed_sm, r.ed_alm / r.ed_sm].map(fmt_f64).to_vec()).collect();
    let lin = Chart {
        title: "Alamouti vs spatial multiplexing, 2x2, eta=1".into(),
        x_label: "SNR (dB)".into(),
        y_label: "expected distortion".into(),
        log_x: false,
        series: vec![
            series("Alamouti".into(), rows.iter().map(|r| (r.snr_db, r.ed_alm)).collect(), Style::Solid, 0),
            series("spatial multiplexing".into(), rows.iter().map(|r| (r.snr_db, r.ed_sm)).collect(), Style::Solid, 1),
            series("difference".into(), rows.iter().map(|r| (r.snr_db, r.ed_alm - r.ed_sm)).collect(), Style::Dashed, 2),
        ],
    };
    let ratio = Chart {
        title: "Alamouti / spatial multiplexing distortion ratio".into(),
        x_label: "SNR (linear)".into(),
        y_label: "ratio".into(),
        log_x: true,
        series: vec![series("ratio".into(), rows.iter().map(|r| (db_to_linear(r.snr_db), r.ed_alm / r.ed_sm)).collect(), Style::Solid, 3)],
    };
    Ok(Output { tables: vec![("fig2".into(), header, cells)], charts: vec![("fig2a".into(), lin), ("fig2b".into(), ratio)] })
}

fn fig3(mc_n: usize, seed: u64) -> CliResult<Output> {
    let cfg = link(1, 2, 0.99)?;
    let req = SweepRequest::new(cfg, CorrelationSpec::Uncorrelated, grid(0.0, 30.0, 2.0), vec![Mode::Exact, Mode::Asymptotic, Mode::MonteCarlo], mc_n, seed)?;
    let curve = run_sweep(&req)?;
    let cols = curve_columns(&curve);
    let cells = curve.rows().iter().map(|r| curve_cells(r, &cols)).collect();
    let chart = Chart {
        title: "1x2 link, eta=0.99".into(),
        x_label: "SNR (dB)".into(),
        y_label: "expected distortion".into(),
        log_x: false,
        series: curve_series(&curve, "", 0),
    };
    Ok(Output { tables: vec![("fig3".into(), cols, cells)], charts: vec![("fig3".into(), chart)] })
}

fn fig4(stem: &str, nt: usize, nr: usize, eta: f64, mc_n: usize, seed: u64) -> CliResult<Output> {
    let curves = correlation_sweep(link(nt, nr, eta)?, grid(0.0, 30.0, 2.0), mc_n, seed)?;
    let mut header = vec!["r"];
    header.extend(curve_columns(&curves[0].1));
    let mut cells = Vec::new();
    let mut s = Vec::new();
    for (k, (r, curve)) in curves.iter().enumerate() {
        for row in curve.rows() {
            let mut v = vec![fmt_f64(*r)];
            v.extend(curve_cells(row, &header[1..]));
            cells.push(v);
        }
        s.extend(curve_series(curve, &format!(", r={r}"), k));
    }
    let chart = Chart {
        title: format!("{nt}x{nr} link, eta={eta}, exponential correlation"),
        x_label: "SNR (dB)".into(),
        y_label: "expected distortion".into(),
        log_x: false,
        series: s,
    };
    Ok(Output { tables: vec![(stem.into(), header, cells)], charts: vec![(stem.into(), chart)] })
}

/// Computes the figure and writes its files into `dir`, returning their paths.
pub fn run_figure(args: &FigureArgs) -> CliResult<Vec<PathBuf>> {
    let out = match args.name {
        FigureName::Fig1 => fig1(args.mc_n, args.seed)?,
        FigureName::Fig2 => fig2()?,
        FigureName::Fig3 => fig3(args.mc_n, args.seed)?,
        FigureName::Fig4a => fig4("fig4a", 4, 2, 10.0, args.mc_n, args.seed)?,
        FigureName::Fig4b => fig4("fig4b", 2, 2, 0.6657, args.mc_n, args.seed)?,
    };
    write_output(&out, &args.out)
}

fn write_output(out: &Output, dir: &Path) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (stem, header, rows) in &out.tables {
        let p = dir.join(format!("{stem}.csv"));
        write_table(fs::File::create(&p)?, header, rows)?;
        written.push(p);
    }
    for (stem, chart) in &out.charts {
        let p = dir.join(format!("{stem}.svg"));
        render(chart, &p)?;
        written.push(p);
    }
    Ok(written)
}
