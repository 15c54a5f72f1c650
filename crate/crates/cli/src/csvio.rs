//! CSV emission with 17 significant digits so values re-parse bit for bit.

use std::io::{Read, Write};

use mimo_distortion::{CurveRow, DistortionCurve};

use crate::error::{CliError, CliResult};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

/// Writes a pre-formatted table.
pub fn write_table<W: Write>(w: W, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    let mut out = writer(w);
    out.write_record(header)?;
    for r in rows {
        out.write_record(r)?;
    }
    out.flush()?;
    Ok(())
}

/// Columns present in every row, in canonical order.
pub fn curve_columns(curve: &DistortionCurve) -> Vec<&'static str> {
    let mut cols = vec!["snr_db"];
    if curve.has_exact() {
        cols.push("ed_exact");
    }
    if curve.has_asymptotic() {
        cols.push("ed_asymptotic");
    }
    if curve.has_mc() {
        cols.extend(["ed_mc", "mc_std_error"]);
    }
    cols
}

pub fn curve_cells(row: &CurveRow, cols: &[&str]) -> Vec<String> {
    cols.iter()
        .map(|&c| {
            let v = match c {
                "snr_db" => Some(row.snr_db),
                "ed_exact" => row.ed_exact,
                "ed_asymptotic" => row.ed_asymptotic,
                "ed_mc" => row.ed_mc,
                "mc_std_error" => row.mc_std_error,
                _ => None,
            };
            v.map(fmt_f64).unwrap_or_default()
        })
        .collect()
}

pub fn write_curve<W: Write>(w: W, curve: &DistortionCurve) -> CliResult<()> {
    let cols = curve_columns(curve);
    let rows: Vec<_> = curve.rows().iter().map(|r| curve_cells(r, &cols)).collect();
    write_table(w, &cols, &rows)
}

/// Reads a curve written by [`write_curve`].
pub fn read_curve<R: Read>(r: R) -> CliResult<DistortionCurve> {
    let mut rdr = csv::Reader::from_reader(r);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header.first().map(String::as_str) != Some("snr_db") {
        return Err(CliError::Config("CSV must start with an snr_db column".into()));
    }
    let mut curve = DistortionCurve::new();
    for rec in rdr.records() {
        let rec = rec?;
        let mut row = CurveRow::default();
        for (name, cell) in header.iter().zip(rec.iter()) {
            let v: f64 = cell.parse().map_err(|_| CliError::Config(format!("bad number '{cell}' in column {name}")))?;
            match name.as_str() {
                "snr_db" => row.snr_db = v,
                "ed_exact" => row.ed_exact = Some(v),
                "ed_asymptotic" => row.ed_asymptotic = Some(v),
                "ed_mc" => row.ed_mc = Some(v),
                "mc_std_error" => row.mc_std_error = Some(v),
                other => return Err(CliError::Config(format!("unknown CSV column '{other}'"))),
            }
        }
        curve.push(row).map_err(crate::error::config_err)?;
    }
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let mut c = DistortionCurve::new();
        for (k, v) in [0.1 + 0.2, 1.0 / 3.0, 5e-300, 2.2250738585072014e-308, 123_456_789.123_456_79].iter().enumerate() {
            c.push(CurveRow { snr_db: k as f64 * 0.1, ed_exact: Some(*v), ed_asymptotic: Some(v * 7.0), ..CurveRow::default() })
                .unwrap();
        }
        let mut buf = Vec::new();
        write_curve(&mut buf, &c).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("snr_db,ed_exact,ed_asymptotic\n"));
        assert!(!text.contains('\r'));
        assert_eq!(read_curve(buf.as_slice()).unwrap(), c);
    }
}
