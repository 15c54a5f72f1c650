//! SNR-indexed distortion table shared with the command-line front end.

use crate::{Error, Result};

/// One SNR point; absent columns are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CurveRow {
    pub snr_db: f64,
    pub ed_exact: Option<f64>,
    pub ed_asymptotic: Option<f64>,
    pub ed_mc: Option<f64>,
    pub mc_std_error: Option<f64>,
}

/// Rows in strictly ascending SNR.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DistortionCurve {
    rows: Vec<CurveRow>,
}

impl DistortionCurve {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a row; its SNR must exceed the previous one.
    pub fn push(&mut self, row: CurveRow) -> Result<()> {
        if let Some(last) = self.rows.last() {
            if !(row.snr_db > last.snr_db) {
                return Err(Error::Domain(format!(
                    "curve SNR must ascend strictly: {} after {}",
                    row.snr_db, last.snr_db
                )));
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn rows(&self) -> &[CurveRow] {
        &self.rows
    }

    pub fn rows_mut(&mut self) -> &mut [CurveRow] {
        &mut self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn has_exact(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.ed_exact.is_some())
    }

    pub fn has_asymptotic(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.ed_asymptotic.is_some())
    }

    pub fn has_mc(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.ed_mc.is_some() && r.mc_std_error.is_some())
    }
}
