//! Figures of merit for a swept three-port: spot levels at the design
//! frequency, matched bandwidth against a reflection threshold, and the
//! publication-style comparison row.
//!
//! Conventions: all levels are `20 log10 |s|` in dB, so a matched port reads
//! strongly negative. `insertion_loss_db` flips the sign to the customary
//! positive loss number. Spot values snap to the grid point nearest the
//! requested design frequency; band edges are refined by linear
//! interpolation in dB between the bracketing grid points.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::divider::{DividerDesign, Provenance};
use crate::network::{ComplexScalar, SParamBlock};

/// Level reported for a true zero magnitude, dB. Smaller magnitudes clamp
/// here so reports stay finite.
pub const DB_FLOOR: f64 = -200.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("design frequency {freq} Hz is outside the swept range {start}..{stop} Hz")]
    FrequencyOutOfRange { freq: f64, start: f64, stop: f64 },
    #[error("bandwidth threshold {threshold_db} dB must be finite and negative")]
    InvalidThreshold { threshold_db: f64 },
    #[error("report needs a 3-port block, got {ports} ports")]
    NotThreePort { ports: usize },
}

/// Spot metrics at the design frequency plus the matched band.
///
/// `design_freq` echoes the requested frequency; the spot levels come from
/// the nearest grid point. `band_lo`/`band_hi` bound the widest contiguous
/// band around the design frequency where the input reflection stays at or
/// below the threshold, and `band_clipped` marks edges that ran into the end
/// of the sweep instead of an actual crossing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub design_freq: f64,
    pub return_loss_db: f64,
    pub insertion_loss_db: f64,
    pub output_match_db: f64,
    pub isolation_db: f64,
    pub fractional_bandwidth_pct: f64,
    pub band_lo: f64,
    pub band_hi: f64,
    pub band_clipped: bool,
}

impl fmt::Display for MetricsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "design frequency        {} GHz",
            trim_number(self.design_freq / 1e9)
        )?;
        writeln!(f, "input reflection (S11)  {:.2} dB", self.return_loss_db)?;
        writeln!(
            f,
            "insertion loss  (S21)   {:.2} dB",
            self.insertion_loss_db
        )?;
        writeln!(f, "output match    (S22)   {:.2} dB", self.output_match_db)?;
        writeln!(f, "isolation       (S23)   {:.2} dB", self.isolation_db)?;
        writeln!(
            f,
            "matched band            {} - {} GHz{}",
            trim_number(self.band_lo / 1e9),
            trim_number(self.band_hi / 1e9),
            if self.band_clipped {
                " (clipped at sweep edge)"
            } else {
                ""
            }
        )?;
        write!(
            f,
            "fractional bandwidth    {:.1} %",
            self.fractional_bandwidth_pct
        )
    }
}

/// Magnitude of `s` in dB, clamped at [`DB_FLOOR`].
pub fn magnitude_db(s: ComplexScalar) -> f64 {
    (20.0 * s.norm().log10()).max(DB_FLOOR)
}

/// Builds the report for a swept three-port. `threshold_db` sets the
/// reflection criterion for the bandwidth (commonly -10 dB).
pub fn report(
    block: &SParamBlock,
    f0: f64,
    threshold_db: f64,
) -> Result<MetricsReport, MetricsError> {
    if block.ports() != 3 {
        return Err(MetricsError::NotThreePort {
            ports: block.ports(),
        });
    }
    if !threshold_db.is_finite() || threshold_db >= 0.0 {
        return Err(MetricsError::InvalidThreshold { threshold_db });
    }
    let grid = block.grid();
    if !f0.is_finite() || f0 < grid.start() || f0 > grid.stop() {
        return Err(MetricsError::FrequencyOutOfRange {
            freq: f0,
            start: grid.start(),
            stop: grid.stop(),
        });
    }

    let n = grid.points();
    let i0 = grid.nearest_index(f0);
    let s11_db: Vec<f64> = (0..n).map(|k| magnitude_db(block.s(k, 0, 0))).collect();

    let passes = |k: usize| s11_db[k] <= threshold_db;
    let (band_lo, band_hi, band_clipped) = if !passes(i0) {
        // Not matched at the centre: no band to report.
        (f0, f0, false)
    } else {
        let mut lo_i = i0;
        while lo_i > 0 && passes(lo_i - 1) {
            lo_i -= 1;
        }
        let mut hi_i = i0;
        while hi_i + 1 < n && passes(hi_i + 1) {
            hi_i += 1;
        }
        let values = grid.values();
        let (lo, clip_lo) = if lo_i == 0 {
            (values[0], true)
        } else {
            (
                crossing(
                    values[lo_i - 1],
                    s11_db[lo_i - 1],
                    values[lo_i],
                    s11_db[lo_i],
                    threshold_db,
                ),
                false,
            )
        };
        let (hi, clip_hi) = if hi_i == n - 1 {
            (values[n - 1], true)
        } else {
            (
                crossing(
                    values[hi_i],
                    s11_db[hi_i],
                    values[hi_i + 1],
                    s11_db[hi_i + 1],
                    threshold_db,
                ),
                false,
            )
        };
        (lo, hi, clip_lo || clip_hi)
    };

    Ok(MetricsReport {
        design_freq: f0,
        return_loss_db: s11_db[i0],
        insertion_loss_db: -magnitude_db(block.s(i0, 1, 0)),
        output_match_db: magnitude_db(block.s(i0, 1, 1)),
        isolation_db: magnitude_db(block.s(i0, 1, 2)),
        fractional_bandwidth_pct: (band_hi - band_lo) / f0 * 100.0,
        band_lo,
        band_hi,
        band_clipped,
    })
}

/// Frequency where a linear-in-dB segment from (`f_a`, `db_a`) to
/// (`f_b`, `db_b`) meets the threshold. One endpoint is above and one at or
/// below, so the segment is never flat.
fn crossing(f_a: f64, db_a: f64, f_b: f64, db_b: f64, threshold_db: f64) -> f64 {
    f_a + (threshold_db - db_a) / (db_b - db_a) * (f_b - f_a)
}

/// One row of the customary divider comparison table.
///
/// Numeric columns carry full precision; `frequency_ghz` and `size_mm` are
/// strings because the table prints them as labels ("27.9", "50x80").
/// `note` marks rows whose loss and bandwidth columns come from this
/// circuit model rather than from published measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub ports: u32,
    pub frequency_ghz: String,
    pub fractional_bandwidth_pct: f64,
    pub insertion_loss_db: f64,
    pub size_mm: String,
    pub material: String,
    pub structure: String,
    pub reflection_db: f64,
    pub note: Option<String>,
}

impl fmt::Display for ComparisonRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ports                   {}", self.ports)?;
        writeln!(f, "frequency (GHz)         {}", self.frequency_ghz)?;
        writeln!(
            f,
            "fractional BW (%)       {:.1}",
            self.fractional_bandwidth_pct
        )?;
        writeln!(f, "insertion loss (dB)     {:.2}", self.insertion_loss_db)?;
        writeln!(f, "size (mm)               {}", self.size_mm)?;
        writeln!(f, "material                {}", self.material)?;
        writeln!(f, "structure               {}", self.structure)?;
        write!(f, "reflection (dB)         {:.2}", self.reflection_db)?;
        if let Some(note) = &self.note {
            write!(f, "\nnote                    {note}")?;
        }
        Ok(())
    }
}

/// Renders the comparison-table row for a design and its report.
pub fn comparison_row(design: &DividerDesign, report: &MetricsReport) -> ComparisonRow {
    let er = design.spec().substrate().rel_permittivity();
    let material = if er == 3.0 {
        // The stock 1.6 mm er = 3.0 stack-up, under the name the comparison
        // tables print for it.
        "Roger 3003".to_string()
    } else {
        format!("er {} laminate", trim_number(er))
    };
    let note = match design.provenance() {
        Provenance::Reference => Some(
            "loss and bandwidth columns are circuit-model values for the printed \
             geometry; the published measured row differs"
                .to_string(),
        ),
        Provenance::Synthesized => None,
    };
    ComparisonRow {
        ports: 3,
        frequency_ghz: trim_number(report.design_freq / 1e9),
        fractional_bandwidth_pct: report.fractional_bandwidth_pct,
        insertion_loss_db: report.insertion_loss_db,
        size_mm: format!(
            "{}x{}",
            trim_number(design.board_width() * 1e3),
            trim_number(design.board_length() * 1e3)
        ),
        material,
        structure: "T-junction".to_string(),
        reflection_db: report.return_loss_db,
        note,
    }
}

/// Fixed-point rendering with trailing zeros trimmed: 27.9 -> "27.9",
/// 50.0 -> "50".
fn trim_number(x: f64) -> String {
    let mut s = format!("{x:.6}");
    while s.ends_with('0') {
        s.pop();
    }
    if s.ends_with('.') {
        s.pop();
    }
    s
}
