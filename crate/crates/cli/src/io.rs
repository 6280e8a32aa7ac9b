//! # Trace serialization
//!
//! Writers and readers for the two trace formats:
//!
//! - **Touchstone v1 `.s2p`** — option line `# GHz S RI R 50`, one row per
//!   frequency with real/imaginary pairs in S11 S21 S12 S22 column order,
//!   strictly ascending frequency, `!`-prefixed comment header recording the
//!   design parameters. S12 is emitted equal to S21: every network here is
//!   reciprocal by construction.
//! - **CSV** — columns `freq_hz, s11_db, s21_db, s11_deg, s21_deg, flag`,
//!   magnitudes in dB with the −200 dB exact-zero floor, phases in degrees,
//!   and the per-point evaluation flag (`ok`, `hard-zero`, `degenerate`).
//!
//! All numeric output uses explicit fixed formats — `{:.6}` GHz and `{:.9e}`
//! parts for Touchstone, `{:.3}`/`{:.6}` columns for CSV — so identical
//! traces serialize to identical bytes on every platform, and golden-file
//! comparisons are meaningful. Neither format embeds timestamps.

use std::path::Path;

use coupline::response::{PointFlag, ResponseTrace};
use coupline::Complex64;

use crate::CliError;

// ---------------------------------------------------------------------------
// Touchstone
// ---------------------------------------------------------------------------

/// Render a trace as a Touchstone v1 two-port file. `comments` become
/// `!`-prefixed header lines above the option line.
pub fn format_touchstone(trace: &ResponseTrace, comments: &[String]) -> String {
    let mut out = String::new();
    for line in comments {
        out.push_str("! ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str("# GHz S RI R 50\n");
    out.push_str("! f_ghz s11_re s11_im s21_re s21_im s12_re s12_im s22_re s22_im\n");
    for i in 0..trace.len() {
        let (s11, s21, s22) = (trace.s11[i], trace.s21[i], trace.s22[i]);
        out.push_str(&format!(
            "{:.6} {:.9e} {:.9e} {:.9e} {:.9e} {:.9e} {:.9e} {:.9e} {:.9e}\n",
            trace.freqs[i] / 1e9,
            s11.re,
            s11.im,
            s21.re,
            s21.im,
            s21.re,
            s21.im,
            s22.re,
            s22.im,
        ));
    }
    out
}

/// Write a trace as Touchstone; see [`format_touchstone`].
pub fn write_touchstone(
    path: &Path,
    trace: &ResponseTrace,
    comments: &[String],
) -> Result<(), CliError> {
    std::fs::write(path, format_touchstone(trace, comments))
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

/// Parse a Touchstone v1 two-port file written by [`write_touchstone`]
/// (or any tool using the same `# GHz S RI R 50` flavor).
///
/// Touchstone carries no evaluation flags, so every parsed point is marked
/// `ok`; round-trip comparisons are about the numbers, not the flags.
pub fn read_touchstone(path: &Path) -> Result<ResponseTrace, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
    let mut saw_options = false;
    let mut trace = ResponseTrace {
        freqs: Vec::new(),
        s11: Vec::new(),
        s21: Vec::new(),
        s22: Vec::new(),
        flags: Vec::new(),
    };
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('!') {
            continue;
        }
        let fail = |what: &str| {
            CliError::Runtime(format!(
                "{}:{}: {what}: {line:?}",
                path.display(),
                lineno + 1
            ))
        };
        if let Some(rest) = line.strip_prefix('#') {
            let tokens: Vec<String> = rest.split_whitespace().map(str::to_lowercase).collect();
            if tokens != ["ghz", "s", "ri", "r", "50"] {
                return Err(fail(
                    "unsupported Touchstone option line (need GHz S RI R 50)",
                ));
            }
            saw_options = true;
            continue;
        }
        if !saw_options {
            return Err(fail("data before the Touchstone option line"));
        }
        let fields: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| fail("unparseable number in data row"))?;
        if fields.len() != 9 {
            return Err(fail("expected 9 columns in a two-port data row"));
        }
        trace.freqs.push(fields[0] * 1e9);
        trace.s11.push(Complex64::new(fields[1], fields[2]));
        trace.s21.push(Complex64::new(fields[3], fields[4]));
        // fields[5..7] are S12 = S21 (reciprocity); nothing extra to keep.
        trace.s22.push(Complex64::new(fields[7], fields[8]));
        trace.flags.push(PointFlag::Ok);
    }
    if trace.is_empty() {
        return Err(CliError::Runtime(format!(
            "{}: no Touchstone data rows",
            path.display()
        )));
    }
    Ok(trace)
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// Header row of the sweep CSV.
pub const CSV_HEADER: &str = "freq_hz,s11_db,s21_db,s11_deg,s21_deg,flag";

/// Render a trace as CSV; see the module docs for the column contract.
pub fn format_csv(trace: &ResponseTrace) -> String {
    let mut out = String::with_capacity(64 * (trace.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for i in 0..trace.len() {
        out.push_str(&format!(
            "{:.3},{:.6},{:.6},{:.6},{:.6},{}\n",
            trace.freqs[i],
            coupline::response::db20(trace.s11[i].norm()),
            coupline::response::db20(trace.s21[i].norm()),
            trace.s11[i].arg().to_degrees(),
            trace.s21[i].arg().to_degrees(),
            trace.flags[i].as_str(),
        ));
    }
    out
}

/// Write a trace as CSV; see [`format_csv`].
pub fn write_csv(path: &Path, trace: &ResponseTrace) -> Result<(), CliError> {
    std::fs::write(path, format_csv(trace))
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

/// One parsed CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub freq_hz: f64,
    pub s11_db: f64,
    pub s21_db: f64,
    pub s11_deg: f64,
    pub s21_deg: f64,
    pub flag: String,
}

/// Parse a CSV written by [`write_csv`].
pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        _ => {
            return Err(CliError::Runtime(format!(
                "{}: missing CSV header {CSV_HEADER:?}",
                path.display()
            )))
        }
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(CliError::Runtime(format!(
                "{}:{}: expected 6 CSV columns, got {}",
                path.display(),
                lineno + 1,
                fields.len()
            )));
        }
        let num = |idx: usize| -> Result<f64, CliError> {
            fields[idx].parse::<f64>().map_err(|_| {
                CliError::Runtime(format!(
                    "{}:{}: unparseable number {:?}",
                    path.display(),
                    lineno + 1,
                    fields[idx]
                ))
            })
        };
        rows.push(CsvRow {
            freq_hz: num(0)?,
            s11_db: num(1)?,
            s21_db: num(2)?,
            s11_deg: num(3)?,
            s21_deg: num(4)?,
            flag: fields[5].to_string(),
        });
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Table formatting
// ---------------------------------------------------------------------------

/// Format a value with four significant figures in plain fixed-point
/// notation, the precision of the printed synthesis table.
pub fn fmt_sig4(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.3}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (3 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
