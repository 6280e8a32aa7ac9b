//! # Comparison reports
//!
//! The `compare` command reduces both sweeps to band metrics and reports
//! them side by side with per-band deltas. Deltas are always recomputed
//! from the freshly swept traces — never copied from an earlier optimizer
//! run — so the report reflects exactly the files it points at.

use serde::{Deserialize, Serialize};

use coupline::response::BandMetrics;

/// Band metrics in serializable form. All values in dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsOut {
    pub passband_il_db: f64,
    pub passband_rl_db: f64,
    pub suppression_2f0_db: f64,
    pub suppression_3f0_db: f64,
}

impl From<&BandMetrics> for MetricsOut {
    fn from(m: &BandMetrics) -> Self {
        Self {
            passband_il_db: m.passband_il_db,
            passband_rl_db: m.passband_rl_db,
            suppression_2f0_db: m.suppression_2f0_db,
            suppression_3f0_db: m.suppression_3f0_db,
        }
    }
}

/// Where the trace files were written, relative to the output directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFiles {
    pub traditional_s2p: String,
    pub traditional_csv: String,
    pub proposed_s2p: String,
    pub proposed_csv: String,
}

/// Everything `compare` reports: both metric sets, proposed − traditional
/// deltas per band, the harmonic window the metrics used, and the emitted
/// trace files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    /// Half-width of the 2f0/3f0 windows, fraction of the window center.
    pub harmonic_window: f64,
    pub traditional: MetricsOut,
    pub proposed: MetricsOut,
    /// Proposed − traditional, per metric. Negative suppression deltas mean
    /// the stubs bought extra harmonic rejection; positive `passband_il_db`
    /// delta is the passband price paid for it.
    pub delta: MetricsOut,
    pub files: ReportFiles,
}

impl ComparisonReport {
    /// Assemble a report, recomputing the deltas from the two metric sets.
    pub fn new(
        traditional: &BandMetrics,
        proposed: &BandMetrics,
        harmonic_window: f64,
        files: ReportFiles,
    ) -> Self {
        Self {
            harmonic_window,
            traditional: traditional.into(),
            proposed: proposed.into(),
            delta: MetricsOut {
                passband_il_db: proposed.passband_il_db - traditional.passband_il_db,
                passband_rl_db: proposed.passband_rl_db - traditional.passband_rl_db,
                suppression_2f0_db: proposed.suppression_2f0_db - traditional.suppression_2f0_db,
                suppression_3f0_db: proposed.suppression_3f0_db - traditional.suppression_3f0_db,
            },
            files,
        }
    }

    /// Human-readable table for standard output.
    pub fn render_text(&self) -> String {
        render_metrics_table(
            "traditional",
            "proposed",
            &self.traditional,
            &self.proposed,
            self.harmonic_window,
        )
    }
}

/// Side-by-side metric table with a delta column (`b − a`). Shared by
/// `compare` (traditional vs. proposed) and `optimize` (before vs. after).
pub fn render_metrics_table(
    label_a: &str,
    label_b: &str,
    a: &MetricsOut,
    b: &MetricsOut,
    harmonic_window: f64,
) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "band metrics (harmonic windows ±{:.1}% of 2f0/3f0; delta = {label_b} − {label_a})\n",
        100.0 * harmonic_window
    ));
    out.push_str(&format!(
        "  {:<22} {:>14} {:>14} {:>14}\n",
        "metric", label_a, label_b, "delta"
    ));
    let rows = [
        ("passband_il_db", a.passband_il_db, b.passband_il_db),
        ("passband_rl_db", a.passband_rl_db, b.passband_rl_db),
        (
            "suppression_2f0_db",
            a.suppression_2f0_db,
            b.suppression_2f0_db,
        ),
        (
            "suppression_3f0_db",
            a.suppression_3f0_db,
            b.suppression_3f0_db,
        ),
    ];
    for (name, va, vb) in rows {
        let delta = vb - va;
        out.push_str(&format!(
            "  {name:<22} {va:>14.6} {vb:>14.6} {delta:>+14.6}\n"
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
