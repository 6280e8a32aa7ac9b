//! # Design configuration files
//!
//! One TOML file fully determines a run: the filter specification, the sweep
//! grid, concrete stub placements and/or stub search bounds, the objective
//! weights, and the RNG seed. No environment variables are consulted, so a
//! config plus a seed reproduces a run exactly.
//!
//! Unknown keys are rejected (a typo should be an error, not a silently
//! applied default), and every numeric field name carries its unit as a
//! suffix (`f0_hz`, `z0_ohm`). The schema structs here are serialization
//! shapes only; they convert into the validated `coupline` domain types on
//! demand, and `optimize` writes its winner back out through the same
//! structs so the emitted file is sweepable as-is.
//!
//! ```toml
//! seed = 42
//!
//! [filter]
//! f0_hz = 2.0e9
//! delta = 0.1
//! z0_ohm = 50.0
//! order = 3
//! family = "equal-ripple"
//! ripple_db = 0.5
//!
//! [sweep]
//! f_start_hz = 0.1e9
//! f_stop_hz = 7.0e9
//! n_points = 691
//!
//! [stubs]
//! budget = 2000
//!
//! [[stubs.entries]]
//! sites = [1]
//! symmetric = true
//! zt_ohm = [20.0, 60.0]
//! fz_hz = [5.5e9, 6.05e9]
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use coupline::optimizer::{ObjectiveSpec, Stub, StubConfig, StubEntry, StubTemplate};
use coupline::prototype::{Family, PrototypeSpec};
use coupline::response::{Spacing, SweepConfig};
use coupline::synthesis::FilterSpec;

use crate::CliError;

// ---------------------------------------------------------------------------
// Schema
// ---------------------------------------------------------------------------

/// Top-level config file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    /// Seed for the optimizer's multi-start pattern. Defaults to 0 when
    /// absent; the shipped configs always set it explicitly.
    #[serde(default)]
    pub seed: u64,
    pub filter: FilterSection,
    /// Sweep grid; the stock 0.1–7 GHz, 691-point grid when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    /// Stub placements and/or search bounds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stubs: Option<StubsSection>,
    /// Objective weights; documented defaults when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<ObjectiveSection>,
}

/// `[filter]`: the bandpass design target.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterSection {
    /// Center frequency in Hz.
    pub f0_hz: f64,
    /// Fractional bandwidth, in (0, 1).
    pub delta: f64,
    /// Reference characteristic impedance in Ω.
    pub z0_ohm: f64,
    /// Low-pass prototype order N ≥ 1.
    pub order: usize,
    /// `"maximally-flat"` or `"equal-ripple"`.
    pub family: String,
    /// Passband ripple in dB; consumed only by the equal-ripple family.
    #[serde(default)]
    pub ripple_db: f64,
}

/// `[sweep]`: the frequency grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub f_start_hz: f64,
    pub f_stop_hz: f64,
    pub n_points: usize,
}

/// `[stubs]`: concrete placements (`fixed`) and/or search bounds (`entries`).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StubsSection {
    /// Objective-evaluation budget for `optimize`.
    #[serde(default = "default_budget")]
    pub budget: usize,
    /// Concrete stubs, used by `sweep --which proposed` and `compare`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fixed: Vec<StubRow>,
    /// Search bounds, used by `optimize`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub entries: Vec<EntryRow>,
}

fn default_budget() -> usize {
    2000
}

/// `[[stubs.fixed]]`: one installed open stub.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StubRow {
    /// Characteristic impedance in Ω.
    pub zt_ohm: f64,
    /// Quarter-wave (transmission-zero) frequency in Hz; `inf` disables the
    /// stub (zero electrical length at every frequency).
    pub fz_hz: f64,
    /// Junction index, 0 (input port) ..= N+1 (output port).
    pub site: usize,
}

/// `[[stubs.entries]]`: one stub group the optimizer may place and tune.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryRow {
    /// Candidate junctions; the optimizer tries each.
    pub sites: Vec<usize>,
    /// Mirror the stub about the filter midline (default true).
    #[serde(default = "default_true")]
    pub symmetric: bool,
    /// `[lo, hi]` impedance bounds in Ω.
    pub zt_ohm: [f64; 2],
    /// `[lo, hi]` quarter-wave-frequency bounds in Hz.
    pub fz_hz: [f64; 2],
}

fn default_true() -> bool {
    true
}

/// `[objective]`: scalarization weights. Absent fields take the documented
/// defaults, so a partial table overrides only what it names.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_pass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_h2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_h3: Option<f64>,
    /// Insertion-loss allowance in dB before the passband penalty engages.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passband_il_budget_db: Option<f64>,
    /// Half-width of the 2f0/3f0 scoring windows, fraction of the center.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub harmonic_window: Option<f64>,
}

// ---------------------------------------------------------------------------
// Loading and conversion
// ---------------------------------------------------------------------------

impl ConfigFile {
    /// Read and parse a config file. Both I/O and parse failures are config
    /// errors: the parser's diagnostics carry line and field context.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("config {}:\n{e}", path.display())))
    }

    /// The validated filter specification.
    pub fn filter_spec(&self) -> Result<FilterSpec, CliError> {
        let family = parse_family(&self.filter.family)?;
        let spec = FilterSpec {
            f0: self.filter.f0_hz,
            delta: self.filter.delta,
            z0: self.filter.z0_ohm,
            prototype: PrototypeSpec {
                order: self.filter.order,
                family,
                ripple_db: self.filter.ripple_db,
            },
        };
        spec.validate()
            .map_err(|e| CliError::Config(format!("[filter]: {e}")))?;
        Ok(spec)
    }

    /// The validated sweep grid, with an optional point-count override
    /// (the `--points` flag). Falls back to the stock grid when the config
    /// has no `[sweep]` table.
    pub fn sweep_config(&self, points: Option<usize>) -> Result<SweepConfig, CliError> {
        let mut cfg = match &self.sweep {
            Some(s) => SweepConfig {
                f_start: s.f_start_hz,
                f_stop: s.f_stop_hz,
                n_points: s.n_points,
                spacing: Spacing::Linear,
            },
            None => SweepConfig::default_grid(),
        };
        if let Some(n) = points {
            cfg.n_points = n;
        }
        cfg.validate()
            .map_err(|e| CliError::Config(format!("[sweep]: {e}")))?;
        Ok(cfg)
    }

    /// The validated objective, with documented defaults filling any gaps.
    pub fn objective(&self) -> Result<ObjectiveSpec, CliError> {
        let mut obj = ObjectiveSpec::default();
        if let Some(sec) = &self.objective {
            if let Some(v) = sec.w_pass {
                obj.w_pass = v;
            }
            if let Some(v) = sec.w_h2 {
                obj.w_h2 = v;
            }
            if let Some(v) = sec.w_h3 {
                obj.w_h3 = v;
            }
            if let Some(v) = sec.passband_il_budget_db {
                obj.passband_il_budget_db = v;
            }
            if let Some(v) = sec.harmonic_window {
                obj.harmonic_window = v;
            }
        }
        obj.validate()
            .map_err(|e| CliError::Config(format!("[objective]: {e}")))?;
        Ok(obj)
    }

    /// Concrete stubs from `[[stubs.fixed]]`, if any are configured.
    /// Validation happens against the synthesized design, so it is the
    /// caller's job (the section count is not known here).
    pub fn fixed_stubs(&self) -> Option<StubConfig> {
        let rows = &self.stubs.as_ref()?.fixed;
        if rows.is_empty() {
            return None;
        }
        Some(StubConfig {
            stubs: rows
                .iter()
                .map(|r| Stub {
                    zt: r.zt_ohm,
                    fz: r.fz_hz,
                    site: r.site,
                })
                .collect(),
        })
    }

    /// Search bounds from `[[stubs.entries]]`, if any are configured.
    pub fn template(&self) -> Option<StubTemplate> {
        let rows = &self.stubs.as_ref()?.entries;
        if rows.is_empty() {
            return None;
        }
        Some(StubTemplate {
            entries: rows
                .iter()
                .map(|r| StubEntry {
                    sites: r.sites.clone(),
                    symmetric: r.symmetric,
                    zt_range: (r.zt_ohm[0], r.zt_ohm[1]),
                    fz_range: (r.fz_hz[0], r.fz_hz[1]),
                })
                .collect(),
        })
    }

    /// The optimizer's evaluation budget (`stubs.budget`, default 2000).
    pub fn budget(&self) -> usize {
        self.stubs
            .as_ref()
            .map_or_else(default_budget, |s| s.budget)
    }
}

impl ObjectiveSection {
    /// A fully explicit section mirroring a resolved objective, used when
    /// writing the optimizer's output config.
    pub fn from_spec(obj: &ObjectiveSpec) -> Self {
        Self {
            w_pass: Some(obj.w_pass),
            w_h2: Some(obj.w_h2),
            w_h3: Some(obj.w_h3),
            passband_il_budget_db: Some(obj.passband_il_budget_db),
            harmonic_window: Some(obj.harmonic_window),
        }
    }
}

impl SweepSection {
    /// A section mirroring a resolved grid, used when writing the
    /// optimizer's output config.
    pub fn from_config(cfg: &SweepConfig) -> Self {
        Self {
            f_start_hz: cfg.f_start,
            f_stop_hz: cfg.f_stop,
            n_points: cfg.n_points,
        }
    }
}

fn parse_family(name: &str) -> Result<Family, CliError> {
    match name {
        "maximally-flat" => Ok(Family::MaximallyFlat),
        "equal-ripple" => Ok(Family::EqualRipple),
        other => Err(CliError::Config(format!(
            "filter.family: unknown family {other:?} (expected \"maximally-flat\" or \"equal-ripple\")"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
