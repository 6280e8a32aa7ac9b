//! # Pipeline commands
//!
//! One function per subcommand. Each takes the parsed config plus any CLI
//! overrides, runs the corresponding `coupline` pipeline stage, writes its
//! artifacts under the output directory, and prints a short summary to
//! standard output. Warnings (realizability advisories) go to standard
//! error. None of the artifacts embed timestamps or absolute paths, so a
//! config plus a seed reproduces identical bytes.

use std::path::Path;

use serde::Serialize;

use coupline::optimizer::{optimize_stubs, StubConfig};
use coupline::response::{band_metrics, build_proposed, build_traditional, sweep, SweepConfig};
use coupline::synthesis::{realizability_warnings, synthesize, FilterSpec, SectionDesign};

use crate::config::{ConfigFile, ObjectiveSection, StubRow, StubsSection, SweepSection};
use crate::io::{fmt_sig4, write_csv, write_touchstone};
use crate::report::{render_metrics_table, ComparisonReport, MetricsOut, ReportFiles};
use crate::CliError;

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

/// Which topology `sweep` evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Which {
    /// The bare coupled-line cascade.
    Traditional,
    /// The cascade with the configured open stubs installed.
    Proposed,
}

impl Which {
    /// File-name stem for this topology's artifacts.
    pub fn stem(self) -> &'static str {
        match self {
            Which::Traditional => "traditional",
            Which::Proposed => "proposed",
        }
    }
}

/// Config resolved into validated domain objects: the one synthesis every
/// command starts from.
struct Resolved {
    spec: FilterSpec,
    sections: Vec<SectionDesign>,
    sweep_cfg: SweepConfig,
}

fn resolve(cfg: &ConfigFile, points: Option<usize>) -> Result<Resolved, CliError> {
    let spec = cfg.filter_spec()?;
    let sections = synthesize(&spec)?;
    let sweep_cfg = cfg.sweep_config(points)?;
    Ok(Resolved {
        spec,
        sections,
        sweep_cfg,
    })
}

fn require_fixed_stubs(cfg: &ConfigFile, r: &Resolved) -> Result<StubConfig, CliError> {
    let stubs = cfg.fixed_stubs().ok_or_else(|| {
        CliError::Config(
            "the proposed topology needs [[stubs.fixed]] entries in the config \
             (run `optimize` to generate them)"
                .to_string(),
        )
    })?;
    stubs
        .validate(&r.spec, r.sections.len())
        .map_err(|e| CliError::Config(format!("[stubs.fixed]: {e}")))?;
    Ok(stubs)
}

/// `!`-comment header recording the design parameters of a trace file.
fn design_comments(
    cfg: &ConfigFile,
    which: Which,
    stubs: Option<&StubConfig>,
    sweep_cfg: &SweepConfig,
) -> Vec<String> {
    let f = &cfg.filter;
    let mut lines = vec![
        format!("coupline {} sweep", which.stem()),
        format!(
            "filter: f0 = {:.6} GHz, delta = {:.4}, z0 = {:.3} ohm, order = {}, family = {}, ripple = {:.3} dB",
            f.f0_hz / 1e9,
            f.delta,
            f.z0_ohm,
            f.order,
            f.family,
            f.ripple_db
        ),
        format!(
            "grid: {:.6}-{:.6} GHz, {} points",
            sweep_cfg.f_start / 1e9,
            sweep_cfg.f_stop / 1e9,
            sweep_cfg.n_points
        ),
    ];
    if let Some(s) = stubs {
        for stub in &s.stubs {
            lines.push(format!(
                "stub: site {}, zt = {:.6} ohm, fz = {:.6} GHz",
                stub.site,
                stub.zt,
                stub.fz / 1e9
            ));
        }
    }
    lines
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Runtime(format!("cannot encode {}: {e}", path.display())))?;
    std::fs::write(path, text + "\n")
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SectionOut {
    n: usize,
    jz0: f64,
    z0e_ohm: f64,
    z0o_ohm: f64,
}

#[derive(Serialize)]
struct DesignFile<'a> {
    filter: &'a crate::config::FilterSection,
    sections: Vec<SectionOut>,
    warnings: Vec<String>,
}

/// Synthesize the coupled-section impedances: print the design table and
/// write `design.json`.
pub fn cmd_synth(cfg: &ConfigFile, out_dir: &Path) -> Result<(), CliError> {
    let spec = cfg.filter_spec()?;
    let sections = synthesize(&spec)?;
    let warnings = realizability_warnings(&sections, spec.z0);

    println!(
        "coupled-line sections (f0 = {:.6} GHz, z0 = {:.3} ohm):",
        spec.f0 / 1e9,
        spec.z0
    );
    println!(
        "{:>4} {:>8} {:>10} {:>10}",
        "n", "Z0*J", "Z0e_ohm", "Z0o_ohm"
    );
    for s in &sections {
        println!(
            "{:>4} {:>8} {:>10} {:>10}",
            s.index,
            fmt_sig4(s.jz0),
            fmt_sig4(s.z0e),
            fmt_sig4(s.z0o)
        );
    }
    for w in &warnings {
        eprintln!("warning: {w}");
    }

    let design = DesignFile {
        filter: &cfg.filter,
        sections: sections
            .iter()
            .map(|s| SectionOut {
                n: s.index,
                jz0: s.jz0,
                z0e_ohm: s.z0e,
                z0o_ohm: s.z0o,
            })
            .collect(),
        warnings,
    };
    let path = out_dir.join("design.json");
    write_json(&path, &design)?;
    println!("wrote {}", path.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

/// Sweep one topology and write `<which>.s2p` and `<which>.csv`.
pub fn cmd_sweep(
    cfg: &ConfigFile,
    which: Which,
    out_dir: &Path,
    points: Option<usize>,
) -> Result<(), CliError> {
    let r = resolve(cfg, points)?;
    let (trace, stubs) = match which {
        Which::Traditional => (
            sweep(
                |f| build_traditional(&r.sections, f, &r.spec),
                &r.sweep_cfg,
                r.spec.z0,
            )?,
            None,
        ),
        Which::Proposed => {
            let stubs = require_fixed_stubs(cfg, &r)?;
            let trace = sweep(
                |f| build_proposed(&r.sections, &stubs, f, &r.spec),
                &r.sweep_cfg,
                r.spec.z0,
            )?;
            (trace, Some(stubs))
        }
    };
    let comments = design_comments(cfg, which, stubs.as_ref(), &r.sweep_cfg);
    let s2p = out_dir.join(format!("{}.s2p", which.stem()));
    let csv = out_dir.join(format!("{}.csv", which.stem()));
    write_touchstone(&s2p, &trace, &comments)?;
    write_csv(&csv, &trace)?;
    println!(
        "wrote {} and {} ({} points)",
        s2p.display(),
        csv.display(),
        trace.len()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// optimize
// ---------------------------------------------------------------------------

/// Search stub placements, print the winner with before/after metrics, and
/// write `optimized.toml` — a complete config that `sweep --which proposed`
/// and `compare` accept as-is.
pub fn cmd_optimize(
    cfg: &ConfigFile,
    out_dir: &Path,
    seed: Option<u64>,
    points: Option<usize>,
) -> Result<(), CliError> {
    let r = resolve(cfg, points)?;
    let template = cfg.template().ok_or_else(|| {
        CliError::Config("optimize needs [[stubs.entries]] search bounds in the config".to_string())
    })?;
    let objective = cfg.objective()?;
    let budget = cfg.budget();
    let seed = seed.unwrap_or(cfg.seed);

    let result = optimize_stubs(
        &r.sections,
        &template,
        &r.spec,
        &objective,
        &r.sweep_cfg,
        budget,
        seed,
    )?;

    println!(
        "best score {:.6} after {} of {} evaluations (seed {}){}",
        result.score,
        result.evaluations,
        budget,
        seed,
        if result.budget_exhausted {
            "; budget exhausted, best-so-far returned"
        } else {
            ""
        }
    );
    println!("winning stubs:");
    for stub in &result.best.stubs {
        println!(
            "  site {}: zt = {} ohm, fz = {:.6} GHz",
            stub.site,
            fmt_sig4(stub.zt),
            stub.fz / 1e9
        );
    }
    print!(
        "{}",
        render_metrics_table(
            "before",
            "after",
            &MetricsOut::from(&result.metrics_before),
            &MetricsOut::from(&result.metrics_after),
            objective.harmonic_window,
        )
    );

    let out_cfg = ConfigFile {
        seed,
        filter: cfg.filter.clone(),
        sweep: Some(SweepSection::from_config(&r.sweep_cfg)),
        stubs: Some(StubsSection {
            budget,
            fixed: result
                .best
                .stubs
                .iter()
                .map(|s| StubRow {
                    zt_ohm: s.zt,
                    fz_hz: s.fz,
                    site: s.site,
                })
                .collect(),
            entries: cfg
                .stubs
                .as_ref()
                .map_or_else(Vec::new, |s| s.entries.clone()),
        }),
        objective: Some(ObjectiveSection::from_spec(&objective)),
    };
    let body = toml::to_string(&out_cfg)
        .map_err(|e| CliError::Runtime(format!("cannot encode optimized config: {e}")))?;
    let text = format!(
        "# coupline optimize output: the winning stub placement plus the full\n\
         # design context, directly usable by `sweep --which proposed` and `compare`.\n\
         {body}"
    );
    let path = out_dir.join("optimized.toml");
    std::fs::write(&path, text)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

/// Sweep both topologies, write both trace file sets plus
/// `compare_report.json`, and print the per-band deltas. Reporting only:
/// the exit status does not depend on how the comparison came out.
pub fn cmd_compare(
    cfg: &ConfigFile,
    out_dir: &Path,
    points: Option<usize>,
) -> Result<(), CliError> {
    let r = resolve(cfg, points)?;
    let stubs = require_fixed_stubs(cfg, &r)?;

    let trad = sweep(
        |f| build_traditional(&r.sections, f, &r.spec),
        &r.sweep_cfg,
        r.spec.z0,
    )?;
    let prop = sweep(
        |f| build_proposed(&r.sections, &stubs, f, &r.spec),
        &r.sweep_cfg,
        r.spec.z0,
    )?;

    let window = cfg.objective()?.harmonic_window;
    let metrics_trad = band_metrics(&trad, r.spec.f0, r.spec.delta, window)?;
    let metrics_prop = band_metrics(&prop, r.spec.f0, r.spec.delta, window)?;

    write_touchstone(
        &out_dir.join("traditional.s2p"),
        &trad,
        &design_comments(cfg, Which::Traditional, None, &r.sweep_cfg),
    )?;
    write_csv(&out_dir.join("traditional.csv"), &trad)?;
    write_touchstone(
        &out_dir.join("proposed.s2p"),
        &prop,
        &design_comments(cfg, Which::Proposed, Some(&stubs), &r.sweep_cfg),
    )?;
    write_csv(&out_dir.join("proposed.csv"), &prop)?;

    let report = ComparisonReport::new(
        &metrics_trad,
        &metrics_prop,
        window,
        ReportFiles {
            traditional_s2p: "traditional.s2p".to_string(),
            traditional_csv: "traditional.csv".to_string(),
            proposed_s2p: "proposed.s2p".to_string(),
            proposed_csv: "proposed.csv".to_string(),
        },
    );
    let report_path = out_dir.join("compare_report.json");
    write_json(&report_path, &report)?;
    print!("{}", report.render_text());
    println!("wrote {}", report_path.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
