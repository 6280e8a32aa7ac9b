//! # Frequency response and band metrics
//!
//! Builds the complete filter two-port (plain coupled-line cascade, or the
//! stub-loaded variant) at a given frequency, sweeps it over a linear grid,
//! and reduces traces to the band figures of merit: passband insertion and
//! return loss, and worst-case transmission inside the second- and
//! third-harmonic windows.
//!
//! All sections are a quarter-wave long at the design center `f0`, so their
//! electrical length scales linearly: θ(f) = (π/2)·f/f0. Each open stub has
//! its own quarter-wave frequency `fz` and scales the same way.
//!
//! ## Degenerate frequencies
//!
//! A coupled-line cascade cannot be evaluated where θ is a multiple of π
//! (for a 2 GHz design: DC, 4 GHz, 8 GHz, …). Rather than dropping such grid
//! points and producing ragged files, [`sweep`] re-evaluates [`EPS_F`] hertz
//! to the side and flags the point [`PointFlag::Degenerate`]. Stub shorts are
//! different: they are *exact* transmission zeros, flagged
//! [`PointFlag::HardZero`] and reported at the dB floor ([`DB_FLOOR`]).

use crate::error::{Error, Result};
use crate::network::{
    abcd_to_s, cascade, coupled_section, shunt_open_stub, ElectricalAngle, SMatrix, TwoPortABCD,
};
use crate::optimizer::StubConfig;
use crate::synthesis::{FilterSpec, SectionDesign};
use num_complex::Complex64;

/// Sidestep offset for degenerate frequency points, in Hz.
pub const EPS_F: f64 = 10.0;

/// dB value representing an exact zero in file output and metrics.
pub const DB_FLOOR: f64 = -200.0;

/// Magnitude below which a linear value is treated as the exact-zero floor.
/// `20·log10(1e-10) = −200`, matching [`DB_FLOOR`].
const AMP_FLOOR: f64 = 1e-10;

/// Default half-width of the harmonic measurement windows, as a fraction of
/// the window center (±10% around 2f0 and 3f0).
pub const DEFAULT_HARMONIC_WINDOW: f64 = 0.10;

// ---------------------------------------------------------------------------
// Public types
// ---------------------------------------------------------------------------

/// Frequency-grid spacing. Only linear grids are supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
}

/// A frequency sweep grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    /// First grid frequency in Hz.
    pub f_start: f64,
    /// Last grid frequency in Hz.
    pub f_stop: f64,
    /// Number of grid points (≥ 2).
    pub n_points: usize,
    /// Grid spacing rule.
    pub spacing: Spacing,
}

impl SweepConfig {
    /// The stock comparison grid: 0.1–7 GHz in 10 MHz steps (691 points),
    /// covering a 2 GHz passband through its third harmonic.
    pub fn default_grid() -> Self {
        Self {
            f_start: 0.1e9,
            f_stop: 7.0e9,
            n_points: 691,
            spacing: Spacing::Linear,
        }
    }

    /// Check the grid invariants: `0 < f_start < f_stop`, `n_points ≥ 2`.
    pub fn validate(&self) -> Result<()> {
        if !(self.f_start > 0.0 && self.f_start.is_finite()) {
            return Err(Error::Spec(format!(
                "sweep start must be > 0 Hz, got {}",
                self.f_start
            )));
        }
        if !(self.f_stop > self.f_start && self.f_stop.is_finite()) {
            return Err(Error::Spec(format!(
                "sweep stop must exceed start, got {} .. {}",
                self.f_start, self.f_stop
            )));
        }
        if self.n_points < 2 {
            return Err(Error::Spec(format!(
                "sweep needs at least 2 points, got {}",
                self.n_points
            )));
        }
        Ok(())
    }

    /// Materialize the grid. Endpoints are exact; interior points are
    /// `f_start + i·step`.
    pub fn frequencies(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let n = self.n_points;
        let step = (self.f_stop - self.f_start) / (n - 1) as f64;
        let freqs: Vec<f64> = (0..n)
            .map(|i| {
                if i == n - 1 {
                    self.f_stop
                } else {
                    self.f_start + step * i as f64
                }
            })
            .collect();
        if freqs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Spec(
                "sweep grid is too fine to resolve in floating point".into(),
            ));
        }
        Ok(freqs)
    }
}

/// Per-point evaluation status in a [`ResponseTrace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointFlag {
    /// Well-conditioned evaluation at the grid frequency itself.
    Ok,
    /// Exact transmission zero from a quarter-wave stub short.
    HardZero,
    /// Grid frequency was degenerate; values come from [`EPS_F`] Hz away.
    Degenerate,
}

impl PointFlag {
    /// Stable lower-case label used in file output.
    pub fn as_str(&self) -> &'static str {
        match self {
            PointFlag::Ok => "ok",
            PointFlag::HardZero => "hard-zero",
            PointFlag::Degenerate => "degenerate",
        }
    }
}

/// A swept two-port response: parallel arrays of frequency, S-parameters,
/// and evaluation flags. Networks here are reciprocal, so `s12 = s21` and
/// only three parameters are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseTrace {
    /// Grid frequencies in Hz, strictly increasing.
    pub freqs: Vec<f64>,
    pub s11: Vec<Complex64>,
    pub s21: Vec<Complex64>,
    pub s22: Vec<Complex64>,
    pub flags: Vec<PointFlag>,
}

impl ResponseTrace {
    /// Number of points in the trace.
    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    /// True when the trace holds no points.
    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    /// Check the parallel-array and monotonicity invariants (useful after
    /// deserializing a trace from disk).
    pub fn validate(&self) -> Result<()> {
        let n = self.freqs.len();
        if self.s11.len() != n
            || self.s21.len() != n
            || self.s22.len() != n
            || self.flags.len() != n
        {
            return Err(Error::Spec("trace arrays have mismatched lengths".into()));
        }
        if n == 0 {
            return Err(Error::Spec("trace is empty".into()));
        }
        if self.freqs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Spec(
                "trace frequencies must be strictly increasing".into(),
            ));
        }
        Ok(())
    }
}

/// Band figures of merit extracted from one trace. Suppression values follow
/// the plotting convention: they are |s21| in dB, so more negative is better.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandMetrics {
    /// Worst (largest) insertion loss over the passband, dB ≥ 0.
    pub passband_il_db: f64,
    /// Worst (smallest) return loss over the passband, dB ≥ 0.
    pub passband_rl_db: f64,
    /// Largest |s21| in dB over the second-harmonic window.
    pub suppression_2f0_db: f64,
    /// Largest |s21| in dB over the third-harmonic window.
    pub suppression_3f0_db: f64,
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Magnitude to dB with the exact-zero floor: values at or below `1e-10`
/// report exactly [`DB_FLOOR`].
pub fn db20(magnitude: f64) -> f64 {
    if magnitude <= AMP_FLOOR {
        DB_FLOOR
    } else {
        20.0 * magnitude.log10()
    }
}

/// Electrical length of a quarter-wave-at-`f0` section evaluated at `f`:
/// θ = (π/2)·f/f0. Callers guarantee `f ≥ 0` and `f0 > 0`.
pub fn electrical_length_at(f: f64, f0: f64) -> ElectricalAngle {
    debug_assert!(f >= 0.0 && f0 > 0.0);
    ElectricalAngle::from_radians(std::f64::consts::FRAC_PI_2 * (f / f0))
}

/// Chain matrix of the plain coupled-line filter at frequency `f`.
pub fn build_traditional(
    sections: &[SectionDesign],
    f: f64,
    spec: &FilterSpec,
) -> Result<TwoPortABCD> {
    if sections.is_empty() {
        return Err(Error::Spec("filter has no coupled-line sections".into()));
    }
    let theta = electrical_length_at(f, spec.f0);
    let elements: Vec<TwoPortABCD> = sections
        .iter()
        .map(|s| coupled_section(s.z0e, s.z0o, theta))
        .collect::<Result<_>>()?;
    cascade(&elements)
}

/// Chain matrix of the stub-loaded filter at frequency `f`.
///
/// Stubs attach at junction planes indexed 0..=N+1: junction 0 is the input
/// port, junction k sits between sections k−1 and k, and the last junction is
/// the output port. A stub whose length hits a quarter-wave short makes the
/// whole network an exact transmission zero, which takes precedence over any
/// degenerate coupled section at the same frequency.
pub fn build_proposed(
    sections: &[SectionDesign],
    stubs: &StubConfig,
    f: f64,
    spec: &FilterSpec,
) -> Result<TwoPortABCD> {
    if sections.is_empty() {
        return Err(Error::Spec("filter has no coupled-line sections".into()));
    }
    for stub in &stubs.stubs {
        if stub.site > sections.len() {
            return Err(Error::Spec(format!(
                "stub site {} is out of range (junctions run 0..={})",
                stub.site,
                sections.len()
            )));
        }
    }
    if stubs
        .stubs
        .iter()
        .any(|st| st.angle_at(f).is_stub_singular())
    {
        return Ok(TwoPortABCD {
            hard_zero: true,
            ..TwoPortABCD::identity()
        });
    }
    let theta = electrical_length_at(f, spec.f0);
    let mut chain = Vec::with_capacity(sections.len() + stubs.stubs.len() + 1);
    for junction in 0..=sections.len() {
        for stub in stubs.stubs.iter().filter(|st| st.site == junction) {
            chain.push(shunt_open_stub(stub.zt, stub.angle_at(f))?);
        }
        if junction < sections.len() {
            let s = &sections[junction];
            chain.push(coupled_section(s.z0e, s.z0o, theta)?);
        }
    }
    cascade(&chain)
}

/// Evaluate `builder` over the grid and convert to S-parameters at `z_ref`.
///
/// Per-point failures never abort the sweep: a degenerate grid frequency is
/// re-evaluated at `f + EPS_F`, then `f − EPS_F`, and flagged
/// [`PointFlag::Degenerate`]; if even the sidesteps fail, the point is
/// recorded as total reflection (`s11 = 1`, `s21 = 0`). Hard zeros found at
/// either the grid frequency or a sidestep keep their exact-zero values and
/// the [`PointFlag::HardZero`] flag.
pub fn sweep<B>(builder: B, cfg: &SweepConfig, z_ref: f64) -> Result<ResponseTrace>
where
    B: Fn(f64) -> Result<TwoPortABCD>,
{
    if !(z_ref > 0.0) {
        return Err(Error::Spec(format!(
            "reference impedance must be > 0 Ω, got {z_ref}"
        )));
    }
    let freqs = cfg.frequencies()?;
    let eval = |f: f64| -> Result<(SMatrix, bool)> {
        let m = builder(f)?;
        let s = abcd_to_s(&m, z_ref)?;
        Ok((s, m.hard_zero))
    };
    let n = freqs.len();
    let mut s11 = Vec::with_capacity(n);
    let mut s21 = Vec::with_capacity(n);
    let mut s22 = Vec::with_capacity(n);
    let mut flags = Vec::with_capacity(n);
    for &f in &freqs {
        let (s, flag) = match eval(f) {
            Ok((s, hard)) => (
                s,
                if hard {
                    PointFlag::HardZero
                } else {
                    PointFlag::Ok
                },
            ),
            Err(_) => match eval(f + EPS_F).or_else(|_| eval(f - EPS_F)) {
                Ok((s, hard)) => (
                    s,
                    if hard {
                        PointFlag::HardZero
                    } else {
                        PointFlag::Degenerate
                    },
                ),
                Err(_) => (
                    SMatrix {
                        s11: Complex64::new(1.0, 0.0),
                        s12: Complex64::new(0.0, 0.0),
                        s21: Complex64::new(0.0, 0.0),
                        s22: Complex64::new(1.0, 0.0),
                        z_ref,
                    },
                    PointFlag::Degenerate,
                ),
            },
        };
        s11.push(s.s11);
        s21.push(s.s21);
        s22.push(s.s22);
        flags.push(flag);
    }
    Ok(ResponseTrace {
        freqs,
        s11,
        s21,
        s22,
        flags,
    })
}

/// Inclusive band membership with a relative slop of 1e-12, so grid points
/// that land exactly on a band edge are never lost to rounding.
fn in_band(f: f64, lo: f64, hi: f64) -> bool {
    f >= lo - lo.abs() * 1e-12 && f <= hi + hi.abs() * 1e-12
}

/// Largest |s21| in dB over `[lo, hi]`, with the exact-zero floor applied.
fn max_s21_db(trace: &ResponseTrace, lo: f64, hi: f64, label: &str) -> Result<f64> {
    let mut best: Option<f64> = None;
    for (i, &f) in trace.freqs.iter().enumerate() {
        if in_band(f, lo, hi) {
            let db = db20(trace.s21[i].norm());
            best = Some(best.map_or(db, |b: f64| b.max(db)));
        }
    }
    best.ok_or_else(|| {
        Error::Coverage(format!(
            "no sweep points inside the {label} band {:.6}–{:.6} GHz",
            lo / 1e9,
            hi / 1e9
        ))
    })
}

/// Reduce a trace to band metrics.
///
/// The passband is `f0·(1 ± Δ/2)`; the harmonic windows are
/// `2f0·(1 ± harmonic_window)` and `3f0·(1 ± harmonic_window)`. The trace
/// must span `[f0·(1−Δ), 3f0·(1+harmonic_window)]` or a coverage error is
/// returned.
pub fn band_metrics(
    trace: &ResponseTrace,
    f0: f64,
    delta: f64,
    harmonic_window: f64,
) -> Result<BandMetrics> {
    if !(f0 > 0.0) {
        return Err(Error::Spec(format!(
            "center frequency must be > 0, got {f0}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Spec(format!(
            "fractional bandwidth must lie in (0, 1), got {delta}"
        )));
    }
    if !(harmonic_window > 0.0 && harmonic_window < 0.5) {
        return Err(Error::Spec(format!(
            "harmonic window must lie in (0, 0.5), got {harmonic_window}"
        )));
    }
    trace.validate()?;
    let lo_required = f0 * (1.0 - delta);
    let hi_required = 3.0 * f0 * (1.0 + harmonic_window);
    let first = *trace.freqs.first().expect("validated nonempty");
    let last = *trace.freqs.last().expect("validated nonempty");
    if first > lo_required * (1.0 + 1e-12) || last < hi_required * (1.0 - 1e-12) {
        return Err(Error::Coverage(format!(
            "trace spans {:.6}–{:.6} GHz but metrics need {:.6}–{:.6} GHz",
            first / 1e9,
            last / 1e9,
            lo_required / 1e9,
            hi_required / 1e9
        )));
    }

    let pass_lo = f0 * (1.0 - delta / 2.0);
    let pass_hi = f0 * (1.0 + delta / 2.0);
    let mut worst_il: Option<f64> = None;
    let mut worst_rl: Option<f64> = None;
    for (i, &f) in trace.freqs.iter().enumerate() {
        if in_band(f, pass_lo, pass_hi) {
            let il = -db20(trace.s21[i].norm());
            let rl = -db20(trace.s11[i].norm());
            worst_il = Some(worst_il.map_or(il, |w: f64| w.max(il)));
            worst_rl = Some(worst_rl.map_or(rl, |w: f64| w.min(rl)));
        }
    }
    let (worst_il, worst_rl) = match (worst_il, worst_rl) {
        (Some(il), Some(rl)) => (il, rl),
        _ => {
            return Err(Error::Coverage(format!(
                "no sweep points inside the passband {:.6}–{:.6} GHz",
                pass_lo / 1e9,
                pass_hi / 1e9
            )))
        }
    };

    let supp2 = max_s21_db(
        trace,
        2.0 * f0 * (1.0 - harmonic_window),
        2.0 * f0 * (1.0 + harmonic_window),
        "second-harmonic",
    )?;
    let supp3 = max_s21_db(
        trace,
        3.0 * f0 * (1.0 - harmonic_window),
        3.0 * f0 * (1.0 + harmonic_window),
        "third-harmonic",
    )?;

    Ok(BandMetrics {
        passband_il_db: worst_il.max(0.0),
        passband_rl_db: worst_rl.max(0.0),
        suppression_2f0_db: supp2,
        suppression_3f0_db: supp3,
    })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
