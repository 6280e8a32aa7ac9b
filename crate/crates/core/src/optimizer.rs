//! # Stub placement and tuning
//!
//! Searches for T-section open-stub parameters (impedance `zt`, quarter-wave
//! frequency `fz`, attachment junction) that push the spurious harmonic
//! passbands down while leaving the design passband intact.
//!
//! The search is derivative-free: the objective is non-smooth wherever a
//! stub resonance crosses a grid point (exact zeros, flag changes), so a
//! multi-start downhill-simplex (Nelder–Mead) method runs on the unit box
//! `[0,1]^d` with parameters affinely mapped into their bounds. Restarts use
//! a Halton low-discrepancy sequence, making every run a pure function of
//! the seed. Candidate attachment sites are enumerated combinatorially from
//! a [`StubTemplate`]; mirrored pairs share one `(zt, fz)` parameter set so
//! the network stays palindromic.
//!
//! Scores are "lower is better": harmonic suppression enters as |s21| in dB
//! (negative), and passband degradation beyond an allowance is penalized.

use crate::error::{Error, Result};
use crate::network::ElectricalAngle;
use crate::response::{
    band_metrics, build_proposed, build_traditional, sweep, BandMetrics, ResponseTrace,
    SweepConfig, DEFAULT_HARMONIC_WINDOW,
};
use crate::synthesis::{FilterSpec, SectionDesign};

/// Smallest realizable microstrip stub impedance, Ω.
pub const ZT_MIN: f64 = 20.0;

/// Largest realizable microstrip stub impedance, Ω.
pub const ZT_MAX: f64 = 150.0;

/// Number of simplex restarts per site assignment.
pub const RESTARTS: usize = 8;

/// Prime bases for the Halton start sequence, cycled over dimensions.
const HALTON_BASES: [usize; 6] = [2, 3, 5, 7, 11, 13];

/// Simplex termination: stop when all vertex scores agree this closely.
const F_SPREAD_TOL: f64 = 1e-10;

/// Initial simplex edge length in unit-box coordinates.
const INITIAL_STEP: f64 = 0.15;

// ---------------------------------------------------------------------------
// Public types
// ---------------------------------------------------------------------------

/// One shunt open stub: impedance, quarter-wave frequency, and the junction
/// it attaches to. `fz = ∞` denotes a degenerate (zero-length) stub that has
/// no electrical effect at any finite frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stub {
    /// Characteristic impedance in Ω.
    pub zt: f64,
    /// Frequency in Hz at which the stub is a quarter-wave long.
    pub fz: f64,
    /// Junction index (0 = input port plane, N+1 = output port plane).
    pub site: usize,
}

impl Stub {
    /// Electrical length of this stub at frequency `f`.
    pub fn angle_at(&self, f: f64) -> ElectricalAngle {
        if self.fz.is_infinite() {
            ElectricalAngle::from_radians(0.0)
        } else {
            ElectricalAngle::from_radians(std::f64::consts::FRAC_PI_2 * (f / self.fz))
        }
    }
}

/// A concrete set of stubs attached to the filter.
#[derive(Debug, Clone, PartialEq)]
pub struct StubConfig {
    pub stubs: Vec<Stub>,
}

impl StubConfig {
    /// Check physical bounds and placement: `ZT_MIN ≤ zt ≤ ZT_MAX`,
    /// `fz > f0` (infinity allowed), sites within `0..=n_sections` and
    /// pairwise distinct.
    pub fn validate(&self, spec: &FilterSpec, n_sections: usize) -> Result<()> {
        for stub in &self.stubs {
            if !(stub.zt.is_finite() && (ZT_MIN..=ZT_MAX).contains(&stub.zt)) {
                return Err(Error::Spec(format!(
                    "stub impedance must lie in [{ZT_MIN}, {ZT_MAX}] Ω, got {}",
                    stub.zt
                )));
            }
            if !(stub.fz > spec.f0) {
                return Err(Error::Spec(format!(
                    "stub quarter-wave frequency must exceed f0 = {} Hz, got {}",
                    spec.f0, stub.fz
                )));
            }
            if stub.site > n_sections {
                return Err(Error::Spec(format!(
                    "stub site {} is out of range (junctions run 0..={n_sections})",
                    stub.site
                )));
            }
        }
        let mut sites: Vec<usize> = self.stubs.iter().map(|s| s.site).collect();
        sites.sort_unstable();
        if sites.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Spec("stub sites must be distinct".into()));
        }
        Ok(())
    }
}

/// Search box for one stub group. A symmetric entry places mirrored copies
/// of the stub at `site` and `n_sections − site` (a self-mirrored center
/// site yields a single stub); both copies share the same `(zt, fz)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StubEntry {
    /// Candidate junctions for this group; the optimizer picks one.
    pub sites: Vec<usize>,
    /// Mirror the stub about the filter midline.
    pub symmetric: bool,
    /// Inclusive impedance bounds in Ω, within `[ZT_MIN, ZT_MAX]`.
    pub zt_range: (f64, f64),
    /// Inclusive quarter-wave-frequency bounds in Hz, above `f0`.
    pub fz_range: (f64, f64),
}

/// The full search space: one [`StubEntry`] per tunable stub group.
#[derive(Debug, Clone, PartialEq)]
pub struct StubTemplate {
    pub entries: Vec<StubEntry>,
}

impl StubTemplate {
    /// Check that every entry describes a nonempty, in-bounds search box.
    pub fn validate(&self, spec: &FilterSpec, n_sections: usize) -> Result<()> {
        if self.entries.is_empty() {
            return Err(Error::Infeasible("stub template has no entries".into()));
        }
        for (i, entry) in self.entries.iter().enumerate() {
            if entry.sites.is_empty() {
                return Err(Error::Infeasible(format!(
                    "template entry {i} lists no candidate sites"
                )));
            }
            let mut seen = entry.sites.clone();
            seen.sort_unstable();
            if seen.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Infeasible(format!(
                    "template entry {i} repeats a candidate site"
                )));
            }
            if let Some(&bad) = entry.sites.iter().find(|&&s| s > n_sections) {
                return Err(Error::Infeasible(format!(
                    "template entry {i} site {bad} is out of range (junctions run 0..={n_sections})"
                )));
            }
            let (zlo, zhi) = entry.zt_range;
            if !(zlo.is_finite() && zhi.is_finite() && ZT_MIN <= zlo && zlo <= zhi && zhi <= ZT_MAX)
            {
                return Err(Error::Infeasible(format!(
                    "template entry {i} impedance range [{zlo}, {zhi}] must sit inside [{ZT_MIN}, {ZT_MAX}] Ω"
                )));
            }
            let (flo, fhi) = entry.fz_range;
            if !(flo.is_finite() && fhi.is_finite() && spec.f0 < flo && flo <= fhi) {
                return Err(Error::Infeasible(format!(
                    "template entry {i} frequency range [{flo}, {fhi}] must be finite, ordered, and above f0"
                )));
            }
        }
        Ok(())
    }
}

/// Weights and allowances defining the scalar objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveSpec {
    /// Weight on passband insertion loss beyond the allowance.
    pub w_pass: f64,
    /// Weight on worst |s21| in the second-harmonic window.
    pub w_h2: f64,
    /// Weight on worst |s21| in the third-harmonic window.
    pub w_h3: f64,
    /// Insertion-loss allowance in dB before the passband penalty engages.
    pub passband_il_budget_db: f64,
    /// Half-width of the harmonic windows, fraction of the window center.
    pub harmonic_window: f64,
}

impl Default for ObjectiveSpec {
    fn default() -> Self {
        Self {
            w_pass: 10.0,
            w_h2: 1.0,
            w_h3: 1.0,
            passband_il_budget_db: 0.5,
            harmonic_window: DEFAULT_HARMONIC_WINDOW,
        }
    }
}

impl ObjectiveSpec {
    /// Check weight signs (all ≥ 0, at least one > 0) and window bounds.
    pub fn validate(&self) -> Result<()> {
        for (name, w) in [
            ("w_pass", self.w_pass),
            ("w_h2", self.w_h2),
            ("w_h3", self.w_h3),
        ] {
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::Spec(format!(
                    "objective weight {name} must be finite and ≥ 0, got {w}"
                )));
            }
        }
        if self.w_pass + self.w_h2 + self.w_h3 <= 0.0 {
            return Err(Error::Spec(
                "at least one objective weight must be positive".into(),
            ));
        }
        if !(self.passband_il_budget_db.is_finite() && self.passband_il_budget_db >= 0.0) {
            return Err(Error::Spec(format!(
                "insertion-loss allowance must be finite and ≥ 0 dB, got {}",
                self.passband_il_budget_db
            )));
        }
        if !(self.harmonic_window > 0.0 && self.harmonic_window < 0.5) {
            return Err(Error::Spec(format!(
                "harmonic window must lie in (0, 0.5), got {}",
                self.harmonic_window
            )));
        }
        Ok(())
    }
}

/// Outcome of a search: the winning stubs, their score, and the band metrics
/// of the plain and stub-loaded filters on the same sweep grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub best: StubConfig,
    /// Objective value of `best` (lower is better).
    pub score: f64,
    /// Metrics of the stub-free filter.
    pub metrics_before: BandMetrics,
    /// Metrics of the filter with `best` installed.
    pub metrics_after: BandMetrics,
    /// Objective evaluations actually spent (never exceeds the budget).
    pub evaluations: usize,
    /// True when the evaluation budget cut the search short.
    pub budget_exhausted: bool,
}

// ---------------------------------------------------------------------------
// Objective
// ---------------------------------------------------------------------------

/// Scalarize band metrics: `w_pass·max(0, IL − allowance) + w_h2·supp2 +
/// w_h3·supp3`. Suppression values are negative dB, so better suppression
/// lowers the score linearly with its weight.
pub fn score_from_metrics(m: &BandMetrics, obj: &ObjectiveSpec) -> f64 {
    obj.w_pass * (m.passband_il_db - obj.passband_il_budget_db).max(0.0)
        + obj.w_h2 * m.suppression_2f0_db
        + obj.w_h3 * m.suppression_3f0_db
}

/// Score a swept trace directly (metrics extraction plus
/// [`score_from_metrics`]). Lower is better.
pub fn objective(trace: &ResponseTrace, obj: &ObjectiveSpec, f0: f64, delta: f64) -> Result<f64> {
    obj.validate()?;
    let m = band_metrics(trace, f0, delta, obj.harmonic_window)?;
    Ok(score_from_metrics(&m, obj))
}

// ---------------------------------------------------------------------------
// Search internals
// ---------------------------------------------------------------------------

/// Element `index` of the van der Corput sequence in the given prime base.
fn halton(index: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let mut i = index;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Concrete junctions an entry occupies when its group sits at `site`.
fn expand_sites(entry: &StubEntry, site: usize, n_sections: usize) -> Vec<usize> {
    if entry.symmetric {
        let mirror = n_sections - site;
        if mirror == site {
            vec![site]
        } else {
            vec![site.min(mirror), site.max(mirror)]
        }
    } else {
        vec![site]
    }
}

/// All conflict-free site choices, one site per entry, in lexicographic
/// order with the last entry varying fastest.
fn enumerate_assignments(entries: &[StubEntry], n_sections: usize) -> Vec<Vec<usize>> {
    let n = entries.len();
    let mut out = Vec::new();
    let mut cursor = vec![0usize; n];
    'outer: loop {
        let sites: Vec<usize> = entries
            .iter()
            .zip(&cursor)
            .map(|(e, &c)| e.sites[c])
            .collect();
        let mut used: Vec<usize> = Vec::new();
        let mut disjoint = true;
        'check: for (entry, &site) in entries.iter().zip(&sites) {
            for j in expand_sites(entry, site, n_sections) {
                if used.contains(&j) {
                    disjoint = false;
                    break 'check;
                }
                used.push(j);
            }
        }
        if disjoint {
            out.push(sites);
        }
        let mut k = n;
        while k > 0 {
            k -= 1;
            cursor[k] += 1;
            if cursor[k] < entries[k].sites.len() {
                continue 'outer;
            }
            cursor[k] = 0;
        }
        return out;
    }
}

/// Downhill simplex on the unit box. `eval` returns `None` when the budget
/// refuses another evaluation, which ends the run immediately. Every
/// candidate is clamped into the box *before* evaluation and stored clamped,
/// so the returned point is always one that was actually scored. Returns the
/// best evaluated point, or `None` if not even one evaluation was allowed.
fn nelder_mead<E>(eval: &mut E, x0: &[f64]) -> Option<(Vec<f64>, f64)>
where
    E: FnMut(&[f64]) -> Option<f64>,
{
    let d = x0.len();
    let clamped = |x: Vec<f64>| -> Vec<f64> { x.into_iter().map(|v| v.clamp(0.0, 1.0)).collect() };

    let mut best: Option<(Vec<f64>, f64)> = None;
    macro_rules! track {
        ($x:expr, $f:expr) => {
            if best.as_ref().map_or(true, |(_, bf)| $f < *bf) {
                best = Some(($x.clone(), $f));
            }
        };
    }

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(d + 1);
    simplex.push(clamped(x0.to_vec()));
    for i in 0..d {
        let mut v = simplex[0].clone();
        v[i] = if v[i] + INITIAL_STEP <= 1.0 {
            v[i] + INITIAL_STEP
        } else {
            v[i] - INITIAL_STEP
        };
        simplex.push(v);
    }
    let mut vertices: Vec<(f64, Vec<f64>)> = Vec::with_capacity(d + 1);
    for v in simplex {
        match eval(&v) {
            Some(f) => {
                track!(v, f);
                vertices.push((f, v));
            }
            None => return best,
        }
    }

    loop {
        vertices.sort_by(|a, b| a.0.total_cmp(&b.0));
        if (vertices[d].0 - vertices[0].0).abs() < F_SPREAD_TOL {
            return best;
        }
        let centroid: Vec<f64> = (0..d)
            .map(|i| vertices[..d].iter().map(|(_, x)| x[i]).sum::<f64>() / d as f64)
            .collect();
        let worst = vertices[d].1.clone();
        let f_best = vertices[0].0;
        let f_second_worst = vertices[d - 1].0;
        let f_worst = vertices[d].0;

        let xr = clamped(
            centroid
                .iter()
                .zip(&worst)
                .map(|(&c, &w)| c + (c - w))
                .collect(),
        );
        let Some(fr) = eval(&xr) else { return best };
        track!(xr, fr);

        if fr < f_best {
            let xe = clamped(
                centroid
                    .iter()
                    .zip(&worst)
                    .map(|(&c, &w)| c + 2.0 * (c - w))
                    .collect(),
            );
            let Some(fe) = eval(&xe) else { return best };
            track!(xe, fe);
            vertices[d] = if fe < fr { (fe, xe) } else { (fr, xr) };
        } else if fr < f_second_worst {
            vertices[d] = (fr, xr);
        } else {
            let xc = clamped(
                centroid
                    .iter()
                    .zip(&worst)
                    .map(|(&c, &w)| c + 0.5 * (w - c))
                    .collect(),
            );
            let Some(fc) = eval(&xc) else { return best };
            track!(xc, fc);
            if fc < f_worst {
                vertices[d] = (fc, xc);
            } else {
                let anchor = vertices[0].1.clone();
                for j in 1..=d {
                    let xs = clamped(
                        anchor
                            .iter()
                            .zip(&vertices[j].1)
                            .map(|(&b, &v)| b + 0.5 * (v - b))
                            .collect(),
                    );
                    let Some(fs) = eval(&xs) else { return best };
                    track!(xs, fs);
                    vertices[j] = (fs, xs);
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Search driver
// ---------------------------------------------------------------------------

/// Search for the best stub configuration under `template`.
///
/// For every conflict-free site assignment, [`RESTARTS`] simplex runs start
/// from consecutive Halton points; each run may spend at most
/// `budget / (assignments · RESTARTS)` objective evaluations, and a hard
/// global check guarantees `evaluations ≤ budget` even so. The result is a
/// pure function of the inputs and `seed`.
pub fn optimize_stubs(
    base: &[SectionDesign],
    template: &StubTemplate,
    spec: &FilterSpec,
    obj: &ObjectiveSpec,
    sweep_cfg: &SweepConfig,
    budget: usize,
    seed: u64,
) -> Result<OptimizationResult> {
    spec.validate()?;
    if base.is_empty() {
        return Err(Error::Spec("filter has no coupled-line sections".into()));
    }
    obj.validate()?;
    template.validate(spec, base.len())?;
    sweep_cfg.validate()?;
    if budget < 50 {
        return Err(Error::Spec(format!(
            "optimization budget must be at least 50 evaluations, got {budget}"
        )));
    }

    let trad = sweep(|f| build_traditional(base, f, spec), sweep_cfg, spec.z0)?;
    let metrics_before = band_metrics(&trad, spec.f0, spec.delta, obj.harmonic_window)?;

    let assignments = enumerate_assignments(&template.entries, base.len());
    if assignments.is_empty() {
        return Err(Error::Infeasible(
            "no conflict-free stub placement exists for this template".into(),
        ));
    }

    let d = 2 * template.entries.len();
    let offset = (seed % 100_000) as usize + 10;
    let cap = (budget / (assignments.len() * RESTARTS)).max(1);

    let config_for = |combo: &[usize], x: &[f64]| -> StubConfig {
        let mut stubs = Vec::new();
        for (i, (entry, &site)) in template.entries.iter().zip(combo).enumerate() {
            let (zlo, zhi) = entry.zt_range;
            let (flo, fhi) = entry.fz_range;
            let zt = zlo + x[2 * i] * (zhi - zlo);
            let fz = flo + x[2 * i + 1] * (fhi - flo);
            for site in expand_sites(entry, site, base.len()) {
                stubs.push(Stub { zt, fz, site });
            }
        }
        StubConfig { stubs }
    };
    let score_of = |combo: &[usize], x: &[f64]| -> f64 {
        let cfg = config_for(combo, x);
        let scored = sweep(|f| build_proposed(base, &cfg, f, spec), sweep_cfg, spec.z0)
            .and_then(|tr| band_metrics(&tr, spec.f0, spec.delta, obj.harmonic_window));
        match scored {
            Ok(m) => score_from_metrics(&m, obj),
            // Unreachable once the baseline metrics above succeeded (same
            // grid, same bands); scored worst-possible rather than panicking.
            Err(_) => f64::INFINITY,
        }
    };

    let mut total = 0usize;
    let mut exhausted = false;
    let mut best: Option<(f64, Vec<usize>, Vec<f64>)> = None;
    for combo in &assignments {
        for restart in 0..RESTARTS {
            let x0: Vec<f64> = (0..d)
                .map(|dim| halton(offset + restart, HALTON_BASES[dim % HALTON_BASES.len()]))
                .collect();
            let mut run = 0usize;
            let outcome = nelder_mead(
                &mut |x: &[f64]| {
                    // The per-run cap is the designed split; the global check
                    // only fires when restarts × assignments oversubscribe
                    // the budget, which is what the exhausted flag reports.
                    if run >= cap {
                        return None;
                    }
                    if total >= budget {
                        exhausted = true;
                        return None;
                    }
                    total += 1;
                    run += 1;
                    Some(score_of(combo, x))
                },
                &x0,
            );
            if let Some((x, f)) = outcome {
                if best.as_ref().map_or(true, |(bf, _, _)| f < *bf) {
                    best = Some((f, combo.clone(), x));
                }
            }
        }
    }

    let (score, combo, x) =
        best.ok_or_else(|| Error::Evaluation("optimizer performed no evaluations".into()))?;
    let best_cfg = config_for(&combo, &x);
    let after = sweep(
        |f| build_proposed(base, &best_cfg, f, spec),
        sweep_cfg,
        spec.z0,
    )?;
    let metrics_after = band_metrics(&after, spec.f0, spec.delta, obj.harmonic_window)?;
    Ok(OptimizationResult {
        best: best_cfg,
        score,
        metrics_before,
        metrics_after,
        evaluations: total,
        budget_exhausted: exhausted,
    })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prototype::{Family, PrototypeSpec};
    use crate::response::{db20, PointFlag, Spacing};
    use crate::synthesis::synthesize;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn reference_spec() -> FilterSpec {
        FilterSpec {
            f0: 2.0e9,
            delta: 0.1,
            z0: 50.0,
            prototype: PrototypeSpec {
                order: 3,
                family: Family::EqualRipple,
                ripple_db: 0.5,
            },
        }
    }

    /// Coarse grid that still covers the metric bands of the 2 GHz design.
    fn coarse_grid() -> SweepConfig {
        SweepConfig {
            f_start: 1.8e9,
            f_stop: 6.6e9,
            n_points: 49,
            spacing: Spacing::Linear,
        }
    }

    /// Synthetic unit-reference trace with |s21| given by `mag(f)`.
    fn synthetic_trace(mag: impl Fn(f64) -> f64) -> ResponseTrace {
        let freqs = coarse_grid().frequencies().unwrap();
        let n = freqs.len();
        let s21: Vec<Complex64> = freqs
            .iter()
            .map(|&f| Complex64::new(mag(f).clamp(0.0, 1.0), 0.0))
            .collect();
        let s11: Vec<Complex64> = s21
            .iter()
            .map(|s| Complex64::new((1.0 - s.norm_sqr()).max(0.0).sqrt(), 0.0))
            .collect();
        ResponseTrace {
            freqs,
            s22: s11.clone(),
            s11,
            s21,
            flags: vec![PointFlag::Ok; n],
        }
    }

    #[test]
    fn halton_reference_values() {
        assert_eq!(halton(1, 2), 0.5);
        assert_eq!(halton(2, 2), 0.25);
        assert_eq!(halton(3, 2), 0.75);
        assert_eq!(halton(4, 2), 0.125);
        assert_abs_diff_eq!(halton(1, 3), 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(halton(2, 3), 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(halton(4, 3), 4.0 / 9.0, epsilon = 1e-15);
        for i in 1..500 {
            for b in HALTON_BASES {
                let h = halton(i, b);
                assert!(h > 0.0 && h < 1.0, "halton({i}, {b}) = {h}");
            }
        }
    }

    #[test]
    fn simplex_finds_an_interior_quadratic_minimum() {
        let mut evals = 0usize;
        let (x, f) = nelder_mead(
            &mut |x: &[f64]| {
                assert!(x.iter().all(|&v| (0.0..=1.0).contains(&v)));
                evals += 1;
                if evals > 200 {
                    return None;
                }
                Some((x[0] - 0.3).powi(2) + (x[1] - 0.7).powi(2))
            },
            &[0.9, 0.1],
        )
        .unwrap();
        assert!(f < 1e-8, "final score {f}");
        assert_abs_diff_eq!(x[0], 0.3, epsilon = 1e-3);
        assert_abs_diff_eq!(x[1], 0.7, epsilon = 1e-3);
    }

    #[test]
    fn simplex_respects_the_box_when_the_minimum_lies_outside() {
        let mut evals = 0usize;
        let (x, f) = nelder_mead(
            &mut |x: &[f64]| {
                assert!((0.0..=1.0).contains(&x[0]));
                evals += 1;
                if evals > 150 {
                    return None;
                }
                Some((x[0] + 0.5).powi(2))
            },
            &[0.8],
        )
        .unwrap();
        assert_abs_diff_eq!(x[0], 0.0, epsilon = 1e-3);
        assert_abs_diff_eq!(f, 0.25, epsilon = 1e-3);
    }

    #[test]
    fn simplex_budget_refusal_returns_best_so_far() {
        let mut evals = 0usize;
        let got = nelder_mead(
            &mut |x: &[f64]| {
                if evals >= 3 {
                    return None;
                }
                evals += 1;
                Some(x[0] + x[1])
            },
            &[0.5, 0.5],
        );
        assert_eq!(evals, 3);
        let (_, f) = got.unwrap();
        // Three initial vertices were scored; the best must be their min.
        assert!(f <= 1.0 + 1e-12);

        let refused = nelder_mead(&mut |_: &[f64]| None, &[0.5, 0.5]);
        assert!(refused.is_none());
    }

    #[test]
    fn objective_composes_metrics_linearly() {
        let m = BandMetrics {
            passband_il_db: 0.8,
            passband_rl_db: 12.0,
            suppression_2f0_db: -50.0,
            suppression_3f0_db: -60.0,
        };
        let obj = ObjectiveSpec::default();
        // 10·(0.8 − 0.5) − 50 − 60
        assert_abs_diff_eq!(score_from_metrics(&m, &obj), -107.0, epsilon = 1e-12);
        let within = BandMetrics {
            passband_il_db: 0.3,
            ..m
        };
        assert_abs_diff_eq!(score_from_metrics(&within, &obj), -110.0, epsilon = 1e-12);
    }

    #[test]
    fn ten_extra_decibels_of_suppression_shift_the_score_by_ten() {
        let base = synthetic_trace(|f| {
            if (3.6e9..=4.4e9).contains(&f) {
                0.1
            } else if (5.4e9..=6.6e9).contains(&f) {
                0.2
            } else {
                1.0
            }
        });
        let deeper = synthetic_trace(|f| {
            if (3.6e9..=4.4e9).contains(&f) {
                0.1 * 10.0_f64.powf(-0.5)
            } else if (5.4e9..=6.6e9).contains(&f) {
                0.2
            } else {
                1.0
            }
        });
        let obj = ObjectiveSpec::default();
        let a = objective(&base, &obj, 2.0e9, 0.1).unwrap();
        let b = objective(&deeper, &obj, 2.0e9, 0.1).unwrap();
        assert_abs_diff_eq!(a - b, 10.0 * obj.w_h2, epsilon = 1e-9);
    }

    #[test]
    fn objective_extremes_match_policy_values() {
        let obj = ObjectiveSpec::default();
        // Perfect passband and exact zeros in both windows: the floor twice.
        let ideal = synthetic_trace(|f| if f > 3.0e9 { 0.0 } else { 1.0 });
        assert_eq!(objective(&ideal, &obj, 2.0e9, 0.1).unwrap(), -400.0);
        // All-pass: no penalty, no suppression.
        let allpass = synthetic_trace(|_| 1.0);
        assert_abs_diff_eq!(
            objective(&allpass, &obj, 2.0e9, 0.1).unwrap(),
            0.0,
            epsilon = 1e-9
        );
    }

    #[test]
    fn stub_config_validation_catches_each_violation() {
        let spec = reference_spec();
        let ok = StubConfig {
            stubs: vec![
                Stub {
                    zt: 20.0,
                    fz: 4.0e9,
                    site: 1,
                },
                Stub {
                    zt: 150.0,
                    fz: f64::INFINITY,
                    site: 3,
                },
            ],
        };
        assert!(ok.validate(&spec, 4).is_ok());
        assert!(StubConfig { stubs: vec![] }.validate(&spec, 4).is_ok());

        let cases = [
            Stub {
                zt: 19.9,
                fz: 4.0e9,
                site: 1,
            },
            Stub {
                zt: 150.1,
                fz: 4.0e9,
                site: 1,
            },
            Stub {
                zt: f64::NAN,
                fz: 4.0e9,
                site: 1,
            },
            Stub {
                zt: 60.0,
                fz: 2.0e9,
                site: 1,
            },
            Stub {
                zt: 60.0,
                fz: f64::NAN,
                site: 1,
            },
            Stub {
                zt: 60.0,
                fz: 4.0e9,
                site: 5,
            },
        ];
        for stub in cases {
            let cfg = StubConfig { stubs: vec![stub] };
            assert!(cfg.validate(&spec, 4).is_err(), "accepted {stub:?}");
        }
        let dup = StubConfig {
            stubs: vec![
                Stub {
                    zt: 60.0,
                    fz: 4.0e9,
                    site: 2,
                },
                Stub {
                    zt: 40.0,
                    fz: 5.0e9,
                    site: 2,
                },
            ],
        };
        assert!(dup.validate(&spec, 4).is_err());
    }

    #[test]
    fn objective_spec_validation_catches_each_violation() {
        assert!(ObjectiveSpec::default().validate().is_ok());
        let zeroed = ObjectiveSpec {
            w_pass: 0.0,
            w_h2: 0.0,
            w_h3: 0.0,
            ..ObjectiveSpec::default()
        };
        assert!(zeroed.validate().is_err());
        let negative = ObjectiveSpec {
            w_h2: -1.0,
            ..ObjectiveSpec::default()
        };
        assert!(negative.validate().is_err());
        let bad_window = ObjectiveSpec {
            harmonic_window: 0.5,
            ..ObjectiveSpec::default()
        };
        assert!(bad_window.validate().is_err());
        let bad_budget = ObjectiveSpec {
            passband_il_budget_db: -0.1,
            ..ObjectiveSpec::default()
        };
        assert!(bad_budget.validate().is_err());
    }

    #[test]
    fn template_validation_catches_each_violation() {
        let spec = reference_spec();
        let entry = StubEntry {
            sites: vec![1],
            symmetric: true,
            zt_range: (20.0, 60.0),
            fz_range: (5.5e9, 6.05e9),
        };
        let ok = StubTemplate {
            entries: vec![entry.clone()],
        };
        assert!(ok.validate(&spec, 4).is_ok());

        assert!(StubTemplate { entries: vec![] }.validate(&spec, 4).is_err());
        let cases = [
            StubEntry {
                sites: vec![],
                ..entry.clone()
            },
            StubEntry {
                sites: vec![1, 1],
                ..entry.clone()
            },
            StubEntry {
                sites: vec![5],
                ..entry.clone()
            },
            StubEntry {
                zt_range: (10.0, 60.0),
                ..entry.clone()
            },
            StubEntry {
                zt_range: (60.0, 20.0),
                ..entry.clone()
            },
            StubEntry {
                zt_range: (20.0, 151.0),
                ..entry.clone()
            },
            StubEntry {
                fz_range: (1.0e9, 6.0e9),
                ..entry.clone()
            },
            StubEntry {
                fz_range: (6.0e9, 5.0e9),
                ..entry.clone()
            },
            StubEntry {
                fz_range: (5.0e9, f64::INFINITY),
                ..entry.clone()
            },
        ];
        for bad in cases {
            let t = StubTemplate {
                entries: vec![bad.clone()],
            };
            let err = t.validate(&spec, 4);
            assert!(err.is_err(), "accepted {bad:?}");
            assert!(matches!(err.unwrap_err(), Error::Infeasible(_)));
        }
    }

    #[test]
    fn assignment_enumeration_filters_overlaps() {
        let entries = vec![
            StubEntry {
                sites: vec![1, 2],
                symmetric: true,
                zt_range: (20.0, 60.0),
                fz_range: (5.0e9, 6.0e9),
            },
            StubEntry {
                sites: vec![2],
                symmetric: true,
                zt_range: (20.0, 60.0),
                fz_range: (5.0e9, 6.0e9),
            },
        ];
        // Entry 0 at site 1 expands to {1, 3}; at site 2 it collides with
        // entry 1's center placement.
        assert_eq!(enumerate_assignments(&entries, 4), vec![vec![1, 2]]);

        let solo = vec![StubEntry {
            sites: vec![0, 1, 2],
            symmetric: false,
            zt_range: (20.0, 60.0),
            fz_range: (5.0e9, 6.0e9),
        }];
        assert_eq!(
            enumerate_assignments(&solo, 4),
            vec![vec![0], vec![1], vec![2]]
        );
    }

    #[test]
    fn symmetric_expansion_handles_center_and_mirror() {
        let entry = StubEntry {
            sites: vec![1],
            symmetric: true,
            zt_range: (20.0, 60.0),
            fz_range: (5.0e9, 6.0e9),
        };
        assert_eq!(expand_sites(&entry, 1, 4), vec![1, 3]);
        assert_eq!(expand_sites(&entry, 2, 4), vec![2]);
        assert_eq!(expand_sites(&entry, 0, 4), vec![0, 4]);
        let plain = StubEntry {
            symmetric: false,
            ..entry
        };
        assert_eq!(expand_sites(&plain, 1, 4), vec![1]);
    }

    #[test]
    fn optimize_rejects_bad_setups() {
        let spec = reference_spec();
        let base = synthesize(&spec).unwrap();
        let obj = ObjectiveSpec::default();
        let grid = coarse_grid();
        let template = StubTemplate {
            entries: vec![StubEntry {
                sites: vec![2],
                symmetric: true,
                zt_range: (20.0, 60.0),
                fz_range: (3.9e9, 4.1e9),
            }],
        };

        let small = optimize_stubs(&base, &template, &spec, &obj, &grid, 49, 1);
        assert!(matches!(small.unwrap_err(), Error::Spec(_)));

        let clash = StubTemplate {
            entries: vec![template.entries[0].clone(), template.entries[0].clone()],
        };
        let infeasible = optimize_stubs(&base, &clash, &spec, &obj, &grid, 100, 1);
        assert!(matches!(infeasible.unwrap_err(), Error::Infeasible(_)));

        let short_grid = SweepConfig {
            f_stop: 5.0e9,
            n_points: 33,
            ..grid
        };
        let uncovered = optimize_stubs(&base, &template, &spec, &obj, &short_grid, 100, 1);
        assert!(matches!(uncovered.unwrap_err(), Error::Coverage(_)));
    }

    #[test]
    fn same_seed_same_inputs_reproduce_the_result_exactly() {
        let spec = reference_spec();
        let base = synthesize(&spec).unwrap();
        let obj = ObjectiveSpec::default();
        let grid = coarse_grid();
        let template = StubTemplate {
            entries: vec![StubEntry {
                sites: vec![1, 2],
                symmetric: true,
                zt_range: (20.0, 60.0),
                fz_range: (5.5e9, 6.5e9),
            }],
        };
        let a = optimize_stubs(&base, &template, &spec, &obj, &grid, 120, 7).unwrap();
        let b = optimize_stubs(&base, &template, &spec, &obj, &grid, 120, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.evaluations <= 120);
        assert!(!a.best.stubs.is_empty());
    }

    #[test]
    fn a_larger_budget_never_yields_a_worse_score() {
        // Runs with the same seed share their early trajectory, so raising
        // the per-run cap can only extend — never alter — what was already
        // searched.
        let spec = reference_spec();
        let base = synthesize(&spec).unwrap();
        let obj = ObjectiveSpec::default();
        let grid = coarse_grid();
        let template = StubTemplate {
            entries: vec![StubEntry {
                sites: vec![1],
                symmetric: true,
                zt_range: (20.0, 60.0),
                fz_range: (5.5e9, 6.05e9),
            }],
        };
        let small = optimize_stubs(&base, &template, &spec, &obj, &grid, 100, 42).unwrap();
        let large = optimize_stubs(&base, &template, &spec, &obj, &grid, 400, 42).unwrap();
        assert!(large.score <= small.score + 1e-12);
    }

    #[test]
    fn oversubscribed_search_stops_exactly_at_the_budget() {
        let spec = reference_spec();
        let base = synthesize(&spec).unwrap();
        let obj = ObjectiveSpec::default();
        let grid = coarse_grid();
        // Two free-site entries: 5×5 − 5 = 20 assignments × 8 restarts =
        // 160 runs, far more than 50 evaluations can feed.
        let entry = StubEntry {
            sites: vec![0, 1, 2, 3, 4],
            symmetric: false,
            zt_range: (20.0, 60.0),
            fz_range: (5.5e9, 6.5e9),
        };
        let template = StubTemplate {
            entries: vec![entry.clone(), entry],
        };
        let r = optimize_stubs(&base, &template, &spec, &obj, &grid, 50, 3).unwrap();
        assert!(r.budget_exhausted);
        assert_eq!(r.evaluations, 50);
    }

    #[test]
    fn returned_score_matches_an_independent_resweep() {
        let spec = reference_spec();
        let base = synthesize(&spec).unwrap();
        let obj = ObjectiveSpec::default();
        let grid = coarse_grid();
        let template = StubTemplate {
            entries: vec![StubEntry {
                sites: vec![1],
                symmetric: true,
                zt_range: (20.0, 60.0),
                fz_range: (5.5e9, 6.05e9),
            }],
        };
        let r = optimize_stubs(&base, &template, &spec, &obj, &grid, 100, 11).unwrap();
        let trace = sweep(|f| build_proposed(&base, &r.best, f, &spec), &grid, spec.z0).unwrap();
        let rescored = objective(&trace, &obj, spec.f0, spec.delta).unwrap();
        assert!((rescored - r.score).abs() <= 1e-12);
        assert_eq!(
            score_from_metrics(&r.metrics_after, &obj),
            rescored,
            "metrics_after must describe the returned config"
        );
    }

    #[test]
    fn pinned_resonance_matches_a_brute_force_impedance_grid() {
        // One center stub with fz pinned to 2f0: the only free axis is zt,
        // so a dense 1-D grid is an oracle for the attainable score.
        let spec = reference_spec();
        let base = synthesize(&spec).unwrap();
        let obj = ObjectiveSpec::default();
        let grid = coarse_grid();
        let template = StubTemplate {
            entries: vec![StubEntry {
                sites: vec![2],
                symmetric: true,
                zt_range: (ZT_MIN, ZT_MAX),
                fz_range: (4.0e9, 4.0e9),
            }],
        };
        let r = optimize_stubs(&base, &template, &spec, &obj, &grid, 400, 42).unwrap();
        assert_eq!(r.best.stubs.len(), 1);
        assert_eq!(r.best.stubs[0].fz, 4.0e9);
        assert!(r.metrics_after.suppression_2f0_db <= -80.0);

        let mut grid_best = f64::INFINITY;
        for k in 0..200 {
            let zt = ZT_MIN + (ZT_MAX - ZT_MIN) * k as f64 / 199.0;
            let cfg = StubConfig {
                stubs: vec![Stub {
                    zt,
                    fz: 4.0e9,
                    site: 2,
                }],
            };
            let trace = sweep(|f| build_proposed(&base, &cfg, f, &spec), &grid, spec.z0).unwrap();
            grid_best = grid_best.min(objective(&trace, &obj, spec.f0, spec.delta).unwrap());
        }
        assert!(
            r.score <= grid_best + 1e-3,
            "optimizer {} vs grid oracle {grid_best}",
            r.score
        );
    }

    #[test]
    fn a_nearly_degenerate_extra_stub_leaves_the_score_unchanged() {
        // The freedom to add a stub can never hurt: a stub driven toward
        // zero electrical length is invisible to the network, so the score
        // of any config is achievable by the augmented one.
        let spec = reference_spec();
        let base = synthesize(&spec).unwrap();
        let obj = ObjectiveSpec::default();
        let grid = coarse_grid();
        let template = StubTemplate {
            entries: vec![StubEntry {
                sites: vec![1],
                symmetric: true,
                zt_range: (20.0, 60.0),
                fz_range: (5.5e9, 6.05e9),
            }],
        };
        let r = optimize_stubs(&base, &template, &spec, &obj, &grid, 100, 5).unwrap();
        let mut augmented = r.best.clone();
        augmented.stubs.push(Stub {
            zt: ZT_MAX,
            fz: 1.0e15,
            site: 2,
        });
        let trace = sweep(
            |f| build_proposed(&base, &augmented, f, &spec),
            &grid,
            spec.z0,
        )
        .unwrap();
        let rescored = objective(&trace, &obj, spec.f0, spec.delta).unwrap();
        assert!(
            (rescored - r.score).abs() <= 1e-3,
            "augmented {rescored} vs original {}",
            r.score
        );
    }

    #[test]
    fn pinned_zero_drives_the_grid_point_to_the_floor() {
        let spec = reference_spec();
        let base = synthesize(&spec).unwrap();
        let cfg = StubConfig {
            stubs: vec![Stub {
                zt: 30.0,
                fz: 4.0e9,
                site: 2,
            }],
        };
        let trace = sweep(
            |f| build_proposed(&base, &cfg, f, &spec),
            &coarse_grid(),
            spec.z0,
        )
        .unwrap();
        let i = trace.freqs.iter().position(|&f| f == 4.0e9).unwrap();
        assert_eq!(db20(trace.s21[i].norm()), -200.0);
    }
}
