//! # Low-pass prototype element values
//!
//! Classical ladder ("g-value") prototypes for the two standard all-pole
//! responses, plus minimum-order estimation from a stopband requirement.
//! These are the normalized element values every narrowband bandpass
//! synthesis starts from; the bandpass transformation itself lives in
//! [`crate::synthesis`].
//!
//! Closed forms used here:
//!
//! * maximally flat (Butterworth), 3-dB cutoff convention:
//!   `g_k = 2·sin((2k−1)π / 2N)` for `k = 1..N`, with `g_0 = g_{N+1} = 1`.
//! * equal ripple (Chebyshev), ripple `r` dB:
//!   `ε = √(10^{r/10} − 1)`, `γ = sinh(asinh(1/ε) / N)`,
//!   `a_k = sin((2k−1)π / 2N)`, `b_k = γ² + sin²(kπ / N)`,
//!   `g_1 = 2a_1/γ`, `g_k = 4·a_{k−1}·a_k / (b_{k−1}·g_{k−1})`,
//!   and `g_{N+1} = 1` for odd `N`, `coth²(asinh(1/ε)/2)` for even `N`.
//!
//! Attenuation of the prototypes at a normalized frequency `ω ≥ 1`
//! (passband edge at `ω = 1`):
//!
//! * maximally flat: `A(ω) = 10·log10(1 + ω^{2N})`
//! * equal ripple:   `A(ω) = 10·log10(1 + ε²·T_N²(ω))`, `T_N(ω) = cosh(N·acosh ω)`

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Largest supported prototype order. Coupled-line realizations beyond this
/// are impractical and the recursion's numerical error budget is sized for it.
pub const MAX_ORDER: usize = 15;

// ---------------------------------------------------------------------------
// Public types
// ---------------------------------------------------------------------------

/// Prototype response family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Butterworth: monotone, 3-dB point at the cutoff.
    MaximallyFlat,
    /// Chebyshev type I: equal passband ripple, steepest all-pole rolloff.
    EqualRipple,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::MaximallyFlat => write!(f, "maximally-flat"),
            Family::EqualRipple => write!(f, "equal-ripple"),
        }
    }
}

/// Low-pass prototype specification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrototypeSpec {
    /// Filter order N ≥ 1.
    pub order: usize,
    /// Response family.
    pub family: Family,
    /// Passband ripple in dB. Consumed only by [`Family::EqualRipple`]
    /// (must then be > 0); ignored for maximally-flat.
    pub ripple_db: f64,
}

impl PrototypeSpec {
    /// Check the documented invariants.
    pub fn validate(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::Spec("prototype order must be at least 1".into()));
        }
        if self.order > MAX_ORDER {
            return Err(Error::Spec(format!(
                "prototype order {} exceeds the supported maximum {MAX_ORDER}",
                self.order
            )));
        }
        if self.family == Family::EqualRipple && self.ripple_db <= 0.0 {
            return Err(Error::Spec(format!(
                "equal-ripple prototypes need ripple_db > 0, got {}",
                self.ripple_db
            )));
        }
        Ok(())
    }
}

/// Ladder element values `g_0..g_{N+1}` of a low-pass prototype.
///
/// `g[0] = 1` exactly (source), `g[1..=N]` are the ladder reactances, and
/// `g[N+1]` is the load: 1 exactly for maximally-flat and odd-order
/// equal-ripple, `coth²(asinh(1/ε)/2)` for even-order equal-ripple.
#[derive(Debug, Clone, PartialEq)]
pub struct PrototypeValues {
    /// Element values, length N + 2.
    pub g: Vec<f64>,
}

impl PrototypeValues {
    /// Prototype order N (two fewer than the element count).
    pub fn order(&self) -> usize {
        self.g.len() - 2
    }
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Compute the ladder element values `g_0..g_{N+1}` for a prototype spec.
///
/// # Examples
///
/// ```
/// use coupline::prototype::{lowpass_prototype, Family, PrototypeSpec};
///
/// let spec = PrototypeSpec { order: 3, family: Family::MaximallyFlat, ripple_db: 0.0 };
/// let proto = lowpass_prototype(&spec).unwrap();
/// assert_eq!(proto.g.len(), 5);
/// assert!((proto.g[2] - 2.0).abs() < 1e-12);
/// ```
pub fn lowpass_prototype(spec: &PrototypeSpec) -> Result<PrototypeValues> {
    spec.validate()?;
    let n = spec.order;
    let mut g = Vec::with_capacity(n + 2);
    g.push(1.0);
    match spec.family {
        Family::MaximallyFlat => {
            for k in 1..=n {
                g.push(2.0 * ((2 * k - 1) as f64 * PI / (2 * n) as f64).sin());
            }
            g.push(1.0);
        }
        Family::EqualRipple => {
            let eps = (10f64.powf(spec.ripple_db / 10.0) - 1.0).sqrt();
            let asi = (1.0 / eps).asinh();
            let gamma = (asi / n as f64).sinh();
            let a = |k: usize| ((2 * k - 1) as f64 * PI / (2 * n) as f64).sin();
            let b = |k: usize| gamma * gamma + (k as f64 * PI / n as f64).sin().powi(2);
            g.push(2.0 * a(1) / gamma);
            for k in 2..=n {
                let prev = g[k - 1];
                g.push(4.0 * a(k - 1) * a(k) / (b(k - 1) * prev));
            }
            if n % 2 == 1 {
                g.push(1.0);
            } else {
                let coth = 1.0 / (asi / 2.0).tanh();
                g.push(coth * coth);
            }
        }
    }
    Ok(PrototypeValues { g })
}

/// Smallest order N ≤ [`MAX_ORDER`] whose prototype attenuation at the
/// normalized stopband frequency `normalized_stop_freq` (≥ 1, passband edge
/// at 1) reaches `stopband_atten_db`.
///
/// `passband_ripple_db` sets the equal-ripple ε and is ignored for
/// maximally-flat, whose attenuation follows the 3-dB-cutoff convention.
/// At `normalized_stop_freq = 1` the attenuation no longer depends on N
/// (3.01 dB for maximally-flat, the ripple itself for equal-ripple), so only
/// requirements at or below that level are satisfiable there.
pub fn required_order(
    passband_ripple_db: f64,
    stopband_atten_db: f64,
    normalized_stop_freq: f64,
    family: Family,
) -> Result<usize> {
    if stopband_atten_db <= 0.0 {
        return Err(Error::Spec(format!(
            "stopband attenuation must be > 0 dB, got {stopband_atten_db}"
        )));
    }
    if normalized_stop_freq < 1.0 {
        return Err(Error::Spec(format!(
            "normalized stopband frequency must be >= 1, got {normalized_stop_freq}"
        )));
    }
    if family == Family::EqualRipple && passband_ripple_db <= 0.0 {
        return Err(Error::Spec(format!(
            "equal-ripple order estimation needs ripple_db > 0, got {passband_ripple_db}"
        )));
    }
    for n in 1..=MAX_ORDER {
        if attenuation_db(family, passband_ripple_db, n, normalized_stop_freq) >= stopband_atten_db
        {
            return Ok(n);
        }
    }
    Err(Error::Spec(format!(
        "no order up to {MAX_ORDER} reaches {stopband_atten_db} dB at \
         normalized frequency {normalized_stop_freq}"
    )))
}

/// Prototype stopband attenuation in dB at normalized frequency `omega ≥ 1`.
fn attenuation_db(family: Family, ripple_db: f64, n: usize, omega: f64) -> f64 {
    match family {
        Family::MaximallyFlat => (1.0 + omega.powi(2 * n as i32)).log10() * 10.0,
        Family::EqualRipple => {
            let eps_sq = 10f64.powf(ripple_db / 10.0) - 1.0;
            // T_N(ω) = cosh(N·acosh ω) is exact and stable for ω ≥ 1.
            let tn = ((n as f64) * omega.acosh()).cosh();
            (1.0 + eps_sq * tn * tn).log10() * 10.0
        }
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
