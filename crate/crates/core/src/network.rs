//! # Two-port chain-matrix algebra
//!
//! ABCD (chain) matrices for the ideal lossless TEM element library —
//! transmission lines, shunt open stubs, admittance inverters, parallel
//! coupled-line sections — plus the composite T-shaped section, cascading,
//! and conversion to scattering parameters.
//!
//! Element formulas (θ = electrical length at the evaluation frequency):
//!
//! * line, impedance `Zc`:      `A = D = cos θ`, `B = i·Zc·sin θ`, `C = i·sin θ / Zc`
//! * shunt open stub, `Zt`:     `A = D = 1`, `B = 0`, `C = i·tan θ_t / Zt`
//! * admittance inverter `J`:   `A = D = 0`, `B = −i/J`, `C = −i·J`
//! * coupled section `Z0e/Z0o`: `A = D = ((Z0e+Z0o)/(Z0e−Z0o))·cos θ`,
//!   `B = i·((Z0e−Z0o)² − (Z0e+Z0o)²·cos²θ) / (2·(Z0e−Z0o)·sin θ)`,
//!   `C = 2i·sin θ / (Z0e−Z0o)`
//!
//! All four constructors produce unit-determinant (reciprocal) matrices; the
//! whole library is lossless, so converted S-matrices are unitary at every
//! well-conditioned frequency.
//!
//! ## Singularities
//!
//! Two element-level singularities need policy rather than raw floats:
//!
//! * A stub within [`EPS_STUB`] radians of an odd multiple of π/2 is an ideal
//!   short at its attachment plane. The element is returned as an identity
//!   matrix carrying a **hard-zero flag**; the flag survives cascading and
//!   makes [`abcd_to_s`] emit the exact transmission zero (`s21 = s12 = 0`,
//!   `s11 = s22 = −1`, the reflection of an ideal shunt short) instead of
//!   overflow-contaminated numbers.
//! * A coupled section within [`EPS_STUB`] of a multiple of π degenerates
//!   (its B entry has a vanishing denominator); construction reports an
//!   evaluation error, which frequency sweeps absorb by re-evaluating a few
//!   hertz away (see [`crate::response`]).

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Angular guard band around singular electrical lengths, in radians.
pub const EPS_STUB: f64 = 1e-9;

// ---------------------------------------------------------------------------
// Public types
// ---------------------------------------------------------------------------

/// Electrical length θ in radians at the evaluation frequency.
///
/// Deliberately not normalized into [0, 2π): a stub that is one quarter-wave
/// at 4 GHz is three quarter-waves at 12 GHz, and those higher branches are
/// exactly what harmonic analysis cares about.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectricalAngle {
    /// Angle in radians.
    pub theta: f64,
}

impl ElectricalAngle {
    /// Wrap a raw radian value.
    pub fn from_radians(theta: f64) -> Self {
        Self { theta }
    }

    /// Distance in radians to the nearest odd multiple of π/2 (where an open
    /// stub becomes an ideal short).
    pub fn distance_to_odd_quarter_wave(&self) -> f64 {
        let v = self.theta / std::f64::consts::PI - 0.5;
        (v - v.round()).abs() * std::f64::consts::PI
    }

    /// Distance in radians to the nearest multiple of π (where a coupled
    /// section degenerates).
    pub fn distance_to_half_wave(&self) -> f64 {
        let v = self.theta / std::f64::consts::PI;
        (v - v.round()).abs() * std::f64::consts::PI
    }

    /// True when an open stub of this length is an ideal short.
    pub fn is_stub_singular(&self) -> bool {
        self.distance_to_odd_quarter_wave() < EPS_STUB
    }

    /// True when a coupled section of this length degenerates.
    pub fn is_section_degenerate(&self) -> bool {
        self.distance_to_half_wave() < EPS_STUB
    }
}

/// 2×2 chain matrix of a two-port: `[V1; I1] = M · [V2; I2]`.
///
/// `b` carries Ω, `c` carries Ω⁻¹, `a` and `d` are dimensionless. The
/// `hard_zero` flag marks networks containing an ideal shunt short (see the
/// module docs); flagged matrices store the identity in `a..d` so cascades
/// stay finite, and the flag — not the entries — carries the zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPortABCD {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    /// True when the network contains an exact transmission zero.
    pub hard_zero: bool,
}

impl TwoPortABCD {
    /// The through-connection.
    pub fn identity() -> Self {
        Self {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.0, 0.0),
            d: Complex64::new(1.0, 0.0),
            hard_zero: false,
        }
    }

    /// Determinant `a·d − b·c`; exactly 1 for reciprocal networks.
    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Chain product `self · rhs` (self closest to port 1). Hard-zero flags
    /// are sticky: a short anywhere in the chain zeroes the whole chain.
    pub fn then(&self, rhs: &TwoPortABCD) -> TwoPortABCD {
        TwoPortABCD {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
            hard_zero: self.hard_zero || rhs.hard_zero,
        }
    }
}

/// Scattering matrix at a single frequency, referenced to `z_ref`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SMatrix {
    pub s11: Complex64,
    pub s12: Complex64,
    pub s21: Complex64,
    pub s22: Complex64,
    /// Reference impedance in Ω.
    pub z_ref: f64,
}

// ---------------------------------------------------------------------------
// Element constructors
// ---------------------------------------------------------------------------

/// Ideal transmission line of characteristic impedance `zc` and length `theta`.
pub fn tline(zc: f64, theta: ElectricalAngle) -> Result<TwoPortABCD> {
    if !(zc > 0.0) {
        return Err(Error::Spec(format!(
            "line impedance must be > 0 Ω, got {zc}"
        )));
    }
    let (s, c) = theta.theta.sin_cos();
    Ok(TwoPortABCD {
        a: Complex64::new(c, 0.0),
        b: Complex64::new(0.0, zc * s),
        c: Complex64::new(0.0, s / zc),
        d: Complex64::new(c, 0.0),
        hard_zero: false,
    })
}

/// Ideal open-circuited shunt stub of impedance `zt` and length `theta_t`.
///
/// At odd multiples of π/2 the stub shorts the line; that case returns the
/// hard-zero-flagged identity rather than an overflowing tangent.
pub fn shunt_open_stub(zt: f64, theta_t: ElectricalAngle) -> Result<TwoPortABCD> {
    if !(zt > 0.0) {
        return Err(Error::Spec(format!(
            "stub impedance must be > 0 Ω, got {zt}"
        )));
    }
    if theta_t.is_stub_singular() {
        return Ok(TwoPortABCD {
            hard_zero: true,
            ..TwoPortABCD::identity()
        });
    }
    Ok(TwoPortABCD {
        a: Complex64::new(1.0, 0.0),
        b: Complex64::new(0.0, 0.0),
        c: Complex64::new(0.0, theta_t.theta.tan() / zt),
        d: Complex64::new(1.0, 0.0),
        hard_zero: false,
    })
}

/// Ideal admittance inverter of constant `j` (Ω⁻¹): `B = −i/J`, `C = −i·J`.
///
/// Both off-diagonal signs are negative so the determinant is exactly 1
/// (the matrix of a −90° quarter-wave line of impedance 1/J).
pub fn inverter(j: f64) -> Result<TwoPortABCD> {
    if !(j > 0.0) {
        return Err(Error::Spec(format!(
            "inverter constant must be > 0, got {j}"
        )));
    }
    Ok(TwoPortABCD {
        a: Complex64::new(0.0, 0.0),
        b: Complex64::new(0.0, -1.0 / j),
        c: Complex64::new(0.0, -j),
        d: Complex64::new(0.0, 0.0),
        hard_zero: false,
    })
}

/// Open-circuited parallel coupled-line section with even/odd-mode
/// impedances `z0e > z0o` and electrical length `theta`.
pub fn coupled_section(z0e: f64, z0o: f64, theta: ElectricalAngle) -> Result<TwoPortABCD> {
    if !(z0o > 0.0 && z0e > z0o) {
        return Err(Error::Spec(format!(
            "coupled section needs Z0e > Z0o > 0, got Z0e = {z0e}, Z0o = {z0o}"
        )));
    }
    if theta.is_section_degenerate() {
        return Err(Error::Evaluation(format!(
            "coupled section degenerates at θ = {} rad (multiple of π)",
            theta.theta
        )));
    }
    let (s, c) = theta.theta.sin_cos();
    let dz = z0e - z0o;
    let sz = z0e + z0o;
    Ok(TwoPortABCD {
        a: Complex64::new(sz / dz * c, 0.0),
        b: Complex64::new(0.0, (dz * dz - sz * sz * c * c) / (2.0 * dz * s)),
        c: Complex64::new(0.0, 2.0 * s / dz),
        d: Complex64::new(sz / dz * c, 0.0),
        hard_zero: false,
    })
}

/// Composite T-shaped section: line, stub, inverter, stub, line.
///
/// Defined as — and computed as — the explicit five-matrix chain product
/// `tline(zc,θc) · stub(zt,θt) · inverter(j) · stub(zt,θt) · tline(zc,θc)`.
pub fn t_shaped_section(
    zc: f64,
    zt: f64,
    theta_c: ElectricalAngle,
    theta_t: ElectricalAngle,
    j: f64,
) -> Result<TwoPortABCD> {
    let line = tline(zc, theta_c)?;
    let stub = shunt_open_stub(zt, theta_t)?;
    let inv = inverter(j)?;
    cascade(&[line, stub, inv, stub, line])
}

// ---------------------------------------------------------------------------
// Composition and conversion
// ---------------------------------------------------------------------------

/// Left-to-right chain product of a nonempty element sequence.
pub fn cascade(elements: &[TwoPortABCD]) -> Result<TwoPortABCD> {
    let (first, rest) = elements
        .split_first()
        .ok_or_else(|| Error::Spec("cannot cascade an empty element sequence".into()))?;
    Ok(rest.iter().fold(*first, |acc, m| acc.then(m)))
}

/// Convert a chain matrix to scattering parameters referenced to `z_ref`.
///
/// Hard-zero-flagged networks return the exact transmission zero
/// (`s21 = s12 = 0`, `s11 = s22 = −1`). A vanishing or non-finite
/// denominator — impossible for well-conditioned passive networks, where
/// `|A + B/z + C·z + D| = 2/|s21| ≥ 2` — is reported as an evaluation error.
pub fn abcd_to_s(m: &TwoPortABCD, z_ref: f64) -> Result<SMatrix> {
    if !(z_ref > 0.0) {
        return Err(Error::Spec(format!(
            "reference impedance must be > 0 Ω, got {z_ref}"
        )));
    }
    if m.hard_zero {
        return Ok(SMatrix {
            s11: Complex64::new(-1.0, 0.0),
            s12: Complex64::new(0.0, 0.0),
            s21: Complex64::new(0.0, 0.0),
            s22: Complex64::new(-1.0, 0.0),
            z_ref,
        });
    }
    let bz = m.b / z_ref;
    let cz = m.c * z_ref;
    let denom = m.a + bz + cz + m.d;
    if !(denom.re.is_finite() && denom.im.is_finite()) || denom.norm_sqr() < 1e-24 {
        return Err(Error::Evaluation(
            "ABCD→S conversion denominator vanished or overflowed".into(),
        ));
    }
    Ok(SMatrix {
        s11: (m.a + bz - cz - m.d) / denom,
        s12: 2.0 * m.det() / denom,
        s21: Complex64::new(2.0, 0.0) / denom,
        s22: (-m.a + bz - cz + m.d) / denom,
        z_ref,
    })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
