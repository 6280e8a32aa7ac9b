//! # coupline
//!
//! Design and analysis of parallel coupled-line microstrip bandpass filters,
//! including T-section open stubs that suppress the spurious harmonic
//! passbands intrinsic to distributed-line filters.
//!
//! The crate is organized as a pipeline:
//!
//! * [`prototype`] — normalized lowpass prototype element values
//!   (maximally-flat and equal-ripple) and minimum-order estimation.
//! * [`synthesis`] — admittance inverters and even/odd-mode impedances of
//!   the coupled-line sections realizing a bandpass spec.
//! * [`network`] — ideal lossless TEM two-port elements as ABCD matrices,
//!   cascading, and conversion to S-parameters.
//! * [`response`] — full-network builders, frequency sweeps, and band
//!   metrics (insertion/return loss, harmonic suppression).
//! * [`optimizer`] — multi-start downhill-simplex tuning of open-stub
//!   impedances, resonances, and attachment sites.
//!
//! Everything is deterministic: same inputs (and seed, where one applies)
//! produce bitwise-identical outputs.
//!
//! ## Example
//!
//! Synthesize the stock 2 GHz design, sweep it, and check its passband:
//!
//! ```
//! use coupline::prototype::{Family, PrototypeSpec};
//! use coupline::response::{band_metrics, build_traditional, sweep, SweepConfig};
//! use coupline::synthesis::{synthesize, FilterSpec};
//!
//! let spec = FilterSpec {
//!     f0: 2.0e9,
//!     delta: 0.1,
//!     z0: 50.0,
//!     prototype: PrototypeSpec {
//!         order: 3,
//!         family: Family::EqualRipple,
//!         ripple_db: 0.5,
//!     },
//! };
//! let sections = synthesize(&spec)?;
//! let trace = sweep(
//!     |f| build_traditional(&sections, f, &spec),
//!     &SweepConfig::default_grid(),
//!     spec.z0,
//! )?;
//! let metrics = band_metrics(&trace, spec.f0, spec.delta, 0.10)?;
//! assert!(metrics.passband_il_db < 0.6);
//! # Ok::<(), coupline::Error>(())
//! ```

pub mod error;
pub mod network;
pub mod optimizer;
pub mod prototype;
pub mod response;
pub mod synthesis;

pub use error::{Error, Result};

/// Complex scalar used throughout the public API, re-exported so downstream
/// crates stay on the same `num-complex` version.
pub use num_complex::Complex64;
