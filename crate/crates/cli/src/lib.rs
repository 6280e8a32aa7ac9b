//! # coupline-cli
//!
//! Command-line front end for the [`coupline`] toolkit. A single TOML config
//! file describes a filter design; the four subcommands run the pipeline
//! stages and leave their artifacts in an output directory:
//!
//! - `synth` — coupled-section impedances, printed and saved as JSON,
//! - `sweep` — S-parameter traces as Touchstone `.s2p` and CSV,
//! - `optimize` — stub placement search, saved as a sweepable config,
//! - `compare` — traditional vs. stub-loaded metrics with per-band deltas.
//!
//! The binary in `main.rs` only parses arguments and maps errors to exit
//! statuses; everything it calls lives here so tests can use it directly.

pub mod commands;
pub mod config;
pub mod io;
pub mod report;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// A CLI-level failure, classified by the exit status it maps to.
///
/// Configuration problems (unreadable or invalid config files, violated
/// preconditions) exit with status 2; runtime problems (evaluation failures,
/// output I/O errors) exit with status 3.
#[derive(Debug)]
pub enum CliError {
    /// Bad or missing configuration; exit status 2.
    Config(String),
    /// Evaluation or I/O failure after configuration was accepted; exit
    /// status 3.
    Runtime(String),
}

impl CliError {
    /// Process exit status for this error class.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "{msg}"),
            CliError::Runtime(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<coupline::Error> for CliError {
    fn from(err: coupline::Error) -> Self {
        match err {
            coupline::Error::Spec(_)
            | coupline::Error::Coverage(_)
            | coupline::Error::Infeasible(_) => CliError::Config(err.to_string()),
            coupline::Error::Evaluation(_) => CliError::Runtime(err.to_string()),
        }
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
