//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// A single field-level configuration problem, located by JSON pointer.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldError {
    /// JSON pointer to the offending field, e.g. `/geometry/r`.
    pub pointer: String,
    /// Human-readable description of the problem.
    pub message: String,
}

impl std::fmt::Display for FieldError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.pointer, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// Model parameters are unusable (non-finite or violating invariants).
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// Geometry parameters violate an invariant.
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    /// Adaptive finite difference could not produce a reliable derivative.
    #[error("numerical derivative failed: {0}")]
    NumericalDerivative(String),

    /// A frequency grid does not cover the model features well enough.
    #[error("grid coverage too narrow: {0}")]
    GridCoverage(String),

    /// Round-trip gain reached the losses; the steady-state transfer
    /// function has a pole at the reported frequency.
    #[error("oscillation threshold reached at omega = {omega_rad_s:.6e} rad/s ({f_hz:.6e} Hz): round-trip gain compensates the losses")]
    OscillationThreshold { omega_rad_s: f64, f_hz: f64 },

    /// No round-trip-phase root was bracketed near the requested guess.
    #[error("no resonance found within one free spectral range of {omega_guess:.6e} rad/s")]
    NoResonanceFound { omega_guess: f64 },

    /// The satellite predicate holds but no root fell inside the scan span.
    #[error("satellite search span too small: predicate requires satellite roots but none were bracketed within +/-{span_rad_s:.3e} rad/s; widen the span")]
    SpanTooSmall { span_rad_s: f64 },

    /// A spectral peak is too narrow for the grid it was found on.
    #[error("peak at {center_hz:.6e} Hz is under-resolved: fwhm {fwhm_hz:.3e} Hz spans fewer than 8 grid steps of {step_hz:.3e} Hz")]
    PeakUnderResolved {
        center_hz: f64,
        fwhm_hz: f64,
        step_hz: f64,
    },

    /// Round-trip group delay too close to zero for the Lorentzian reduction.
    #[error("degenerate round-trip group delay ({tau_s:.3e} s): Lorentzian reduction undefined")]
    DegenerateDelay { tau_s: f64 },

    /// Time-domain window or bandwidth preconditions violated.
    #[error("simulation sizing error: {message}; suggested: {suggestion}")]
    Sizing { message: String, suggestion: String },

    /// Operation called outside its domain (e.g. wrong sign of decay rate).
    #[error("domain error: {0}")]
    Domain(String),

    /// Configuration rejected; all field errors are collected, not just the first.
    #[error("invalid configuration ({} error{}):\n{}",
        .0.len(),
        if .0.len() == 1 { "" } else { "s" },
        .0.iter().map(|e| format!("  {e}")).collect::<Vec<_>>().join("\n"))]
    Config(Vec<FieldError>),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Json(_) | Error::InvalidModel(_) | Error::InvalidGeometry(_) => 2,
            Error::OscillationThreshold { .. } => 4,
            Error::Io(_) => 1,
            _ => 3,
        }
    }
}
