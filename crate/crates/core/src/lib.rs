//! Simulation of optical ring cavities filled with dispersive media.
//!
//! The crate models a ring cavity with identical input/output mirrors
//! (intensity coefficients `R`, `T`) enclosing a dispersive cell of
//! length `L_cell` plus an empty path `L_vac`. For a monochromatic field
//! of angular frequency ω the steady transmission is
//!
//! ```text
//! S(ω) = T exp(i ω L_m / c) / (1 - R_eff exp(i ω (L_vac + n(ω) L_cell) / c))
//! ```
//!
//! with `R_eff` the round-trip feedback factor and `n(ω)` the complex
//! refractive index of the medium. On top of that transfer function the
//! crate provides
//!
//! - causal dispersion models (vacuum, gain doublet, detuned EIT in a
//!   Doppler-broadened Λ system), all Kramers-Kronig consistent,
//! - resonance location and round-trip group delay, including the
//!   satellite-resonance criterion for negative round-trip group delay,
//! - FFT-based ring-down traces for a CW drive switched off at t = 0,
//!   together with the single-Lorentzian analytic solution and its
//!   non-causal truncation, kept as oracles,
//! - peak extraction and Kramers-Kronig self-consistency checks,
//! - a JSON-config scenario layer shared by the CLI and the Python
//!   bindings.
//!
//! Frequencies in configuration files are ordinary frequencies in Hz;
//! everything internal is angular (rad/s). Lengths are meters, times
//! seconds.

pub mod cavity;
pub mod config;
pub mod dispersion;
pub mod error;
pub mod numerics;
pub mod resonances;
pub mod scenario;
pub mod spectrum;
pub mod timedomain;

pub use cavity::CavityGeometry;
pub use config::SimulationConfig;
pub use dispersion::DispersionModel;
pub use error::{Error, Result};
pub use resonances::ResonancePeak;
pub use scenario::Scenario;
pub use spectrum::ComplexSpectrum;
pub use timedomain::{InputSignal, RingdownTrace};

/// Speed of light in vacuum (m/s), exact by SI definition.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Convert an ordinary frequency in Hz to angular frequency in rad/s.
///
/// Configuration files carry Hz; this is the single conversion boundary.
pub fn hz_to_angular(f_hz: f64) -> f64 {
    2.0 * std::f64::consts::PI * f_hz
}

/// Convert angular frequency (rad/s) back to ordinary frequency (Hz).
pub fn angular_to_hz(omega: f64) -> f64 {
    omega / (2.0 * std::f64::consts::PI)
}
