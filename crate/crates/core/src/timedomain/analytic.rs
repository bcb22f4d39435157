//! Closed-form single-Lorentzian ring-down solutions.
//!
//! For a transfer function reduced to one Lorentzian of decay rate γ_cav
//! and scale S₀, the switched-off CW drive admits a closed-form output:
//! constant until the feed-through arrival L_m/c, then an exponential
//! decay at γ_cav/2 on the resonance carrier. For γ_cav < 0 the same
//! reduction predicts an output that is nonzero only *before* L_m/c and
//! identically zero afterwards; that prediction violates causality and
//! is kept solely as a negative oracle for the full simulation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::dd;
use crate::timedomain::RingdownTrace;
use crate::SPEED_OF_LIGHT;

#[allow(clippy::too_many_arguments)]
fn lorentzian_trace(
    gamma_cav: f64,
    s0: f64,
    omega_p: f64,
    omega_l: f64,
    amplitude: Complex64,
    mirror_path: f64,
    times: &[f64],
    carrier: f64,
    noncausal: bool,
) -> RingdownTrace {
    let prefactor =
        s0 * amplitude / Complex64::new(gamma_cav / 2.0, -(omega_l - omega_p));
    let phase_feed = Complex64::from_polar(
        1.0,
        dd::reduce_phase(carrier, mirror_path, SPEED_OF_LIGHT, 0.0),
    );
    let delta_l = omega_l - carrier;
    let delta_p = omega_p - carrier;
    let t_feed = mirror_path / SPEED_OF_LIGHT;

    let envelope = times
        .iter()
        .map(|&t| {
            let tp = t - t_feed;
            if noncausal {
                if tp >= 0.0 {
                    Complex64::default()
                } else {
                    let drive = Complex64::from_polar(1.0, -delta_l * tp);
                    let ring = Complex64::from_polar((-gamma_cav / 2.0 * tp).exp(), -delta_p * tp);
                    prefactor * phase_feed * (drive - ring)
                }
            } else if tp <= 0.0 {
                prefactor * phase_feed * Complex64::from_polar(1.0, -delta_l * tp)
            } else {
                prefactor
                    * phase_feed
                    * Complex64::from_polar((-gamma_cav / 2.0 * tp).exp(), -delta_p * tp)
            }
        })
        .collect();
    RingdownTrace {
        times: times.to_vec(),
        envelope,
        carrier,
    }
}

/// The standard decaying-cavity solution: steady output until the
/// feed-through time L_m/c, then exponential decay at rate γ_cav/2 on the
/// resonance carrier ω_p. Requires γ_cav > 0.
#[allow(clippy::too_many_arguments)]
pub fn analytic_lorentzian_ringdown(
    gamma_cav: f64,
    s0: f64,
    omega_p: f64,
    omega_l: f64,
    amplitude: Complex64,
    mirror_path: f64,
    times: &[f64],
    carrier: f64,
) -> Result<RingdownTrace> {
    if gamma_cav <= 0.0 {
        return Err(Error::Domain(format!(
            "analytic decaying-cavity solution needs gamma_cav > 0, got {gamma_cav:e}; the negative-rate reduction belongs to the non-causal oracle"
        )));
    }
    Ok(lorentzian_trace(
        gamma_cav,
        s0,
        omega_p,
        omega_l,
        amplitude,
        mirror_path,
        times,
        carrier,
        false,
    ))
}

/// The truncated single-Lorentzian prediction for γ_cav < 0: output only
/// before the feed-through time, identically zero afterwards.
///
/// NON-PHYSICAL. This is what the single-peak reduction predicts when the
/// round-trip group delay is negative; the full simulation never matches
/// it, which is the point of keeping it.
#[allow(clippy::too_many_arguments)]
pub fn noncausal_truncated_prediction(
    gamma_cav: f64,
    s0: f64,
    omega_p: f64,
    omega_l: f64,
    amplitude: Complex64,
    mirror_path: f64,
    times: &[f64],
    carrier: f64,
) -> Result<RingdownTrace> {
    if gamma_cav >= 0.0 {
        return Err(Error::Domain(format!(
            "non-causal truncated prediction needs gamma_cav < 0, got {gamma_cav:e}"
        )));
    }
    Ok(lorentzian_trace(
        gamma_cav,
        s0,
        omega_p,
        omega_l,
        amplitude,
        mirror_path,
        times,
        carrier,
        true,
    ))
}
