//! Probe susceptibility of a three-level Λ system in detuned EIT,
//! averaged over a Gaussian distribution of one-photon detunings.
//!
//! Per velocity class with one-photon detuning Δ the homogeneous probe
//! susceptibility at Raman detuning δ_R is
//!
//! ```text
//! χ(δ_R; Δ) = amplitude · i Γ_opt / [Γ_opt - iΔ + Ω_c²/4/(γ_R - iδ_R)]
//! ```
//!
//! and the vapor response is the average over Δ ~ Gaussian(Δ_c, Δ_D)
//! with Δ_D the 1/e half-width. Both fields share the Doppler shift, so
//! only the one-photon detuning is averaged; the two-photon detuning is
//! Doppler-free. The average is a numerical quadrature with pinned
//! breakpoints at the Gaussian body and at the dressed Raman pole, which
//! is narrow in Δ for δ_R outside the Raman linewidth.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::quad;

/// Relative tolerance of the Doppler quadrature.
const QUAD_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct DetunedEitParams {
    /// Coupling Rabi frequency Ω_c (rad/s).
    pub coupling_rabi: f64,
    /// One-photon detuning Δ_c of the coupling from the Doppler profile
    /// maximum (rad/s).
    pub optical_detuning: f64,
    /// Raman coherence decay rate γ_R (rad/s).
    pub raman_decay: f64,
    /// Optical coherence decay rate Γ_opt (rad/s).
    pub optical_decay: f64,
    /// Doppler 1/e half-width Δ_D (rad/s); 0 selects the homogeneous model.
    pub doppler_width: f64,
    /// Dimensionless susceptibility scale: peak homogeneous χ'' of the
    /// bare optical line.
    pub amplitude: f64,
    /// Absolute coupling-field angular frequency (rad/s). Probe
    /// frequencies map to Raman detunings δ_R = ω - ω_coupling.
    pub omega_coupling: f64,
    /// Raman detuning (rad/s) used as the cavity tuning anchor.
    pub anchor_raman: f64,
}

impl DetunedEitParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.coupling_rabi,
            self.optical_detuning,
            self.raman_decay,
            self.optical_decay,
            self.doppler_width,
            self.amplitude,
            self.omega_coupling,
            self.anchor_raman,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidModel("detuned EIT has non-finite parameters".into()));
        }
        if self.coupling_rabi <= 0.0 {
            return Err(Error::InvalidModel("detuned EIT coupling Rabi frequency must be positive".into()));
        }
        if self.raman_decay <= 0.0 || self.optical_decay <= 0.0 {
            return Err(Error::InvalidModel("detuned EIT decay rates must be positive".into()));
        }
        if self.doppler_width < 0.0 {
            return Err(Error::InvalidModel("detuned EIT Doppler width must be non-negative".into()));
        }
        if self.omega_coupling <= 0.0 {
            return Err(Error::InvalidModel("detuned EIT coupling frequency must be positive".into()));
        }
        Ok(())
    }

    /// Homogeneous light shift Ω²/(4Δ_c) of the Raman resonance; metadata
    /// for feature bookkeeping only.
    pub fn light_shift(&self) -> f64 {
        if self.optical_detuning == 0.0 {
            0.0
        } else {
            self.coupling_rabi * self.coupling_rabi / (4.0 * self.optical_detuning)
        }
    }

    /// Raman term Ω²/4/(γ_R - iδ_R) of the denominator.
    fn raman_term(&self, delta_r: f64) -> Complex64 {
        let q = self.coupling_rabi * self.coupling_rabi / 4.0;
        Complex64::new(self.raman_decay, -delta_r).inv() * q
    }

    /// Homogeneous susceptibility for one velocity class. `delta` is the
    /// class's one-photon detuning of the coupling field; the probe sits
    /// at `delta + delta_r` from the same transition.
    fn chi_hom(&self, delta_r: f64, delta: f64) -> Complex64 {
        let den =
            Complex64::new(self.optical_decay, -(delta + delta_r)) + self.raman_term(delta_r);
        Complex64::new(0.0, self.amplitude * self.optical_decay) / den
    }

    /// dχ/dδ_R of the homogeneous susceptibility.
    fn chi_hom_derivative(&self, delta_r: f64, delta: f64) -> Complex64 {
        let den =
            Complex64::new(self.optical_decay, -(delta + delta_r)) + self.raman_term(delta_r);
        let q = self.coupling_rabi * self.coupling_rabi / 4.0;
        let g = Complex64::new(self.raman_decay, -delta_r);
        // d/dδ_R [Γ - i(Δ+δ_R) + q/g] = -i + i q / g²
        let dden = Complex64::new(0.0, -1.0) + Complex64::new(0.0, q) / (g * g);
        -Complex64::new(0.0, self.amplitude * self.optical_decay) * dden / (den * den)
    }

    /// Quadrature breakpoints: Gaussian body plus the dressed Raman pole,
    /// located where Im(denominator) = 0 at width Re(denominator).
    fn breakpoints(&self, delta_r: f64) -> Vec<f64> {
        let lo = self.optical_detuning - 8.0 * self.doppler_width;
        let hi = self.optical_detuning + 8.0 * self.doppler_width;
        let mut pts = vec![0.0];
        for k in [0.5f64, 1.0, 2.0, 3.0, 5.0] {
            pts.push(self.optical_detuning - k * self.doppler_width);
            pts.push(self.optical_detuning + k * self.doppler_width);
        }
        let rt = self.raman_term(delta_r);
        // Δ* where the denominator's imaginary part vanishes.
        let pole = rt.im - delta_r;
        let width = self.optical_decay + rt.re;
        for m in [1.0f64, 3.0, 10.0, 30.0, 100.0] {
            pts.push(pole - m * width);
            pts.push(pole + m * width);
        }
        pts.push(pole);
        quad::clip_breakpoints(lo, hi, &pts)
    }

    fn gaussian_average<F: Fn(f64) -> Complex64>(&self, delta_r: f64, f: F) -> Complex64 {
        let dd = self.doppler_width;
        let dc = self.optical_detuning;
        let norm = 1.0 / (std::f64::consts::PI.sqrt() * dd);
        let integrand = |delta: f64| {
            let u = (delta - dc) / dd;
            f(delta) * (norm * (-u * u).exp())
        };
        let bps = self.breakpoints(delta_r);
        quad::integrate_panels(&integrand, &bps, QUAD_REL_TOL)
    }

    /// Doppler-averaged susceptibility at probe frequency ω.
    pub fn susceptibility(&self, omega: f64) -> Complex64 {
        let delta_r = omega - self.omega_coupling;
        if self.doppler_width == 0.0 {
            return self.chi_hom(delta_r, self.optical_detuning);
        }
        self.gaussian_average(delta_r, |delta| self.chi_hom(delta_r, delta))
    }

    /// Doppler-averaged dχ/dω (the probe frequency enters only through δ_R).
    pub fn susceptibility_derivative(&self, omega: f64) -> Complex64 {
        let delta_r = omega - self.omega_coupling;
        if self.doppler_width == 0.0 {
            return self.chi_hom_derivative(delta_r, self.optical_detuning);
        }
        self.gaussian_average(delta_r, |delta| self.chi_hom_derivative(delta_r, delta))
    }

    /// Solve for `amplitude` such that the single-pass intensity
    /// transmission of the bare line (no coupling field) at the Doppler
    /// profile maximum is exp(-od) for a cell of the given length.
    pub fn amplitude_for_resonant_od(&self, od: f64, cell_length: f64) -> Result<f64> {
        if !(od.is_finite() && od > 0.0 && cell_length > 0.0) {
            return Err(Error::InvalidModel(
                "resonant optical depth and cell length must be positive".into(),
            ));
        }
        let mut probe = self.clone();
        probe.amplitude = 1.0;
        probe.coupling_rabi = f64::MIN_POSITIVE.sqrt(); // effectively no coupling
        // Probe sits at the Doppler maximum: δ_R = -Δ_c.
        let omega_center = probe.omega_coupling - probe.optical_detuning;
        let chi_im_unit = probe.susceptibility(omega_center).im;
        // od = χ'' ω L / c for n = 1 + χ/2.
        let od_unit = chi_im_unit * omega_center * cell_length / crate::SPEED_OF_LIGHT;
        Ok(od / od_unit)
    }
}
