//! Ring-cavity geometry, transfer function, resonances and decay rates.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dispersion::{self, DispersionModel};
use crate::error::{Error, Result};
use crate::numerics::dd;
use crate::numerics::roots::{self, Bracket};
use crate::spectrum::ComplexSpectrum;
use crate::SPEED_OF_LIGHT;

/// Ring cavity with identical input and output mirrors.
///
/// `mirror_reflectivity` (R) and `mirror_transmission` (T) are intensity
/// coefficients; the round-trip feedback factor multiplying the field per
/// pass is R_eff = R (1 - extra_loss), with `extra_loss` the additional
/// fractional intensity loss per round trip from intracavity optics.
/// `phase_trim` is a sub-wavelength piezo offset (rad of round-trip phase)
/// used to tune a resonance onto a chosen frequency without perturbing
/// the meter-scale lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct CavityGeometry {
    pub mirror_reflectivity: f64,
    pub mirror_transmission: f64,
    pub vacuum_length: f64,
    pub cell_length: f64,
    pub mirror_path: f64,
    pub extra_loss: f64,
    pub phase_trim: f64,
}

impl CavityGeometry {
    pub fn new(
        mirror_reflectivity: f64,
        mirror_transmission: f64,
        vacuum_length: f64,
        cell_length: f64,
        mirror_path: f64,
        extra_loss: f64,
    ) -> Result<Self> {
        let g = CavityGeometry {
            mirror_reflectivity,
            mirror_transmission,
            vacuum_length,
            cell_length,
            mirror_path,
            extra_loss,
            phase_trim: 0.0,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let vals = [
            self.mirror_reflectivity,
            self.mirror_transmission,
            self.vacuum_length,
            self.cell_length,
            self.mirror_path,
            self.extra_loss,
            self.phase_trim,
        ];
        if !vals.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidGeometry("non-finite parameter".into()));
        }
        let r = self.mirror_reflectivity;
        let t = self.mirror_transmission;
        if !(0.0 < r && r < 1.0) {
            return Err(Error::InvalidGeometry(format!("R = {r} outside (0, 1)")));
        }
        if !(0.0 < t && t <= 1.0 - r) {
            return Err(Error::InvalidGeometry(format!(
                "T = {t} outside (0, 1 - R] with R = {r}"
            )));
        }
        if self.vacuum_length < 0.0 || self.cell_length < 0.0 {
            return Err(Error::InvalidGeometry("lengths must be non-negative".into()));
        }
        if self.mirror_path > self.vacuum_length + self.cell_length {
            return Err(Error::InvalidGeometry(
                "mirror path L_m exceeds the round-trip length".into(),
            ));
        }
        if !(0.0 <= self.extra_loss && self.extra_loss < 1.0) {
            return Err(Error::InvalidGeometry("extra_loss outside [0, 1)".into()));
        }
        let pi_loss = self.round_trip_loss();
        if !(0.0 < pi_loss && pi_loss < 1.0) {
            return Err(Error::InvalidGeometry(format!(
                "fractional round-trip loss {pi_loss} outside (0, 1)"
            )));
        }
        Ok(())
    }

    /// Feedback factor R_eff = R (1 - extra_loss).
    pub fn feedback_factor(&self) -> f64 {
        self.mirror_reflectivity * (1.0 - self.extra_loss)
    }

    /// Fractional loss per round trip Π = 1 - R_eff.
    pub fn round_trip_loss(&self) -> f64 {
        1.0 - self.feedback_factor()
    }

    /// Geometric round-trip length L_vac + L_cell.
    pub fn round_trip_length(&self) -> f64 {
        self.vacuum_length + self.cell_length
    }

    /// Geometric round-trip time for n = 1.
    pub fn round_trip_time(&self) -> f64 {
        self.round_trip_length() / SPEED_OF_LIGHT
    }

    /// Free spectral range in angular frequency, 2πc/L.
    pub fn free_spectral_range(&self) -> f64 {
        2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / self.round_trip_length()
    }
}

/// Round-trip phase ω(L_vac + Re n(ω) L_cell)/c + trim, reduced into
/// (-π, π]. The geometric part is reduced in double-double arithmetic so
/// residuals far below 1e-10 rad are meaningful.
pub fn round_trip_phase(geom: &CavityGeometry, model: &DispersionModel, omega: f64) -> f64 {
    let chi_re = model.susceptibility(omega).re;
    let medium = omega * (chi_re * 0.5) * geom.cell_length / SPEED_OF_LIGHT;
    dd::reduce_phase(
        omega,
        geom.round_trip_length(),
        SPEED_OF_LIGHT,
        medium + geom.phase_trim,
    )
}

/// Set the phase trim so `omega_anchor` satisfies the round-trip
/// resonance condition exactly. The trim is a sub-wavelength adjustment,
/// the numerical analogue of scanning a piezo-mounted mirror.
pub fn tune_to_resonance(geom: &mut CavityGeometry, model: &DispersionModel, omega_anchor: f64) {
    for _ in 0..3 {
        let phi = round_trip_phase(geom, model, omega_anchor);
        geom.phase_trim -= phi;
        if phi.abs() < 1e-14 {
            break;
        }
    }
    // Keep the trim in a principal interval; only its value mod 2π matters.
    geom.phase_trim = geom.phase_trim.rem_euclid(2.0 * std::f64::consts::PI);
}

/// Steady-state transmission S(ω) of the cavity for a monochromatic field.
pub fn transmission(
    geom: &CavityGeometry,
    model: &DispersionModel,
    omega: f64,
) -> Result<Complex64> {
    let s0 = transmission_zero_path(geom, model, omega)?;
    let phi_m = dd::reduce_phase(omega, geom.mirror_path, SPEED_OF_LIGHT, 0.0);
    Ok(s0 * Complex64::from_polar(1.0, phi_m))
}

/// Transmission with the mirror-path feed-through phase e^{iωL_m/c}
/// removed. The time-domain engine applies that factor as an exact time
/// offset instead, which keeps the response comb aligned to its grid.
pub fn transmission_zero_path(
    geom: &CavityGeometry,
    model: &DispersionModel,
    omega: f64,
) -> Result<Complex64> {
    transmission_zero_path_with_chi(geom, omega, model.susceptibility(omega))
}

/// Zero-path transmission for an externally supplied susceptibility
/// value; lets the time-domain sampler substitute the band-periodized
/// susceptibility while sharing the denominator and threshold logic.
pub fn transmission_zero_path_with_chi(
    geom: &CavityGeometry,
    omega: f64,
    chi: Complex64,
) -> Result<Complex64> {
    // Amplitude change over one cell pass: exp(-ω χ'' L/2c); χ'' < 0 is gain.
    let amp = (-omega * (chi.im * 0.5) * geom.cell_length / SPEED_OF_LIGHT).exp();
    let modulus = geom.feedback_factor() * amp;
    let medium = omega * (chi.re * 0.5) * geom.cell_length / SPEED_OF_LIGHT;
    let phi = dd::reduce_phase(
        omega,
        geom.round_trip_length(),
        SPEED_OF_LIGHT,
        medium + geom.phase_trim,
    );
    let den = Complex64::new(1.0, 0.0) - Complex64::from_polar(modulus, phi);
    // At or above threshold the round-trip series diverges for every
    // phase; below it the only failure mode is the resonance pole itself.
    if modulus >= 1.0 - 1e-12 || den.norm() < 1e-12 {
        return Err(Error::OscillationThreshold {
            omega_rad_s: omega,
            f_hz: crate::angular_to_hz(omega),
        });
    }
    Ok(Complex64::new(geom.mirror_transmission, 0.0) / den)
}

/// Sweep the transmission over a uniform grid of `points` frequencies
/// spanning ±span/2 around `center`.
pub fn transmission_sweep(
    geom: &CavityGeometry,
    model: &DispersionModel,
    center: f64,
    span: f64,
    points: usize,
) -> Result<ComplexSpectrum> {
    let offsets = ComplexSpectrum::symmetric_offsets(span, points);
    let values: Result<Vec<Complex64>> = offsets
        .par_iter()
        .map(|&o| transmission(geom, model, center + o))
        .collect();
    ComplexSpectrum::new(center, offsets, values?)
}

/// Locate the round-trip-phase resonance nearest `omega_guess`.
///
/// Scans ±1 free spectral range, brackets zero crossings of the
/// principal-value phase and bisects to |phase| < 1e-12 rad.
pub fn find_resonance(
    geom: &CavityGeometry,
    model: &DispersionModel,
    omega_guess: f64,
) -> Result<f64> {
    const PHASE_TOL: f64 = 1e-12;
    let phase = |w: f64| round_trip_phase(geom, model, w);
    if phase(omega_guess).abs() < PHASE_TOL {
        return Ok(omega_guess);
    }
    let fsr = geom.free_spectral_range();
    let lo = omega_guess - 1.02 * fsr;
    let hi = omega_guess + 1.02 * fsr;
    let n = 16384;
    let step = (hi - lo) / n as f64;

    // Track the wrapped phase across the scan; a resonance is a zero
    // crossing of the principal value away from the ±π wrap.
    let mut candidates: Vec<Bracket> = Vec::new();
    let mut w_prev = lo;
    let mut p_prev = phase(lo);
    for i in 1..=n {
        let w = lo + step * i as f64;
        let p = phase(w);
        if p_prev == 0.0 {
            candidates.push(Bracket { a: w_prev, b: w_prev, fa: 0.0, fb: 0.0 });
        } else if p_prev * p < 0.0 && (p - p_prev).abs() < std::f64::consts::PI {
            candidates.push(Bracket { a: w_prev, b: w, fa: p_prev, fb: p });
        }
        w_prev = w;
        p_prev = p;
    }
    if candidates.is_empty() {
        return Err(Error::NoResonanceFound { omega_guess });
    }
    let mut best: Option<(f64, f64)> = None;
    for br in candidates {
        let root = roots::bisect(&phase, br, 0.0, PHASE_TOL);
        let slope = if br.b > br.a {
            ((br.fb - br.fa) / (br.b - br.a)).abs()
        } else {
            0.0
        };
        match best {
            Some((b, _)) if (b - omega_guess).abs() <= (root - omega_guess).abs() => {}
            _ => best = Some((root, slope)),
        }
    }
    let (root, slope) = best.unwrap();
    // The root frequency is quantized to one ulp; the achievable phase
    // residual is bounded by that granularity times the phase slope
    // (τ_g^RT), which exceeds 1e-10 rad at optical carriers.
    let granularity = 4.0 * f64::EPSILON * root.abs() * slope;
    if phase(root).abs() > granularity.max(1e-10) {
        return Err(Error::NoResonanceFound { omega_guess });
    }
    Ok(root)
}

/// Round-trip group delay τ_g^RT = (L_vac + n_g L_cell)/c.
pub fn round_trip_group_delay(
    geom: &CavityGeometry,
    model: &DispersionModel,
    omega: f64,
) -> f64 {
    let ng = dispersion::group_index(model, omega);
    (geom.vacuum_length + ng * geom.cell_length) / SPEED_OF_LIGHT
}

/// Single-Lorentzian reduction of the transfer function near a resonance:
/// returns (γ_cav, S₀) with γ_cav = 2(1 - R_eff)/(R_eff τ_g^RT) and
/// S₀ = T/(R_eff τ_g^RT). Both are negative when τ_g^RT < 0 and are
/// returned as-is; the non-causal oracle consumes the raw values.
pub fn lorentzian_reduction(
    geom: &CavityGeometry,
    model: &DispersionModel,
    omega_p: f64,
) -> Result<(f64, f64)> {
    let tau = round_trip_group_delay(geom, model, omega_p);
    if tau.abs() < 1e-18 {
        return Err(Error::DegenerateDelay { tau_s: tau });
    }
    let r_eff = geom.feedback_factor();
    let gamma = 2.0 * (1.0 - r_eff) / (r_eff * tau);
    let s0 = geom.mirror_transmission / (r_eff * tau);
    Ok((gamma, s0))
}
