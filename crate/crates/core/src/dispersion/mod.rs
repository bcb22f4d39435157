//! Complex refractive index models for the intracavity medium.
//!
//! All models are built from Lorentzian or Gaussian-averaged Lorentzian
//! responses, so they are causal (analytic in the upper half of the
//! frequency plane) by construction and satisfy n(ω) → 1 far from their
//! features. The weak-susceptibility approximation n = 1 + χ/2 is used
//! throughout; every shipped medium has |χ| < 1e-2, where the error
//! against √(1+χ) is below |χ|²/8.
//!
//! Sign conventions follow the e^{+iωnL/c} round-trip phase of the
//! cavity transfer function: Im n < 0 means gain, Im n > 0 absorption.

mod eit;

pub use eit::DetunedEitParams;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::hilbert;
use crate::SPEED_OF_LIGHT;

/// Boltzmann constant (J/K), exact by SI definition.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Mass of a ⁴He atom in kg (4.002602 u).
pub const HELIUM4_MASS_KG: f64 = 6.646_473_1e-27;

/// 1/e half-width (in rad/s) of the Doppler distribution of one-photon
/// detunings: Δ_D = 2π u / λ with the most probable speed u = √(2 k_B T / m).
pub fn doppler_one_over_e_halfwidth(mass_kg: f64, temperature_k: f64, wavelength_m: f64) -> f64 {
    let u = (2.0 * BOLTZMANN * temperature_k / mass_kg).sqrt();
    2.0 * std::f64::consts::PI * u / wavelength_m
}

/// Two Lorentzian gain (or absorption) lines placed symmetrically around
/// a midpoint. The canonical strong-negative-dispersion medium.
#[derive(Debug, Clone, PartialEq)]
pub struct GainDoubletParams {
    /// Midpoint angular frequency of the doublet (rad/s).
    pub omega_ref: f64,
    /// Angular separation of the two line centers (rad/s).
    pub separation: f64,
    /// Full width at half maximum of each line (rad/s).
    pub fwhm: f64,
    /// Single-pass intensity gain fraction at a line center; 0.28 means
    /// 28% intensity gain per pass through the cell. Negative values give
    /// an absorption doublet (slow light) with the same line shape.
    pub peak_gain: f64,
    /// Length of the cell the calibration refers to (m).
    pub cell_length: f64,
    amplitude: f64,
}

impl GainDoubletParams {
    /// Build the doublet, calibrating the susceptibility amplitude so the
    /// single-pass intensity gain at a line center equals `peak_gain`
    /// (including the tail of the partner line).
    pub fn new(
        omega_ref: f64,
        separation: f64,
        fwhm: f64,
        peak_gain: f64,
        cell_length: f64,
    ) -> Result<Self> {
        let mut p = GainDoubletParams {
            omega_ref,
            separation,
            fwhm,
            peak_gain,
            cell_length,
            amplitude: 0.0,
        };
        p.validate_shape()?;
        let gamma = p.hwhm();
        // -Im χ at a line center per unit amplitude: own line plus the
        // partner tail, both contributing with the gain sign.
        let shape = 1.0 / gamma + gamma / (separation * separation + gamma * gamma);
        let omega_peak = omega_ref + separation / 2.0;
        p.amplitude = SPEED_OF_LIGHT * (1.0 + peak_gain).ln() / (omega_peak * cell_length * shape);
        p.validate()?;
        Ok(p)
    }

    fn hwhm(&self) -> f64 {
        self.fwhm / 2.0
    }

    /// Calibrated susceptibility amplitude (rad/s); positive for gain.
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    fn validate_shape(&self) -> Result<()> {
        let all_finite = [
            self.omega_ref,
            self.separation,
            self.fwhm,
            self.peak_gain,
            self.cell_length,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidModel("gain doublet has non-finite parameters".into()));
        }
        if self.omega_ref <= 0.0 {
            return Err(Error::InvalidModel("gain doublet omega_ref must be positive".into()));
        }
        if self.separation <= 0.0 || self.fwhm <= 0.0 {
            return Err(Error::InvalidModel(
                "gain doublet separation and fwhm must be positive".into(),
            ));
        }
        if self.peak_gain <= -1.0 || self.peak_gain >= 1.0 {
            return Err(Error::InvalidModel(
                "gain doublet peak_gain must lie in (-1, 1)".into(),
            ));
        }
        if self.cell_length <= 0.0 {
            return Err(Error::InvalidModel("gain doublet cell_length must be positive".into()));
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        self.validate_shape()?;
        if !self.amplitude.is_finite() {
            return Err(Error::InvalidModel("gain doublet amplitude is non-finite".into()));
        }
        Ok(())
    }

    /// χ(ω) = A [1/(δ₁ + iγ) + 1/(δ₂ + iγ)] with δ_k the detuning from
    /// line k and γ the half width. A > 0 yields Im χ < 0 (gain) at the
    /// line centers. Detunings are formed from ω - ω_ref first, which is
    /// exact for nearby ω, so the two lines stay exactly symmetric.
    pub fn susceptibility(&self, omega: f64) -> Complex64 {
        let gamma = self.hwhm();
        let d = omega - self.omega_ref;
        let line = |d: f64| Complex64::new(d, gamma).inv();
        (line(d + self.separation / 2.0) + line(d - self.separation / 2.0)) * self.amplitude
    }

    pub fn susceptibility_derivative(&self, omega: f64) -> Complex64 {
        let gamma = self.hwhm();
        let d = omega - self.omega_ref;
        let dline = |d: f64| {
            let inv = Complex64::new(d, gamma).inv();
            -inv * inv
        };
        (dline(d + self.separation / 2.0) + dline(d - self.separation / 2.0)) * self.amplitude
    }
}

/// Frequency-dependent complex refractive index of the cell medium.
#[derive(Debug, Clone, PartialEq)]
pub enum DispersionModel {
    /// Empty cell: n ≡ 1. Carries a reference frequency so cavity tuning
    /// and baseband carriers have an anchor.
    Vacuum { omega_ref: f64 },
    GainDoublet(GainDoubletParams),
    DetunedEit(DetunedEitParams),
}

impl DispersionModel {
    pub fn vacuum(omega_ref: f64) -> Result<Self> {
        if !(omega_ref.is_finite() && omega_ref > 0.0) {
            return Err(Error::InvalidModel("vacuum anchor frequency must be positive".into()));
        }
        Ok(DispersionModel::Vacuum { omega_ref })
    }

    /// Complex susceptibility χ(ω); n = 1 + χ/2.
    pub fn susceptibility(&self, omega: f64) -> Complex64 {
        debug_assert!(omega > 0.0);
        match self {
            DispersionModel::Vacuum { .. } => Complex64::new(0.0, 0.0),
            DispersionModel::GainDoublet(p) => p.susceptibility(omega),
            DispersionModel::DetunedEit(p) => p.susceptibility(omega),
        }
    }

    /// Exact (closed-form or quadrature-of-derivative) dχ/dω.
    pub fn susceptibility_derivative(&self, omega: f64) -> Complex64 {
        match self {
            DispersionModel::Vacuum { .. } => Complex64::new(0.0, 0.0),
            DispersionModel::GainDoublet(p) => p.susceptibility_derivative(omega),
            DispersionModel::DetunedEit(p) => p.susceptibility_derivative(omega),
        }
    }

    /// Frequency around which the model's features live; used as the
    /// default cavity tuning point and baseband carrier.
    pub fn anchor_frequency(&self) -> f64 {
        match self {
            DispersionModel::Vacuum { omega_ref } => *omega_ref,
            DispersionModel::GainDoublet(p) => p.omega_ref,
            DispersionModel::DetunedEit(p) => p.omega_coupling + p.anchor_raman,
        }
    }

    /// Conservative half-width (rad/s) of the region around the anchor in
    /// which the susceptibility differs appreciably from its asymptote.
    pub fn feature_extent(&self) -> f64 {
        match self {
            DispersionModel::Vacuum { .. } => 0.0,
            DispersionModel::GainDoublet(p) => p.separation / 2.0 + 10.0 * p.fwhm,
            DispersionModel::DetunedEit(p) => p.coupling_rabi,
        }
    }

    /// Feature list (center frequency, linewidth) for grid-coverage checks.
    pub fn features(&self) -> Vec<(f64, f64)> {
        match self {
            DispersionModel::Vacuum { .. } => Vec::new(),
            DispersionModel::GainDoublet(p) => vec![
                (p.omega_ref - p.separation / 2.0, p.fwhm),
                (p.omega_ref + p.separation / 2.0, p.fwhm),
            ],
            DispersionModel::DetunedEit(p) => {
                let raman_center = p.omega_coupling + p.light_shift();
                let optical_center = p.omega_coupling - p.optical_detuning;
                vec![
                    (raman_center, p.coupling_rabi),
                    (optical_center, p.doppler_width.max(p.optical_decay)),
                ]
            }
        }
    }
}

/// n(ω) = 1 + χ(ω)/2.
pub fn refractive_index(model: &DispersionModel, omega: f64) -> Complex64 {
    Complex64::new(1.0, 0.0) + model.susceptibility(omega) * 0.5
}

/// Real group index n_g = Re n + ω d(Re n)/dω from the exact derivative.
pub fn group_index(model: &DispersionModel, omega: f64) -> f64 {
    let n = refractive_index(model, omega);
    let dn = model.susceptibility_derivative(omega) * 0.5;
    n.re + omega * dn.re
}

/// Group index by adaptive central finite difference, as an independent
/// route against the exact derivative.
///
/// Steps are snapped to multiples of one ulp of ω so that ω ± h is
/// evaluated at exactly symmetric arguments; without that, the 0.25 rad/s
/// granularity of f64 at optical carriers floors the accuracy near 1e-6.
pub fn group_index_fd(model: &DispersionModel, omega: f64) -> Result<f64> {
    let scale = match model {
        DispersionModel::Vacuum { .. } => omega * 1e-6,
        DispersionModel::GainDoublet(p) => p.fwhm / 8.0,
        DispersionModel::DetunedEit(p) => p.raman_decay / 2.0,
    };
    let ulp = omega.next_up() - omega;
    let snap = |h: f64| (h / ulp).round().max(1.0) * ulp;
    let re_n = |w: f64| refractive_index(model, w).re;
    let central = |h: f64| (re_n(omega + h) - re_n(omega - h)) / (2.0 * h);

    // Ridders extrapolation tableau over a shrinking, ulp-snapped step.
    const NTAB: usize = 12;
    const SHRINK: f64 = 1.5;
    let mut steps = [0.0f64; NTAB];
    let mut tab = [[0.0f64; NTAB]; NTAB];
    let mut h = snap(scale);
    if h <= 2.0 * ulp {
        return Err(Error::NumericalDerivative(format!(
            "finite-difference step underflowed at omega = {omega:e}"
        )));
    }
    steps[0] = h;
    tab[0][0] = central(h);
    let mut best = tab[0][0];
    let mut best_err = f64::MAX;
    for i in 1..NTAB {
        h = snap(h / SHRINK);
        if h <= 2.0 * ulp {
            break;
        }
        steps[i] = h;
        tab[0][i] = central(h);
        for j in 1..=i {
            let ratio = steps[i - j] / steps[i];
            let fac = ratio * ratio;
            tab[j][i] = (tab[j - 1][i] * fac - tab[j - 1][i - 1]) / (fac - 1.0);
            let errt = (tab[j][i] - tab[j - 1][i])
                .abs()
                .max((tab[j][i] - tab[j - 1][i - 1]).abs());
            if errt <= best_err {
                best_err = errt;
                best = tab[j][i];
            }
        }
        if (tab[i][i] - tab[i - 1][i - 1]).abs() >= 2.0 * best_err {
            break;
        }
    }
    if !best.is_finite() {
        return Err(Error::NumericalDerivative(
            "finite difference produced no estimate".into(),
        ));
    }
    Ok(re_n(omega) + omega * best)
}

/// Maximum relative deviation between Re χ reconstructed by a discrete
/// Hilbert transform of Im χ and the model's own Re χ, over the grid.
///
/// The grid (rad/s, strictly increasing, uniform or graded) must keep
/// every model feature at least 10 linewidths away from its edges.
pub fn kramers_kronig_residual(model: &DispersionModel, grid: &[f64]) -> Result<f64> {
    if grid.len() < 16 {
        return Err(Error::GridCoverage("grid needs at least 16 points".into()));
    }
    if !grid.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::GridCoverage("grid must be strictly increasing".into()));
    }
    let lo = grid[0];
    let hi = grid[grid.len() - 1];
    for (center, width) in model.features() {
        if center - 10.0 * width < lo || center + 10.0 * width > hi {
            return Err(Error::GridCoverage(format!(
                "feature at {center:e} rad/s (linewidth {width:e}) lies within 10 linewidths of a grid edge"
            )));
        }
    }
    let chi: Vec<Complex64> = grid.iter().map(|&w| model.susceptibility(w)).collect();
    let im: Vec<f64> = chi.iter().map(|c| c.im).collect();
    let re: Vec<f64> = chi.iter().map(|c| c.re).collect();
    let re_rec = hilbert::hilbert_transform(grid, &im);
    let max_re = re.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max_re == 0.0 {
        return Ok(0.0);
    }
    let max_err = re_rec
        .iter()
        .zip(&re)
        .map(|(r, e)| (r - e).abs())
        .fold(0.0f64, f64::max);
    Ok(max_err / max_re)
}
