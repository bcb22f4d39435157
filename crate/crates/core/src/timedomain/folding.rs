//! Band-periodization of transfer functions for discrete sampling.
//!
//! Sampling a response at spacing dt represents the continuous system
//! exactly only if the spectrum used is the alias fold Σ_p S(ν + pB)
//! with B = 2π/dt. The cavity comb itself is B-periodic once dt divides
//! the round trip, but the medium susceptibility is not: its 1/ν tails
//! dress the cavity resonances of every fold cell. Truncating them to
//! one band injects spurious anti-causal content at the 1e-5 level,
//! visible as a causality residual. Folding the susceptibility restores
//! an exactly periodic spectrum whose inverse transform is the true
//! sampled (hence causal) response.
//!
//! Lorentzian lines fold in closed form through Σ_p 1/(z + pB) =
//! (π/B) cot(πz/B). The Doppler-broadened EIT background has no closed
//! form; its fold is tabulated once on a coarse grid (it varies on GHz
//! scales) and interpolated.

use num_complex::Complex64;

use crate::dispersion::DispersionModel;
use crate::error::Result;

/// Exact fold of a unit Lorentzian pole: Σ_p 1/((x + pB) + iγ).
pub fn folded_pole(x: f64, gamma: f64, period: f64) -> Complex64 {
    let z = Complex64::new(x, gamma) * (std::f64::consts::PI / period);
    // cot саturates to ∓i for |Im| >> 1, matching the vanishing fold.
    let cot = z.cos() / z.sin();
    cot * (std::f64::consts::PI / period)
}

/// χ folded over the sampling band: Σ_p χ(carrier + ν + p·period).
pub struct PeriodicSusceptibility<'a> {
    model: &'a DispersionModel,
    carrier: f64,
    period: f64,
    /// Tail fold Σ_{p≠0} χ for models without a closed form, tabulated
    /// on a uniform ν grid over one period.
    table: Option<Vec<Complex64>>,
}

const EIT_TABLE_POINTS: usize = 257;

impl<'a> PeriodicSusceptibility<'a> {
    pub fn new(model: &'a DispersionModel, carrier: f64, period: f64) -> Result<Self> {
        let table = match model {
            DispersionModel::DetunedEit(p) => {
                // Fold range must cover the Doppler-broadened line.
                let reach = p.optical_detuning.abs() + 10.0 * p.doppler_width;
                let fold_terms = (reach / period).ceil() as i64 + 16;
                let mut table = Vec::with_capacity(EIT_TABLE_POINTS);
                for k in 0..EIT_TABLE_POINTS {
                    let nu = -period / 2.0
                        + period * k as f64 / (EIT_TABLE_POINTS - 1) as f64;
                    let mut sum = Complex64::default();
                    for q in 1..=fold_terms {
                        let shift = q as f64 * period;
                        sum += model.susceptibility(carrier + nu + shift);
                        sum += model.susceptibility(carrier + nu - shift);
                    }
                    table.push(sum);
                }
                Some(table)
            }
            _ => None,
        };
        Ok(PeriodicSusceptibility {
            model,
            carrier,
            period,
            table,
        })
    }

    /// Folded susceptibility at offset ν from the carrier, |ν| <= period/2.
    pub fn eval(&self, nu: f64) -> Complex64 {
        match self.model {
            DispersionModel::Vacuum { .. } => Complex64::default(),
            DispersionModel::GainDoublet(p) => {
                let gamma = p.fwhm / 2.0;
                let center = p.omega_ref - self.carrier;
                let d = nu - center;
                (folded_pole(d + p.separation / 2.0, gamma, self.period)
                    + folded_pole(d - p.separation / 2.0, gamma, self.period))
                    * p.amplitude()
            }
            DispersionModel::DetunedEit(_) => {
                let direct = self.model.susceptibility(self.carrier + nu);
                let table = self.table.as_ref().expect("EIT fold table");
                let n = table.len();
                let frac = (nu / self.period + 0.5) * (n - 1) as f64;
                let idx = (frac.floor() as usize).min(n - 2);
                let w = frac - idx as f64;
                direct + table[idx] * (1.0 - w) + table[idx + 1] * w
            }
        }
    }
}
