//! Ring-down engine: causal response sampling and the output field for a
//! CW drive switched off at t = 0.
//!
//! Everything is computed in a baseband rotating at a carrier ω₀
//! (default: the principal resonance). The input splits exactly as
//!
//! ```text
//! E_in(t) = E₀ e^{-iω_l t} - E₀ H(t') (1 - e^{-t'/τ_f}) e^{-iω_l t} ,
//! ```
//!
//! with t' the time past turn-off, so the output is the exact CW steady
//! state minus the response to the turn-on complement. The complement is
//! sampled on the time grid and convolved with the sampled impulse
//! response by zero-padded FFT (a linear, not circular, convolution);
//! because the response is causal, truncating the complement at the end
//! of the window cannot disturb any in-window output sample. An ideal
//! step drive is represented by a fall time of two grid steps; the
//! documented discrete-step convention.
//!
//! The mirror-path feed-through phase e^{iωL_m/c} is not sampled: it is
//! applied as an exact L_m/c offset of the output time axis plus a
//! constant carrier phase, which keeps the round-trip response comb
//! exactly on grid points. Traces are reported on the lab time axis.

mod analytic;
mod diagnostics;
mod folding;

pub use analytic::{analytic_lorentzian_ringdown, noncausal_truncated_prediction};
pub use diagnostics::{
    diagnose, dominant_oscillation_frequency, relative_l2_distance, relative_l2_distance_from,
    DiagnosticsOptions, RingdownDiagnostics,
};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::cavity::{self, CavityGeometry};
use crate::dispersion::DispersionModel;
use crate::error::{Error, Result};
use crate::numerics::{dd, fft};
use crate::SPEED_OF_LIGHT;

/// CW drive that is switched off (with an optional exponential fall) at
/// `turn_off_time`.
#[derive(Debug, Clone)]
pub struct InputSignal {
    pub amplitude: Complex64,
    /// Laser angular frequency (rad/s).
    pub omega_l: f64,
    /// Instant of the switch-off; conventionally 0.
    pub turn_off_time: f64,
    /// Exponential fall constant of the switch (s); 0 requests an ideal
    /// step, realized as a fall of two grid steps.
    pub fall_time: f64,
}

impl InputSignal {
    pub fn new(amplitude: Complex64, omega_l: f64, fall_time: f64) -> Result<Self> {
        if fall_time < 0.0 || !fall_time.is_finite() {
            return Err(Error::Domain("fall_time must be non-negative".into()));
        }
        Ok(InputSignal {
            amplitude,
            omega_l,
            turn_off_time: 0.0,
            fall_time,
        })
    }
}

/// Uniformly sampled complex output field envelope around `carrier`.
#[derive(Debug, Clone)]
pub struct RingdownTrace {
    /// Lab-frame times (s), uniform.
    pub times: Vec<f64>,
    /// Field envelope: E_out(t) e^{+i carrier t}.
    pub envelope: Vec<Complex64>,
    /// Carrier angular frequency ω₀ (rad/s).
    pub carrier: f64,
}

impl RingdownTrace {
    /// |E_out|² samples; non-negative by construction.
    pub fn intensity(&self) -> Vec<f64> {
        self.envelope.iter().map(|e| e.norm_sqr()).collect()
    }

    pub fn dt(&self) -> f64 {
        self.times[1] - self.times[0]
    }

    /// CSV emission: metadata comments then `t_s,re_E,im_E,intensity`
    /// rows, with an optional trailing `log10_intensity` column.
    pub fn write_csv<W: std::io::Write>(
        &self,
        mut w: W,
        metadata: &[(String, String)],
        log_intensity: bool,
    ) -> Result<()> {
        for (k, v) in metadata {
            writeln!(w, "# {k} = {v}")?;
        }
        if log_intensity {
            writeln!(w, "t_s,re_E,im_E,intensity,log10_intensity")?;
        } else {
            writeln!(w, "t_s,re_E,im_E,intensity")?;
        }
        for (t, e) in self.times.iter().zip(&self.envelope) {
            let i = e.norm_sqr();
            if log_intensity {
                writeln!(w, "{},{},{},{},{}", t, e.re, e.im, i, i.max(f64::MIN_POSITIVE).log10())?;
            } else {
                writeln!(w, "{},{},{},{}", t, e.re, e.im, i)?;
            }
        }
        Ok(())
    }

    /// JSON emission mirroring the CSV field names.
    pub fn write_json<W: std::io::Write>(
        &self,
        mut w: W,
        metadata: &[(String, String)],
        log_intensity: bool,
    ) -> Result<()> {
        let meta: serde_json::Map<String, serde_json::Value> = metadata
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect();
        let points: Vec<serde_json::Value> = self
            .times
            .iter()
            .zip(&self.envelope)
            .map(|(t, e)| {
                let i = e.norm_sqr();
                let mut obj = serde_json::json!({
                    "t_s": t, "re_E": e.re, "im_E": e.im, "intensity": i,
                });
                if log_intensity {
                    obj["log10_intensity"] =
                        serde_json::json!(i.max(f64::MIN_POSITIVE).log10());
                }
                obj
            })
            .collect();
        let doc = serde_json::json!({ "metadata": meta, "points": points });
        serde_json::to_writer_pretty(&mut w, &doc)?;
        writeln!(w)?;
        Ok(())
    }
}

/// The linear system driven by the input: either the full cavity transfer
/// function or an injected single Lorentzian (used by the oracle tests to
/// bypass the exact cavity formula).
#[derive(Debug, Clone)]
pub enum Transfer<'a> {
    Cavity {
        geom: &'a CavityGeometry,
        model: &'a DispersionModel,
    },
    Lorentzian(LorentzianTransfer),
}

/// S(ω) = S₀ e^{iωL_m/c} / (γ/2 - i(ω - ω_p)).
#[derive(Debug, Clone)]
pub struct LorentzianTransfer {
    pub gamma_cav: f64,
    pub s0: f64,
    pub omega_p: f64,
    pub mirror_path: f64,
}

impl Transfer<'_> {
    pub fn mirror_path(&self) -> f64 {
        match self {
            Transfer::Cavity { geom, .. } => geom.mirror_path,
            Transfer::Lorentzian(l) => l.mirror_path,
        }
    }

    /// Full transfer function including the feed-through phase.
    pub fn eval(&self, omega: f64) -> Result<Complex64> {
        let phi_m = dd::reduce_phase(omega, self.mirror_path(), SPEED_OF_LIGHT, 0.0);
        Ok(self.eval_zero_path(omega)? * Complex64::from_polar(1.0, phi_m))
    }

    fn eval_zero_path(&self, omega: f64) -> Result<Complex64> {
        match self {
            Transfer::Cavity { geom, model } => {
                cavity::transmission_zero_path(geom, model, omega)
            }
            Transfer::Lorentzian(l) => Ok(Complex64::new(l.s0, 0.0)
                / Complex64::new(l.gamma_cav / 2.0, -(omega - l.omega_p))),
        }
    }

    /// Default baseband carrier: the principal resonance.
    pub fn default_carrier(&self) -> Result<f64> {
        match self {
            Transfer::Cavity { geom, model } => {
                cavity::find_resonance(geom, model, model.anchor_frequency())
            }
            Transfer::Lorentzian(l) => Ok(l.omega_p),
        }
    }

    /// Rough 1/e intensity decay time used for default window sizing.
    /// For a negative-delay cavity (no single decay rate exists) the
    /// empty-cavity lifetime T_rt/Π stands in as the shortest estimate.
    pub fn decay_estimate(&self, carrier: f64) -> f64 {
        match self {
            Transfer::Cavity { geom, model } => {
                match cavity::lorentzian_reduction(geom, model, carrier) {
                    Ok((gamma, _)) if gamma > 0.0 => 1.0 / gamma,
                    _ => geom.round_trip_time() / geom.round_trip_loss(),
                }
            }
            Transfer::Lorentzian(l) => 1.0 / l.gamma_cav.abs(),
        }
    }

    fn feature_extent(&self) -> f64 {
        match self {
            Transfer::Cavity { model, .. } => model.feature_extent(),
            Transfer::Lorentzian(l) => 8.0 * l.gamma_cav.abs(),
        }
    }
}

/// Requested simulation window; unset fields fall back to the documented
/// defaults (post and pre windows of 20 decay estimates, at least 2^16
/// samples, cavity grids snapped to binary fractions of the round trip).
#[derive(Debug, Clone, Default)]
pub struct GridSpec {
    pub dt: Option<f64>,
    pub samples: Option<usize>,
    pub t_pre: Option<f64>,
    pub t_post: Option<f64>,
    pub carrier: Option<f64>,
}

/// Resolved simulation grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub dt: f64,
    pub n: usize,
    /// Index of the turn-off instant on the input grid.
    pub i_zero: usize,
    pub t_pre: f64,
    pub t_post: f64,
    pub carrier: f64,
}

/// Resolve a grid for the given transfer function, validating the window
/// and bandwidth preconditions.
pub fn size_grid(transfer: &Transfer, spec: &GridSpec) -> Result<TimeGrid> {
    let carrier = match spec.carrier {
        Some(c) => c,
        None => transfer.default_carrier()?,
    };
    let decay = transfer.decay_estimate(carrier);
    let t_post = spec.t_post.unwrap_or(20.0 * decay);
    let t_pre = spec.t_pre.unwrap_or(20.0 * decay);

    let extent = transfer.feature_extent();
    // Sampling rate at least 8 times the highest feature offset.
    let dt_max_band = if extent > 0.0 {
        std::f64::consts::PI / (4.0 * extent)
    } else {
        f64::INFINITY
    };
    if let Some(user) = spec.dt {
        if user > dt_max_band * (1.0 + 1e-12) {
            return Err(Error::Sizing {
                message: format!(
                    "grid step {user:e} s undersamples the dispersion features (extent {extent:e} rad/s)"
                ),
                suggestion: format!("use dt <= {dt_max_band:e} s"),
            });
        }
    }
    let dt = match (transfer, spec.dt) {
        (Transfer::Cavity { geom, .. }, user) => {
            // Snap to a binary fraction of the round trip so the comb of
            // ray arrivals lands exactly on grid points.
            let t_rt = geom.round_trip_time();
            let target = user.unwrap_or(dt_max_band).min(dt_max_band).min(t_rt);
            let j = (t_rt / target).log2().ceil().max(0.0) as u32;
            t_rt / (1u64 << j.min(40)) as f64
        }
        (Transfer::Lorentzian(_), Some(user)) => user,
        (Transfer::Lorentzian(_), None) => ((t_pre + t_post) / 65536.0).min(dt_max_band),
    };
    if t_post < 10.0 * decay {
        return Err(Error::Sizing {
            message: format!("post-turn-off window {t_post:e} s covers fewer than 10 decay times"),
            suggestion: format!("use t_post >= {:e} s", 20.0 * decay),
        });
    }
    let needed = ((t_pre + t_post) / dt).ceil() as usize + 2;
    let n = spec
        .samples
        .unwrap_or(0)
        .max(needed)
        .max(1 << 16)
        .next_power_of_two();
    if n > 1 << 26 {
        return Err(Error::Sizing {
            message: format!("window requires {n} samples at dt = {dt:e} s"),
            suggestion: "shorten the window or increase dt".into(),
        });
    }
    Ok(TimeGrid {
        dt,
        n,
        i_zero: (t_pre / dt).round() as usize,
        t_pre,
        t_post,
        carrier,
    })
}

/// Baseband impulse response samples ρ₀(m·dt) of the zero-path transfer
/// function at the grid carrier, length n.
///
/// The spectrum is sampled in its band-periodized (alias-folded) form,
/// which is what discrete sampling theory calls for; see the `folding`
/// module. The result is, up to fold-model accuracy, a set of exact
/// samples of the true causal response.
fn sample_baseband_response(transfer: &Transfer, grid: &TimeGrid) -> Result<Vec<Complex64>> {
    let n = grid.n;
    let band = 2.0 * std::f64::consts::PI / grid.dt;
    let freqs = fft::bin_frequencies(n, grid.dt);
    let mut samples: Vec<Complex64> = match transfer {
        Transfer::Cavity { geom, model } => {
            let chi_per = folding::PeriodicSusceptibility::new(model, grid.carrier, band)?;
            let values: Result<Vec<Complex64>> = freqs
                .par_iter()
                .map(|&nu| {
                    cavity::transmission_zero_path_with_chi(
                        geom,
                        grid.carrier + nu,
                        chi_per.eval(nu),
                    )
                })
                .collect();
            values?
        }
        Transfer::Lorentzian(l) => freqs
            .iter()
            .map(|&nu| {
                // Exact pole fold: S = iS₀/((ω-ω_p) + iγ/2) summed over
                // all alias cells.
                let x = grid.carrier - l.omega_p + nu;
                Complex64::new(0.0, l.s0) * folding::folded_pole(x, l.gamma_cav / 2.0, band)
            })
            .collect(),
    };
    fft::spectrum_to_time(&mut samples, grid.dt);
    Ok(samples)
}

/// Sampled causal response function of the system on a time grid holding
/// the comb singularities exactly on grid points.
#[derive(Debug, Clone)]
pub struct ResponseSamples {
    /// Times (s); span [-t_pre, t_post] up to the grid offset that keeps
    /// the L_m/c arrival on a sample.
    pub times: Vec<f64>,
    /// Baseband response envelope samples.
    pub values: Vec<Complex64>,
    pub carrier: f64,
}

impl ResponseSamples {
    /// max|R(τ < 0)| / max|R|: the anti-causal leakage of the sampled
    /// response. Zero for a perfectly causal, perfectly sampled system.
    pub fn causality_residual(&self) -> f64 {
        let mut max_all = 0.0f64;
        let mut max_neg = 0.0f64;
        for (t, v) in self.times.iter().zip(&self.values) {
            let a = v.norm();
            max_all = max_all.max(a);
            if *t < 0.0 {
                max_neg = max_neg.max(a);
            }
        }
        if max_all == 0.0 {
            0.0
        } else {
            max_neg / max_all
        }
    }
}

/// Sample the response function R(τ) over [-t_pre, t_post].
///
/// The requested pre-window must be at least a tenth of the post window;
/// the sampling rate honors the same bandwidth rule as the ring-down.
pub fn response_function(transfer: &Transfer, spec: &GridSpec) -> Result<ResponseSamples> {
    let grid = size_grid(transfer, spec)?;
    if grid.t_pre < 0.1 * grid.t_post {
        return Err(Error::Sizing {
            message: "response window needs t_pre >= 0.1 t_post".into(),
            suggestion: format!("use t_pre >= {:e} s", 0.1 * grid.t_post),
        });
    }
    let rho = sample_baseband_response(transfer, &grid)?;
    let n = grid.n;
    let lm_over_c = transfer.mirror_path() / SPEED_OF_LIGHT;
    // Grid offset puts τ = L_m/c (and with it the whole comb) on-grid.
    let m_feed = (lm_over_c / grid.dt).floor();
    let s = lm_over_c - m_feed * grid.dt;
    let phase_feed = Complex64::from_polar(
        1.0,
        dd::reduce_phase(grid.carrier, transfer.mirror_path(), SPEED_OF_LIGHT, 0.0),
    );

    let k_pre = (grid.t_pre / grid.dt).floor() as isize;
    let k_post = (grid.t_post / grid.dt).floor() as isize;
    let mut times = Vec::with_capacity((k_pre + k_post + 1) as usize);
    let mut values = Vec::with_capacity(times.capacity());
    for k in -k_pre..=k_post {
        let tau = k as f64 * grid.dt + s;
        // ρ(τ) = e^{iω₀L_m/c} ρ₀(τ - L_m/c); negative arguments read the
        // top of the periodized array.
        let m = k - m_feed as isize;
        let idx = m.rem_euclid(n as isize) as usize;
        times.push(tau);
        values.push(phase_feed * rho[idx]);
    }
    Ok(ResponseSamples {
        times,
        values,
        carrier: grid.carrier,
    })
}

/// Simulate the switched-off CW drive through the transfer function.
pub fn ringdown(transfer: &Transfer, input: &InputSignal, spec: &GridSpec) -> Result<RingdownTrace> {
    let grid = size_grid(transfer, spec)?;
    // Steady-state establishment: the window must start well before the
    // switch (the split makes the pre-region exact, but a shorter view
    // would hide whether the requested window makes physical sense).
    let decay = transfer.decay_estimate(grid.carrier);
    if grid.t_pre < 20.0 * decay * (1.0 - 1e-9) {
        return Err(Error::Sizing {
            message: format!(
                "pre-turn-off window {:e} s is under 20 decay estimates",
                grid.t_pre
            ),
            suggestion: format!("use t_pre >= {:e} s", 20.0 * decay),
        });
    }
    let rho = sample_baseband_response(transfer, &grid)?;

    let fall = input.fall_time.max(2.0 * grid.dt);
    let delta_l = input.omega_l - grid.carrier;
    if delta_l.abs() > 0.25 * std::f64::consts::PI / grid.dt {
        return Err(Error::Sizing {
            message: "drive detuning exceeds a quarter of the simulation bandwidth".into(),
            suggestion: "reduce the detuning or the grid step".into(),
        });
    }

    // Turn-on complement sampled on the input grid.
    let q: Vec<Complex64> = (0..grid.n)
        .map(|i| {
            let t = (i as i64 - grid.i_zero as i64) as f64 * grid.dt;
            let tp = t - input.turn_off_time;
            if tp < 0.0 {
                Complex64::default()
            } else {
                let env = 1.0 - (-tp / fall).exp();
                input.amplitude * env * Complex64::from_polar(1.0, -delta_l * t)
            }
        })
        .collect();
    let conv = fft::linear_convolve_prefix(&rho, &q, grid.dt);

    let lm_over_c = transfer.mirror_path() / SPEED_OF_LIGHT;
    let phase_feed = Complex64::from_polar(
        1.0,
        dd::reduce_phase(grid.carrier, transfer.mirror_path(), SPEED_OF_LIGHT, 0.0),
    );
    let steady_amp = transfer.eval(input.omega_l)? * input.amplitude;

    let i_end = (grid.i_zero + (grid.t_post / grid.dt).ceil() as usize + 1).min(grid.n);
    let mut times = Vec::with_capacity(i_end);
    let mut envelope = Vec::with_capacity(i_end);
    for i in 0..i_end {
        let t_in = (i as i64 - grid.i_zero as i64) as f64 * grid.dt;
        let t_out = t_in + lm_over_c;
        let steady = steady_amp * Complex64::from_polar(1.0, -delta_l * t_out);
        envelope.push(steady - phase_feed * conv[i]);
        times.push(t_out);
    }
    Ok(RingdownTrace {
        times,
        envelope,
        carrier: grid.carrier,
    })
}

#[cfg(test)]
mod tests;
