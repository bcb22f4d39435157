//! Satellite-resonance existence machinery and peak extraction.
//!
//! Around a resonance ω_p the extra-resonance condition is a root of
//!
//! ```text
//! f(δ) = L_cell [(ω_p + δ) n(ω_p + δ) - ω_p n(ω_p)] + δ L_vac
//! ```
//!
//! with n the real index: f(δ)/c is the round-trip phase accumulated
//! relative to ω_p. f(0) = 0 always, ∂f/∂δ at 0 equals c τ_g^RT, and
//! causality forces f ~ (L_vac + L_cell) δ asymptotically, so a negative
//! slope at the origin (τ_g^RT < 0) guarantees at least one root on each
//! side of the carrier. Phase roots and |S|² maxima are related but not
//! identical when gain or absorption is present; this module reports
//! both and never conflates them.

use serde::Serialize;

use crate::cavity::{self, CavityGeometry};
use crate::dispersion::DispersionModel;
use crate::error::{Error, Result};
use crate::numerics::roots;
use crate::spectrum::ComplexSpectrum;

/// Classification of an extracted transmission peak.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PeakKind {
    Principal,
    Satellite,
}

/// A transmission maximum of |S(ω)|².
#[derive(Debug, Clone, PartialEq)]
pub struct ResonancePeak {
    /// Center angular frequency (rad/s).
    pub omega_center: f64,
    /// Full width at half maximum of |S|² (rad/s).
    pub fwhm: f64,
    /// |S|² at the interpolated center.
    pub height: f64,
    pub kind: PeakKind,
}

/// Options for [`extract_peaks`].
#[derive(Debug, Clone)]
pub struct PeakExtraction {
    /// A local maximum counts as a peak if |S|² exceeds this multiple of
    /// the spectrum's median.
    pub prominence_factor: f64,
}

impl Default for PeakExtraction {
    fn default() -> Self {
        PeakExtraction {
            prominence_factor: 3.0,
        }
    }
}

/// Number of scan points used by [`find_satellites`].
pub const SATELLITE_SCAN_POINTS: usize = 10_000;

/// The phase-offset function f(δ), in m·rad/s.
///
/// Evaluated through susceptibilities so the meter-scale geometric terms
/// never cancel against each other:
/// f(δ) = δ(L_vac + L_cell) + (L_cell/2)[ω_p(χ'₊ - χ'₀) + δ χ'₊].
pub fn f_delta(geom: &CavityGeometry, model: &DispersionModel, omega_p: f64, delta: f64) -> f64 {
    let chi0 = model.susceptibility(omega_p).re;
    let chip = model.susceptibility(omega_p + delta).re;
    delta * geom.round_trip_length()
        + 0.5 * geom.cell_length * (omega_p * (chip - chi0) + delta * chip)
}

/// True iff satellite resonances are mandated around ω_p, i.e.
/// -dn/dω > (L_vac + n L_cell)/(ω_p L_cell), equivalently τ_g^RT < 0.
/// Both formulations are evaluated; they can only disagree when the
/// delay sits within rounding of exactly zero.
pub fn satellite_predicate(geom: &CavityGeometry, model: &DispersionModel, omega_p: f64) -> bool {
    let tau = cavity::round_trip_group_delay(geom, model, omega_p);
    let by_delay = tau < 0.0;

    if geom.cell_length > 0.0 {
        let n_re = crate::dispersion::refractive_index(model, omega_p).re;
        let dn_re = model.susceptibility_derivative(omega_p).re * 0.5;
        let by_slope = -dn_re
            > (geom.vacuum_length + n_re * geom.cell_length) / (omega_p * geom.cell_length);
        debug_assert_eq!(by_delay, by_slope, "the two predicate routes disagree");
    }
    by_delay
}

/// All non-zero roots of f(δ) within ±search_span/2, smallest first.
///
/// A dense scan (at least [`SATELLITE_SCAN_POINTS`] points) brackets sign
/// changes which are then bisected to a relative accuracy of 1e-9. Roots
/// falling within two scan steps of δ = 0 are identified with the
/// principal resonance and dropped. When the satellite predicate holds,
/// the result is guaranteed to contain a negative and a positive root;
/// a span too small to show them is reported as an error rather than an
/// empty list.
pub fn find_satellites(
    geom: &CavityGeometry,
    model: &DispersionModel,
    omega_p: f64,
    search_span: f64,
) -> Result<Vec<f64>> {
    find_satellites_with_points(geom, model, omega_p, search_span, SATELLITE_SCAN_POINTS)
}

/// [`find_satellites`] with an explicit scan density.
pub fn find_satellites_with_points(
    geom: &CavityGeometry,
    model: &DispersionModel,
    omega_p: f64,
    search_span: f64,
    scan_points: usize,
) -> Result<Vec<f64>> {
    assert!(search_span > 0.0);
    let n = scan_points.max(SATELLITE_SCAN_POINTS);
    let half = search_span / 2.0;
    let step = search_span / n as f64;
    let f = |delta: f64| f_delta(geom, model, omega_p, delta);

    let mut out = Vec::new();
    for bracket in roots::scan_sign_changes(&f, -half, half, n) {
        let root = roots::bisect(&f, bracket, 1e-9 * bracket.a.abs().max(step), 0.0);
        if root.abs() > 2.0 * step {
            out.push(root);
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup_by(|a, b| (*a - *b).abs() < 4.0 * 1e-9 * a.abs().max(step));

    if satellite_predicate(geom, model, omega_p) {
        let has_neg = out.iter().any(|&d| d < 0.0);
        let has_pos = out.iter().any(|&d| d > 0.0);
        if !(has_neg && has_pos) {
            return Err(Error::SpanTooSmall {
                span_rad_s: search_span,
            });
        }
    }
    Ok(out)
}

/// Local maxima of |S(ω)|² above the prominence threshold, with FWHM from
/// linear interpolation of the half-height crossings. The peak nearest
/// the phase resonance ω_p is labeled principal (ties break toward the
/// lower frequency); every other peak is a satellite.
pub fn extract_peaks(
    spectrum: &ComplexSpectrum,
    omega_p: f64,
    options: &PeakExtraction,
) -> Result<Vec<ResonancePeak>> {
    let intensity = spectrum.intensity();
    let offsets = spectrum.offsets();
    let step = spectrum.step();
    let threshold = options.prominence_factor * median(&intensity);

    let mut peaks: Vec<ResonancePeak> = Vec::new();
    for i in 1..intensity.len() - 1 {
        if !(intensity[i] > intensity[i - 1] && intensity[i] > intensity[i + 1]) {
            continue;
        }
        if intensity[i] < threshold {
            continue;
        }
        // Parabolic refinement of the center and height.
        let (dm, d0, dp) = (intensity[i - 1], intensity[i], intensity[i + 1]);
        let denom = dm - 2.0 * d0 + dp;
        let shift = if denom != 0.0 {
            0.5 * (dm - dp) / denom
        } else {
            0.0
        };
        let center = spectrum.center() + offsets[i] + shift * step;
        let height = d0 - 0.25 * (dm - dp) * shift;

        let half = height / 2.0;
        let left = half_crossing(offsets, &intensity, i, half, -1);
        let right = half_crossing(offsets, &intensity, i, half, 1);
        let fwhm = right - left;
        if fwhm < 8.0 * step {
            return Err(Error::PeakUnderResolved {
                center_hz: crate::angular_to_hz(center),
                fwhm_hz: crate::angular_to_hz(fwhm),
                step_hz: crate::angular_to_hz(step),
            });
        }
        peaks.push(ResonancePeak {
            omega_center: center,
            fwhm,
            height,
            kind: PeakKind::Satellite,
        });
    }

    // Principal = nearest to omega_p; ties go to the lower frequency.
    if let Some(principal) = peaks
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            let da = (a.omega_center - omega_p).abs();
            let db = (b.omega_center - omega_p).abs();
            da.partial_cmp(&db)
                .unwrap()
                .then(a.omega_center.partial_cmp(&b.omega_center).unwrap())
        })
        .map(|(i, _)| i)
    {
        peaks[principal].kind = PeakKind::Principal;
    }
    Ok(peaks)
}

/// Walk from the peak toward `direction` until |S|² falls through half
/// height; linearly interpolate the crossing. If the trace turns back up
/// while still above half (overlapping peaks), the local minimum stands
/// in for the crossing; if the grid edge is reached first, the edge does.
fn half_crossing(
    omega: &[f64],
    intensity: &[f64],
    peak: usize,
    half: f64,
    direction: isize,
) -> f64 {
    let mut j = peak as isize;
    loop {
        let next = j + direction;
        if next < 0 || next as usize >= intensity.len() {
            return omega[j as usize];
        }
        let a = intensity[j as usize];
        let b = intensity[next as usize];
        if b <= half {
            let frac = (a - half) / (a - b);
            return omega[j as usize] + frac * (omega[next as usize] - omega[j as usize]);
        }
        if b > a && j != peak as isize {
            return omega[j as usize];
        }
        j = next;
    }
}

fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Serializable peak record with frequencies in Hz.
#[derive(Debug, Serialize)]
pub struct PeakRecord {
    pub center_hz: f64,
    pub fwhm_hz: f64,
    pub height: f64,
    pub kind: PeakKind,
}

/// JSON array of `{center_hz, fwhm_hz, height, kind}`.
pub fn peaks_to_json(peaks: &[ResonancePeak]) -> serde_json::Value {
    let records: Vec<PeakRecord> = peaks
        .iter()
        .map(|p| PeakRecord {
            center_hz: crate::angular_to_hz(p.omega_center),
            fwhm_hz: crate::angular_to_hz(p.fwhm),
            height: p.height,
            kind: p.kind,
        })
        .collect();
    serde_json::to_value(records).expect("peak records serialize")
}

/// ∂f/∂δ at δ = 0 by central difference; test hook connecting f_delta to
/// the round-trip group delay (the exact relation is c τ_g^RT). The step
/// is snapped to the f64 granularity of ω_p so ω_p ± h are exact.
pub fn f_slope_at_origin(geom: &CavityGeometry, model: &DispersionModel, omega_p: f64) -> f64 {
    let h = match model {
        DispersionModel::Vacuum { .. } => omega_p * 1e-9,
        DispersionModel::GainDoublet(p) => p.fwhm * 1e-2,
        DispersionModel::DetunedEit(p) => p.raman_decay * 1e-2,
    };
    let ulp = omega_p.next_up() - omega_p;
    let snap = |x: f64| (x / ulp).round().max(1.0) * ulp;
    let h1 = snap(h);
    let h2 = snap(h / 2.0);
    let d1 = (f_delta(geom, model, omega_p, h1) - f_delta(geom, model, omega_p, -h1)) / (2.0 * h1);
    let d2 = (f_delta(geom, model, omega_p, h2) - f_delta(geom, model, omega_p, -h2)) / (2.0 * h2);
    (4.0 * d2 - d1) / 3.0
}
