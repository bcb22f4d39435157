//! FFT conventions used throughout the time-domain engine.
//!
//! Fields are positive-frequency analytic signals carrying e^{-iωt}, so
//! the continuous pair is
//!
//! ```text
//! X(ν) = ∫ x(t) e^{+iνt} dt ,   x(t) = (1/2π) ∫ X(ν) e^{-iνt} dν .
//! ```
//!
//! On N samples with spacing dt the frequency grid is ν_k = 2πk̃/(N dt)
//! with k̃ the signed bin index (standard order: 0..N/2-1 then -N/2..-1).
//! Frequency → time maps onto rustfft's unnormalized forward transform
//! scaled by 1/(N dt); time → frequency onto the inverse scaled by dt.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Signed angular frequency for each FFT bin, standard order.
pub fn bin_frequencies(n: usize, dt: f64) -> Vec<f64> {
    let dv = 2.0 * std::f64::consts::PI / (n as f64 * dt);
    (0..n)
        .map(|k| {
            let signed = if k < n.div_ceil(2) {
                k as isize
            } else {
                k as isize - n as isize
            };
            signed as f64 * dv
        })
        .collect()
}

/// In-place frequency → time conversion: x_m = (1/(N dt)) Σ_k X_k e^{-iν_k t_m}.
pub fn spectrum_to_time(values: &mut [Complex64], dt: f64) {
    let n = values.len();
    FftPlanner::new().plan_fft_forward(n).process(values);
    let scale = 1.0 / (n as f64 * dt);
    for v in values.iter_mut() {
        *v *= scale;
    }
}

/// In-place time → frequency conversion: X_k = dt Σ_m x_m e^{+iν_k t_m}.
pub fn time_to_spectrum(values: &mut [Complex64], dt: f64) {
    let n = values.len();
    FftPlanner::new().plan_fft_inverse(n).process(values);
    for v in values.iter_mut() {
        *v *= dt;
    }
}

/// Linear (non-circular) convolution out_n = dt · Σ_m a_m b_{n-m},
/// returned for n in [0, a.len()), computed by zero-padded FFT.
pub fn linear_convolve_prefix(a: &[Complex64], b: &[Complex64], dt: f64) -> Vec<Complex64> {
    assert_eq!(a.len(), b.len());
    let n = a.len();
    let m = 2 * n;
    let mut fa = vec![Complex64::default(); m];
    let mut fb = vec![Complex64::default(); m];
    fa[..n].copy_from_slice(a);
    fb[..n].copy_from_slice(b);
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(m);
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= *y;
    }
    planner.plan_fft_inverse(m).process(&mut fa);
    let scale = dt / m as f64;
    fa.truncate(n);
    for v in fa.iter_mut() {
        *v *= scale;
    }
    fa
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_pair_round_trips() {
        let n = 256;
        let dt = 0.25;
        let orig: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new((i as f64 * 0.1).sin(), (i as f64 * 0.07).cos()))
            .collect();
        let mut v = orig.clone();
        time_to_spectrum(&mut v, dt);
        spectrum_to_time(&mut v, dt);
        for (a, b) in v.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn gaussian_pair_matches_analytic() {
        // x(t) = exp(-t²/2σ²) has X(ν) = σ√(2π) exp(-σ²ν²/2).
        let n = 1 << 12;
        let dt = 0.02;
        let sigma = 0.5;
        let t0 = -(n as f64) * dt / 2.0;
        let mut v: Vec<Complex64> = (0..n)
            .map(|i| {
                let t = t0 + i as f64 * dt;
                Complex64::new((-t * t / (2.0 * sigma * sigma)).exp(), 0.0)
            })
            .collect();
        time_to_spectrum(&mut v, dt);
        // Undo the phase ramp from the grid starting at t0 rather than 0.
        for (k, nu) in bin_frequencies(n, dt).into_iter().enumerate() {
            v[k] *= Complex64::new(0.0, nu * t0).exp();
            let expected = sigma * (2.0 * std::f64::consts::PI).sqrt()
                * (-sigma * sigma * nu * nu / 2.0).exp();
            assert!(
                (v[k].re - expected).abs() < 1e-8 && v[k].im.abs() < 1e-8,
                "bin {k}: got {}, expected {expected}",
                v[k]
            );
        }
    }

    #[test]
    fn convolution_matches_direct_sum() {
        let n = 64;
        let dt = 0.5;
        let a: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new((i as f64 * 0.3).cos(), 0.2 * i as f64))
            .collect();
        let b: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new((-(i as f64) * 0.05).exp(), (i as f64 * 0.2).sin()))
            .collect();
        let fast = linear_convolve_prefix(&a, &b, dt);
        for out_idx in [0usize, 1, 31, 63] {
            let mut direct = Complex64::default();
            for m in 0..=out_idx {
                direct += a[m] * b[out_idx - m];
            }
            direct *= dt;
            assert!((fast[out_idx] - direct).norm() < 1e-9 * (1.0 + direct.norm()));
        }
    }
}
