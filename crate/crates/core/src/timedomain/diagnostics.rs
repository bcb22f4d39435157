//! Derived quantities of a ring-down trace: steady level, overshoot,
//! fitted tail constant, dominant beat frequency.

use num_complex::Complex64;

use crate::numerics::{fft, fit};
use crate::timedomain::RingdownTrace;

#[derive(Debug, Clone)]
pub struct DiagnosticsOptions {
    /// Tail-fit window as fractions of the post-turn-off span.
    pub tail_window: (f64, f64),
    /// Window for the beat analysis (s, absolute times); defaults to the
    /// first half of the post-turn-off span.
    pub beat_window: Option<(f64, f64)>,
}

impl Default for DiagnosticsOptions {
    fn default() -> Self {
        DiagnosticsOptions {
            tail_window: (0.55, 0.9),
            beat_window: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RingdownDiagnostics {
    /// Mean |E|² before turn-off.
    pub steady_intensity: f64,
    /// Max post-turn-off |E|² relative to the steady level.
    pub overshoot_ratio: f64,
    /// Time (s) at which the post-turn-off maximum occurs.
    pub time_of_post_max: f64,
    /// Intensity time constant (s) from a log-linear fit over the tail
    /// window; negative values mean the tail was still rising.
    pub tail_time_constant: f64,
    pub tail_fit_window: (f64, f64),
    /// Dominant oscillation frequency (Hz) of the log-intensity residual,
    /// when one stands out.
    pub dominant_beat_hz: Option<f64>,
}

/// Compute trace diagnostics; `turn_off` is the drive switch instant.
pub fn diagnose(
    trace: &RingdownTrace,
    turn_off: f64,
    opts: &DiagnosticsOptions,
) -> RingdownDiagnostics {
    let intensity = trace.intensity();
    let t_end = *trace.times.last().unwrap();

    let pre: Vec<f64> = trace
        .times
        .iter()
        .zip(&intensity)
        .filter(|(t, _)| **t < turn_off)
        .map(|(_, i)| *i)
        .collect();
    let steady = pre.iter().sum::<f64>() / pre.len().max(1) as f64;

    let (mut max_i, mut max_t) = (0.0f64, turn_off);
    for (t, i) in trace.times.iter().zip(&intensity) {
        if *t > turn_off && *i > max_i {
            max_i = *i;
            max_t = *t;
        }
    }

    let span = t_end - turn_off;
    let fit_window = (
        turn_off + opts.tail_window.0 * span,
        turn_off + opts.tail_window.1 * span,
    );
    let tail = fit_in_window(&trace.times, &intensity, fit_window);

    let beat_window = opts
        .beat_window
        .unwrap_or((turn_off, turn_off + 0.5 * span));
    let beat = dominant_oscillation_frequency(trace, beat_window);

    RingdownDiagnostics {
        steady_intensity: steady,
        overshoot_ratio: if steady > 0.0 { max_i / steady } else { f64::NAN },
        time_of_post_max: max_t,
        tail_time_constant: tail,
        tail_fit_window: fit_window,
        dominant_beat_hz: beat,
    }
}

fn fit_in_window(times: &[f64], intensity: &[f64], window: (f64, f64)) -> f64 {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (t, i) in times.iter().zip(intensity) {
        if *t >= window.0 && *t <= window.1 && *i > 0.0 {
            xs.push(*t);
            ys.push(i.ln());
        }
    }
    if xs.len() < 8 {
        return f64::NAN;
    }
    let (slope, _) = fit::linear_fit(&xs, &ys);
    -1.0 / slope
}

/// Dominant oscillation frequency (Hz) of ln|E|² inside `window`:
/// detrend linearly, Hann-window, zero-pad 8x and pick the interpolated
/// spectral maximum away from DC. Returns None when no bin clears the
/// noise floor by 3x or the window holds too few samples.
pub fn dominant_oscillation_frequency(
    trace: &RingdownTrace,
    window: (f64, f64),
) -> Option<f64> {
    let intensity = trace.intensity();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (t, i) in trace.times.iter().zip(&intensity) {
        if *t >= window.0 && *t <= window.1 && *i > 0.0 {
            xs.push(*t);
            ys.push(i.ln());
        }
    }
    let n = xs.len();
    if n < 32 {
        return None;
    }
    let (slope, intercept) = fit::linear_fit(&xs, &ys);
    let dt = xs[1] - xs[0];
    let padded = (8 * n).next_power_of_two();
    let mut buf = vec![Complex64::default(); padded];
    for (k, (&x, &y)) in xs.iter().zip(&ys).enumerate() {
        let hann = 0.5
            * (1.0
                - (2.0 * std::f64::consts::PI * k as f64 / (n - 1) as f64).cos());
        buf[k] = Complex64::new((y - slope * x - intercept) * hann, 0.0);
    }
    fft::time_to_spectrum(&mut buf, dt);

    // Positive-frequency bins, skipping DC leakage from the window.
    let df = 1.0 / (padded as f64 * dt);
    let k_min = ((2.0 / (xs[n - 1] - xs[0])) / df).ceil() as usize;
    let half = padded / 2;
    let mut best = (0usize, 0.0f64);
    let mut mean_power = 0.0;
    for k in k_min..half {
        let p = buf[k].norm_sqr();
        mean_power += p;
        if p > best.1 {
            best = (k, p);
        }
    }
    mean_power /= (half - k_min) as f64;
    if best.1 < 3.0 * mean_power || best.0 == 0 {
        return None;
    }
    // Parabolic interpolation on the log power of the neighboring bins.
    let k = best.0;
    let (pm, p0, pp) = (
        buf[k - 1].norm_sqr().max(f64::MIN_POSITIVE).ln(),
        buf[k].norm_sqr().max(f64::MIN_POSITIVE).ln(),
        buf[k + 1].norm_sqr().max(f64::MIN_POSITIVE).ln(),
    );
    let denom = pm - 2.0 * p0 + pp;
    let shift = if denom != 0.0 { 0.5 * (pm - pp) / denom } else { 0.0 };
    Some((k as f64 + shift) * df)
}

/// Relative L2 distance ||a - b|| / ||a|| between two traces' envelopes
/// on their common sample count.
pub fn relative_l2_distance(a: &RingdownTrace, b: &RingdownTrace) -> f64 {
    relative_l2_distance_from(a, b, f64::NEG_INFINITY)
}

/// Relative L2 distance restricted to samples with t >= t_min; used to
/// compare ring-down regions without the steady-state preamble drowning
/// the difference.
pub fn relative_l2_distance_from(a: &RingdownTrace, b: &RingdownTrace, t_min: f64) -> f64 {
    let n = a.envelope.len().min(b.envelope.len());
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        if a.times[i] < t_min {
            continue;
        }
        num += (a.envelope[i] - b.envelope[i]).norm_sqr();
        den += a.envelope[i].norm_sqr();
    }
    (num / den).sqrt()
}
