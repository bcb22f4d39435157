//! Adaptive Simpson quadrature for complex-valued integrands.

use num_complex::Complex64;

fn simpson(fa: Complex64, fm: Complex64, fb: Complex64, h: f64) -> Complex64 {
    (fa + fm * 4.0 + fb) * (h / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    abs_tol: f64,
    depth: u32,
) -> Complex64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 || delta.norm() <= 15.0 * abs_tol {
        // Richardson extrapolation of the two half-interval estimates.
        return left + right + delta / 15.0;
    }
    adapt(f, a, m, fa, flm, fm, left, 0.5 * abs_tol, depth - 1)
        + adapt(f, m, b, fm, frm, fb, right, 0.5 * abs_tol, depth - 1)
}

/// Adaptive Simpson on [a, b] with an absolute tolerance.
pub fn adaptive_simpson<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_depth: u32,
) -> Complex64 {
    if a == b {
        return Complex64::new(0.0, 0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(fa, fm, fb, b - a);
    adapt(f, a, b, fa, fm, fb, whole, abs_tol, max_depth)
}

/// Integrate over panels split at the given breakpoints.
///
/// Breakpoints let the caller pin known sharp features so the adaptive
/// refinement starts on intervals that already isolate them. The
/// relative tolerance applies to the magnitude of the whole integral.
pub fn integrate_panels<F: Fn(f64) -> Complex64>(
    f: &F,
    breakpoints: &[f64],
    rel_tol: f64,
) -> Complex64 {
    assert!(breakpoints.len() >= 2, "need at least one panel");
    // Coarse pass to estimate the overall scale.
    let mut scale = 0.0;
    for w in breakpoints.windows(2) {
        scale += adaptive_simpson(f, w[0], w[1], f64::MAX, 4).norm();
    }
    let abs_tol = rel_tol * scale.max(f64::MIN_POSITIVE) / breakpoints.len() as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for w in breakpoints.windows(2) {
        total += adaptive_simpson(f, w[0], w[1], abs_tol, 38);
    }
    total
}

/// Sorted, deduplicated breakpoints clipped to [lo, hi], with lo and hi included.
pub fn clip_breakpoints(lo: f64, hi: f64, interior: &[f64]) -> Vec<f64> {
    let mut pts = vec![lo, hi];
    for &p in interior {
        if p > lo && p < hi {
            pts.push(p);
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() <= f64::EPSILON * a.abs().max(b.abs()));
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_integral() {
        // ∫ exp(-x²) dx over [-8, 8] = √π to high accuracy.
        let f = |x: f64| Complex64::new((-x * x).exp(), 0.0);
        let got = adaptive_simpson(&f, -8.0, 8.0, 1e-12, 40).re;
        assert!((got - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn narrow_lorentzian_with_breakpoints() {
        // ∫ γ/(x²+γ²) dx over [-1, 1] with γ = 1e-6: nearly π.
        let gamma = 1e-6;
        let f = move |x: f64| Complex64::new(gamma / (x * x + gamma * gamma), 0.0);
        let exact = 2.0 * (1.0 / gamma).atan();
        let bps = clip_breakpoints(
            -1.0,
            1.0,
            &[-1e-5, -1e-6, 0.0, 1e-6, 1e-5, -1e-3, 1e-3],
        );
        let got = integrate_panels(&f, &bps, 1e-9).re;
        assert!(
            (got - exact).abs() / exact < 1e-8,
            "got {got}, exact {exact}"
        );
    }

    #[test]
    fn complex_phase_integral() {
        // ∫ exp(ix) dx over [0, π] = 2i.
        let f = |x: f64| Complex64::new(0.0, x).exp();
        let got = adaptive_simpson(&f, 0.0, std::f64::consts::PI, 1e-12, 40);
        assert!((got - Complex64::new(0.0, 2.0)).norm() < 1e-10);
    }
}
