//! Discrete Hilbert transform on an arbitrary strictly increasing grid.
//!
//! For a response function analytic in the upper half plane and decaying
//! at infinity, the real part is the principal-value Hilbert transform of
//! the imaginary part,
//!
//! ```text
//! g'(x) = (1/π) PV ∫ g''(s) / (s - x) ds .
//! ```
//!
//! The singularity is removed by subtraction: with the identity
//! PV ∫ ds/(s - x) = ln|(b - x)/(x - a)| over [a, b], the remaining
//! integrand (g''(s) - g''(x))/(s - x) is smooth and a trapezoid rule on
//! the (possibly graded) grid applies. This supports grids that are dense
//! around kHz-wide features and sparse over GHz-wide wings, which a
//! uniform FFT Hilbert transform cannot resolve at a sane point count.

use rayon::prelude::*;

/// Reconstruct the real part from imaginary-part samples on `grid`.
///
/// The grid must be strictly increasing with at least 3 points. Endpoint
/// reconstructions use one-sided difference quotients for the removed
/// singularity slope; accuracy there is limited, so callers should keep
/// features well inside the grid.
pub fn hilbert_transform(grid: &[f64], imag: &[f64]) -> Vec<f64> {
    assert_eq!(grid.len(), imag.len());
    assert!(grid.len() >= 3);
    let n = grid.len();
    let a = grid[0];
    let b = grid[n - 1];

    (0..n)
        .into_par_iter()
        .map(|i| {
            let x = grid[i];
            let gx = imag[i];
            // Difference quotient at the singular node: local slope of g''.
            let slope = if i == 0 {
                (imag[1] - imag[0]) / (grid[1] - grid[0])
            } else if i == n - 1 {
                (imag[n - 1] - imag[n - 2]) / (grid[n - 1] - grid[n - 2])
            } else {
                (imag[i + 1] - imag[i - 1]) / (grid[i + 1] - grid[i - 1])
            };
            let h = |j: usize| -> f64 {
                if j == i {
                    slope
                } else {
                    (imag[j] - gx) / (grid[j] - x)
                }
            };
            let mut integral = 0.0;
            let mut h_prev = h(0);
            for j in 1..n {
                let h_j = h(j);
                integral += 0.5 * (h_prev + h_j) * (grid[j] - grid[j - 1]);
                h_prev = h_j;
            }
            // Log term from the subtracted pole; zero at the exact center.
            let log_term = if i == 0 || i == n - 1 {
                0.0
            } else {
                gx * ((b - x) / (x - a)).ln()
            };
            (integral + log_term) / std::f64::consts::PI
        })
        .collect()
}

/// Geometrically graded symmetric grid around `center`: dense spacing
/// `h0` inside ±`inner`, stretching by `ratio` per step out to ±`outer`.
pub fn graded_grid(center: f64, inner: f64, outer: f64, h0: f64, ratio: f64) -> Vec<f64> {
    assert!(inner > 0.0 && outer > inner && h0 > 0.0 && ratio > 1.0);
    let mut right = Vec::new();
    let mut x = 0.0;
    let mut h = h0;
    while x < outer {
        x += h;
        right.push(x.min(outer));
        if x > inner {
            h *= ratio;
        }
    }
    let mut grid = Vec::with_capacity(2 * right.len() + 1);
    for &r in right.iter().rev() {
        grid.push(center - r);
    }
    grid.push(center);
    for &r in &right {
        grid.push(center + r);
    }
    grid
}
