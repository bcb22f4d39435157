//! Bracketing and bisection root finding on scalar functions.

/// A sign-change bracket found by a dense scan.
#[derive(Debug, Clone, Copy)]
pub struct Bracket {
    pub a: f64,
    pub b: f64,
    pub fa: f64,
    pub fb: f64,
}

/// Scan f on a uniform grid of n+1 points and return every sign-change bracket.
///
/// Points where f is exactly zero are returned as degenerate brackets.
pub fn scan_sign_changes<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, n: usize) -> Vec<Bracket> {
    assert!(n >= 1 && hi > lo);
    let step = (hi - lo) / n as f64;
    let mut out = Vec::new();
    let mut x_prev = lo;
    let mut f_prev = f(lo);
    for i in 1..=n {
        let x = if i == n { hi } else { lo + step * i as f64 };
        let fx = f(x);
        if f_prev == 0.0 {
            out.push(Bracket {
                a: x_prev,
                b: x_prev,
                fa: 0.0,
                fb: 0.0,
            });
        } else if f_prev * fx < 0.0 {
            out.push(Bracket {
                a: x_prev,
                b: x,
                fa: f_prev,
                fb: fx,
            });
        }
        x_prev = x;
        f_prev = fx;
    }
    if f_prev == 0.0 {
        out.push(Bracket {
            a: x_prev,
            b: x_prev,
            fa: 0.0,
            fb: 0.0,
        });
    }
    out
}

/// Bisection refined until the interval shrinks below `xtol` (absolute)
/// or |f| drops below `ftol`. Requires fa·fb <= 0.
pub fn bisect<F: Fn(f64) -> f64>(f: &F, bracket: Bracket, xtol: f64, ftol: f64) -> f64 {
    let Bracket {
        mut a,
        mut b,
        mut fa,
        fb,
    } = bracket;
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    debug_assert!(fa * fb < 0.0);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= xtol {
            return m;
        }
        let fm = f(m);
        if fm == 0.0 || fm.abs() <= ftol {
            return m;
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cubic_roots() {
        let f = |x: f64| (x - 1.0) * (x + 2.0) * (x - 3.5);
        let brackets = scan_sign_changes(&f, -5.0, 5.0, 1000);
        assert_eq!(brackets.len(), 3);
        let roots: Vec<f64> = brackets
            .into_iter()
            .map(|br| bisect(&f, br, 1e-14, 0.0))
            .collect();
        for (root, expected) in roots.iter().zip([-2.0, 1.0, 3.5]) {
            assert!((root - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn exact_zero_at_grid_point() {
        let f = |x: f64| x;
        let brackets = scan_sign_changes(&f, -1.0, 1.0, 2);
        assert_eq!(brackets.len(), 1);
        assert_eq!(bisect(&f, brackets[0], 1e-15, 0.0), 0.0);
    }
}
