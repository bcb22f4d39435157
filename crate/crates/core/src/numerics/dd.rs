//! Double-double helpers for phase reduction.
//!
//! A cavity round-trip phase ω L / c is ~10^7 rad at optical frequencies,
//! so plain f64 carries it with an absolute error of a few 1e-9 rad. That
//! is not good enough to resolve resonance conditions to 1e-10 rad. The
//! product and the reduction mod 2π are therefore done in unevaluated
//! double-double arithmetic (~32 significant digits), which brings the
//! reduced phase down to ~1e-15 rad absolute error.

/// Error-free sum: returns (s, e) with s + e == a + b exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Fast error-free sum, valid when |a| >= |b|.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Error-free product via fused multiply-add.
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = f64::mul_add(a, b, -p);
    (p, e)
}

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

// 2π split into a double-double constant.
const TWO_PI_HI: f64 = 6.283185307179586;
const TWO_PI_LO: f64 = 2.4492935982947064e-16;

impl Dd {
    pub fn new(hi: f64, lo: f64) -> Self {
        let (h, l) = quick_two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    /// Exact product of two f64 values.
    pub fn from_product(a: f64, b: f64) -> Self {
        let (p, e) = two_prod(a, b);
        Dd { hi: p, lo: e }
    }

    pub fn add_f64(self, x: f64) -> Self {
        let (s, e) = two_sum(self.hi, x);
        Dd::new(s, e + self.lo)
    }

    pub fn add(self, other: Dd) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        Dd::new(s, e + self.lo + other.lo)
    }

    pub fn neg(self) -> Self {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn mul_f64(self, x: f64) -> Self {
        let (p, e) = two_prod(self.hi, x);
        Dd::new(p, e + self.lo * x)
    }

    /// Division by a f64 with one Newton correction step.
    pub fn div_f64(self, d: f64) -> Self {
        let q0 = self.hi / d;
        let (p, pe) = two_prod(q0, d);
        let r = ((self.hi - p) - pe) + self.lo;
        let q1 = r / d;
        Dd::new(q0, q1)
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    /// Reduce into (-π, π], accurate to ~1e-15 rad for |phase| up to ~1e9 rad.
    pub fn rem_2pi(self) -> f64 {
        let k = (self.hi / TWO_PI_HI).round();
        let mut r = self
            .add(Dd::from_product(k, TWO_PI_HI).neg())
            .add_f64(-k * TWO_PI_LO);
        // k was rounded on hi alone; one more correction may be needed.
        if r.value() > std::f64::consts::PI {
            r = r
                .add(Dd::from_product(1.0, TWO_PI_HI).neg())
                .add_f64(-TWO_PI_LO);
        } else if r.value() <= -std::f64::consts::PI {
            r = r.add(Dd::new(TWO_PI_HI, TWO_PI_LO));
        }
        r.value()
    }
}

/// (ω·length/c + small) mod 2π reduced into (-π, π].
///
/// `small` collects contributions that are already O(1) rad (medium phase,
/// piezo trim) and need no extended precision.
pub fn reduce_phase(omega: f64, length: f64, speed_of_light: f64, small: f64) -> f64 {
    Dd::from_product(omega, length)
        .div_f64(speed_of_light)
        .add_f64(small)
        .rem_2pi()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::SPEED_OF_LIGHT;

    #[test]
    fn dd_product_is_exact() {
        let a = 1.739_159_144_330_177_3e15;
        let b = 2.45;
        let dd = Dd::from_product(a, b);
        // hi + lo reproduces the exact product to quad precision; the
        // residual checked through fma must vanish.
        assert_eq!(f64::mul_add(a, b, -dd.hi), dd.lo);
    }

    // Reference values computed with mpmath at 60 significant digits:
    //   mod(omega * L / c, 2*pi), reduced into (-pi, pi].
    #[test]
    fn phase_reduction_matches_mpmath() {
        let cases: &[(f64, f64, f64)] = &[
            // (omega, length, expected phase)
            (1.7391591443301773e15, 2.45, -1.6522897294117998),
            (1.7391591443301773e15, 2.4, 1.074224170699868),
            (8.5e14, 3.141592653589793, 2.5421274281240779),
            (2.0e15, 0.061234567890123455, -0.7944545182589036),
        ];
        for &(omega, length, expected) in cases {
            let got = reduce_phase(omega, length, SPEED_OF_LIGHT, 0.0);
            assert!(
                (got - expected).abs() < 1e-12,
                "omega={omega:e} L={length}: got {got}, expected {expected}"
            );
        }
    }

    #[test]
    fn small_offset_shifts_phase_exactly() {
        let omega = 1.7391591443301773e15;
        let base = reduce_phase(omega, 2.45, SPEED_OF_LIGHT, 0.0);
        let shifted = reduce_phase(omega, 2.45, SPEED_OF_LIGHT, 0.25);
        assert!((shifted - base - 0.25).abs() < 1e-14);
    }

    #[test]
    fn reduction_lands_in_principal_interval() {
        for i in 0..2000 {
            let omega = 1.0e15 + 7.3e11 * i as f64;
            let phi = reduce_phase(omega, 2.45, SPEED_OF_LIGHT, 0.0);
            assert!(phi > -std::f64::consts::PI && phi <= std::f64::consts::PI);
        }
    }
}
