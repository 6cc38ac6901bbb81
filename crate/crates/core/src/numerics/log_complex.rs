use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A complex scalar stored as (log-magnitude, phase).
///
/// Quantities of the form `r^α α!^{±τ}` or `e^{|z|²}` overflow doubles long
/// before the truncation orders used here are reached; carrying the log of
/// the magnitude keeps them finite.  `log_mag == -inf` encodes an exact zero
/// (phase is stored as 0 in that case).  Phases are normalized to (-π, π].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogComplex {
    pub log_mag: f64,
    pub phase: f64,
}

fn wrap_phase(p: f64) -> f64 {
    if !p.is_finite() {
        return 0.0;
    }
    if -PI < p && p <= PI {
        return p;
    }
    let mut q = p.rem_euclid(2.0 * PI);
    if q > PI {
        q -= 2.0 * PI;
    }
    q
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        log_mag: f64::NEG_INFINITY,
        phase: 0.0,
    };
    pub const ONE: LogComplex = LogComplex {
        log_mag: 0.0,
        phase: 0.0,
    };

    pub fn new(log_mag: f64, phase: f64) -> Self {
        if log_mag == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        Self {
            log_mag,
            phase: wrap_phase(phase),
        }
    }

    /// A positive real with the given natural log.
    pub fn from_log_mag(log_mag: f64) -> Self {
        Self::new(log_mag, 0.0)
    }

    pub fn from_re(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else if x > 0.0 {
            Self::new(x.ln(), 0.0)
        } else {
            Self::new((-x).ln(), PI)
        }
    }

    pub fn from_complex(c: Complex64) -> Self {
        if c == Complex64::new(0.0, 0.0) {
            return Self::ZERO;
        }
        Self::new(c.norm().ln(), c.arg())
    }

    /// Back to a plain double; overflows to ±inf when out of range.
    pub fn to_complex(self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_mag.exp(), self.phase)
    }

    pub fn is_zero(self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    pub fn mul(self, other: Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.log_mag + other.log_mag, self.phase + other.phase)
    }

    pub fn div(self, other: Self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.log_mag - other.log_mag, self.phase - other.phase)
    }

    /// Multiply by `e^{delta}` (real positive scaling in log form).
    pub fn scale_log(self, delta: f64) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.log_mag + delta, self.phase)
    }

    pub fn conj(self) -> Self {
        Self::new(self.log_mag, -self.phase)
    }

    pub fn neg(self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.log_mag, self.phase + PI)
    }

    pub fn powi(self, n: i32) -> Self {
        if self.is_zero() {
            return if n == 0 { Self::ONE } else { Self::ZERO };
        }
        Self::new(self.log_mag * n as f64, self.phase * n as f64)
    }

    /// Addition by rescaling to the larger magnitude.
    pub fn add(self, other: Self) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (big, small) = if self.log_mag >= other.log_mag {
            (self, other)
        } else {
            (other, self)
        };
        let ratio = Complex64::from_polar(
            (small.log_mag - big.log_mag).exp(),
            small.phase - big.phase,
        );
        let s = Complex64::new(1.0, 0.0) + ratio;
        if s.norm() == 0.0 {
            return Self::ZERO;
        }
        Self::new(big.log_mag + s.norm().ln(), big.phase + s.arg())
    }

    pub fn sum<I: IntoIterator<Item = LogComplex>>(iter: I) -> Self {
        iter.into_iter().fold(Self::ZERO, |acc, t| acc.add(t))
    }

    /// `z^α` for a complex vector, entirely in the log domain.
    pub fn pow_multi(z: &[Complex64], alpha: &[usize]) -> Self {
        debug_assert_eq!(z.len(), alpha.len());
        let mut acc = Self::ONE;
        for (zj, &aj) in z.iter().zip(alpha) {
            acc = acc.mul(Self::from_complex(*zj).powi(aj as i32));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
        (a - b).norm() <= rel * a.norm().max(b.norm()).max(1e-300)
    }

    #[test]
    fn zero_and_one() {
        assert!(LogComplex::ZERO.is_zero());
        assert_eq!(LogComplex::ONE.to_complex(), Complex64::new(1.0, 0.0));
        assert_eq!(LogComplex::from_re(0.0).log_mag, f64::NEG_INFINITY);
        assert_eq!(LogComplex::from_re(0.0).phase, 0.0);
    }

    #[test]
    fn huge_magnitudes_stay_finite() {
        // e^{5000} * e^{-4990} = e^{10}
        let a = LogComplex::from_log_mag(5000.0);
        let b = LogComplex::from_log_mag(-4990.0);
        let p = a.mul(b);
        assert!((p.log_mag - 10.0).abs() < 1e-12);
    }

    #[test]
    fn add_cancellation_goes_to_zero() {
        let a = LogComplex::from_re(3.5);
        let s = a.add(a.neg());
        assert!(s.is_zero() || s.log_mag < a.log_mag - 30.0);
    }

    proptest! {
        // Round-trip against plain doubles while both representations are in
        // range: products to 1e-13 relative, sums likewise away from nearly
        // total cancellation.
        #[test]
        fn mul_matches_complex(re1 in -50.0..50.0f64, im1 in -50.0..50.0f64,
                               re2 in -50.0..50.0f64, im2 in -50.0..50.0f64) {
            let a = Complex64::new(re1, im1);
            let b = Complex64::new(re2, im2);
            prop_assume!(a.norm() > 1e-6 && b.norm() > 1e-6);
            let lhs = LogComplex::from_complex(a).mul(LogComplex::from_complex(b)).to_complex();
            prop_assert!(close(lhs, a * b, 1e-13));
        }

        #[test]
        fn add_matches_complex(re1 in -50.0..50.0f64, im1 in -50.0..50.0f64,
                               re2 in -50.0..50.0f64, im2 in -50.0..50.0f64) {
            let a = Complex64::new(re1, im1);
            let b = Complex64::new(re2, im2);
            prop_assume!((a + b).norm() > 0.1 * (a.norm() + b.norm()) + 1e-9);
            let lhs = LogComplex::from_complex(a).add(LogComplex::from_complex(b)).to_complex();
            prop_assert!(close(lhs, a + b, 1e-13));
        }

        #[test]
        fn phase_stays_normalized(lm in -100.0..100.0f64, ph in -50.0..50.0f64) {
            let v = LogComplex::new(lm, ph);
            prop_assert!(-PI < v.phase && v.phase <= PI);
        }
    }
}
