//! Truncated expansions `F(z) = Σ c(F,α) e_α(z)` in the normalized monomial
//! basis `e_α(z) = z^α/√α!`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{log_factorial, LogComplex, MultiIndex};

/// A finitely supported coefficient map against the normalized basis.
///
/// Coefficients are always stored against `e_α`; raw-monomial coefficients
/// (against `z^α`) are converted on entry/exit by the `√α!` factor.  Keeping
/// a single internal basis removes a whole class of unit bugs.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSeries {
    d: usize,
    truncation: usize,
    coeffs: BTreeMap<MultiIndex, LogComplex>,
}

impl CoefficientSeries {
    pub fn new(d: usize, truncation: usize) -> Self {
        Self {
            d,
            truncation,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Maximum total degree admitted by this series.
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Insert a normalized-basis coefficient; zeros are dropped.
    pub fn set(&mut self, alpha: MultiIndex, c: LogComplex) -> Result<()> {
        if alpha.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: alpha.dim(),
            });
        }
        if alpha.total() > self.truncation {
            return Err(Error::Domain(format!(
                "|α| = {} exceeds truncation {}",
                alpha.total(),
                self.truncation
            )));
        }
        if c.is_zero() {
            self.coeffs.remove(&alpha);
        } else {
            self.coeffs.insert(alpha, c);
        }
        Ok(())
    }

    /// Insert a raw-monomial coefficient (against `z^α`).
    pub fn set_monomial(&mut self, alpha: MultiIndex, c: LogComplex) -> Result<()> {
        let lf = log_factorial(&alpha);
        self.set(alpha, c.scale_log(0.5 * lf))
    }

    /// The coefficient `c(F,α)` (zero when absent).
    pub fn coeff(&self, alpha: &MultiIndex) -> LogComplex {
        self.coeffs.get(alpha).copied().unwrap_or(LogComplex::ZERO)
    }

    /// The raw-monomial coefficient `c(F,α)/√α!`.
    pub fn monomial_coeff(&self, alpha: &MultiIndex) -> LogComplex {
        self.coeff(alpha).scale_log(-0.5 * log_factorial(alpha))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &LogComplex)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support(&self) -> Vec<MultiIndex> {
        self.coeffs.keys().cloned().collect()
    }

    /// Largest total degree present in the support (0 for the empty series).
    pub fn max_degree(&self) -> usize {
        self.coeffs.keys().map(|a| a.total()).max().unwrap_or(0)
    }

    /// Evaluate `Σ c(F,α) z^α/√α!` in the log domain.
    pub fn eval(&self, z: &[Complex64]) -> LogComplex {
        assert_eq!(z.len(), self.d, "evaluation point dimension mismatch");
        LogComplex::sum(self.coeffs.iter().map(|(alpha, c)| {
            c.mul(LogComplex::pow_multi(z, alpha.entries()))
                .scale_log(-0.5 * log_factorial(alpha))
        }))
    }

    /// `Σ |c(F,α)|²` in the log domain (squared ℓ² norm of the coefficients).
    pub fn norm_sq_log(&self) -> f64 {
        LogComplex::sum(
            self.coeffs
                .values()
                .map(|c| LogComplex::from_log_mag(2.0 * c.log_mag)),
        )
        .log_mag
    }

    /// Coefficients along the `j`-th axis ray `α = k e_j`, as `(k, log|c|)`.
    pub fn axis_profile(&self, j: usize) -> Vec<(usize, f64)> {
        self.coeffs
            .iter()
            .filter(|(a, _)| {
                a.entries()
                    .iter()
                    .enumerate()
                    .all(|(i, &v)| i == j || v == 0)
            })
            .map(|(a, c)| (a.get(j), c.log_mag))
            .collect()
    }

    /// Apply a diagonal map `c(F,α) ↦ e^{scale(α)} c(F,α)` in the log domain.
    pub fn map_diagonal<F: Fn(&MultiIndex) -> f64>(&self, scale: F) -> Self {
        let mut out = Self::new(self.d, self.truncation);
        for (alpha, c) in &self.coeffs {
            out.coeffs.insert(alpha.clone(), c.scale_log(scale(alpha)));
        }
        out
    }

    /// Max over the union of supports of `|c_self(α) - c_other(α)|`.
    pub fn max_abs_deviation(&self, other: &Self) -> f64 {
        let mut keys: Vec<&MultiIndex> = self.coeffs.keys().collect();
        keys.extend(other.coeffs.keys());
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|a| {
                (self.coeff(a).to_complex() - other.coeff(a).to_complex()).norm()
            })
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_and_eval_polynomial() {
        // F(z) = 1 + z²/√2  (c_0 = 1, c_2 = 1)
        let mut f = CoefficientSeries::new(1, 4);
        f.set(MultiIndex::d1(0), LogComplex::ONE).unwrap();
        f.set(MultiIndex::d1(2), LogComplex::ONE).unwrap();
        let z = [Complex64::new(2.0, 0.0)];
        let got = f.eval(&z).to_complex();
        let want = Complex64::new(1.0 + 4.0 / 2f64.sqrt(), 0.0);
        assert!((got - want).norm() < 1e-13);
    }

    #[test]
    fn monomial_entry_applies_normalization() {
        // raw coefficient 1 against z³ means c(F,3) = √3! against e_3
        let mut f = CoefficientSeries::new(1, 3);
        f.set_monomial(MultiIndex::d1(3), LogComplex::ONE).unwrap();
        let c = f.coeff(&MultiIndex::d1(3));
        assert!((c.log_mag - 0.5 * 6f64.ln()).abs() < 1e-14);
        let m = f.monomial_coeff(&MultiIndex::d1(3));
        assert!(m.log_mag.abs() < 1e-14);
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut f = CoefficientSeries::new(2, 3);
        f.set(MultiIndex::new(vec![1, 1]).unwrap(), LogComplex::ONE)
            .unwrap();
        f.set(MultiIndex::new(vec![1, 1]).unwrap(), LogComplex::ZERO)
            .unwrap();
        assert!(f.is_empty());
    }

    #[test]
    fn truncation_and_dimension_enforced() {
        let mut f = CoefficientSeries::new(2, 3);
        assert!(f.set(MultiIndex::d1(1), LogComplex::ONE).is_err());
        assert!(f
            .set(MultiIndex::new(vec![2, 2]).unwrap(), LogComplex::ONE)
            .is_err());
    }

    #[test]
    fn eval_survives_huge_degrees() {
        // single term z^400/√400! at |z| = 30 is astronomically large but
        // finite in the log domain
        let mut f = CoefficientSeries::new(1, 400);
        f.set(MultiIndex::d1(400), LogComplex::ONE).unwrap();
        let v = f.eval(&[Complex64::new(30.0, 0.0)]);
        let want = 400.0 * 30f64.ln() - 0.5 * crate::numerics::log_factorial_1d(400);
        assert!((v.log_mag - want).abs() < 1e-9);
    }
}
