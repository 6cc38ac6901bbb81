//! Growth-class analysis of coefficient series: the coefficient-bound
//! templates, radius maps and order dualities behind the characterization
//! theorems, the reconstruction operator, and executable theorem verifiers.

mod classify;
mod verify;

pub use classify::{classify, fit_flat_radius, growth_to_coeff, sup_stabilizes};
pub use verify::{verify_theorem, Implication, TheoremId, TheoremParams, TheoremReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{log_factorial, MultiIndex};
use crate::weights::RadiusVector;

// The reconstruction operator is the inverse diagonal of the projection and
// shares its normalization table.
pub use crate::projection::reconstruct;

/// A classified growth class with fitted radii and fit quality.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowthSpec {
    pub class: GrowthClass,
    /// Fitted radius per axis (growth-majorant radius, geometric rate for
    /// the `s = ½` class, unused for polynomials).
    pub radius: Vec<f64>,
    /// RMS residual of the winning fit in log-coefficient space.
    pub residual: f64,
    /// Roumieu/Beurling evidence from split-window radius fits, where
    /// decidable.
    pub side: Option<Side>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GrowthClass {
    Flat { sigma: f64 },
    LogPower { s: f64 },
    Geometric,
    Polynomial { degree: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Roumieu,
    Beurling,
}

/// Flat-order coefficient template
/// `(2r/(2τ+1))^{((2τ+1)/2)·α} α!^{-τ}` as a natural log.
pub fn coeff_bound_flat(tau: f64, r: &RadiusVector, alpha: &MultiIndex) -> f64 {
    assert!(tau > -0.5, "coeff_bound_flat requires tau > -1/2");
    assert_eq!(r.dim(), alpha.dim(), "dimension mismatch");
    let m = 2.0 * tau + 1.0;
    let geom: f64 = alpha
        .entries()
        .iter()
        .zip(r.entries())
        .map(|(&k, &rj)| 0.5 * m * k as f64 * (2.0 * rj / m).ln())
        .sum();
    geom - tau * log_factorial(alpha)
}

/// Log-order coefficient template `e^{-Σ R_j α_j^{1/(2s)}}` with
/// `R = s((1-2s)/r)^{(1-2s)/(2s)}`, as a natural log.
pub fn coeff_bound_log(s: f64, r: &RadiusVector, alpha: &MultiIndex) -> Result<f64> {
    if !(0.0 < s && s < 0.5) {
        return Err(Error::Domain(format!(
            "coeff_bound_log requires 0 < s < 1/2, got {s}"
        )));
    }
    if r.dim() != alpha.dim() {
        return Err(Error::DimensionMismatch {
            expected: r.dim(),
            got: alpha.dim(),
        });
    }
    Ok(-alpha
        .entries()
        .iter()
        .zip(r.entries())
        .map(|(&k, &rj)| log_class_rate(s, rj) * (k as f64).powf(1.0 / (2.0 * s)))
        .sum::<f64>())
}

/// `R = s((1-2s)/r)^{(1-2s)/(2s)}`: growth radius → coefficient decay rate
/// for the log-power classes.
pub fn log_class_rate(s: f64, r: f64) -> f64 {
    s * ((1.0 - 2.0 * s) / r).powf((1.0 - 2.0 * s) / (2.0 * s))
}

/// Inverse of [`log_class_rate`]: `r = (1-2s)(s/R)^{2s/(1-2s)}`.
pub fn log_class_rate_inv(s: f64, big_r: f64) -> f64 {
    (1.0 - 2.0 * s) * (s / big_r).powf(2.0 * s / (1.0 - 2.0 * s))
}

/// Radius map for the flat family:
/// `R₀ = ((2τ-1)/2) (2r₀/(2τ+1))^{(2τ+1)/(2τ-1)} t^{-4/(2τ-1)}` per axis.
pub fn radius_map_flat(tau: f64, r0: &RadiusVector, t: &RadiusVector) -> Result<RadiusVector> {
    if !(tau > 0.5) {
        return Err(Error::Domain(format!(
            "radius_map_flat requires tau > 1/2, got {tau}"
        )));
    }
    let m = 2.0 * tau + 1.0;
    let mm = 2.0 * tau - 1.0;
    RadiusVector::new(
        r0.entries()
            .iter()
            .zip(t.entries())
            .map(|(&r0j, &tj)| {
                0.5 * mm * (2.0 * r0j / m).powf(m / mm) * tj.powf(-4.0 / mm)
            })
            .collect(),
    )
}

/// The dual order: `σ₀ = σ/(2σ-1)` on `(½,1)` and `σ₀ = σ/(1-2σ)` on `(0,½)`.
pub fn sigma_dual(sigma: f64) -> Result<f64> {
    if !(0.0 < sigma && sigma < 1.0) || sigma == 0.5 {
        return Err(Error::Domain(format!(
            "sigma_dual requires sigma in (0,1) \\ {{1/2}}, got {sigma}"
        )));
    }
    if sigma > 0.5 {
        Ok(sigma / (2.0 * sigma - 1.0))
    } else {
        Ok(sigma / (1.0 - 2.0 * sigma))
    }
}

/// Closed-form maximizer `t_{r,α} = exp((α/(θr))^{(1-2s)/(2s)})`,
/// `θ = 1/(1-2s)`, of `g(t) = e^{-r(log t)^θ} t^α` over `t ≥ 1`.
pub fn log_weight_maximizer(r: f64, s: f64, alpha: usize) -> Result<f64> {
    if !(r > 0.0) || !(0.0 < s && s < 0.5) || alpha == 0 {
        return Err(Error::Domain(format!(
            "log_weight_maximizer requires r > 0, 0 < s < 1/2, alpha >= 1 (r={r}, s={s}, alpha={alpha})"
        )));
    }
    let theta = 1.0 / (1.0 - 2.0 * s);
    Ok(((alpha as f64 / (theta * r)).powf((1.0 - 2.0 * s) / (2.0 * s))).exp())
}

/// Build the flat-template series `c(F,α) = (2r₀/(2τ+1))^{((2τ+1)/2)α} α!^{-τ}`,
/// `|α| ≤ n`, `d = 1`.
pub fn template_series_flat(tau: f64, r0: f64, n: usize) -> crate::CoefficientSeries {
    let rv = RadiusVector::uniform(1, r0).expect("positive radius");
    let mut f = crate::CoefficientSeries::new(1, n);
    for k in 0..=n {
        let alpha = MultiIndex::d1(k);
        let l = coeff_bound_flat(tau, &rv, &alpha);
        f.set(alpha, crate::LogComplex::from_log_mag(l)).unwrap();
    }
    f
}

/// Build the log-template series `c(F,α) = e^{-R α^{1/(2s)}}`, `R` from
/// `(s, r₀)`, `|α| ≤ n`, `d = 1`.
pub fn template_series_log(s: f64, r0: f64, n: usize) -> Result<crate::CoefficientSeries> {
    let rv = RadiusVector::uniform(1, r0)?;
    let mut f = crate::CoefficientSeries::new(1, n);
    for k in 0..=n {
        let alpha = MultiIndex::d1(k);
        let l = coeff_bound_log(s, &rv, &alpha)?;
        f.set(alpha, crate::LogComplex::from_log_mag(l))?;
    }
    Ok(f)
}
