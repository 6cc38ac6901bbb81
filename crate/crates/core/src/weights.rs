//! Coefficient weight sequences, growth majorants, and the radial-weight →
//! coefficient-weight transform.
//!
//! Orders live in the extended index set: plain real `s ≥ 0` together with
//! the flat orders `♭_σ`, ordered by `s₁ < ♭_σ < s₂` iff `s₁ < ½ ≤ s₂` and
//! `♭_{σ₁} < ♭_{σ₂}` iff `σ₁ < σ₂`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{
    integrate_1d, log_factorial, log_factorial_1d, log_gamma, MultiIndex, QuadratureSpec,
};

/// Order parameter: real `s ≥ 0` or flat `♭_σ` with `σ > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OrderParam {
    Real(f64),
    Flat(f64),
}

impl OrderParam {
    pub fn validate(&self) -> Result<()> {
        match *self {
            OrderParam::Real(s) if s >= 0.0 && s.is_finite() => Ok(()),
            OrderParam::Flat(sigma) if sigma > 0.0 && sigma.is_finite() => Ok(()),
            _ => Err(Error::Domain(format!("invalid order parameter {self}"))),
        }
    }

    /// Extended-order comparison.
    pub fn compare(&self, other: &OrderParam) -> Option<Ordering> {
        match (self, other) {
            (OrderParam::Real(a), OrderParam::Real(b)) => a.partial_cmp(b),
            (OrderParam::Flat(a), OrderParam::Flat(b)) => a.partial_cmp(b),
            // s < ♭_σ iff s < 1/2; ♭_σ < s iff 1/2 ≤ s
            (OrderParam::Real(s), OrderParam::Flat(_)) => {
                if *s < 0.5 {
                    Some(Ordering::Less)
                } else {
                    Some(Ordering::Greater)
                }
            }
            (OrderParam::Flat(_), OrderParam::Real(s)) => {
                if *s < 0.5 {
                    Some(Ordering::Greater)
                } else {
                    Some(Ordering::Less)
                }
            }
        }
    }
}

impl fmt::Display for OrderParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderParam::Real(s) => write!(f, "s={s}"),
            OrderParam::Flat(sigma) => write!(f, "flat(sigma={sigma})"),
        }
    }
}

/// A vector of strictly positive radii, one per axis.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusVector(Vec<f64>);

impl RadiusVector {
    pub fn new(r: Vec<f64>) -> Result<Self> {
        if r.is_empty() || r.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
            return Err(Error::Domain(
                "radius vector entries must be strictly positive".into(),
            ));
        }
        Ok(Self(r))
    }

    pub fn uniform(d: usize, r: f64) -> Result<Self> {
        Self::new(vec![r; d])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, j: usize) -> f64 {
        self.0[j]
    }

    /// Componentwise strict order `self < other`.
    pub fn lt(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a < b)
    }

    pub fn scale(&self, lambda: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|&x| x * lambda).collect())
    }
}

fn check_dim(d: usize, got: usize) -> Result<()> {
    if d != got {
        Err(Error::DimensionMismatch { expected: d, got })
    } else {
        Ok(())
    }
}

/// Weight sequence `ϑ_{r,s}(α)` as a natural log.
///
/// `e^{-Σ α_j^{1/(2s)}/r_j}` for real `s ∉ {0, ½}`, `r^α α!^{-1/(2σ)}` for
/// `♭_σ`, and `r^α` for `s = ½`.
pub fn vartheta(order: &OrderParam, r: &RadiusVector, alpha: &MultiIndex) -> Result<f64> {
    vartheta_impl(order, r, alpha, false)
}

/// Dual weight sequence `ϑ'_{r,s}(α)` (reciprocal exponents) as a natural log.
pub fn vartheta_dual(order: &OrderParam, r: &RadiusVector, alpha: &MultiIndex) -> Result<f64> {
    vartheta_impl(order, r, alpha, true)
}

fn vartheta_impl(
    order: &OrderParam,
    r: &RadiusVector,
    alpha: &MultiIndex,
    dual: bool,
) -> Result<f64> {
    order.validate()?;
    check_dim(r.dim(), alpha.dim())?;
    let sign = if dual { 1.0 } else { -1.0 };
    match *order {
        OrderParam::Real(s) if s == 0.5 => Ok(alpha
            .entries()
            .iter()
            .zip(r.entries())
            .map(|(&a, &rj)| a as f64 * rj.ln())
            .sum()),
        OrderParam::Real(s) => {
            if s == 0.0 {
                return Err(Error::Domain(
                    "weight sequence is undefined at s = 0".into(),
                ));
            }
            Ok(sign
                * alpha
                    .entries()
                    .iter()
                    .zip(r.entries())
                    .map(|(&a, &rj)| (a as f64).powf(1.0 / (2.0 * s)) / rj)
                    .sum::<f64>())
        }
        OrderParam::Flat(sigma) => {
            let log_r_alpha: f64 = alpha
                .entries()
                .iter()
                .zip(r.entries())
                .map(|(&a, &rj)| a as f64 * rj.ln())
                .sum();
            Ok(log_r_alpha + sign * log_factorial(alpha) / (2.0 * sigma))
        }
    }
}

/// The japanese bracket `⟨z⟩ = (1 + |z|²)^{1/2}`.
fn bracket(z: Complex64) -> f64 {
    (1.0 + z.norm_sqr()).sqrt()
}

/// Growth majorant `M_{j,r,s}(z)` (or the `M⁰` variant).
///
/// Five-branch definition; branches that do not exist for the given `(j,
/// order)` pair produce [`Error::UnsupportedBranch`].
pub fn growth_majorant(
    j: u8,
    zero_variant: bool,
    order: &OrderParam,
    r: &RadiusVector,
    z: &[Complex64],
) -> Result<f64> {
    order.validate()?;
    check_dim(r.dim(), z.len())?;
    let sum_pow = |p: f64| -> f64 {
        z.iter()
            .zip(r.entries())
            .map(|(&zj, &rj)| rj * zj.norm().powf(p))
            .sum()
    };
    let half_norm_sq = 0.5 * z.iter().map(|zj| zj.norm_sqr()).sum::<f64>();
    match (j, *order) {
        (_, OrderParam::Real(s)) if zero_variant && s == 0.5 => Ok(sum_pow(2.0)),
        (1, OrderParam::Real(s)) if s < 0.5 => Ok(z
            .iter()
            .zip(r.entries())
            .map(|(&zj, &rj)| rj * bracket(zj).ln().powf(1.0 / (1.0 - 2.0 * s)))
            .sum()),
        (1, OrderParam::Flat(sigma)) => Ok(sum_pow(2.0 * sigma / (sigma + 1.0))),
        (1, OrderParam::Real(s)) => Ok(half_norm_sq - sum_pow(1.0 / s)),
        (2, OrderParam::Flat(sigma)) if sigma > 1.0 => Ok(sum_pow(2.0 * sigma / (sigma - 1.0))),
        (2, OrderParam::Real(s)) if s >= 0.5 => Ok(half_norm_sq + sum_pow(1.0 / s)),
        (j, order) => Err(Error::UnsupportedBranch {
            j,
            order: order.to_string(),
        }),
    }
}

/// One axis of a radial weight profile `ω₀`.
#[derive(Clone)]
pub enum AxisProfile {
    /// `ω₀(u) = exp(-rate · u^exponent)`.
    ExpPower { rate: f64, exponent: f64 },
    /// Tabulated nonnegative values on `[0, u_max]`, linearly interpolated,
    /// zero beyond the last knot.
    Table { knots: Vec<(f64, f64)> },
}

impl AxisProfile {
    fn eval(&self, u: f64) -> f64 {
        match self {
            AxisProfile::ExpPower { rate, exponent } => (-rate * u.powf(*exponent)).exp(),
            AxisProfile::Table { knots } => {
                if knots.is_empty() || u < knots[0].0 || u > knots[knots.len() - 1].0 {
                    return 0.0;
                }
                let i = knots.partition_point(|&(x, _)| x <= u).saturating_sub(1);
                if i + 1 >= knots.len() {
                    return knots[i].1;
                }
                let (x0, y0) = knots[i];
                let (x1, y1) = knots[i + 1];
                if x1 == x0 {
                    y0
                } else {
                    y0 + (y1 - y0) * (u - x0) / (x1 - x0)
                }
            }
        }
    }

    /// Log of `ω₀(u)² u^α`, -inf where the profile vanishes.
    fn log_integrand(&self, u: f64, alpha: usize) -> f64 {
        if u <= 0.0 {
            return if alpha == 0 { self.log_sq(0.0) } else { f64::NEG_INFINITY };
        }
        self.log_sq(u) + alpha as f64 * u.ln()
    }

    fn log_sq(&self, u: f64) -> f64 {
        match self {
            AxisProfile::ExpPower { rate, exponent } => -2.0 * rate * u.powf(*exponent),
            AxisProfile::Table { .. } => {
                let v = self.eval(u);
                if v > 0.0 {
                    2.0 * v.ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    /// Upper integration limit: where the integrand has dropped 46 e-folds
    /// below its peak (beyond the table support for tabulated profiles).
    fn upper_limit(&self, alpha: usize) -> f64 {
        match self {
            AxisProfile::ExpPower { rate, exponent } => {
                let peak = if alpha == 0 {
                    1.0
                } else {
                    (alpha as f64 / (2.0 * rate * exponent))
                        .powf(1.0 / exponent)
                        .max(1.0)
                };
                let peak_val = self.log_integrand(peak, alpha);
                let mut u = peak;
                while self.log_integrand(u, alpha) > peak_val - 46.0 {
                    u *= 2.0;
                    if u > 1e12 {
                        break;
                    }
                }
                u
            }
            AxisProfile::Table { knots } => knots.last().map(|&(x, _)| x).unwrap_or(0.0),
        }
    }
}

/// A radial weight `ω₀` on `ℝ₊^d`: tensor products of per-axis profiles, or
/// a joint callable for `d ≤ 2`.
#[derive(Clone)]
pub enum RadialProfile {
    Tensor(Vec<AxisProfile>),
    Joint {
        d: usize,
        /// Upper support bound per axis.
        support: Vec<f64>,
        f: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    },
}

impl RadialProfile {
    pub fn dim(&self) -> usize {
        match self {
            RadialProfile::Tensor(axes) => axes.len(),
            RadialProfile::Joint { d, .. } => *d,
        }
    }
}

/// One-axis transform `ϑ_j(k) = ((1/k!) ∫_0^∞ ω₀(u)² u^k du)^{1/2}` as a log.
fn weight_axis_log(profile: &AxisProfile, k: usize, spec: &QuadratureSpec) -> Result<f64> {
    let upper = profile.upper_limit(k);
    if upper <= 0.0 {
        return Err(Error::DegenerateCutoff);
    }
    // scale the integrand by its peak so the quadrature runs near unit size
    let n_scan = 512;
    let mut peak = f64::NEG_INFINITY;
    for i in 0..=n_scan {
        let u = upper * i as f64 / n_scan as f64;
        peak = peak.max(profile.log_integrand(u, k));
    }
    if peak == f64::NEG_INFINITY {
        return Err(Error::DegenerateCutoff);
    }
    let (val, _err) = integrate_1d(
        |u| {
            let l = profile.log_integrand(u, k);
            if l == f64::NEG_INFINITY {
                0.0
            } else {
                (l - peak).exp()
            }
        },
        0.0,
        upper,
        spec,
    )?;
    if !(val > 0.0) {
        return Err(Error::DegenerateCutoff);
    }
    Ok(0.5 * (peak + val.ln() - log_factorial_1d(k)))
}

/// The radial-weight → coefficient-weight transform
/// `ϑ(α) = ((1/α!) ∫ ω₀(u)² u^α du)^{1/2}`, returned as a natural log.
///
/// Tensor profiles split into per-axis 1D quadratures; joint profiles
/// (`d ≤ 2`) are integrated by nested quadrature.
pub fn weight_from_radial(
    profile: &RadialProfile,
    alpha: &MultiIndex,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_dim(profile.dim(), alpha.dim())?;
    match profile {
        RadialProfile::Tensor(axes) => {
            let mut total = 0.0;
            for (axis, &k) in axes.iter().zip(alpha.entries()) {
                total += weight_axis_log(axis, k, spec)?;
            }
            Ok(total)
        }
        RadialProfile::Joint { d, support, f } => {
            if *d > 2 {
                return Err(Error::Unsupported(
                    "joint radial profiles are limited to d <= 2".into(),
                ));
            }
            if *d == 1 {
                let fa = f.clone();
                let a0 = alpha.get(0);
                let up = support[0];
                let inner = move |u: f64| {
                    let w = fa(&[u]);
                    w * w * u.powi(a0 as i32)
                };
                let (val, _) = integrate_1d(inner, 0.0, up, spec)?;
                if !(val > 0.0) {
                    return Err(Error::DegenerateCutoff);
                }
                return Ok(0.5 * (val.ln() - log_factorial(alpha)));
            }
            let (a0, a1) = (alpha.get(0), alpha.get(1));
            let (u0, u1) = (support[0], support[1]);
            let outer = |x: f64| -> f64 {
                let fa = f.clone();
                let inner = move |y: f64| {
                    let w = fa(&[x, y]);
                    w * w * x.powi(a0 as i32) * y.powi(a1 as i32)
                };
                integrate_1d(inner, 0.0, u1, spec).map(|(v, _)| v).unwrap_or(f64::NAN)
            };
            let (val, _) = integrate_1d(outer, 0.0, u0, spec)?;
            if !(val > 0.0) || !val.is_finite() {
                return Err(Error::DegenerateCutoff);
            }
            Ok(0.5 * (val.ln() - log_factorial(alpha)))
        }
    }
}

/// Closed form of [`weight_from_radial`] for the flat-order profile
/// `ω₀(u)² = e^{-2 r u^{1/(2τ+1)}}` per axis:
/// `ϑ_r(α) = ((2τ+1) (2r)^{-(2τ+1)(α+1)} Γ((2τ+1)(α+1))/α!)^{1/2}`,
/// returned as a natural log.
pub fn vartheta_flat_l2(tau: f64, r: &RadiusVector, alpha: &MultiIndex) -> f64 {
    assert!(tau > -0.5, "vartheta_flat_l2 requires tau > -1/2");
    assert_eq!(r.dim(), alpha.dim(), "dimension mismatch");
    let m = 2.0 * tau + 1.0;
    let mut total = 0.0;
    for (&k, &rj) in alpha.entries().iter().zip(r.entries()) {
        let a1 = k as f64 + 1.0;
        let lg = log_gamma(m * a1).expect("m(α+1) > 0");
        total += 0.5 * (m.ln() - m * a1 * (2.0 * rj).ln() + lg - log_factorial_1d(k));
    }
    total
}

/// The flat-order profile generating [`vartheta_flat_l2`] through
/// [`weight_from_radial`].
pub fn flat_profile(tau: f64, r: &RadiusVector) -> RadialProfile {
    let m = 2.0 * tau + 1.0;
    RadialProfile::Tensor(
        r.entries()
            .iter()
            .map(|&rj| AxisProfile::ExpPower {
                rate: rj,
                exponent: 1.0 / m,
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::multi_indices;
    use proptest::prelude::*;

    fn mi(v: Vec<usize>) -> MultiIndex {
        MultiIndex::new(v).unwrap()
    }

    #[test]
    fn order_comparisons() {
        let s1 = OrderParam::Real(0.3);
        let s2 = OrderParam::Real(0.5);
        let f1 = OrderParam::Flat(1.0);
        let f2 = OrderParam::Flat(2.0);
        assert_eq!(s1.compare(&f1), Some(Ordering::Less));
        assert_eq!(f1.compare(&s2), Some(Ordering::Less));
        assert_eq!(f1.compare(&f2), Some(Ordering::Less));
        assert_eq!(s2.compare(&f2), Some(Ordering::Greater));
        assert!(OrderParam::Flat(-1.0).validate().is_err());
    }

    #[test]
    fn vartheta_flat_examples() {
        let r1 = RadiusVector::uniform(1, 1.0).unwrap();
        let v = vartheta(&OrderParam::Flat(1.0), &r1, &mi(vec![0])).unwrap();
        assert!(v.abs() < 1e-14);
        // σ=1, r=2, α=3: 2³ (3!)^{-1/2}
        let r2 = RadiusVector::uniform(1, 2.0).unwrap();
        let v = vartheta(&OrderParam::Flat(1.0), &r2, &mi(vec![3])).unwrap();
        let want = (8.0 / 6f64.sqrt()).ln();
        assert!((v - want).abs() < 1e-13);
        // s=1/4, α=4: e^{-16}
        let v = vartheta(&OrderParam::Real(0.25), &r1, &mi(vec![4])).unwrap();
        assert!((v + 16.0).abs() < 1e-12);
        // dual at σ=1, r=1, α=2: √2!
        let v = vartheta_dual(&OrderParam::Flat(1.0), &r1, &mi(vec![2])).unwrap();
        assert!((v - 0.5 * 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn vartheta_dimension_mismatch() {
        let r = RadiusVector::uniform(2, 1.0).unwrap();
        assert!(vartheta(&OrderParam::Flat(1.0), &r, &mi(vec![1])).is_err());
    }

    #[test]
    fn majorant_examples() {
        let r3 = RadiusVector::uniform(1, 3.0).unwrap();
        let z = [Complex64::new(2.0, 0.0)];
        // σ=1: exponent 2σ/(σ+1) = 1, so M = 3·2 = 6
        let m = growth_majorant(1, false, &OrderParam::Flat(1.0), &r3, &z).unwrap();
        assert!((m - 6.0).abs() < 1e-13);
        // |z| = 0 gives 0
        let m0 = growth_majorant(
            1,
            false,
            &OrderParam::Flat(1.0),
            &RadiusVector::uniform(1, 1.0).unwrap(),
            &[Complex64::new(0.0, 0.0)],
        )
        .unwrap();
        assert_eq!(m0, 0.0);
        // s=1/4, ⟨z⟩ = e: (log e)^{1/(1-2s)} = 1
        let ze = (std::f64::consts::E.powi(2) - 1.0).sqrt();
        let m = growth_majorant(
            1,
            false,
            &OrderParam::Real(0.25),
            &RadiusVector::uniform(1, 1.0).unwrap(),
            &[Complex64::new(ze, 0.0)],
        )
        .unwrap();
        assert!((m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn majorant_missing_branches() {
        let r = RadiusVector::uniform(1, 1.0).unwrap();
        let z = [Complex64::new(1.0, 0.0)];
        // M_2 is undefined for ♭_σ with σ ≤ 1 and for real s < 1/2
        assert!(growth_majorant(2, false, &OrderParam::Flat(1.0), &r, &z).is_err());
        assert!(growth_majorant(2, false, &OrderParam::Real(0.25), &r, &z).is_err());
        assert!(growth_majorant(2, false, &OrderParam::Flat(2.0), &r, &z).is_ok());
        assert!(growth_majorant(2, false, &OrderParam::Real(0.75), &r, &z).is_ok());
        // M⁰ at s = 1/2 switches to r|z|²
        let m = growth_majorant(1, true, &OrderParam::Real(0.5), &r, &[Complex64::new(2.0, 0.0)])
            .unwrap();
        assert!((m - 4.0).abs() < 1e-13);
    }

    #[test]
    fn weight_from_radial_exponential_profile() {
        // ω₀(u) = e^{-u} on every axis, α = 0: ϑ(0) = (∫ e^{-2u} du)^{d/2} = 2^{-d/2}
        let spec = QuadratureSpec::default();
        for d in 1..=2usize {
            let profile = RadialProfile::Tensor(vec![
                AxisProfile::ExpPower {
                    rate: 1.0,
                    exponent: 1.0
                };
                d
            ]);
            let v = weight_from_radial(&profile, &MultiIndex::zeros(d), &spec).unwrap();
            let want = -(d as f64) * 0.5 * 2f64.ln();
            assert!((v - want).abs() < 1e-11, "d={d}: {v} vs {want}");
        }
    }

    #[test]
    fn weight_from_radial_matches_closed_form() {
        // quadrature route vs the closed-form flat profile, several (τ, r, α)
        let spec = QuadratureSpec::default();
        for &(tau, r, k) in &[(0.5, 1.0, 0usize), (0.5, 2.0, 7), (1.0, 0.7, 3), (2.0, 1.3, 12)] {
            let rv = RadiusVector::uniform(1, r).unwrap();
            let profile = flat_profile(tau, &rv);
            let quad = weight_from_radial(&profile, &MultiIndex::d1(k), &spec).unwrap();
            let closed = vartheta_flat_l2(tau, &rv, &MultiIndex::d1(k));
            assert!(
                (quad - closed).abs() < 1e-10,
                "tau={tau} r={r} k={k}: {quad} vs {closed}"
            );
        }
    }

    #[test]
    fn tensor_weight_factorizes() {
        // d=2 tensor profile equals the product of its 1D factors and the
        // joint 2D quadrature (Fubini route)
        let spec = QuadratureSpec::default();
        let ax0 = AxisProfile::ExpPower {
            rate: 1.0,
            exponent: 1.0,
        };
        let ax1 = AxisProfile::ExpPower {
            rate: 0.5,
            exponent: 1.0,
        };
        let tensor = RadialProfile::Tensor(vec![ax0.clone(), ax1.clone()]);
        let alpha = mi(vec![2, 3]);
        let v2 = weight_from_radial(&tensor, &alpha, &spec).unwrap();
        let v1a = weight_from_radial(&RadialProfile::Tensor(vec![ax0]), &MultiIndex::d1(2), &spec)
            .unwrap();
        let v1b = weight_from_radial(&RadialProfile::Tensor(vec![ax1]), &MultiIndex::d1(3), &spec)
            .unwrap();
        assert!((v2 - (v1a + v1b)).abs() < 1e-10);

        // joint quadrature of the same product profile
        let joint = RadialProfile::Joint {
            d: 2,
            support: vec![60.0, 90.0],
            f: Arc::new(|u: &[f64]| (-u[0] - 0.5 * u[1]).exp()),
        };
        let vj = weight_from_radial(&joint, &alpha, &spec).unwrap();
        assert!((vj - v2).abs() < 1e-9, "{vj} vs {v2}");
    }

    #[test]
    fn tabulated_profile_integrates() {
        // triangle profile on [0, 2] vs exact piecewise integral at α = 0:
        // ∫ (1 - u/2)² du = 2/3
        let spec = QuadratureSpec::default();
        let knots: Vec<(f64, f64)> = (0..=200)
            .map(|i| {
                let u = 2.0 * i as f64 / 200.0;
                (u, 1.0 - u / 2.0)
            })
            .collect();
        let profile = RadialProfile::Tensor(vec![AxisProfile::Table { knots }]);
        let v = weight_from_radial(&profile, &MultiIndex::d1(0), &spec).unwrap();
        assert!((v - 0.5 * (2.0f64 / 3.0).ln()).abs() < 1e-6);
    }

    #[test]
    fn flat_l2_monotone_decreasing_in_r() {
        let alpha = MultiIndex::d1(4);
        let mut prev = f64::INFINITY;
        for &r in &[0.5, 0.8, 1.0, 1.7, 3.0] {
            let v = vartheta_flat_l2(0.5, &RadiusVector::uniform(1, r).unwrap(), &alpha);
            assert!(v < prev, "not strictly decreasing at r={r}");
            prev = v;
        }
    }

    #[test]
    fn flat_l2_dominates_gaussian_coefficients() {
        // for fixed r, ρ: ρ^{|α|}/√α! ≤ K ϑ_r(α) over α ≤ 200, with the
        // log-gap eventually decreasing (the sup is attained early)
        for &(tau, r, rho) in &[(0.5, 1.0, 2.0f64), (1.0, 2.0, 5.0)] {
            let rv = RadiusVector::uniform(1, r).unwrap();
            let gaps: Vec<f64> = (0..=200)
                .map(|k| {
                    let lhs = k as f64 * rho.ln() - 0.5 * log_factorial_1d(k);
                    lhs - vartheta_flat_l2(tau, &rv, &MultiIndex::d1(k))
                })
                .collect();
            let max_gap = gaps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert!(max_gap.is_finite());
            let argmax = gaps.iter().position(|&g| g == max_gap).unwrap();
            assert!(argmax < 120, "sup not attained early: argmax={argmax}");
            assert!(gaps[200] < gaps[120]);
        }
    }

    proptest! {
        // ♭_σ product law: ϑ_{r,♭σ}(α) ϑ'_{r',♭σ}(α) = (r r')^α exactly in
        // the log domain
        #[test]
        fn flat_product_law(sigma in 0.2..4.0f64, r in 0.1..5.0f64, rp in 0.1..5.0f64, k in 0usize..80) {
            let order = OrderParam::Flat(sigma);
            let alpha = MultiIndex::d1(k);
            let a = vartheta(&order, &RadiusVector::uniform(1, r).unwrap(), &alpha).unwrap();
            let b = vartheta_dual(&order, &RadiusVector::uniform(1, rp).unwrap(), &alpha).unwrap();
            let want = k as f64 * (r.ln() + rp.ln());
            prop_assert!((a + b - want).abs() <= 1e-10 * want.abs().max(1.0));
        }

        #[test]
        fn vartheta_consistent_over_dims(sigma in 0.3..3.0f64, k1 in 0usize..30, k2 in 0usize..30) {
            // tensor structure: ϑ over d=2 equals the product of axes
            let order = OrderParam::Flat(sigma);
            let r2 = RadiusVector::new(vec![1.3, 0.7]).unwrap();
            let v = vartheta(&order, &r2, &mi(vec![k1, k2])).unwrap();
            let va = vartheta(&order, &RadiusVector::uniform(1, 1.3).unwrap(), &MultiIndex::d1(k1)).unwrap();
            let vb = vartheta(&order, &RadiusVector::uniform(1, 0.7).unwrap(), &MultiIndex::d1(k2)).unwrap();
            prop_assert!((v - va - vb).abs() < 1e-10);
        }
    }

    #[test]
    fn vartheta_condition_for_many_alphas() {
        // sanity across the d=2 truncation grid: every weight is finite
        let order = OrderParam::Flat(1.0);
        let r = RadiusVector::uniform(2, 1.5).unwrap();
        for alpha in multi_indices(2, 12) {
            assert!(vartheta(&order, &r, &alpha).unwrap().is_finite());
        }
    }
}
