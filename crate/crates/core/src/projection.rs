//! The reproducing-kernel projection `Π_A` against radial compactly
//! supported cutoffs: normalization constants, closed-form projection of
//! monomials, coefficient-level projection, independent quadrature oracles,
//! and growth-bound checks.
//!
//! Radial symmetry reduces the angular part of every projection integral to
//! `2π z^α u^α / α!` per axis, so only radial 1D quadrature is needed on the
//! fast path.  The quadrature oracles below recompute the angular part
//! numerically and exist to check that reduction, not to replace it.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{
    integrate_1d, integrate_1d_complex, log_factorial, multi_indices, LogComplex, MultiIndex,
    QuadratureSpec,
};
use crate::series::CoefficientSeries;
use crate::weights::{growth_majorant, OrderParam, RadiusVector};

/// One axis of a radial cutoff profile on `[0, t2_j]`.
#[derive(Clone)]
pub enum AxisCutoff {
    /// `χ₀ ≡ 1` on `[0, t2]`.
    Indicator,
    /// `λ` on `[0, t2]`.
    Scaled(f64),
    /// `1` on `[0, t1]`, linear down to `0` at `t2`.
    Trapezoid,
    /// Tabulated values, linearly interpolated, zero beyond the last knot.
    Table { knots: Vec<(f64, f64)> },
}

impl AxisCutoff {
    fn eval(&self, u: f64, t1: f64, t2: f64) -> f64 {
        if u < 0.0 || u > t2 {
            return 0.0;
        }
        match self {
            AxisCutoff::Indicator => 1.0,
            AxisCutoff::Scaled(lambda) => *lambda,
            AxisCutoff::Trapezoid => {
                if u <= t1 {
                    1.0
                } else {
                    (t2 - u) / (t2 - t1)
                }
            }
            AxisCutoff::Table { knots } => {
                if knots.is_empty() {
                    return 0.0;
                }
                let i = knots.partition_point(|&(x, _)| x <= u);
                if i == 0 {
                    return knots[0].1;
                }
                if i >= knots.len() {
                    return 0.0;
                }
                let (x0, y0) = knots[i - 1];
                let (x1, y1) = knots[i];
                if x1 == x0 {
                    y0
                } else {
                    y0 + (y1 - y0) * (u - x0) / (x1 - x0)
                }
            }
        }
    }

    fn sup(&self) -> f64 {
        match self {
            AxisCutoff::Indicator | AxisCutoff::Trapezoid => 1.0,
            AxisCutoff::Scaled(lambda) => *lambda,
            AxisCutoff::Table { knots } => knots.iter().map(|&(_, y)| y).fold(0.0, f64::max),
        }
    }
}

#[derive(Clone)]
pub enum CutoffProfile {
    Tensor(Vec<AxisCutoff>),
    /// Joint radial profile `χ₀(|z_1|, …, |z_d|)`, `d ≤ 2`.
    Joint(Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>),
}

/// A cutoff `χ`: nonnegative, bounded, radial in each complex coordinate,
/// `χ ≥ c > 0` on the polydisc of radius `t1`, supported in the closed
/// polydisc of radius `t2`.
#[derive(Clone)]
pub struct RadialCutoff {
    d: usize,
    t1: Vec<f64>,
    t2: Vec<f64>,
    lower_bound: f64,
    sup: f64,
    profile: CutoffProfile,
}

impl RadialCutoff {
    pub fn new(
        t1: Vec<f64>,
        t2: Vec<f64>,
        lower_bound: f64,
        profile: CutoffProfile,
    ) -> Result<Self> {
        let d = t1.len();
        if d == 0 || t2.len() != d {
            return Err(Error::InvalidCutoff(
                "t1/t2 must share dimension >= 1".into(),
            ));
        }
        if t1.iter().zip(&t2).any(|(a, b)| !(*a > 0.0) || a > b) {
            return Err(Error::InvalidCutoff(
                "need 0 < t1 <= t2 componentwise".into(),
            ));
        }
        if !(lower_bound > 0.0) {
            return Err(Error::InvalidCutoff("lower bound c must be positive".into()));
        }
        if let CutoffProfile::Joint(_) = profile {
            if d > 2 {
                return Err(Error::Unsupported(
                    "joint cutoff profiles are limited to d <= 2".into(),
                ));
            }
        }
        let sup = match &profile {
            CutoffProfile::Tensor(axes) => {
                if axes.len() != d {
                    return Err(Error::InvalidCutoff("profile dimension mismatch".into()));
                }
                axes.iter().map(|a| a.sup()).product()
            }
            CutoffProfile::Joint(_) => 0.0, // filled by the grid scan below
        };
        let mut chi = Self {
            d,
            t1,
            t2,
            lower_bound,
            sup,
            profile,
        };
        chi.validate_on_grid()?;
        Ok(chi)
    }

    /// Indicator of the closed polydisc of radius `t` (same on every axis).
    pub fn indicator(d: usize, t: f64) -> Result<Self> {
        Self::new(
            vec![t; d],
            vec![t; d],
            1.0,
            CutoffProfile::Tensor(vec![AxisCutoff::Indicator; d]),
        )
    }

    pub fn indicator_vec(t: Vec<f64>) -> Result<Self> {
        let d = t.len();
        Self::new(
            t.clone(),
            t,
            1.0,
            CutoffProfile::Tensor(vec![AxisCutoff::Indicator; d]),
        )
    }

    /// `λ ·` indicator of radius `t`.
    pub fn scaled_indicator(d: usize, t: f64, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidCutoff("scaling must be positive".into()));
        }
        Self::new(
            vec![t; d],
            vec![t; d],
            lambda,
            CutoffProfile::Tensor(vec![AxisCutoff::Scaled(lambda); d]),
        )
    }

    /// `1` on radius `t1`, linear to `0` at `t2`.
    pub fn trapezoid(d: usize, t1: f64, t2: f64) -> Result<Self> {
        if !(t1 < t2) {
            return Err(Error::InvalidCutoff("trapezoid needs t1 < t2".into()));
        }
        Self::new(
            vec![t1; d],
            vec![t2; d],
            1.0,
            CutoffProfile::Tensor(vec![AxisCutoff::Trapezoid; d]),
        )
    }

    fn validate_on_grid(&mut self) -> Result<()> {
        let n = 64usize;
        let mut sup_seen = 0.0f64;
        let mut min_on_core = f64::INFINITY;
        let grid: Vec<Vec<f64>> = (0..self.d)
            .map(|j| (0..=n).map(|i| self.t2[j] * i as f64 / n as f64).collect())
            .collect();
        let mut idx = vec![0usize; self.d];
        loop {
            let u: Vec<f64> = (0..self.d).map(|j| grid[j][idx[j]]).collect();
            let v = self.eval_radial(&u);
            if v < -1e-12 {
                return Err(Error::InvalidCutoff(format!("profile is negative at {u:?}")));
            }
            sup_seen = sup_seen.max(v);
            if u.iter().zip(&self.t1).all(|(a, b)| a <= b) {
                min_on_core = min_on_core.min(v);
            }
            // advance odometer
            let mut j = 0;
            loop {
                idx[j] += 1;
                if idx[j] <= n {
                    break;
                }
                idx[j] = 0;
                j += 1;
                if j == self.d {
                    if min_on_core < self.lower_bound - 1e-12 {
                        return Err(Error::InvalidCutoff(format!(
                            "profile drops to {min_on_core} below the declared bound {} on the inner polydisc",
                            self.lower_bound
                        )));
                    }
                    if let CutoffProfile::Joint(_) = self.profile {
                        self.sup = sup_seen;
                    }
                    return Ok(());
                }
            }
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn t1(&self) -> &[f64] {
        &self.t1
    }

    pub fn t2(&self) -> &[f64] {
        &self.t2
    }

    pub fn lower_bound(&self) -> f64 {
        self.lower_bound
    }

    pub fn sup(&self) -> f64 {
        self.sup
    }

    /// Evaluate the radial profile at magnitudes `u = (|z_1|, …, |z_d|)`.
    pub fn eval_radial(&self, u: &[f64]) -> f64 {
        debug_assert_eq!(u.len(), self.d);
        if u.iter().zip(&self.t2).any(|(a, b)| a > b) {
            return 0.0;
        }
        match &self.profile {
            CutoffProfile::Tensor(axes) => axes
                .iter()
                .enumerate()
                .map(|(j, a)| a.eval(u[j], self.t1[j], self.t2[j]))
                .product(),
            CutoffProfile::Joint(f) => f(u),
        }
    }

    /// Evaluate at a complex point.
    pub fn eval_z(&self, z: &[Complex64]) -> f64 {
        let u: Vec<f64> = z.iter().map(|zj| zj.norm()).collect();
        self.eval_radial(&u)
    }

    /// Pointwise scaling `λ χ`.
    pub fn scale(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidCutoff("scaling must be positive".into()));
        }
        let profile = match &self.profile {
            CutoffProfile::Tensor(axes) => {
                let mut axes = axes.clone();
                // fold the scalar into the first axis
                axes[0] = match &axes[0] {
                    AxisCutoff::Indicator => AxisCutoff::Scaled(lambda),
                    AxisCutoff::Scaled(mu) => AxisCutoff::Scaled(mu * lambda),
                    AxisCutoff::Trapezoid => {
                        return Err(Error::Unsupported(
                            "scaling a trapezoid axis is not implemented".into(),
                        ))
                    }
                    AxisCutoff::Table { knots } => AxisCutoff::Table {
                        knots: knots.iter().map(|&(x, y)| (x, y * lambda)).collect(),
                    },
                };
                CutoffProfile::Tensor(axes)
            }
            CutoffProfile::Joint(f) => {
                let f = f.clone();
                CutoffProfile::Joint(Arc::new(move |u: &[f64]| lambda * f(u)))
            }
        };
        Self::new(
            self.t1.clone(),
            self.t2.clone(),
            self.lower_bound * lambda,
            profile,
        )
    }
}

// Log of the per-axis radial moment ∫_0^{t2} χ₀(u) e^{-u²} u^{2k+1} du,
// scaled by the Gaussian-part peak so large k stays in range.
fn axis_moment_log(
    chi: &RadialCutoff,
    axis: &AxisCutoff,
    j: usize,
    k: usize,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let t1 = chi.t1[j];
    let t2 = chi.t2[j];
    let p = (2 * k + 1) as f64;
    let u_star = (p / 2.0).sqrt().min(t2);
    let log_peak = -u_star * u_star + p * u_star.ln();
    let (val, _err) = integrate_1d(
        |u| {
            if u <= 0.0 {
                return 0.0;
            }
            let w = axis.eval(u, t1, t2);
            if w == 0.0 {
                return 0.0;
            }
            w * (-u * u + p * u.ln() - log_peak).exp()
        },
        0.0,
        t2,
        spec,
    )?;
    if !(val > 0.0) {
        return Err(Error::DegenerateCutoff);
    }
    Ok(log_peak + val.ln())
}

// Joint d ≤ 2 radial moment, log-scaled per axis.
fn joint_moment_log(chi: &RadialCutoff, alpha: &MultiIndex, spec: &QuadratureSpec) -> Result<f64> {
    let d = chi.d();
    let scale: f64 = (0..d)
        .map(|j| {
            let p = (2 * alpha.get(j) + 1) as f64;
            let u = (p / 2.0).sqrt().min(chi.t2[j]);
            -u * u + p * u.ln()
        })
        .sum();
    let val = if d == 1 {
        let p = (2 * alpha.get(0) + 1) as f64;
        let (v, _) = integrate_1d(
            |u| {
                if u <= 0.0 {
                    return 0.0;
                }
                chi.eval_radial(&[u]) * (-u * u + p * u.ln() - scale).exp()
            },
            0.0,
            chi.t2[0],
            spec,
        )?;
        v
    } else {
        let p0 = (2 * alpha.get(0) + 1) as f64;
        let p1 = (2 * alpha.get(1) + 1) as f64;
        let outer = |u0: f64| -> f64 {
            if u0 <= 0.0 {
                return 0.0;
            }
            let inner = |u1: f64| {
                if u1 <= 0.0 {
                    return 0.0;
                }
                chi.eval_radial(&[u0, u1])
                    * (-u0 * u0 + p0 * u0.ln() - u1 * u1 + p1 * u1.ln() - scale).exp()
            };
            integrate_1d(inner, 0.0, chi.t2[1], spec)
                .map(|(v, _)| v)
                .unwrap_or(f64::NAN)
        };
        let (v, _) = integrate_1d(outer, 0.0, chi.t2[0], spec)?;
        v
    };
    if !(val > 0.0) || !val.is_finite() {
        return Err(Error::DegenerateCutoff);
    }
    Ok(scale + val.ln())
}

/// Precomputed `ln ς_α` values for `|α| ≤ n_max` against a fixed cutoff.
pub struct SigmaTable {
    d: usize,
    n_max: usize,
    // tensor cutoffs: per-axis moment logs indexed by α_j
    axis_moments: Option<Vec<Vec<f64>>>,
    // joint cutoffs: full table
    joint: Option<std::collections::BTreeMap<MultiIndex, f64>>,
}

impl SigmaTable {
    pub fn build(chi: &RadialCutoff, n_max: usize, spec: &QuadratureSpec) -> Result<Self> {
        match &chi.profile {
            CutoffProfile::Tensor(axes) => {
                let mut per_axis = Vec::with_capacity(chi.d());
                for (j, axis) in axes.iter().enumerate() {
                    let mut col = Vec::with_capacity(n_max + 1);
                    for k in 0..=n_max {
                        col.push(axis_moment_log(chi, axis, j, k, spec)?);
                    }
                    per_axis.push(col);
                }
                Ok(Self {
                    d: chi.d(),
                    n_max,
                    axis_moments: Some(per_axis),
                    joint: None,
                })
            }
            CutoffProfile::Joint(_) => {
                let mut map = std::collections::BTreeMap::new();
                for alpha in multi_indices(chi.d(), n_max) {
                    map.insert(alpha.clone(), joint_moment_log(chi, &alpha, spec)?);
                }
                Ok(Self {
                    d: chi.d(),
                    n_max,
                    axis_moments: None,
                    joint: Some(map),
                })
            }
        }
    }

    /// `ln ς_α = -d ln 2 + ½ ln α! - ln ∫ χ₀ e^{-|u|²} u^{2α} u_1…u_d du`.
    pub fn log_sigma(&self, alpha: &MultiIndex) -> Result<f64> {
        if alpha.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: alpha.dim(),
            });
        }
        let log_moment = if let Some(per_axis) = &self.axis_moments {
            alpha
                .entries()
                .iter()
                .enumerate()
                .map(|(j, &k)| per_axis[j][k])
                .sum()
        } else {
            *self
                .joint
                .as_ref()
                .unwrap()
                .get(alpha)
                .ok_or_else(|| Error::Domain(format!("|α| > table truncation {}", self.n_max)))?
        };
        // explicit underflow guard: a vanishing denominator means the cutoff
        // carries no mass against the Gaussian moment
        if log_moment < -700.0 * self.d as f64 {
            return Err(Error::DegenerateCutoff);
        }
        Ok(-(self.d as f64) * std::f64::consts::LN_2 + 0.5 * log_factorial(alpha) - log_moment)
    }
}

/// `ln ς_α` for a single multi-index.
pub fn varsigma(alpha: &MultiIndex, chi: &RadialCutoff, spec: &QuadratureSpec) -> Result<f64> {
    if alpha.dim() != chi.d() {
        return Err(Error::DimensionMismatch {
            expected: chi.d(),
            got: alpha.dim(),
        });
    }
    let log_moment = match &chi.profile {
        CutoffProfile::Tensor(axes) => {
            let mut total = 0.0;
            for (j, axis) in axes.iter().enumerate() {
                total += axis_moment_log(chi, axis, j, alpha.get(j), spec)?;
            }
            total
        }
        CutoffProfile::Joint(_) => joint_moment_log(chi, alpha, spec)?,
    };
    if log_moment < -700.0 * chi.d() as f64 {
        return Err(Error::DegenerateCutoff);
    }
    Ok(-(chi.d() as f64) * std::f64::consts::LN_2 + 0.5 * log_factorial(alpha) - log_moment)
}

/// Outcome of checking the two-sided bracket around `ς_α`.
#[derive(Clone, Copy, Debug)]
pub struct VarsigmaBounds {
    /// Lower bracket holds with constant 1.
    pub lower_ok: bool,
    /// Upper bracket holds with constant 1.
    pub upper_ok: bool,
    /// Smallest `C ≥ 1` with `C⁻¹·lower ≤ ς_α ≤ C·upper`.
    pub witnessed_c: f64,
}

/// Evaluate the bracketing expressions
/// `∏ t_{2,j}^{-2}(α_j+1) · t_2^{-2α} √α!  ≤  ς_α  ≤  e^{|t_1|²} ∏
/// t_{1,j}^{-2}(α_j+1) · t_1^{-2α} √α!` in the log domain.
pub fn varsigma_bounds_check(
    alpha: &MultiIndex,
    chi: &RadialCutoff,
    spec: &QuadratureSpec,
) -> Result<VarsigmaBounds> {
    let log_sigma = varsigma(alpha, chi, spec)?;
    let half_lf = 0.5 * log_factorial(alpha);
    let bracket = |t: &[f64]| -> f64 {
        let mut l = half_lf;
        for (j, &k) in alpha.entries().iter().enumerate() {
            l += ((k + 1) as f64).ln() - 2.0 * t[j].ln() - 2.0 * k as f64 * t[j].ln();
        }
        l
    };
    let log_lower = bracket(&chi.t2);
    let log_upper = chi.t1.iter().map(|t| t * t).sum::<f64>() + bracket(&chi.t1);
    let witnessed_c = (log_lower - log_sigma)
        .max(log_sigma - log_upper)
        .exp()
        .max(1.0);
    Ok(VarsigmaBounds {
        lower_ok: log_lower <= log_sigma + 1e-12,
        upper_ok: log_sigma <= log_upper + 1e-12,
        witnessed_c,
    })
}

/// `Π_A(z^α · χ) = ς_α^{-1} e_α` as a single-entry series.
pub fn project_monomial(
    alpha: &MultiIndex,
    chi: &RadialCutoff,
    spec: &QuadratureSpec,
) -> Result<CoefficientSeries> {
    let log_sigma = varsigma(alpha, chi, spec)?;
    let mut out = CoefficientSeries::new(chi.d(), alpha.total());
    out.set(alpha.clone(), LogComplex::from_log_mag(-log_sigma))?;
    Ok(out)
}

/// Coefficient-level projection: `c(F,α) = c(F₀,α) / (ς_α √α!)`.
///
/// Diagonal, so the output support equals the input support.
pub fn project(
    f0: &CoefficientSeries,
    chi: &RadialCutoff,
    spec: &QuadratureSpec,
) -> Result<CoefficientSeries> {
    if f0.d() != chi.d() {
        return Err(Error::DimensionMismatch {
            expected: chi.d(),
            got: f0.d(),
        });
    }
    let table = SigmaTable::build(chi, f0.max_degree(), spec)?;
    let mut scales = Vec::new();
    for (alpha, _) in f0.iter() {
        scales.push((
            alpha.clone(),
            -(table.log_sigma(alpha)? + 0.5 * log_factorial(alpha)),
        ));
    }
    let map: std::collections::BTreeMap<_, _> = scales.into_iter().collect();
    Ok(f0.map_diagonal(|alpha| map[alpha]))
}

/// Inverse diagonal map `c(F₀,α) = c(F,α) ς_α √α!`, so that
/// [`project`]`(reconstruct(F)) = F`.
pub fn reconstruct(
    f: &CoefficientSeries,
    chi: &RadialCutoff,
    spec: &QuadratureSpec,
) -> Result<CoefficientSeries> {
    if f.d() != chi.d() {
        return Err(Error::DimensionMismatch {
            expected: chi.d(),
            got: f.d(),
        });
    }
    let table = SigmaTable::build(chi, f.max_degree(), spec)?;
    let mut scales = Vec::new();
    for (alpha, _) in f.iter() {
        scales.push((
            alpha.clone(),
            table.log_sigma(alpha)? + 0.5 * log_factorial(alpha),
        ));
    }
    let map: std::collections::BTreeMap<_, _> = scales.into_iter().collect();
    Ok(f.map_diagonal(|alpha| map[alpha]))
}

/// An entire function supplied as a callable.
#[derive(Clone)]
pub struct EntireFn {
    d: usize,
    f: Arc<dyn Fn(&[Complex64]) -> Complex64 + Send + Sync>,
}

impl EntireFn {
    pub fn new(d: usize, f: impl Fn(&[Complex64]) -> Complex64 + Send + Sync + 'static) -> Self {
        Self { d, f: Arc::new(f) }
    }

    pub fn from_series(series: &CoefficientSeries) -> Self {
        let series = series.clone();
        Self {
            d: series.d(),
            f: Arc::new(move |z: &[Complex64]| series.eval(z).to_complex()),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        (self.f)(z)
    }
}

// Angular coefficient extraction on a circle: ∫ F(u e^{iθ}) e^{-ikθ} dθ / M
// by the M-point trapezoid rule, spectrally accurate for analytic
// integrands on the circle.
fn angular_trapezoid_1d(f: &EntireFn, u: f64, k: usize, m: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..m {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / m as f64;
        let z = Complex64::from_polar(u, theta);
        let w = Complex64::from_polar(1.0, -(k as f64) * theta);
        acc += f.eval(&[z]) * w;
    }
    acc / m as f64
}

fn angular_trapezoid_2d(f: &EntireFn, u: &[f64; 2], k: &[usize; 2], m: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i0 in 0..m {
        let th0 = 2.0 * std::f64::consts::PI * i0 as f64 / m as f64;
        let z0 = Complex64::from_polar(u[0], th0);
        let w0 = Complex64::from_polar(1.0, -(k[0] as f64) * th0);
        for i1 in 0..m {
            let th1 = 2.0 * std::f64::consts::PI * i1 as f64 / m as f64;
            let z1 = Complex64::from_polar(u[1], th1);
            let w1 = Complex64::from_polar(1.0, -(k[1] as f64) * th1);
            acc += f.eval(&[z0, z1]) * w0 * w1;
        }
    }
    acc / (m * m) as f64
}

/// Independent quadrature oracle for [`project`]: extracts the coefficients
/// of `Π_A(F₀ · χ)` for `|α| ≤ n` from a callable `F₀` by angular trapezoid
/// sums under radial adaptive quadrature.  Never touches [`varsigma`].
pub fn project_quadrature(
    f0: &EntireFn,
    chi: &RadialCutoff,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<CoefficientSeries> {
    let d = chi.d();
    if f0.d() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: f0.d(),
        });
    }
    if d > 2 {
        return Err(Error::Unsupported(
            "projection quadrature oracle is limited to d <= 2".into(),
        ));
    }
    let m = (4 * n + 16).max(64);
    let mut out = CoefficientSeries::new(d, n);
    for alpha in multi_indices(d, n) {
        let integral: Complex64 = if d == 1 {
            let k = alpha.get(0);
            let (v, _) = integrate_1d_complex(
                |u| {
                    if u <= 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    let w = chi.eval_radial(&[u]);
                    if w == 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    angular_trapezoid_1d(f0, u, k, m)
                        * (w * (-u * u).exp() * u.powi(k as i32 + 1))
                },
                0.0,
                chi.t2[0],
                spec,
            )?;
            v * 2.0 * std::f64::consts::PI
        } else {
            let ks = [alpha.get(0), alpha.get(1)];
            let outer = |u0: f64| -> Complex64 {
                if u0 <= 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let inner = |u1: f64| -> Complex64 {
                    if u1 <= 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    let w = chi.eval_radial(&[u0, u1]);
                    if w == 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    angular_trapezoid_2d(f0, &[u0, u1], &ks, m)
                        * (w
                            * (-u0 * u0 - u1 * u1).exp()
                            * u0.powi(ks[0] as i32 + 1)
                            * u1.powi(ks[1] as i32 + 1))
                };
                integrate_1d_complex(inner, 0.0, chi.t2[1], spec)
                    .map(|(v, _)| v)
                    .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
            };
            let (v, _) = integrate_1d_complex(outer, 0.0, chi.t2[0], spec)?;
            v * (2.0 * std::f64::consts::PI).powi(2)
        };
        // c(F,α) = √α! · π^{-d} · integral / α!
        let c = LogComplex::from_complex(integral)
            .scale_log(-(d as f64) * std::f64::consts::PI.ln() - 0.5 * log_factorial(&alpha));
        out.set(alpha, c)?;
    }
    Ok(out)
}

/// A compactly supported density on ℂ (not necessarily analytic or radial),
/// given by a callable and its support box.
#[derive(Clone)]
pub struct CompactDensity {
    pub f: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    pub re_range: (f64, f64),
    pub im_range: (f64, f64),
}

impl CompactDensity {
    pub fn new(
        f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        re_range: (f64, f64),
        im_range: (f64, f64),
    ) -> Self {
        Self {
            f: Arc::new(f),
            re_range,
            im_range,
        }
    }
}

/// Pointwise `Π_A F₀(z) = π^{-1} ∬ F₀(w) e^{z w̄ - |w|²} dλ(w)` over the
/// support box, `d = 1`.
pub fn pia_apply_quadrature(
    f0: &CompactDensity,
    z: Complex64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let f = f0.f.clone();
    let (im_lo, im_hi) = f0.im_range;
    let outer = move |u: f64| -> Complex64 {
        let f = f.clone();
        let inner = move |v: f64| -> Complex64 {
            let w = Complex64::new(u, v);
            f(w) * (z * w.conj() - w.norm_sqr()).exp()
        };
        integrate_1d_complex(inner, im_lo, im_hi, spec)
            .map(|(v, _)| v)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    };
    let (val, _) = integrate_1d_complex(outer, f0.re_range.0, f0.re_range.1, spec)?;
    if !val.re.is_finite() || !val.im.is_finite() {
        return Err(Error::NonConvergence {
            context: "inner quadrature of the reproducing integral".into(),
            err: f64::NAN,
        });
    }
    Ok(val / std::f64::consts::PI)
}

/// Coefficients of `Π_A F₀` for a general compact density, `d = 1`:
/// `c(α) = (1/√α!) π^{-1} ∬ F₀(w) w̄^α e^{-|w|²} dλ(w)`.
pub fn project_compact_quadrature(
    f0: &CompactDensity,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<CoefficientSeries> {
    let mut out = CoefficientSeries::new(1, n);
    for k in 0..=n {
        let f = f0.f.clone();
        let (im_lo, im_hi) = f0.im_range;
        let outer = move |u: f64| -> Complex64 {
            let f = f.clone();
            let inner = move |v: f64| -> Complex64 {
                let w = Complex64::new(u, v);
                f(w) * w.conj().powi(k as i32) * (-w.norm_sqr()).exp()
            };
            integrate_1d_complex(inner, im_lo, im_hi, spec)
                .map(|(v, _)| v)
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
        };
        let (val, _) = integrate_1d_complex(outer, f0.re_range.0, f0.re_range.1, spec)?;
        if !val.re.is_finite() || !val.im.is_finite() {
            return Err(Error::NonConvergence {
                context: "inner quadrature of the coefficient integral".into(),
                err: f64::NAN,
            });
        }
        let c = LogComplex::from_complex(val / std::f64::consts::PI)
            .scale_log(-0.5 * crate::numerics::log_factorial_1d(k));
        out.set(MultiIndex::d1(k), c)?;
    }
    Ok(out)
}

/// Majorant against which [`growth_bound_check`] measures a series.
#[derive(Clone, Debug)]
pub enum Majorant {
    /// `e^{r_1|z_1| + … + r_d|z_d|}` (compact-support growth).
    Linear(RadiusVector),
    /// One of the five-branch majorants from the weights module.
    Weighted {
        j: u8,
        zero_variant: bool,
        order: OrderParam,
        r: RadiusVector,
    },
}

impl Majorant {
    pub fn eval(&self, z: &[Complex64]) -> Result<f64> {
        match self {
            Majorant::Linear(r) => {
                if r.dim() != z.len() {
                    return Err(Error::DimensionMismatch {
                        expected: r.dim(),
                        got: z.len(),
                    });
                }
                Ok(z.iter()
                    .zip(r.entries())
                    .map(|(zj, &rj)| rj * zj.norm())
                    .sum())
            }
            Majorant::Weighted {
                j,
                zero_variant,
                order,
                r,
            } => growth_majorant(*j, *zero_variant, order, r, z),
        }
    }
}

/// Sampling grid: per-axis magnitudes × equispaced phases (plus the origin).
#[derive(Clone, Debug)]
pub struct GridSpec {
    pub radii: Vec<f64>,
    pub phases: usize,
}

impl GridSpec {
    /// Geometric radii from `r_min` to `r_max`.
    pub fn geometric(r_min: f64, r_max: f64, steps: usize, phases: usize) -> Self {
        let mut radii = vec![0.0];
        for i in 0..=steps {
            radii.push(r_min * (r_max / r_min).powf(i as f64 / steps as f64));
        }
        Self { radii, phases }
    }

    fn axis_points(&self) -> Vec<Complex64> {
        let mut pts = Vec::new();
        for &rho in &self.radii {
            if rho == 0.0 {
                pts.push(Complex64::new(0.0, 0.0));
                continue;
            }
            for k in 0..self.phases.max(1) {
                let phi = 2.0 * std::f64::consts::PI * k as f64 / self.phases.max(1) as f64;
                pts.push(Complex64::from_polar(rho, phi));
            }
        }
        pts
    }
}

fn lex_smaller(a: &[Complex64], b: &[Complex64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x.re != y.re {
            return x.re < y.re;
        }
        if x.im != y.im {
            return x.im < y.im;
        }
    }
    false
}

/// Max over the grid of `log|F(z)| - M(z)`, with its argmax (ties broken
/// toward the lexicographically smallest grid point).
pub fn growth_bound_check(
    f: &CoefficientSeries,
    majorant: &Majorant,
    grid: &GridSpec,
) -> Result<(f64, Vec<Complex64>)> {
    let d = f.d();
    let axis = grid.axis_points();
    let mut best = f64::NEG_INFINITY;
    let mut arg: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); d];
    let mut idx = vec![0usize; d];
    loop {
        let z: Vec<Complex64> = idx.iter().map(|&i| axis[i]).collect();
        let val = f.eval(&z).log_mag - majorant.eval(&z)?;
        if val > best + 1e-12 || ((val - best).abs() <= 1e-12 && lex_smaller(&z, &arg)) {
            if val > best {
                best = val;
            }
            arg = z;
        }
        let mut j = 0;
        loop {
            idx[j] += 1;
            if idx[j] < axis.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
            if j == d {
                return Ok((best, arg));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{log_factorial_1d, regularized_gamma_p};

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    // closed-form ln ς for the d=1 indicator of radius t via the regularized
    // incomplete gamma (independent of the quadrature route)
    fn log_sigma_indicator(k: usize, t: f64) -> f64 {
        let p = regularized_gamma_p(k as f64 + 1.0, t * t).unwrap();
        -0.5 * log_factorial_1d(k) - p.ln()
    }

    #[test]
    fn varsigma_frozen_references() {
        // values computed with 50-digit arithmetic
        let cases = [
            (0usize, 1.0, 1.5819767068693264244),
            (3, 1.0, 21.500153655069059666),
            (5, 8.0, 0.091287092917527685576),
            (0, 0.5, 4.5208116641877984642),
            (2, 2.0, 0.92808747739781847732),
        ];
        for &(k, t, want) in &cases {
            let chi = RadialCutoff::indicator(1, t).unwrap();
            let got = varsigma(&MultiIndex::d1(k), &chi, &spec()).unwrap().exp();
            assert!(
                (got - want).abs() < 1e-10 * want,
                "k={k} t={t}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn varsigma_large_radius_approaches_inverse_sqrt_factorial() {
        let chi = RadialCutoff::indicator(1, 8.0).unwrap();
        for k in 0..=10usize {
            let got = varsigma(&MultiIndex::d1(k), &chi, &spec()).unwrap();
            let want = -0.5 * log_factorial_1d(k);
            assert!((got.exp() - want.exp()).abs() < 1e-10, "k={k}");
        }
    }

    #[test]
    fn varsigma_tensor_factorizes() {
        let chi2 = RadialCutoff::indicator_vec(vec![1.0, 2.0]).unwrap();
        let alpha = MultiIndex::new(vec![3, 2]).unwrap();
        let got = varsigma(&alpha, &chi2, &spec()).unwrap();
        let want = log_sigma_indicator(3, 1.0) + log_sigma_indicator(2, 2.0);
        assert!((got - want).abs() < 1e-10);
    }

    #[test]
    fn varsigma_joint_matches_tensor() {
        let joint = RadialCutoff::new(
            vec![1.0, 1.0],
            vec![1.0, 1.0],
            1.0,
            CutoffProfile::Joint(Arc::new(|_u: &[f64]| 1.0)),
        )
        .unwrap();
        let tensor = RadialCutoff::indicator(2, 1.0).unwrap();
        for alpha in multi_indices(2, 4) {
            let a = varsigma(&alpha, &joint, &spec()).unwrap();
            let b = varsigma(&alpha, &tensor, &spec()).unwrap();
            assert!((a - b).abs() < 1e-9, "{alpha}");
        }
    }

    #[test]
    fn varsigma_scaling_covariance() {
        // scaling χ by λ scales ς by 1/λ, exactly in the log domain
        let chi = RadialCutoff::indicator(1, 1.0).unwrap();
        let half = chi.scale(0.5).unwrap();
        for k in [0usize, 2, 9] {
            let a = varsigma(&MultiIndex::d1(k), &chi, &spec()).unwrap();
            let b = varsigma(&MultiIndex::d1(k), &half, &spec()).unwrap();
            assert!((b - a - 2f64.ln()).abs() < 1e-11);
        }
    }

    #[test]
    fn bounds_check_alpha_zero() {
        // α=0, d=1, t=1: ς₀ ≈ 1.582, lower bracket 1, upper e
        let chi = RadialCutoff::indicator(1, 1.0).unwrap();
        let b = varsigma_bounds_check(&MultiIndex::d1(0), &chi, &spec()).unwrap();
        assert!(b.lower_ok && b.upper_ok);
        assert!((b.witnessed_c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bounds_check_indicator_family() {
        for &t in &[0.5, 1.0, 2.0] {
            let chi = RadialCutoff::indicator(1, t).unwrap();
            for k in 0..=50usize {
                let b = varsigma_bounds_check(&MultiIndex::d1(k), &chi, &spec()).unwrap();
                assert!(b.lower_ok && b.upper_ok, "t={t} k={k}");
                assert!(b.witnessed_c <= 10.0, "t={t} k={k}: C={}", b.witnessed_c);
            }
        }
    }

    #[test]
    fn bounds_check_absorbs_scaling() {
        let chi = RadialCutoff::scaled_indicator(1, 1.0, 0.5).unwrap();
        let b = varsigma_bounds_check(&MultiIndex::d1(4), &chi, &spec()).unwrap();
        // ς doubled; C must absorb the factor 2 on the upper side
        assert!(b.witnessed_c <= 2.0 + 1e-9);
        assert!(b.lower_ok);
    }

    #[test]
    fn project_monomial_identities() {
        let chi = RadialCutoff::indicator(1, 1.0).unwrap();
        // Π_A(z^0 χ)(0) = 1/ς₀ = 1 - e^{-1}
        let series = project_monomial(&MultiIndex::d1(0), &chi, &spec()).unwrap();
        let c = series.coeff(&MultiIndex::d1(0)).to_complex().re;
        assert!((c - (1.0 - (-1.0f64).exp())).abs() < 1e-10);
        // ς_α · Π_A(z^α χ) = e_α for several α
        for k in [1usize, 4, 13] {
            let s = project_monomial(&MultiIndex::d1(k), &chi, &spec()).unwrap();
            let ls = varsigma(&MultiIndex::d1(k), &chi, &spec()).unwrap();
            let v = s.coeff(&MultiIndex::d1(k)).scale_log(ls);
            assert!((v.to_complex().re - 1.0).abs() < 1e-12);
            assert_eq!(s.len(), 1); // off-diagonal coefficients exactly zero
        }
    }

    #[test]
    fn project_inverts_reconstruct_exactly() {
        let chi = RadialCutoff::indicator(2, 1.0).unwrap();
        let mut f = CoefficientSeries::new(2, 6);
        f.set(
            MultiIndex::new(vec![1, 2]).unwrap(),
            LogComplex::from_complex(Complex64::new(0.3, -1.1)),
        )
        .unwrap();
        f.set(
            MultiIndex::new(vec![0, 5]).unwrap(),
            LogComplex::from_complex(Complex64::new(-2.0, 0.4)),
        )
        .unwrap();
        let f0 = reconstruct(&f, &chi, &spec()).unwrap();
        let back = project(&f0, &chi, &spec()).unwrap();
        assert!(f.max_abs_deviation(&back) < 1e-12);
        assert_eq!(f.support(), back.support());
        assert_eq!(f.support(), f0.support());
    }

    #[test]
    fn project_single_monomial_against_closed_form() {
        // input ς_α z^α (built from the incomplete-gamma closed form) maps to e_α
        let chi = RadialCutoff::indicator(1, 1.0).unwrap();
        for k in [0usize, 3, 8] {
            let mut f0 = CoefficientSeries::new(1, k);
            f0.set_monomial(
                MultiIndex::d1(k),
                LogComplex::from_log_mag(log_sigma_indicator(k, 1.0)),
            )
            .unwrap();
            let f = project(&f0, &chi, &spec()).unwrap();
            let c = f.coeff(&MultiIndex::d1(k)).to_complex();
            assert!((c.re - 1.0).abs() < 1e-9 && c.im.abs() < 1e-15, "k={k}: {c}");
        }
    }

    #[test]
    fn quadrature_oracle_constant_and_linear() {
        let chi = RadialCutoff::indicator(1, 1.0).unwrap();
        // F₀ ≡ 1 → {0 ↦ 1 - e^{-t²}}
        let one = EntireFn::new(1, |_z: &[Complex64]| Complex64::new(1.0, 0.0));
        let s = project_quadrature(&one, &chi, 3, &spec()).unwrap();
        let c0 = s.coeff(&MultiIndex::d1(0)).to_complex().re;
        assert!((c0 - (1.0 - (-1.0f64).exp())).abs() < 1e-9);
        for k in 1..=3usize {
            assert!(s.coeff(&MultiIndex::d1(k)).to_complex().norm() < 1e-12);
        }
        // F₀ = z matches the diagonal route
        let lin = EntireFn::new(1, |z: &[Complex64]| z[0]);
        let sq = project_quadrature(&lin, &chi, 3, &spec()).unwrap();
        let mut f0 = CoefficientSeries::new(1, 1);
        f0.set_monomial(MultiIndex::d1(1), LogComplex::ONE).unwrap();
        let sd = project(&f0, &chi, &spec()).unwrap();
        assert!(sq.max_abs_deviation(&sd) < 1e-8);
    }

    #[test]
    fn quadrature_oracle_matches_project_on_random_polynomial() {
        // fixed degree-8 polynomial, d=1, indicator t=1
        let chi = RadialCutoff::indicator(1, 1.0).unwrap();
        let coeffs: Vec<Complex64> = vec![
            Complex64::new(0.7, -0.2),
            Complex64::new(-1.1, 0.5),
            Complex64::new(0.3, 0.9),
            Complex64::new(0.0, 0.0),
            Complex64::new(2.1, -0.4),
            Complex64::new(-0.6, 0.0),
            Complex64::new(0.05, 1.3),
            Complex64::new(-0.9, -0.9),
            Complex64::new(0.4, 0.1),
        ];
        let cs = coeffs.clone();
        let poly = EntireFn::new(1, move |z: &[Complex64]| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut p = Complex64::new(1.0, 0.0);
            for c in &cs {
                acc += c * p;
                p *= z[0];
            }
            acc
        });
        let mut f0 = CoefficientSeries::new(1, 8);
        for (k, c) in coeffs.iter().enumerate() {
            f0.set_monomial(MultiIndex::d1(k), LogComplex::from_complex(*c))
                .unwrap();
        }
        let via_quad = project_quadrature(&poly, &chi, 8, &spec()).unwrap();
        let via_diag = project(&f0, &chi, &spec()).unwrap();
        assert!(via_quad.max_abs_deviation(&via_diag) < 1e-6);
    }

    #[test]
    fn quadrature_oracle_odd_powers_give_zero_even_output() {
        let chi = RadialCutoff::indicator(1, 1.0).unwrap();
        let odd = EntireFn::new(1, |z: &[Complex64]| z[0] + z[0].powi(3) * 0.5);
        let s = project_quadrature(&odd, &chi, 6, &spec()).unwrap();
        for k in [0usize, 2, 4, 6] {
            assert!(
                s.coeff(&MultiIndex::d1(k)).to_complex().norm() < 1e-12,
                "k={k}"
            );
        }
    }

    #[test]
    fn quadrature_oracle_d2_diagonal() {
        let chi = RadialCutoff::indicator(2, 1.0).unwrap();
        let f = EntireFn::new(2, |z: &[Complex64]| z[0] * z[1]);
        let s = project_quadrature(&f, &chi, 2, &spec()).unwrap();
        let mut f0 = CoefficientSeries::new(2, 2);
        f0.set_monomial(MultiIndex::new(vec![1, 1]).unwrap(), LogComplex::ONE)
            .unwrap();
        let want = project(&f0, &chi, &spec()).unwrap();
        assert!(s.max_abs_deviation(&want) < 1e-7);
    }

    #[test]
    fn compact_density_projection_box_indicator() {
        // square box of half-side a: Π_A(1_box)(0) = π^{-1}(∫_{-a}^a e^{-u²}du)²
        // = erf(a)², with erf(a) = P(1/2, a²)
        let a = 0.9;
        let dens = CompactDensity::new(|_w: Complex64| Complex64::new(1.0, 0.0), (-a, a), (-a, a));
        let v = pia_apply_quadrature(&dens, Complex64::new(0.0, 0.0), &spec()).unwrap();
        let erf_a = regularized_gamma_p(0.5, a * a).unwrap();
        assert!((v.re - erf_a * erf_a).abs() < 1e-9, "{v} vs {}", erf_a * erf_a);
        let s = project_compact_quadrature(&dens, 2, &spec()).unwrap();
        assert!((s.coeff(&MultiIndex::d1(0)).to_complex().re - v.re).abs() < 1e-9);
        // odd moment of the symmetric box vanishes
        assert!(s.coeff(&MultiIndex::d1(1)).to_complex().norm() < 1e-12);
    }

    #[test]
    fn compact_density_projection_radial_hat() {
        // F₀(w) = (t² - |w|²)₊ : Π_A F₀(0) = t² - 1 + e^{-t²}
        let t = 1.0f64;
        let dens = CompactDensity::new(
            move |w: Complex64| Complex64::new((t * t - w.norm_sqr()).max(0.0), 0.0),
            (-t, t),
            (-t, t),
        );
        let v = pia_apply_quadrature(&dens, Complex64::new(0.0, 0.0), &spec()).unwrap();
        let want = t * t - 1.0 + (-t * t).exp();
        // the derivative kink along the circle limits the nested rule here
        assert!((v.re - want).abs() < 1e-6, "{v} vs {want}");
    }

    #[test]
    fn growth_check_basis_vector() {
        let mut f = CoefficientSeries::new(1, 0);
        f.set(MultiIndex::d1(0), LogComplex::ONE).unwrap();
        let maj = Majorant::Linear(RadiusVector::uniform(1, 1.0).unwrap());
        let grid = GridSpec::geometric(0.25, 8.0, 20, 4);
        let (sup, arg) = growth_bound_check(&f, &maj, &grid).unwrap();
        assert!(sup.abs() < 1e-12); // sup = 1 in log scale
        assert_eq!(arg[0], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn growth_check_detects_violation() {
        // truncated e^{2z}: against e^{1·|z|} the partial sums outgrow the
        // majorant as the grid expands
        let mut f = CoefficientSeries::new(1, 40);
        for k in 0..=40usize {
            f.set_monomial(
                MultiIndex::d1(k),
                LogComplex::from_log_mag(k as f64 * 2f64.ln() - log_factorial_1d(k)),
            )
            .unwrap();
        }
        let maj = Majorant::Linear(RadiusVector::uniform(1, 1.0).unwrap());
        let small = GridSpec::geometric(0.5, 5.0, 16, 4);
        let large = GridSpec::geometric(0.5, 15.0, 24, 4);
        let (s1, _) = growth_bound_check(&f, &maj, &small).unwrap();
        let (s2, _) = growth_bound_check(&f, &maj, &large).unwrap();
        assert!(s2 > s1 + 1.0, "sup should keep growing: {s1} -> {s2}");
    }

    #[test]
    fn invalid_cutoffs_rejected() {
        assert!(RadialCutoff::indicator(1, 0.0).is_err());
        assert!(RadialCutoff::trapezoid(1, 1.0, 1.0).is_err());
        assert!(RadialCutoff::new(
            vec![2.0],
            vec![1.0],
            1.0,
            CutoffProfile::Tensor(vec![AxisCutoff::Indicator])
        )
        .is_err());
        // declared lower bound above the actual profile
        assert!(RadialCutoff::new(
            vec![1.0],
            vec![1.0],
            0.9,
            CutoffProfile::Tensor(vec![AxisCutoff::Scaled(0.5)])
        )
        .is_err());
    }

    #[test]
    fn degenerate_cutoff_detected() {
        let z2 = RadialCutoff::new(
            vec![1.0],
            vec![1.0],
            1e-300,
            CutoffProfile::Tensor(vec![AxisCutoff::Table {
                knots: vec![(0.0, 0.0), (1.0, 0.0)],
            }]),
        );
        match z2 {
            Err(_) => {}
            Ok(chi) => {
                assert!(matches!(
                    varsigma(&MultiIndex::d1(0), &chi, &spec()),
                    Err(Error::DegenerateCutoff)
                ));
            }
        }
    }
}
