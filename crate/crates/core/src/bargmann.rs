//! Real-side machinery: Hermite functions, the Bargmann transform, the
//! Gaussian-window short-time Fourier transform and its adjoint, and the
//! phase-space bridges between them.
//!
//! Conventions (d = 1 shown):
//!
//! * kernel `𝔄(z,y) = π^{-1/4} exp(-½(z² + y²) + √2 z y)` with the bilinear
//!   pairing `⟨z,w⟩ = Σ z_j w_j` (no conjugation);
//! * `V f(x,ξ) = (2π)^{-1/2} ∫ f(y) φ(y-x) e^{-iyξ} dy`, window
//!   `φ = π^{-1/4} e^{-y²/2}`.  The `(2π)^{-d/2}` prefactor is what makes
//!   `𝔙 = U_𝔙 ∘ V` hold with `U_𝔙` carrying `(2π)^{d/2}`;
//! * adjoint `V*F(x) = (2π)^{-1/2} ∬ F(y,η) e^{-½(x-y)²} e^{ixη} dy dη`;
//! * `𝔙(V*F) = Π_A F₀` with `F₀(x+iξ) = (4π³)^{d/4} F(√2x, -√2ξ)
//!   e^{½(x²+ξ²)} e^{-ixξ}`.  The constant `(4π³)^{d/4}` is forced by the
//!   adjoint normalization above (direct Gaussian-integral computation).

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{integrate_1d_complex, LogComplex, MultiIndex, QuadratureSpec};
use crate::projection::CompactDensity;
use crate::series::CoefficientSeries;

/// A truncated Hermite expansion `f = Σ c_h(f,α) h_α`.
///
/// Coefficient maps are shared with the entire side: the transform sends
/// `h_α ↦ e_α`, so the same map read against `e_α` is the transform of `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermiteSeries(CoefficientSeries);

impl HermiteSeries {
    pub fn new(d: usize, truncation: usize) -> Self {
        Self(CoefficientSeries::new(d, truncation))
    }

    pub fn from_coefficients(c: CoefficientSeries) -> Self {
        Self(c)
    }

    pub fn coefficients(&self) -> &CoefficientSeries {
        &self.0
    }

    pub fn into_coefficients(self) -> CoefficientSeries {
        self.0
    }

    pub fn d(&self) -> usize {
        self.0.d()
    }

    pub fn set(&mut self, alpha: MultiIndex, c: LogComplex) -> Result<()> {
        self.0.set(alpha, c)
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> LogComplex {
        self.0.coeff(alpha)
    }

    /// Pointwise evaluation `Σ c_h(f,α) h_α(x)`.
    pub fn eval_real(&self, x: &[f64]) -> Complex64 {
        assert_eq!(x.len(), self.d());
        let max_deg = self.0.max_degree();
        let tables: Vec<Vec<f64>> = x.iter().map(|&t| hermite_axis_values(max_deg, t)).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (alpha, c) in self.0.iter() {
            let h: f64 = alpha
                .entries()
                .iter()
                .enumerate()
                .map(|(j, &k)| tables[j][k])
                .product();
            acc += c.to_complex() * h;
        }
        acc
    }

    /// Parseval at truncation: `log Σ |c_h|²`.
    pub fn norm_sq_log(&self) -> f64 {
        self.0.norm_sq_log()
    }
}

/// Values `h_0(t), …, h_n(t)` by the stable three-term recurrence
/// `h_{k+1} = √(2/(k+1)) t h_k - √(k/(k+1)) h_{k-1}`.
fn hermite_axis_values(n: usize, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let h0 = std::f64::consts::PI.powf(-0.25) * (-t * t / 2.0).exp();
    out.push(h0);
    if n == 0 {
        return out;
    }
    out.push(2f64.sqrt() * t * h0);
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * t * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// The Hermite function `h_α(x)`, product of per-axis recurrences.
pub fn hermite_eval(alpha: &MultiIndex, x: &[f64]) -> f64 {
    assert_eq!(alpha.dim(), x.len(), "dimension mismatch");
    alpha
        .entries()
        .iter()
        .zip(x)
        .map(|(&k, &t)| hermite_axis_values(k, t)[k])
        .product()
}

/// The Bargmann kernel `𝔄_d(z,y)` in log form.
pub fn bargmann_kernel(z: &[Complex64], y: &[f64]) -> LogComplex {
    assert_eq!(z.len(), y.len(), "dimension mismatch");
    let d = z.len() as f64;
    let mut exponent = Complex64::new(0.0, 0.0);
    for (zj, &yj) in z.iter().zip(y) {
        exponent += -0.5 * (zj * zj + yj * yj) + 2f64.sqrt() * zj * yj;
    }
    LogComplex::new(
        exponent.re - 0.25 * d * std::f64::consts::PI.ln(),
        exponent.im,
    )
}

/// The transform of a Hermite expansion is the same coefficient map against
/// `e_α`; evaluation at `z` is series evaluation.
pub fn bargmann_transform_series(f: &HermiteSeries, z: &[Complex64]) -> LogComplex {
    f.coefficients().eval(z)
}

/// A function on ℝ^d supplied as a callable: a tensor product of per-axis
/// factors, or a joint callable (`d ≤ 2` for quadrature consumers).
///
/// Callables must be Gaussian-decaying for the transform integrals to
/// converge; suppliers are responsible for thread-safe evaluation.
#[derive(Clone)]
pub enum RealFn {
    Separable(Vec<Arc<dyn Fn(f64) -> Complex64 + Send + Sync>>),
    Joint {
        d: usize,
        f: Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>,
    },
}

impl RealFn {
    pub fn dim(&self) -> usize {
        match self {
            RealFn::Separable(axes) => axes.len(),
            RealFn::Joint { d, .. } => *d,
        }
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        match self {
            RealFn::Separable(axes) => axes.iter().zip(x).map(|(f, &t)| f(t)).product(),
            RealFn::Joint { f, .. } => f(x),
        }
    }

    /// The Hermite function `h_α` as a separable callable.
    pub fn hermite(alpha: &MultiIndex) -> RealFn {
        RealFn::Separable(
            alpha
                .entries()
                .iter()
                .map(|&k| {
                    let f: Arc<dyn Fn(f64) -> Complex64 + Send + Sync> =
                        Arc::new(move |t: f64| {
                            Complex64::new(hermite_axis_values(k, t)[k], 0.0)
                        });
                    f
                })
                .collect(),
        )
    }

    /// The Gaussian window `φ(x) = π^{-d/4} e^{-|x|²/2}`.
    pub fn gaussian_window(d: usize) -> RealFn {
        RealFn::Separable(
            (0..d)
                .map(|_| {
                    let f: Arc<dyn Fn(f64) -> Complex64 + Send + Sync> = Arc::new(|t: f64| {
                        Complex64::new(
                            std::f64::consts::PI.powf(-0.25) * (-t * t / 2.0).exp(),
                            0.0,
                        )
                    });
                    f
                })
                .collect(),
        )
    }

    /// A Hermite expansion as a joint callable.
    pub fn from_hermite_series(f: &HermiteSeries) -> RealFn {
        let f = f.clone();
        RealFn::Joint {
            d: f.d(),
            f: Arc::new(move |x: &[f64]| f.eval_real(x)),
        }
    }
}

// One axis of the Bargmann integral: ∫ π^{-1/4} e^{-½(z²+y²)+√2 z y} g(y) dy.
// The kernel Gaussian is centered at √2·Re z; Gaussian-decaying g is assumed
// centered near the origin, so the window covers both.
fn bargmann_axis_integral(
    g: &dyn Fn(f64) -> Complex64,
    z: Complex64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let center = 2f64.sqrt() * z.re;
    let lo = center.min(0.0) - 14.0;
    let hi = center.max(0.0) + 14.0;
    let (v, _) = integrate_1d_complex(
        |y| {
            let exponent = -0.5 * (z * z + y * y) + 2f64.sqrt() * z * y;
            std::f64::consts::PI.powf(-0.25) * exponent.exp() * g(y)
        },
        lo,
        hi,
        spec,
    )?;
    Ok(v)
}

/// Quadrature path of the transform: `(𝔙f)(z) = ∫ 𝔄(z,y) f(y) dy`.
pub fn bargmann_transform_quad(
    f: &RealFn,
    z: &[Complex64],
    spec: &QuadratureSpec,
) -> Result<LogComplex> {
    if f.dim() != z.len() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: z.len(),
        });
    }
    match f {
        RealFn::Separable(axes) => {
            let mut acc = LogComplex::ONE;
            for (g, &zj) in axes.iter().zip(z) {
                let v = bargmann_axis_integral(&**g, zj, spec)?;
                acc = acc.mul(LogComplex::from_complex(v));
            }
            Ok(acc)
        }
        RealFn::Joint { d, f } => match d {
            1 => {
                let z0 = z[0];
                let g = f.clone();
                let v = bargmann_axis_integral(&move |y| g(&[y]), z0, spec)?;
                Ok(LogComplex::from_complex(v))
            }
            2 => {
                let (z0, z1) = (z[0], z[1]);
                let g = f.clone();
                let c0 = 2f64.sqrt() * z0.re;
                let (lo, hi) = (c0.min(0.0) - 14.0, c0.max(0.0) + 14.0);
                let outer = move |y0: f64| -> Complex64 {
                    let g = g.clone();
                    let e0 = -0.5 * (z0 * z0 + y0 * y0) + 2f64.sqrt() * z0 * y0;
                    let inner = move |y1: f64| g(&[y0, y1]);
                    match bargmann_axis_integral(&inner, z1, spec) {
                        Ok(v) => std::f64::consts::PI.powf(-0.25) * e0.exp() * v,
                        Err(_) => Complex64::new(f64::NAN, f64::NAN),
                    }
                };
                let (v, _) = integrate_1d_complex(outer, lo, hi, spec)?;
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::NonConvergence {
                        context: "inner transform quadrature".into(),
                        err: f64::NAN,
                    });
                }
                Ok(LogComplex::from_complex(v))
            }
            _ => Err(Error::Unsupported(
                "joint transform quadrature is limited to d <= 2".into(),
            )),
        },
    }
}

/// A point `(x, ξ)` in phase space.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSpacePoint {
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
}

impl PhaseSpacePoint {
    pub fn new(x: Vec<f64>, xi: Vec<f64>) -> Result<Self> {
        if x.len() != xi.len() || x.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: xi.len(),
            });
        }
        Ok(Self { x, xi })
    }

    pub fn d1(x: f64, xi: f64) -> Self {
        Self {
            x: vec![x],
            xi: vec![xi],
        }
    }

    pub fn d(&self) -> usize {
        self.x.len()
    }
}

/// Gaussian-window short-time Fourier transform
/// `V f(x,ξ) = (2π)^{-d/2} ∫ f(y) φ(y-x) e^{-i⟨y,ξ⟩} dy`.
pub fn stft_gaussian(f: &RealFn, p: &PhaseSpacePoint, spec: &QuadratureSpec) -> Result<Complex64> {
    let d = f.dim();
    if p.d() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: p.d(),
        });
    }
    let prefactor = (2.0 * std::f64::consts::PI).powf(-(d as f64) / 2.0);
    let window = |y: f64, x: f64| {
        std::f64::consts::PI.powf(-0.25) * (-(y - x) * (y - x) / 2.0).exp()
    };
    match f {
        RealFn::Separable(axes) => {
            let mut acc = Complex64::new(prefactor, 0.0);
            for (j, g) in axes.iter().enumerate() {
                let (x, xi) = (p.x[j], p.xi[j]);
                let lo = x.min(0.0) - 14.0;
                let hi = x.max(0.0) + 14.0;
                let (v, _) = integrate_1d_complex(
                    |y| g(y) * window(y, x) * Complex64::new(0.0, -y * xi).exp(),
                    lo,
                    hi,
                    spec,
                )?;
                acc *= v;
            }
            Ok(acc)
        }
        RealFn::Joint { d, f } => match d {
            1 => {
                let (x, xi) = (p.x[0], p.xi[0]);
                let lo = x.min(0.0) - 14.0;
                let hi = x.max(0.0) + 14.0;
                let (v, _) = integrate_1d_complex(
                    |y| f(&[y]) * window(y, x) * Complex64::new(0.0, -y * xi).exp(),
                    lo,
                    hi,
                    spec,
                )?;
                Ok(prefactor * v)
            }
            2 => {
                let (x0, xi0, x1, xi1) = (p.x[0], p.xi[0], p.x[1], p.xi[1]);
                let g = f.clone();
                let outer = move |y0: f64| -> Complex64 {
                    let g = g.clone();
                    let w0 = window(y0, x0) * Complex64::new(0.0, -y0 * xi0).exp();
                    let inner = move |y1: f64| {
                        g(&[y0, y1]) * window(y1, x1) * Complex64::new(0.0, -y1 * xi1).exp()
                    };
                    match integrate_1d_complex(
                        inner,
                        x1.min(0.0) - 14.0,
                        x1.max(0.0) + 14.0,
                        spec,
                    ) {
                        Ok((v, _)) => w0 * v,
                        Err(_) => Complex64::new(f64::NAN, f64::NAN),
                    }
                };
                let (v, _) =
                    integrate_1d_complex(outer, x0.min(0.0) - 14.0, x0.max(0.0) + 14.0, spec)?;
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::NonConvergence {
                        context: "inner window quadrature".into(),
                        err: f64::NAN,
                    });
                }
                Ok(prefactor * v)
            }
            _ => Err(Error::Unsupported(
                "joint window quadrature is limited to d <= 2".into(),
            )),
        },
    }
}

/// `(U_𝔙 F)(x,ξ) = (2π)^{d/2} e^{½(|x|²+|ξ|²)} e^{-i⟨x,ξ⟩} F(√2x, -√2ξ)`.
pub fn uv_operator<F: Fn(&[f64], &[f64]) -> Complex64>(f: F, p: &PhaseSpacePoint) -> Complex64 {
    let d = p.d() as f64;
    let y: Vec<f64> = p.x.iter().map(|&x| 2f64.sqrt() * x).collect();
    let eta: Vec<f64> = p.xi.iter().map(|&xi| -(2f64.sqrt()) * xi).collect();
    let half_sq: f64 = p
        .x
        .iter()
        .zip(&p.xi)
        .map(|(&x, &xi)| 0.5 * (x * x + xi * xi))
        .sum();
    let phase: f64 = p.x.iter().zip(&p.xi).map(|(&x, &xi)| x * xi).sum();
    (2.0 * std::f64::consts::PI).powf(d / 2.0)
        * (Complex64::new(half_sq, -phase)).exp()
        * f(&y, &eta)
}

/// The dilation `(S F)(x,ξ) = F(x/√2, -ξ/√2)`.
pub fn dilation<F: Fn(&[f64], &[f64]) -> Complex64>(f: F, p: &PhaseSpacePoint) -> Complex64 {
    let y: Vec<f64> = p.x.iter().map(|&x| x / 2f64.sqrt()).collect();
    let eta: Vec<f64> = p.xi.iter().map(|&xi| -xi / 2f64.sqrt()).collect();
    f(&y, &eta)
}

/// The inverse dilation `(S⁻¹F)(x,ξ) = F(√2 x, -√2 ξ)`.
pub fn dilation_inv<F: Fn(&[f64], &[f64]) -> Complex64>(f: F, p: &PhaseSpacePoint) -> Complex64 {
    let y: Vec<f64> = p.x.iter().map(|&x| 2f64.sqrt() * x).collect();
    let eta: Vec<f64> = p.xi.iter().map(|&xi| -(2f64.sqrt()) * xi).collect();
    f(&y, &eta)
}

/// A compactly supported callable on phase space with its support box.
#[derive(Clone)]
pub struct PhaseSpaceFn {
    pub d: usize,
    pub f: Arc<dyn Fn(&[f64], &[f64]) -> Complex64 + Send + Sync>,
    /// Per-axis `(lo, hi)` bounds in `y`.
    pub y_box: Vec<(f64, f64)>,
    /// Per-axis `(lo, hi)` bounds in `η`.
    pub eta_box: Vec<(f64, f64)>,
}

impl PhaseSpaceFn {
    pub fn new(
        d: usize,
        f: impl Fn(&[f64], &[f64]) -> Complex64 + Send + Sync + 'static,
        y_box: Vec<(f64, f64)>,
        eta_box: Vec<(f64, f64)>,
    ) -> Result<Self> {
        if y_box.len() != d || eta_box.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: y_box.len(),
            });
        }
        Ok(Self {
            d,
            f: Arc::new(f),
            y_box,
            eta_box,
        })
    }

    pub fn eval(&self, y: &[f64], eta: &[f64]) -> Complex64 {
        (self.f)(y, eta)
    }
}

/// The adjoint `V*F(x) = (2π)^{-d/2} ∬ F(y,η) e^{-½|x-y|²} e^{i⟨x,η⟩} dy dη`
/// over the declared support box, `d = 1`.
///
/// The `y` range is intersected with 14 window widths around `x`; the window
/// tail beyond that is below 1e-42.
pub fn stft_adjoint(f: &PhaseSpaceFn, x: &[f64], spec: &QuadratureSpec) -> Result<Complex64> {
    if f.d != 1 {
        return Err(Error::Unsupported(
            "the adjoint quadrature is limited to d = 1".into(),
        ));
    }
    if x.len() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: x.len(),
        });
    }
    let x0 = x[0];
    let (y_lo, y_hi) = f.y_box[0];
    let (e_lo, e_hi) = f.eta_box[0];
    let lo = y_lo.max(x0 - 14.0);
    let hi = y_hi.min(x0 + 14.0);
    if !(lo < hi) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let g = f.f.clone();
    let outer = move |y: f64| -> Complex64 {
        let g = g.clone();
        let inner = move |eta: f64| g(&[y], &[eta]) * Complex64::new(0.0, x0 * eta).exp();
        match integrate_1d_complex(inner, e_lo, e_hi, spec) {
            Ok((v, _)) => v * (-0.5 * (x0 - y) * (x0 - y)).exp(),
            Err(_) => Complex64::new(f64::NAN, f64::NAN),
        }
    };
    let (v, _) = integrate_1d_complex(outer, lo, hi, spec)?;
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::NonConvergence {
            context: "inner adjoint quadrature".into(),
            err: f64::NAN,
        });
    }
    Ok(v / (2.0 * std::f64::consts::PI).sqrt())
}

/// Lift a phase-space density to the entire side:
/// `F₀(x+iξ) = (4π³)^{d/4} F(√2x, -√2ξ) e^{½(|x|²+|ξ|²)} e^{-i⟨x,ξ⟩}`,
/// so that `𝔙(V*F) = Π_A F₀` exactly under this module's conventions.
pub fn lift_density(f: &PhaseSpaceFn) -> CompactDensity {
    assert_eq!(f.d, 1, "the lifted density is produced for d = 1");
    let g = f.f.clone();
    let constant = (4.0 * std::f64::consts::PI.powi(3)).powf(0.25);
    let (y_lo, y_hi) = f.y_box[0];
    let (e_lo, e_hi) = f.eta_box[0];
    let callable = move |z: Complex64| -> Complex64 {
        let (x, xi) = (z.re, z.im);
        let y = 2f64.sqrt() * x;
        let eta = -(2f64.sqrt()) * xi;
        if y < y_lo || y > y_hi || eta < e_lo || eta > e_hi {
            return Complex64::new(0.0, 0.0);
        }
        constant
            * g(&[y], &[eta])
            * Complex64::new(0.5 * (x * x + xi * xi), -x * xi).exp()
    };
    let s = 2f64.sqrt();
    CompactDensity::new(
        callable,
        (y_lo / s, y_hi / s),
        (-e_hi / s, -e_lo / s),
    )
}

/// `H_d^N` applied to a Hermite expansion: each coefficient is multiplied by
/// the eigenvalue power `(2|α|+d)^N`.
pub fn harmonic_oscillator_apply(f: &HermiteSeries, n: u32) -> HermiteSeries {
    let d = f.d() as f64;
    HermiteSeries(
        f.coefficients()
            .map_diagonal(|alpha| n as f64 * (2.0 * alpha.total() as f64 + d).ln()),
    )
}

/// The phase-space density `F(y,η) = G₀((y-iη)/√2) e^{-i⟨y,η⟩/2} χ(y+iη)`
/// whose lift is `(4π³)^{d/4} G₀(z) · (radial factor)`: the witness used by
/// the round-trip checks through the adjoint, `d = 1`.
pub fn radial_witness_density(
    g0: &CoefficientSeries,
    chi: &crate::projection::RadialCutoff,
) -> Result<PhaseSpaceFn> {
    if g0.d() != 1 || chi.d() != 1 {
        return Err(Error::Unsupported(
            "the witness density is produced for d = 1".into(),
        ));
    }
    let t2 = chi.t2()[0];
    let g0 = g0.clone();
    let chi = chi.clone();
    PhaseSpaceFn::new(
        1,
        move |y: &[f64], eta: &[f64]| {
            let w = Complex64::new(y[0], eta[0]);
            let c = chi.eval_z(&[w]);
            if c == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let arg = Complex64::new(y[0], -eta[0]) / 2f64.sqrt();
            g0.eval(&[arg]).to_complex()
                * Complex64::new(0.0, -0.5 * y[0] * eta[0]).exp()
                * c
        },
        vec![(-t2, t2)],
        vec![(-t2, t2)],
    )
}
