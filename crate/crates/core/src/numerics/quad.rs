use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances and subdivision budget for adaptive quadrature.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

// 15-point Kronrod / 7-point Gauss nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_17,
    0.207_784_955_007_898_47,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_69,
    0.279_705_391_489_276_67,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);

    let mut res_kronrod = fc * WGK[7];
    let mut res_gauss = fc * WG[3];
    let mut res_abs = fc.norm() * WGK[7];
    let mut fv = [Complex64::new(0.0, 0.0); 14];

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[j + 7] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.norm() + f2.norm());
        if j % 2 == 1 {
            // odd Kronrod indices are the embedded Gauss nodes
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).norm() + (fv[j + 7] - mean).norm());
    }

    let err = ((res_kronrod - res_gauss) * half).norm();
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();

    // QUADPACK-style error rescaling
    let mut scaled = err;
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    let min_err = 50.0 * f64::EPSILON * res_abs;
    if min_err > scaled {
        scaled = min_err;
    }

    (res_kronrod * half, scaled)
}

struct Interval {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.partial_cmp(&other.err).unwrap_or(Ordering::Equal)
    }
}

/// Adaptive Gauss–Kronrod quadrature of a complex-valued integrand on `[a, b]`.
///
/// Worst-error intervals are bisected first.  Returns the estimate together
/// with the accumulated error bound, or [`Error::NonConvergence`] once the
/// subdivision budget is exhausted without meeting
/// `max(abs_tol, rel_tol · |result|)`.
pub fn integrate_1d_complex<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<(Complex64, f64)> {
    if !(a < b) {
        return Err(Error::Domain(format!(
            "integration interval must satisfy a < b (a={a}, b={b})"
        )));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain("integration bounds must be finite".into()));
    }

    let (v0, e0) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Interval {
        a,
        b,
        value: v0,
        err: e0,
    });
    let mut total = v0;
    let mut total_err = e0;

    for _ in 0..spec.max_subdivisions {
        if total_err <= spec.abs_tol.max(spec.rel_tol * total.norm()) {
            return Ok((total, total_err));
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval no longer splittable at double precision
            heap.push(worst);
            break;
        }
        let (vl, el) = gk15(&f, worst.a, mid);
        let (vr, er) = gk15(&f, mid, worst.b);
        total += vl + vr - worst.value;
        total_err += el + er - worst.err;
        heap.push(Interval {
            a: worst.a,
            b: mid,
            value: vl,
            err: el,
        });
        heap.push(Interval {
            a: mid,
            b: worst.b,
            value: vr,
            err: er,
        });
    }

    if total_err <= spec.abs_tol.max(spec.rel_tol * total.norm()) {
        Ok((total, total_err))
    } else {
        Err(Error::NonConvergence {
            context: format!("adaptive quadrature on [{a}, {b}]"),
            err: total_err,
        })
    }
}

/// Real-valued wrapper around [`integrate_1d_complex`].
pub fn integrate_1d<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    let (v, e) = integrate_1d_complex(|x| Complex64::new(f(x), 0.0), a, b, spec)?;
    Ok((v.re, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_on_unit_interval() {
        let spec = QuadratureSpec::default();
        let (v, e) = integrate_1d(|u| u, 0.0, 1.0, &spec).unwrap();
        assert!((v - 0.5).abs() <= e.max(1e-14));
    }

    #[test]
    fn gaussian_moment_closed_form() {
        // ∫_0^1 e^{-u²} u du = (1 - e^{-1})/2
        let spec = QuadratureSpec::default();
        let (v, e) = integrate_1d(|u| (-u * u).exp() * u, 0.0, 1.0, &spec).unwrap();
        let want = 0.3160602794142788392;
        assert!((v - want).abs() <= e.max(1e-13), "v={v} err={e}");
    }

    #[test]
    fn degenerate_interval_rejected() {
        let spec = QuadratureSpec::default();
        assert!(integrate_1d(|_| 1.0, 0.0, 0.0, &spec).is_err());
        assert!(integrate_1d(|_| 1.0, 2.0, 1.0, &spec).is_err());
    }

    #[test]
    fn polynomial_times_gaussian_family() {
        // ∫_0^L u^{2k+1} e^{-u²} du = (k! - Γ(k+1) Q(k+1, L²))/2 -> via
        // antiderivative recursion checked at k = 0..3, L = 2.5
        let spec = QuadratureSpec::default();
        let l = 2.5f64;
        // closed forms via integration by parts:
        // I_0 = (1 - e^{-L²})/2
        // I_{k} = (k I_{k-1} - L^{2k} e^{-L²}/2)  with I_k = ∫ u^{2k+1}e^{-u²}
        let mut closed = vec![(1.0 - (-l * l).exp()) / 2.0];
        for k in 1..=3usize {
            let prev = closed[k - 1];
            closed.push(k as f64 * prev - l.powi(2 * k as i32) * (-l * l).exp() / 2.0);
        }
        for (k, want) in closed.iter().enumerate() {
            let (v, e) = integrate_1d(
                |u| u.powi(2 * k as i32 + 1) * (-u * u).exp(),
                0.0,
                l,
                &spec,
            )
            .unwrap();
            assert!((v - want).abs() <= e.max(1e-12), "k={k}: {v} vs {want}");
        }
    }

    #[test]
    fn oscillatory_complex_integrand() {
        // ∫_0^{2π} e^{i k t} dt = 0 for k ≠ 0
        let spec = QuadratureSpec::default();
        let (v, _) = integrate_1d_complex(
            |t| Complex64::new(0.0, 5.0 * t).exp(),
            0.0,
            2.0 * std::f64::consts::PI,
            &spec,
        )
        .unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn reports_nonconvergence_on_tiny_budget() {
        let spec = QuadratureSpec {
            abs_tol: 1e-15,
            rel_tol: 1e-15,
            max_subdivisions: 1,
        };
        // |u|^{1/2} kink needs more than one split at this tolerance
        let r = integrate_1d(|u| u.abs().sqrt(), -1.0, 1.0, &spec);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }
}
