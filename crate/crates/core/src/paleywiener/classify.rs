//! Growth-class classification of coefficient series by template fitting,
//! and the growth-side radius probe.
//!
//! All asymptotic bounds carry hidden constants at small `α`, so fits run on
//! the window `|α| ∈ [N/4, N]` by weighted least squares (uniform weights on
//! the window).

use crate::error::{Error, Result};
use crate::numerics::log_factorial_1d;
use crate::projection::{growth_bound_check, GridSpec, Majorant};
use crate::series::CoefficientSeries;
use crate::weights::{OrderParam, RadiusVector};

use super::{log_class_rate_inv, GrowthClass, GrowthSpec, Side};

// Least squares y ≈ Xβ by normal equations with Gaussian elimination;
// fine at the scales involved here (columns are 1, k, ln k!).
fn lstsq(x: &[Vec<f64>], y: &[f64]) -> Option<Vec<f64>> {
    let p = x.len();
    let n = y.len();
    if n < p {
        return None;
    }
    let mut a = vec![vec![0.0f64; p + 1]; p];
    for i in 0..p {
        for j in 0..p {
            a[i][j] = (0..n).map(|t| x[i][t] * x[j][t]).sum();
        }
        a[i][p] = (0..n).map(|t| x[i][t] * y[t]).sum();
    }
    // elimination with partial pivoting
    for col in 0..p {
        let piv = (col..p).max_by(|&r1, &r2| {
            a[r1][col].abs().partial_cmp(&a[r2][col].abs()).unwrap()
        })?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        for row in 0..p {
            if row == col {
                continue;
            }
            let f = a[row][col] / a[col][col];
            for j in col..=p {
                a[row][j] -= f * a[col][j];
            }
        }
    }
    Some((0..p).map(|i| a[i][p] / a[i][i]).collect())
}

fn rms(resids: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = resids.collect();
    (v.iter().map(|r| r * r).sum::<f64>() / v.len() as f64).sqrt()
}

struct FitOutcome {
    class: GrowthClass,
    radius: f64,
    residual: f64,
}

// L_k ≈ C + a k + b ln k!  →  τ = -b, r = ((2τ+1)/2) e^{2a/(2τ+1)}.
fn fit_flat(data: &[(usize, f64)]) -> Option<FitOutcome> {
    let ks: Vec<f64> = data.iter().map(|&(k, _)| k as f64).collect();
    let lf: Vec<f64> = data.iter().map(|&(k, _)| log_factorial_1d(k)).collect();
    let ones = vec![1.0; data.len()];
    let y: Vec<f64> = data.iter().map(|&(_, l)| l).collect();
    let beta = lstsq(&[ones.clone(), ks.clone(), lf.clone()], &y)?;
    let (c, a, b) = (beta[0], beta[1], beta[2]);
    let tau = -b;
    if !(tau > 0.01) {
        return None; // not a decaying factorial class
    }
    let m = 2.0 * tau + 1.0;
    let radius = 0.5 * m * (2.0 * a / m).exp();
    let residual = rms(
        data.iter()
            .enumerate()
            .map(|(i, &(_, l))| c + a * ks[i] + b * lf[i] - l),
    );
    Some(FitOutcome {
        class: GrowthClass::Flat {
            sigma: 1.0 / (2.0 * tau),
        },
        radius,
        residual,
    })
}

// L_k ≈ C + a k  →  geometric rate e^a (the s = ½ family).
fn fit_geometric(data: &[(usize, f64)]) -> Option<FitOutcome> {
    let ks: Vec<f64> = data.iter().map(|&(k, _)| k as f64).collect();
    let ones = vec![1.0; data.len()];
    let y: Vec<f64> = data.iter().map(|&(_, l)| l).collect();
    let beta = lstsq(&[ones.clone(), ks.clone()], &y)?;
    let (c, a) = (beta[0], beta[1]);
    let residual = rms(data.iter().map(|&(k, l)| c + a * k as f64 - l));
    Some(FitOutcome {
        class: GrowthClass::Geometric,
        radius: a.exp(),
        residual,
    })
}

// log(-L_k) ≈ log R + (1/(2s)) log k, residual measured back in L-space.
fn fit_log_power(data: &[(usize, f64)]) -> Option<FitOutcome> {
    let usable: Vec<(f64, f64)> = data
        .iter()
        .filter(|&&(k, l)| k >= 1 && l < -1e-9)
        .map(|&(k, l)| ((k as f64).ln(), (-l).ln()))
        .collect();
    if usable.len() < 6 {
        return None;
    }
    let ones = vec![1.0; usable.len()];
    let lk: Vec<f64> = usable.iter().map(|&(x, _)| x).collect();
    let y: Vec<f64> = usable.iter().map(|&(_, v)| v).collect();
    let beta = lstsq(&[ones, lk], &y)?;
    let (log_r, slope) = (beta[0], beta[1]);
    if !(slope > 1.02) {
        return None; // exponent 1/(2s) must exceed 1 for s < 1/2
    }
    let s = 1.0 / (2.0 * slope);
    let big_r = log_r.exp();
    // refit the offset in L-space for a fair residual comparison
    let offs: Vec<f64> = data
        .iter()
        .filter(|&&(k, _)| k >= 1)
        .map(|&(k, l)| l + big_r * (k as f64).powf(slope))
        .collect();
    let c = offs.iter().sum::<f64>() / offs.len() as f64;
    let residual = rms(
        data.iter()
            .filter(|&&(k, _)| k >= 1)
            .map(|&(k, l)| c - big_r * (k as f64).powf(slope) - l),
    );
    Some(FitOutcome {
        class: GrowthClass::LogPower { s },
        radius: log_class_rate_inv(s, big_r),
        residual,
    })
}

// Pinned-class radius refit on a sub-window, for the side heuristic.
fn radius_on_window(data: &[(usize, f64)], class: &GrowthClass) -> Option<f64> {
    if data.len() < 4 {
        return None;
    }
    match class {
        GrowthClass::Flat { sigma } => {
            let tau = 1.0 / (2.0 * sigma);
            Some(fit_flat_radius(data, tau, false))
        }
        GrowthClass::Geometric => fit_geometric(data).map(|f| f.radius),
        GrowthClass::LogPower { s } => {
            // pinned s: regress -L on k^{1/(2s)}
            let xs: Vec<f64> = data
                .iter()
                .map(|&(k, _)| (k as f64).powf(1.0 / (2.0 * s)))
                .collect();
            let ones = vec![1.0; data.len()];
            let y: Vec<f64> = data.iter().map(|&(_, l)| -l).collect();
            let beta = lstsq(&[ones, xs], &y)?;
            if beta[1] <= 0.0 {
                return None;
            }
            Some(log_class_rate_inv(*s, beta[1]))
        }
        GrowthClass::Polynomial { .. } => None,
    }
}

/// Radius fit with the factorial exponent pinned at `τ`:
/// regress `L + τ ln k!` (optionally minus the `ln(k+1)` bracket of the
/// normalization estimate) on `[1, k]` and invert the slope.
pub fn fit_flat_radius(data: &[(usize, f64)], tau: f64, subtract_bracket: bool) -> f64 {
    let ks: Vec<f64> = data.iter().map(|&(k, _)| k as f64).collect();
    let ones = vec![1.0; data.len()];
    let y: Vec<f64> = data
        .iter()
        .map(|&(k, l)| {
            let mut v = l + tau * log_factorial_1d(k);
            if subtract_bracket {
                v -= ((k + 1) as f64).ln();
            }
            v
        })
        .collect();
    let beta = lstsq(&[ones, ks], &y).unwrap_or(vec![0.0, 0.0]);
    let m = 2.0 * tau + 1.0;
    0.5 * m * (2.0 * beta[1] / m).exp()
}

fn window(data: &[(usize, f64)], lo_frac: f64, hi_frac: f64) -> Vec<(usize, f64)> {
    let n = data.iter().map(|&(k, _)| k).max().unwrap_or(0);
    let lo = (n as f64 * lo_frac).floor() as usize;
    let hi = (n as f64 * hi_frac).ceil() as usize;
    data.iter()
        .filter(|&&(k, _)| k >= lo && k <= hi)
        .copied()
        .collect()
}

/// Classify the coefficient decay of a series against the nested templates,
/// choosing the smallest residual (ties toward the smaller class:
/// polynomial < log-power < geometric < flat).
///
/// A series with fewer than 8 nonzero coefficients along some axis is
/// reported as polynomial directly.
pub fn classify(f: &CoefficientSeries) -> Result<GrowthSpec> {
    if f.is_empty() {
        return Err(Error::InsufficientData("series has no coefficients".into()));
    }
    let d = f.d();
    let mut class: Option<GrowthClass> = None;
    let mut radii = Vec::with_capacity(d);
    let mut residual: f64 = 0.0;
    let mut side: Option<Side> = None;

    for j in 0..d {
        let mut data: Vec<(usize, f64)> = f
            .axis_profile(j)
            .into_iter()
            .filter(|&(_, l)| l.is_finite())
            .collect();
        data.sort_by_key(|&(k, _)| k);
        if data.len() < 8 {
            return Ok(GrowthSpec {
                class: GrowthClass::Polynomial {
                    degree: f.max_degree(),
                },
                radius: vec![0.0; d],
                residual: 0.0,
                side: None,
            });
        }
        let win = {
            let w = window(&data, 0.25, 1.0);
            if w.len() >= 6 {
                w
            } else {
                data.clone()
            }
        };

        let mut candidates: Vec<FitOutcome> = Vec::new();
        // order encodes the tie-break: log-power < geometric < flat
        if let Some(c) = fit_log_power(&win) {
            candidates.push(c);
        }
        if let Some(c) = fit_geometric(&win) {
            candidates.push(c);
        }
        if let Some(c) = fit_flat(&win) {
            candidates.push(c);
        }
        let best = candidates
            .into_iter()
            .enumerate()
            .min_by(|(i1, c1), (i2, c2)| {
                (c1.residual - 1e-9 * (*i1 as f64))
                    .partial_cmp(&(c2.residual - 1e-9 * (*i2 as f64)))
                    .unwrap()
            })
            .map(|(_, c)| c)
            .ok_or_else(|| Error::InsufficientData("no template fits the axis data".into()))?;

        // classes must agree across axes for a tensor classification
        match (&class, &best.class) {
            (None, c) => class = Some(*c),
            (Some(a), b) if std::mem::discriminant(a) == std::mem::discriminant(b) => {}
            _ => {
                return Err(Error::InsufficientData(
                    "axes classify into different growth classes".into(),
                ))
            }
        }
        radii.push(best.radius);
        residual = residual.max(best.residual);

        // split-window radius agreement: Roumieu witness vs Beurling evidence
        if j == 0 {
            let w1 = window(&data, 0.25, 0.625);
            let w2 = window(&data, 0.625, 1.0);
            if let (Some(r1), Some(r2)) = (
                radius_on_window(&w1, &best.class),
                radius_on_window(&w2, &best.class),
            ) {
                if (r1 - r2).abs() <= 0.05 * r1.abs().max(r2.abs()) {
                    side = Some(Side::Roumieu);
                } else if r2 < 0.85 * r1 {
                    side = Some(Side::Beurling);
                }
            }
        }
    }

    // merge the flat order across axes by averaging
    let class = match class.unwrap() {
        GrowthClass::Flat { .. } if d > 1 => {
            let mut sigmas = Vec::new();
            for j in 0..d {
                let mut data: Vec<(usize, f64)> = f.axis_profile(j).into_iter().collect();
                data.sort_by_key(|&(k, _)| k);
                let win = window(&data, 0.25, 1.0);
                if let Some(FitOutcome {
                    class: GrowthClass::Flat { sigma },
                    ..
                }) = fit_flat(&win)
                {
                    sigmas.push(sigma);
                }
            }
            if sigmas.len() == d {
                GrowthClass::Flat {
                    sigma: sigmas.iter().sum::<f64>() / d as f64,
                }
            } else {
                class.unwrap()
            }
        }
        c => c,
    };

    Ok(GrowthSpec {
        class,
        radius: radii,
        residual,
        side,
    })
}

/// Sup of `|F(z)| e^{-M_{1,r,s}(z)}` over expanding grids up to `|z| =
/// grid_cap`: stable when the last two expansions move the log-sup by less
/// than `ln(1.01)`.
pub fn sup_stabilizes(
    f: &CoefficientSeries,
    order: &OrderParam,
    r: f64,
    grid_cap: f64,
) -> Result<(bool, f64)> {
    let rv = RadiusVector::uniform(f.d(), r)?;
    let maj = Majorant::Weighted {
        j: 1,
        zero_variant: false,
        order: *order,
        r: rv,
    };
    let caps = [grid_cap / 8.0, grid_cap / 4.0, grid_cap / 2.0, grid_cap];
    let mut sups = Vec::new();
    for cap in caps {
        let grid = GridSpec::geometric(0.25, cap, 32, 8);
        let (sup, _) = growth_bound_check(f, &maj, &grid)?;
        sups.push(sup);
    }
    let tol = 1.01f64.ln();
    let stable = (sups[3] - sups[2]).abs() < tol && (sups[2] - sups[1]).abs() < tol;
    Ok((stable, sups[3]))
}

/// Scan candidate radii (ascending) and return the smallest for which the
/// sampled sup stabilizes.
pub fn growth_to_coeff(
    f: &CoefficientSeries,
    order: &OrderParam,
    candidates: &[f64],
    grid_cap: f64,
) -> Result<f64> {
    let mut sorted = candidates.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for r in sorted {
        let (stable, _) = sup_stabilizes(f, order, r, grid_cap)?;
        if stable {
            return Ok(r);
        }
    }
    Err(Error::NoStabilization { cap: grid_cap })
}

#[cfg(test)]
mod tests {
    use super::super::{template_series_flat, template_series_log};
    use super::*;
    use crate::numerics::{LogComplex, MultiIndex};

    #[test]
    fn classifies_flat_template() {
        // τ=1, r=3/2 template: Flat(σ=1/2) with radius ≈ 1.5
        let f = template_series_flat(1.0, 1.5, 60);
        let spec = classify(&f).unwrap();
        match spec.class {
            GrowthClass::Flat { sigma } => assert!((sigma - 0.5).abs() < 0.02, "{sigma}"),
            c => panic!("wrong class {c:?}"),
        }
        assert!((spec.radius[0] - 1.5).abs() < 0.15, "{}", spec.radius[0]);
        assert_eq!(spec.side, Some(Side::Roumieu));
    }

    #[test]
    fn classifies_log_template() {
        // c_k = e^{-k²/8}: LogPower(s=1/4), r ≈ 1
        let f = template_series_log(0.25, 1.0, 60).unwrap();
        let spec = classify(&f).unwrap();
        match spec.class {
            GrowthClass::LogPower { s } => assert!((s - 0.25).abs() < 0.02, "{s}"),
            c => panic!("wrong class {c:?}"),
        }
        assert!((spec.radius[0] - 1.0).abs() < 0.1, "{}", spec.radius[0]);
    }

    #[test]
    fn classifies_geometric_template() {
        let mut f = CoefficientSeries::new(1, 50);
        for k in 0..=50usize {
            f.set(
                MultiIndex::d1(k),
                LogComplex::from_log_mag(k as f64 * 0.7f64.ln()),
            )
            .unwrap();
        }
        let spec = classify(&f).unwrap();
        assert_eq!(spec.class, GrowthClass::Geometric);
        assert!((spec.radius[0] - 0.7).abs() < 0.05);
    }

    #[test]
    fn single_term_is_polynomial() {
        let mut f = CoefficientSeries::new(1, 10);
        f.set(MultiIndex::d1(7), LogComplex::ONE).unwrap();
        let spec = classify(&f).unwrap();
        assert_eq!(spec.class, GrowthClass::Polynomial { degree: 7 });
    }

    #[test]
    fn empty_series_is_insufficient() {
        let f = CoefficientSeries::new(1, 10);
        assert!(classify(&f).is_err());
    }

    #[test]
    fn beurling_template_flagged() {
        // c_k = k!^{-3/2}: faster than every fixed flat radius; the window
        // radii shrink
        let mut f = CoefficientSeries::new(1, 60);
        for k in 0..=60usize {
            f.set(
                MultiIndex::d1(k),
                LogComplex::from_log_mag(-1.5 * log_factorial_1d(k)),
            )
            .unwrap();
        }
        let spec = classify(&f).unwrap();
        // free fit sees α!^{-3/2}: a flat class
        match spec.class {
            GrowthClass::Flat { sigma } => assert!((sigma - 1.0 / 3.0).abs() < 0.02),
            c => panic!("wrong class {c:?}"),
        }
    }

    #[test]
    fn stabilization_discriminates_radius() {
        // τ=1, r₀=1 flat template: stable at 1.25·r₀, unstable at 0.8·r₀
        let f = template_series_flat(1.0, 1.0, 60);
        let order = OrderParam::Flat(0.5);
        let (stable_hi, _) = sup_stabilizes(&f, &order, 1.25, 40.0).unwrap();
        let (stable_lo, _) = sup_stabilizes(&f, &order, 0.8, 40.0).unwrap();
        assert!(stable_hi);
        assert!(!stable_lo);
    }

    #[test]
    fn growth_to_coeff_brackets_the_radius() {
        let f = template_series_flat(1.0, 1.0, 60);
        let order = OrderParam::Flat(0.5);
        let r = growth_to_coeff(&f, &order, &[0.6, 0.8, 1.1, 1.4, 2.0], 40.0).unwrap();
        assert!((1.0..=1.4).contains(&r), "picked {r}");
        // a basis vector stabilizes at every probed radius: smallest returned
        let mut e0 = CoefficientSeries::new(1, 0);
        e0.set(MultiIndex::d1(0), LogComplex::ONE).unwrap();
        let r = growth_to_coeff(&e0, &order, &[0.3, 1.0], 40.0).unwrap();
        assert_eq!(r, 0.3);
        // polynomials stabilize for every radius even in the log-power probe
        let mut poly = CoefficientSeries::new(1, 5);
        for k in 0..=5usize {
            poly.set(MultiIndex::d1(k), LogComplex::ONE).unwrap();
        }
        let r = growth_to_coeff(&poly, &OrderParam::Real(0.25), &[0.5], 40.0).unwrap();
        assert_eq!(r, 0.5);
    }

    #[test]
    fn no_stabilization_reported() {
        // e^{2z}-type series against too-small linear-class radii
        let f = template_series_flat(0.5, 2.0, 60);
        let order = OrderParam::Flat(1.0);
        let r = growth_to_coeff(&f, &order, &[0.5, 1.0, 1.5], 40.0);
        assert!(matches!(r, Err(Error::NoStabilization { .. })));
    }
}
