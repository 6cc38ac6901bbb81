use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::numerics::MultiIndex;

// Lanczos approximation, g = 7, 9 terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_74;

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        let s = (PI * x).sin();
        return Ok((PI / s).ln() - log_gamma(1.0 - x)?);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Ok(LN_SQRT_2PI + (z + 0.5) * t.ln() - t + acc.ln())
}

const LN_FACT_TABLE_LEN: usize = 4096;

fn ln_fact_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![0.0f64; LN_FACT_TABLE_LEN];
        for k in 1..LN_FACT_TABLE_LEN {
            t[k] = t[k - 1] + (k as f64).ln();
        }
        t
    })
}

/// `ln k!` for a scalar index.
pub fn log_factorial_1d(k: usize) -> f64 {
    let table = ln_fact_table();
    if k < table.len() {
        table[k]
    } else {
        log_gamma(k as f64 + 1.0).expect("k+1 > 0")
    }
}

/// `ln α! = Σ_j ln Γ(α_j + 1)`, compensated so the sum is correctly rounded.
pub fn log_factorial(alpha: &MultiIndex) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &k in alpha.entries() {
        let v = log_factorial_1d(k);
        let t = sum + v;
        comp += if sum.abs() >= v.abs() {
            (sum - t) + v
        } else {
            (v - t) + sum
        };
        sum = t;
    }
    sum + comp
}

/// The limiting constant of the Stirling bracket,
/// `(2τ+1)^{2τ+1/2} (2π)^{-τ}`.
pub fn stirling_limit(tau: f64) -> f64 {
    let m = 2.0 * tau + 1.0;
    ((m - 0.5) * m.ln() - tau * (2.0 * PI).ln()).exp()
}

/// The ratio `Γ((2τ+1)(α+1))/α!` over its Stirling template
/// `(2τ+1)^{(2τ+1)α} (α+1)^τ α!^{2τ}`, evaluated in the log domain.
///
/// As `α → ∞` the ratio tends to [`stirling_limit`]; the bracket
/// `ratio/limit ∈ [1/C, C]` with small `C` realizes the two-sided bound.
pub fn stirling_ratio(tau: f64, alpha: usize) -> Result<f64> {
    if !(tau > -0.5) {
        return Err(Error::Domain(format!(
            "stirling_ratio requires tau > -1/2, got {tau}"
        )));
    }
    let m = 2.0 * tau + 1.0;
    let a = alpha as f64;
    let lf = log_factorial_1d(alpha);
    let log_num = log_gamma(m * (a + 1.0))? - lf;
    let log_template = m * a * m.ln() + tau * (a + 1.0).ln() + 2.0 * tau * lf;
    Ok((log_num - log_template).exp())
}

/// Regularized lower incomplete gamma `P(a, x) = γ(a,x)/Γ(a)`.
///
/// Series for `x < a+1`, continued fraction otherwise; used as an
/// independent closed-form route for indicator-cutoff normalizations.
pub fn regularized_gamma_p(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || x < 0.0 {
        return Err(Error::Domain(format!(
            "regularized_gamma_p requires a > 0, x >= 0 (a={a}, x={x})"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let lg = log_gamma(a)?;
    let log_prefix = a * x.ln() - x - lg;
    if x < a + 1.0 {
        // series: P = x^a e^{-x}/Γ(a) Σ x^n Γ(a)/Γ(a+1+n)
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut ap = a;
        for _ in 0..500 {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * 1e-16 {
                return Ok((log_prefix + sum.ln()).exp().min(1.0));
            }
        }
        Err(Error::NonConvergence {
            context: "incomplete gamma series".into(),
            err: term.abs(),
        })
    } else {
        // Lentz continued fraction for Q(a,x)
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                let q = (log_prefix + h.ln()).exp();
                return Ok((1.0 - q).clamp(0.0, 1.0));
            }
        }
        Err(Error::NonConvergence {
            context: "incomplete gamma continued fraction".into(),
            err: f64::NAN,
        })
    }
}
