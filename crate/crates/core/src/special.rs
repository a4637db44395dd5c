//! Log-gamma, log-beta, trigamma and the regularized incomplete beta function.

use std::f64::consts::PI;

use crate::error::{domain, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Arguments below this are shifted upward before the Stirling series.
const STIRLING_SHIFT: f64 = 8.0;

/// `B_{2k} / (2k (2k-1))` for k = 1..=8.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// `B_{2k}` for k = 1..=7.
const BERNOULLI: [f64; 7] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0];

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} requires a finite positive argument, got {x}")))
    }
}

pub(crate) fn ln_gamma_pos(mut x: f64) -> f64 {
    let mut shift = 0.0;
    if x < STIRLING_SHIFT {
        let mut prod = 1.0;
        while x < STIRLING_SHIFT {
            prod *= x;
            x += 1.0;
        }
        shift = prod.ln();
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = STIRLING_COEFFS.iter().rev().fold(0.0, |acc, &c| acc * inv2 + c) * inv;
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + series - shift
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    positive("log_gamma", x)?;
    Ok(ln_gamma_pos(x))
}

pub(crate) fn ln_beta_pos(a: f64, b: f64) -> f64 {
    ln_gamma_pos(a) + ln_gamma_pos(b) - ln_gamma_pos(a + b)
}

/// `ln B(α, β) = ln Γ(α) + ln Γ(β) - ln Γ(α+β)`.
pub fn log_beta(alpha: f64, beta: f64) -> Result<f64> {
    positive("log_beta", alpha)?;
    positive("log_beta", beta)?;
    Ok(ln_beta_pos(alpha, beta))
}

/// `ψ⁽¹⁾(x) = Σ_{k≥0} 1/(x+k)²`: recurrence up to `x >= 10`, then the
/// asymptotic Bernoulli series.
pub fn trigamma(x: f64) -> Result<f64> {
    positive("trigamma", x)?;
    Ok(trigamma_pos(x))
}

pub(crate) fn trigamma_pos(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 10.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // Σ B_{2k} / x^{2k+1}
    let tail = BERNOULLI.iter().rev().fold(0.0, |s, &c| s * inv2 + c) * inv2 * inv;
    acc + inv + 0.5 * inv2 + tail
}

/// Regularized incomplete beta `I_x(α, β)`.
///
/// Modified Lentz evaluation of the standard continued fraction, switching
/// to `1 - I_{1-x}(β, α)` past the mean-like point `(α+1)/(α+β+2)`.
pub fn inc_beta_reg(alpha: f64, beta: f64, x: f64) -> Result<f64> {
    positive("inc_beta_reg", alpha)?;
    positive("inc_beta_reg", beta)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("incomplete beta needs x in [0,1], got {x}")));
    }
    Ok(inc_beta_unchecked(alpha, beta, x))
}

pub(crate) fn inc_beta_unchecked(alpha: f64, beta: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    if x > (alpha + 1.0) / (alpha + beta + 2.0) {
        return 1.0 - inc_beta_unchecked(beta, alpha, 1.0 - x);
    }
    let ln_front = alpha * x.ln() + beta * (-x).ln_1p() - ln_beta_pos(alpha, beta);
    ln_front.exp() * beta_cf(alpha, beta, x) / alpha
}

fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=1000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// `π²/6`, handy for trigamma identities.
pub const ZETA2: f64 = PI * PI / 6.0;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::tanh_sinh;
    use proptest::prelude::*;

    /// `ln (n-1)!` by summing logs.
    fn ln_fact_oracle(n: u32) -> f64 {
        (1..n).map(|k| (k as f64).ln()).sum()
    }

    #[test]
    fn log_gamma_examples() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-14);
        assert!((log_gamma(0.5).unwrap() - PI.sqrt().ln()).abs() < 1e-14);
        assert!((log_beta(1.0, 1.5).unwrap() - (2.0f64 / 3.0).ln()).abs() < 1e-14);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
        assert!(log_beta(1.0, f64::NAN).is_err());
    }

    #[test]
    fn log_gamma_integers_and_half_integers() {
        for n in 1..=170u32 {
            let want = ln_fact_oracle(n);
            let got = log_gamma(n as f64).unwrap();
            assert!((got - want).abs() <= 1e-12f64.max(want.abs() * 4e-16), "n={n}");
        }
        // Γ(k + 1/2) = (2k)! √π / (4^k k!)
        for k in 0..60u32 {
            let want = ln_fact_oracle(2 * k + 1) + 0.5 * PI.ln() - (k as f64) * 4f64.ln() - ln_fact_oracle(k + 1);
            let got = log_gamma(k as f64 + 0.5).unwrap();
            assert!((got - want).abs() <= 1e-12f64.max(want.abs() * 4e-16), "k={k}");
        }
    }

    #[test]
    fn log_gamma_matches_statrs_on_range() {
        // absolute 1e-12 where the value is representable to that precision
        let mut x = 0.5;
        while x <= 1e4 {
            let want = statrs::function::gamma::ln_gamma(x);
            let got = log_gamma(x).unwrap();
            let tol = 1e-12f64.max(want.abs() * 1e-15);
            assert!((got - want).abs() <= tol, "x={x} got={got} want={want}");
            x *= 1.0137;
        }
    }

    #[test]
    fn trigamma_examples() {
        assert!((trigamma(1.0).unwrap() - ZETA2).abs() < 1e-14);
        assert!((trigamma(2.0).unwrap() - (ZETA2 - 1.0)).abs() < 1e-14);
        assert!((trigamma(1.5).unwrap() - (PI * PI / 2.0 - 4.0)).abs() < 1e-14);
        assert!(trigamma(0.0).is_err());
    }

    #[test]
    fn trigamma_matches_direct_series() {
        // Σ_{k<K} 1/(x+k)² plus the Euler–Maclaurin tail at x+K
        for &x in &[0.05, 0.3, 1.0, 2.7, 9.9, 10.0, 33.3, 400.0] {
            let big_k = 20_000usize;
            let head: f64 = (0..big_k).rev().map(|k| 1.0 / (x + k as f64).powi(2)).sum();
            let y = x + big_k as f64;
            let tail = 1.0 / y + 0.5 / (y * y) + 1.0 / (6.0 * y * y * y);
            let got = trigamma(x).unwrap();
            assert!((got - (head + tail)).abs() < 1e-12 * got.max(1.0), "x={x}");
        }
    }

    #[test]
    fn incomplete_beta_closed_forms() {
        for &t in &[0.0, 0.1, 0.37, 0.5, 0.9, 1.0] {
            let want = 1.0 - (1.0 - t) * (1.0 - t);
            assert!((inc_beta_reg(1.0, 2.0, t).unwrap() - want).abs() < 1e-14);
            assert!((inc_beta_reg(1.0, 1.0, t).unwrap() - t).abs() < 1e-15);
        }
        assert!(inc_beta_reg(1.0, 2.0, 1.2).is_err());
        assert!(inc_beta_reg(0.0, 2.0, 0.2).is_err());
    }

    #[test]
    fn incomplete_beta_matches_quadrature() {
        for &(a, b) in &[(2.0, 2.5), (1.5, 1.0), (3.5, 1.25), (1.0, 4.0), (7.0, 1.0), (1.2, 6.0)] {
            let norm = log_beta(a, b).unwrap().exp();
            for &x in &[0.01, 0.2, 0.5, 0.77, 0.99] {
                let q = tanh_sinh(|u| u.powf(a - 1.0) * (1.0 - u).powf(b - 1.0), 0.0, x, 1e-15) / norm;
                let cf = inc_beta_reg(a, b, x).unwrap();
                assert!((q - cf).abs() < 1e-13, "a={a} b={b} x={x}: {q} vs {cf}");
            }
        }
    }

    proptest! {
        #[test]
        fn log_beta_symmetric(a in 0.01f64..50.0, b in 0.01f64..50.0) {
            prop_assert!((log_beta(a, b).unwrap() - log_beta(b, a).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn trigamma_recurrence(x in 0.01f64..100.0) {
            let lhs = trigamma(x + 1.0).unwrap();
            let rhs = trigamma(x).unwrap() - 1.0 / (x * x);
            prop_assert!((lhs - rhs).abs() < 1e-11 * (1.0 + 1.0 / (x * x)));
        }

        #[test]
        fn incomplete_beta_reflection(a in 0.2f64..20.0, b in 0.2f64..20.0, x in 0.0f64..1.0) {
            let s = inc_beta_reg(a, b, x).unwrap() + inc_beta_reg(b, a, 1.0 - x).unwrap();
            prop_assert!((s - 1.0).abs() < 1e-12);
        }
    }
}
