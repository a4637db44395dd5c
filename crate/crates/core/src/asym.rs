//! The growth constant `c(m,a,b)` of
//! `log e(P_n) = (m-b+a-1) n log n + c(m,a,b) n + O(log n)`, the concavity
//! argument that orders constants with equal `d = b - a`, and empirical
//! estimates of `c` from exact counts.

use std::cmp::Ordering;

use crate::error::{domain, invalid, Result};
use crate::exactcount::{exact_count, exact_counts_upto, CountInteger, Variant};
use crate::poset::ClusterParams;
use crate::special::{ln_beta_pos, ln_gamma_pos, trigamma_pos};

pub use crate::special::{log_beta, log_gamma, trigamma};

/// Constant `K` in the convergence envelope `|ĉ_n - c| <= K ln n / n`.
/// Fitted, not derived: the `O(log n)` term has no explicit constant.
pub const CONVERGENCE_K: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticConstant {
    pub m: usize,
    pub a: usize,
    pub b: usize,
    /// Coefficient of `n log n`.
    pub leading: usize,
    pub c: f64,
}

fn shape(m: usize, a: usize, b: usize) -> Result<ClusterParams> {
    ClusterParams::new(m, a, b, 1)
}

pub fn c_constant(m: usize, a: usize, b: usize) -> Result<AsymptoticConstant> {
    let p = shape(m, a, b)?;
    let d = p.d() as f64;
    let (mf, af, bf) = (m as f64, a as f64, b as f64);
    let xlogx = |x: f64| if x == 0.0 { 0.0 } else { x * x.ln() };
    let c = d * ln_beta_pos((af - 1.0) / d + 1.0, (mf - bf) / d + 1.0)
        - ln_beta_pos(af, mf - bf + 1.0)
        - ln_gamma_pos(mf - bf + af + 1.0)
        + xlogx(mf - 1.0)
        - xlogx(d)
        - mf
        + bf
        - af
        + 1.0;
    Ok(AsymptoticConstant { m, a, b, leading: p.leading(), c })
}

/// `A''(t) = ψ⁽¹⁾(t/d + 1)/d − ψ⁽¹⁾(t + 1)` for `A(t) = d lnΓ(t/d + 1) − lnΓ(t + 1)`.
pub fn a_second_derivative(t: f64, d: usize) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(domain(format!("A'' needs t >= 0, got {t}")));
    }
    if d < 2 {
        return Err(domain(format!("A'' needs d >= 2, got {d}")));
    }
    let d = d as f64;
    Ok(trigamma_pos(t / d + 1.0) / d - trigamma_pos(t + 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantComparison {
    pub ordering: Ordering,
    /// `c(m,a',b') − c(m,a,b)`.
    pub gap: f64,
}

/// Minimum gap accepted as a certified strict inequality between constants.
pub const GAP_CERTIFICATE: f64 = 1e-9;

fn check_pair(m: usize, a: usize, b: usize, a2: usize, b2: usize, min_d: usize) -> Result<()> {
    shape(m, a, b)?;
    shape(m, a2, b2)?;
    if b - a != b2 - a2 {
        return Err(invalid(format!("need b-a = b'-a', got {} and {}", b - a, b2 - a2)));
    }
    if b - a < min_d {
        return Err(invalid(format!("need b-a >= {min_d}, got {}", b - a)));
    }
    if !(a + b < a2 + b2 && a2 + b2 <= m + 1) {
        return Err(invalid(format!("need a+b < a'+b' <= m+1, got {} and {} with m+1 = {}", a + b, a2 + b2, m + 1)));
    }
    Ok(())
}

/// Orders `c(m,a,b)` against `c(m,a',b')` under `b−a = b'−a' > 1` and
/// `a+b < a'+b' <= m+1`, in which case the answer is always `Less`.
pub fn compare_constants(m: usize, a: usize, b: usize, a2: usize, b2: usize) -> Result<ConstantComparison> {
    check_pair(m, a, b, a2, b2, 2)?;
    let gap = c_constant(m, a2, b2)?.c - c_constant(m, a, b)?.c;
    let ordering = if gap > GAP_CERTIFICATE {
        Ordering::Less
    } else if gap < -GAP_CERTIFICATE {
        Ordering::Greater
    } else {
        Ordering::Equal
    };
    Ok(ConstantComparison { ordering, gap })
}

/// `(ln e − leading · n ln n) / n`.
pub fn empirical_from_count(params: &ClusterParams, count: &CountInteger) -> f64 {
    let n = params.n as f64;
    (count.ln() - params.leading() as f64 * n * n.ln()) / n
}

pub fn empirical_c_estimate(m: usize, a: usize, b: usize, n: usize) -> Result<f64> {
    let params = ClusterParams::new(m, a, b, n)?;
    let count = exact_count(&params, Variant::P)?;
    Ok(empirical_from_count(&params, &count))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitRow {
    pub n: usize,
    pub estimate: f64,
    /// `estimate − c`.
    pub residual: f64,
    /// `CONVERGENCE_K · ln n / n`.
    pub envelope: f64,
}

/// Empirical estimates for every `n` in `ns` from a single exact sweep.
pub fn fit_sweep(m: usize, a: usize, b: usize, ns: &[usize]) -> Result<Vec<FitRow>> {
    let base = shape(m, a, b)?;
    let Some(&n_max) = ns.iter().max() else {
        return Ok(Vec::new());
    };
    if ns.contains(&0) {
        return Err(invalid("n must be positive"));
    }
    let c = c_constant(m, a, b)?.c;
    let counts = exact_counts_upto(&base, Variant::P, n_max)?;
    ns.iter()
        .map(|&n| {
            let params = base.with_n(n)?;
            let estimate = empirical_from_count(&params, &counts[n - 1]);
            let nf = n as f64;
            Ok(FitRow { n, estimate, residual: estimate - c, envelope: CONVERGENCE_K * nf.ln() / nf })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossoverRow {
    pub n: usize,
    pub left: CountInteger,
    pub right: CountInteger,
    pub ordering: Ordering,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossoverReport {
    /// Smallest `n0` with `e(P_n^{m,a,b}) < e(P_n^{m,a',b'})` for all `n0 <= n <= n_max`.
    pub n0: Option<usize>,
    pub rows: Vec<CrossoverRow>,
}

/// Scans exact counts for `n = 1..=n_max`. Accepts `d = 1` as well, where
/// the ordering is expected to go the other way.
pub fn crossover_search(m: usize, a: usize, b: usize, a2: usize, b2: usize, n_max: usize) -> Result<CrossoverReport> {
    check_pair(m, a, b, a2, b2, 1)?;
    if n_max == 0 {
        return Err(invalid("n_max must be positive"));
    }
    let (left, right) = rayon::join(
        || exact_counts_upto(&shape(m, a, b)?, Variant::P, n_max),
        || exact_counts_upto(&shape(m, a2, b2)?, Variant::P, n_max),
    );
    let rows: Vec<CrossoverRow> = left?
        .into_iter()
        .zip(right?)
        .enumerate()
        .map(|(i, (l, r))| CrossoverRow { n: i + 1, ordering: l.cmp(&r), left: l, right: r })
        .collect();
    let tail = rows.iter().rev().take_while(|r| r.ordering == Ordering::Less).count();
    let n0 = (tail > 0).then(|| n_max - tail + 1);
    Ok(CrossoverReport { n0, rows })
}
