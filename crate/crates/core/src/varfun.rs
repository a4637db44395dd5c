//! The change of variables behind the asymptotics.
//!
//! `g` is the regularized incomplete beta function with parameters
//! `α = (a-1)/(b-a) + 1`, `β = (m-b)/(b-a) + 1`; `f = g⁻¹` satisfies
//! `f'(t)^{b-a} f(t)^{a-1} (1-f(t))^{m-b} = B(α, β)^{b-a}`, and `f'` is
//! minimized at `λ = g((a-1)/(m-b+a-1))`.
//!
//! [`VariationalProblem`] solves the general version: find `j` with
//! `j(0) = 0`, `j(1) = 1` and `h(j(t)) j'(t)^{β+1}` constant.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{domain, invalid, Error, Result};
use crate::poset::ClusterParams;
use crate::quad::tanh_sinh;
use crate::special::{inc_beta_unchecked, ln_beta_pos};

/// Default number of grid cells of a [`ProfileTable`].
pub const DEFAULT_GRID: usize = 1000;
/// Minimum tabulation size for a [`VariationalProblem`].
pub const MIN_TABULATION: usize = 1001;

/// A derivative value that may diverge at an endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Slope {
    Finite(f64),
    Infinite,
}

impl Slope {
    pub fn finite(self) -> Option<f64> {
        match self {
            Slope::Finite(v) => Some(v),
            Slope::Infinite => None,
        }
    }
}

/// `g`, `f` and `f'` for a fixed `(m, a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Profile {
    pub m: usize,
    pub a: usize,
    pub b: usize,
    alpha: f64,
    beta: f64,
    ln_b: f64,
}

impl Profile {
    pub fn new(m: usize, a: usize, b: usize) -> Result<Self> {
        ClusterParams::new(m, a, b, 1)?;
        let d = (b - a) as f64;
        let alpha = (a - 1) as f64 / d + 1.0;
        let beta = (m - b) as f64 / d + 1.0;
        Ok(Self { m, a, b, alpha, beta, ln_b: ln_beta_pos(alpha, beta) })
    }

    /// `(α, β)` of the incomplete beta function.
    pub fn beta_params(&self) -> (f64, f64) {
        (self.alpha, self.beta)
    }

    /// `B(α, β)`.
    pub fn beta_value(&self) -> f64 {
        self.ln_b.exp()
    }

    fn d(&self) -> f64 {
        (self.b - self.a) as f64
    }

    fn unit(t: f64) -> Result<()> {
        if (0.0..=1.0).contains(&t) {
            Ok(())
        } else {
            Err(domain(format!("argument must lie in [0,1], got {t}")))
        }
    }

    pub fn g(&self, t: f64) -> Result<f64> {
        Self::unit(t)?;
        Ok(self.g_unchecked(t))
    }

    fn g_unchecked(&self, t: f64) -> f64 {
        inc_beta_unchecked(self.alpha, self.beta, t)
    }

    /// `g'(s) = s^{α-1} (1-s)^{β-1} / B(α, β)`.
    fn g_prime(&self, s: f64) -> f64 {
        ((self.alpha - 1.0) * s.ln() + (self.beta - 1.0) * (-s).ln_1p() - self.ln_b).exp()
    }

    /// `f(t) = g⁻¹(t)`: bisection to width `1e-13`, then one guarded Newton step.
    pub fn f(&self, t: f64) -> Result<f64> {
        Self::unit(t)?;
        Ok(self.f_unchecked(t))
    }

    fn f_unchecked(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        while hi - lo > 1e-13 {
            let mid = 0.5 * (lo + hi);
            if self.g_unchecked(mid) < t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let s = 0.5 * (lo + hi);
        let slope = self.g_prime(s);
        if slope.is_finite() && slope > 0.0 {
            let polished = s - (self.g_unchecked(s) - t) / slope;
            if polished >= lo && polished <= hi {
                return polished;
            }
        }
        s
    }

    /// `f'(t) = B(α,β) f^{-(a-1)/(b-a)} (1-f)^{-(m-b)/(b-a)}`.
    pub fn f_prime(&self, t: f64) -> Result<Slope> {
        Self::unit(t)?;
        let s = self.f_unchecked(t);
        Ok(self.f_prime_at(s))
    }

    fn f_prime_at(&self, s: f64) -> Slope {
        let (p, q) = (self.alpha - 1.0, self.beta - 1.0);
        if (s <= 0.0 && p > 0.0) || (s >= 1.0 && q > 0.0) {
            return Slope::Infinite;
        }
        let mut ln = self.ln_b;
        if p > 0.0 {
            ln -= p * s.ln();
        }
        if q > 0.0 {
            ln -= q * (-s).ln_1p();
        }
        let v = ln.exp();
        if v.is_finite() {
            Slope::Finite(v)
        } else {
            Slope::Infinite
        }
    }

    /// `λ = g((a-1)/(m-b+a-1))`; undefined when `a = 1` and `b = m`.
    pub fn lambda(&self) -> Result<f64> {
        let leading = self.m - self.b + self.a - 1;
        if leading == 0 {
            return Err(Error::Degenerate(format!("lambda is 0/0 for a = 1, b = m = {} (f' is constant)", self.m)));
        }
        Ok(self.g_unchecked((self.a - 1) as f64 / leading as f64))
    }

    /// `f'(λ)`, with the constant slope `B(1,1) = 1` in the degenerate case.
    fn min_slope(&self) -> f64 {
        let lambda = self.lambda().unwrap_or(0.0);
        self.f_prime_at(self.f_unchecked(lambda)).finite().expect("f' is finite at its minimizer")
    }

    /// Residual of the defining identity of `f'` at `t`.
    pub fn ode_residual(&self, t: f64) -> Result<f64> {
        let s = self.f(t)?;
        let fp = self.f_prime_at(s).finite().ok_or_else(|| domain(format!("f' diverges at t = {t}")))?;
        let d = self.d();
        let lhs = fp.powf(d) * s.powi(self.a as i32 - 1) * (1.0 - s).powi((self.m - self.b) as i32);
        Ok((lhs - (self.ln_b * d).exp()).abs())
    }

    /// Smallest `N <= 64` with `f'(t)^{-(b-a-1)} >= t^N (1-t)^N` on the
    /// interior of a `cells`-cell grid.
    pub fn polybound_witness(&self, cells: usize) -> Option<u32> {
        let d1 = self.d() - 1.0;
        let logs: Vec<(f64, f64)> = (1..cells)
            .map(|k| {
                let t = k as f64 / cells as f64;
                let lhs = match self.f_prime_at(self.f_unchecked(t)) {
                    Slope::Finite(v) => -d1 * v.ln(),
                    Slope::Infinite => f64::NEG_INFINITY,
                };
                (lhs, t.ln() + (-t).ln_1p())
            })
            .collect();
        (1..=64).find(|&n| logs.iter().all(|&(lhs, base)| lhs >= n as f64 * base))
    }
}

pub fn g_eval(m: usize, a: usize, b: usize, t: f64) -> Result<f64> {
    Profile::new(m, a, b)?.g(t)
}

pub fn f_eval(m: usize, a: usize, b: usize, t: f64) -> Result<f64> {
    Profile::new(m, a, b)?.f(t)
}

pub fn f_prime(m: usize, a: usize, b: usize, t: f64) -> Result<Slope> {
    Profile::new(m, a, b)?.f_prime(t)
}

pub fn lambda_point(m: usize, a: usize, b: usize) -> Result<f64> {
    Profile::new(m, a, b)?.lambda()
}

/// `f` and `f'` sampled on `K + 1` equally spaced points of `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileTable {
    pub profile: Profile,
    pub grid: Vec<f64>,
    pub f_values: Vec<f64>,
    pub fprime_values: Vec<Slope>,
    /// `λ`, or 0 in the degenerate case `a = 1, b = m`.
    pub lambda: f64,
    pub degenerate: bool,
}

impl ProfileTable {
    pub fn build(m: usize, a: usize, b: usize, cells: usize) -> Result<Self> {
        if cells == 0 {
            return Err(invalid("grid needs at least one cell"));
        }
        let profile = Profile::new(m, a, b)?;
        let grid: Vec<f64> = (0..=cells).map(|k| k as f64 / cells as f64).collect();
        let f_values: Vec<f64> = grid.iter().map(|&t| profile.f_unchecked(t)).collect();
        let fprime_values = f_values.iter().map(|&s| profile.f_prime_at(s)).collect();
        let (lambda, degenerate) = match profile.lambda() {
            Ok(l) => (l, false),
            Err(Error::Degenerate(_)) => (0.0, true),
            Err(e) => return Err(e),
        };
        Ok(Self { profile, grid, f_values, fprime_values, lambda, degenerate })
    }

    /// Grid abscissa with the smallest finite `f'`.
    pub fn fprime_argmin(&self) -> f64 {
        let (k, _) = self
            .fprime_values
            .iter()
            .enumerate()
            .filter_map(|(k, s)| s.finite().map(|v| (k, v)))
            .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
        self.grid[k]
    }

    /// CSV with header `t,f,fprime`; divergent slopes are written as `inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,f,fprime\n");
        for ((t, f), fp) in self.grid.iter().zip(&self.f_values).zip(&self.fprime_values) {
            let fp = match fp {
                Slope::Finite(v) => format_sig(*v),
                Slope::Infinite => "inf".to_string(),
            };
            let _ = writeln!(out, "{},{},{}", format_sig(*t), format_sig(*f), fp);
        }
        out
    }
}

/// Decimal rendering with 12 significant digits, trailing zeros dropped.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (11 - exp).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    // rounding can carry into a new leading digit (9.99… -> 10.0…)
    let digits = s.chars().filter(char::is_ascii_digit).skip_while(|&c| c == '0').count();
    if digits > 12 && decimals > 0 {
        let decimals = decimals - 1;
        s = format!("{x:.decimals$}");
    }
    if s.contains('.') {
        s.truncate(s.trim_end_matches('0').trim_end_matches('.').len());
    }
    s
}

/// Log-space terms of the two-sided bound for one sequence.
#[derive(Debug, Clone, Copy)]
struct LemmaTerms {
    lower: f64,
    centre: f64,
    upper: f64,
}

fn lemma_terms(profile: &Profile, ln_min: f64, seq: &[f64]) -> Result<LemmaTerms> {
    if seq.len() < 2 {
        return Err(invalid("each sequence needs at least two points"));
    }
    if seq.iter().any(|&y| !(y > 0.0 && y < 1.0)) || seq.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("sequences must be strictly increasing inside (0,1)"));
    }
    let fs: Vec<f64> = seq.iter().map(|&y| profile.f_unchecked(y)).collect();
    let ln_slopes: Vec<f64> = fs
        .iter()
        .map(|&s| profile.f_prime_at(s).finite().map(f64::ln))
        .collect::<Option<_>>()
        .ok_or_else(|| domain("f' diverges at a sampled point"))?;
    let ln_gaps: f64 = seq.windows(2).map(|w| (w[1] - w[0]).ln()).sum();
    let centre = fs.windows(2).map(|w| (w[1] - w[0]).ln()).sum::<f64>() - ln_slopes.iter().sum::<f64>();
    let n = seq.len() - 1;
    Ok(LemmaTerms { lower: ln_min - ln_slopes[0] - ln_slopes[n] + ln_gaps, centre, upper: -ln_min + ln_gaps })
}

/// Every sequence must be strictly increasing inside `(0, 1)` with at least two points.
///
/// Checks, in log space with slack `1e-9`,
/// `f'(λ)/(f'(y_0) f'(y_n)) · Π ≤ Π_i (f(y_{i+1}) − f(y_i)) / Π_i f'(y_i) ≤ Π / f'(λ)`
/// where `Π = Π_{i=0}^{n-1} (y_{i+1} − y_i)` runs over all `n` gaps.
pub fn lemma_bound_check(m: usize, a: usize, b: usize, sequences: &[Vec<f64>]) -> Result<bool> {
    let profile = Profile::new(m, a, b)?;
    let ln_min = profile.min_slope().ln();
    for seq in sequences {
        let t = lemma_terms(&profile, ln_min, seq)?;
        if t.lower > t.centre + 1e-9 || t.centre > t.upper + 1e-9 {
            return Ok(false);
        }
    }
    Ok(true)
}

type WeightFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A weight `h > 0` on `(0, 1)` and exponent `β >= 0`.
#[derive(Clone)]
pub struct VariationalProblem {
    h: WeightFn,
    beta: f64,
    points: usize,
}

impl std::fmt::Debug for VariationalProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VariationalProblem")
            .field("beta", &self.beta)
            .field("points", &self.points)
            .finish_non_exhaustive()
    }
}

impl VariationalProblem {
    /// `h` is sampled on `points` equally spaced abscissae for validation;
    /// the solution is reported on the same grid. Zero is tolerated only at
    /// the endpoints.
    pub fn from_fn<H>(h: H, beta: f64, points: usize) -> Result<Self>
    where
        H: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if points < MIN_TABULATION {
            return Err(invalid(format!("need at least {MIN_TABULATION} grid points, got {points}")));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(domain(format!("beta must be >= 0, got {beta}")));
        }
        for k in 0..points {
            let t = k as f64 / (points - 1) as f64;
            let v = h(t);
            let interior = k > 0 && k + 1 < points;
            if !(v >= 0.0 && v.is_finite()) || (interior && v == 0.0) {
                return Err(domain(format!("weight must be positive, h({t}) = {v}")));
            }
        }
        Ok(Self { h: Arc::new(h), beta, points })
    }

    /// Weight given by its values on an equally spaced grid of `[0, 1]`,
    /// interpolated linearly in between.
    pub fn from_table(values: Vec<f64>, beta: f64) -> Result<Self> {
        let points = values.len();
        if points < MIN_TABULATION {
            return Err(invalid(format!("need at least {MIN_TABULATION} tabulated values, got {points}")));
        }
        let table = Arc::new(values);
        let lookup = {
            let table = Arc::clone(&table);
            move |u: f64| {
                let x = u.clamp(0.0, 1.0) * (points - 1) as f64;
                let k = (x.floor() as usize).min(points - 2);
                let w = x - k as f64;
                table[k] * (1.0 - w) + table[k + 1] * w
            }
        };
        Self::from_fn(lookup, beta, points)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn solve(&self) -> VariationalSolution {
        let exponent = 1.0 / (self.beta + 1.0);
        let h = Arc::clone(&self.h);
        let weight = move |u: f64| h(u).max(0.0).powf(exponent);
        let cells = self.points - 1;
        let grid: Vec<f64> = (0..=cells).map(|k| k as f64 / cells as f64).collect();
        // Neumaier-compensated running sum
        let mut cumulative = Vec::with_capacity(grid.len());
        cumulative.push(0.0);
        let (mut sum, mut carry) = (0.0f64, 0.0f64);
        for w in grid.windows(2) {
            let piece = tanh_sinh(&weight, w[0], w[1], 1e-15);
            let next = sum + piece;
            carry += if sum.abs() >= piece.abs() { (sum - next) + piece } else { (piece - next) + sum };
            sum = next;
            cumulative.push(sum + carry);
        }
        let total = *cumulative.last().unwrap();
        let solver = Inverter { weight: &weight, grid: &grid, cumulative: &cumulative };
        let j: Vec<f64> = grid
            .iter()
            .enumerate()
            .map(|(k, &t)| match k {
                0 => 0.0,
                k if k == cells => 1.0,
                _ => solver.invert(t * total),
            })
            .collect();
        VariationalSolution { grid, j, normalizer: total, beta: self.beta }
    }
}

struct Inverter<'a, W: Fn(f64) -> f64> {
    weight: &'a W,
    grid: &'a [f64],
    cumulative: &'a [f64],
}

impl<W: Fn(f64) -> f64> Inverter<'_, W> {
    /// The `s` with `∫_0^s w = target`.
    fn invert(&self, target: f64) -> f64 {
        let cell = self.cumulative.partition_point(|&c| c <= target).clamp(1, self.grid.len() - 1) - 1;
        let (base_s, base_c) = (self.grid[cell], self.cumulative[cell]);
        let (mut lo, mut hi) = (base_s, self.grid[cell + 1]);
        let mut s = 0.5 * (lo + hi);
        for _ in 0..200 {
            let mass = base_c + tanh_sinh(self.weight, base_s, s, 1e-15);
            if mass < target {
                lo = s;
            } else {
                hi = s;
            }
            if hi - lo <= 1e-15 * hi.max(1e-300) {
                break;
            }
            let slope = (self.weight)(s);
            let newton = s - (mass - target) / slope;
            s = if slope > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if (newton - s).abs() == 0.0 && (mass - target).abs() <= 1e-17 * target.max(1e-300) {
                break;
            }
        }
        s
    }
}

/// `j` on the grid, with `h(j) j'^{β+1} = normalizer^{β+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationalSolution {
    pub grid: Vec<f64>,
    pub j: Vec<f64>,
    /// `∫_0^1 h^{1/(β+1)}`.
    pub normalizer: f64,
    pub beta: f64,
}

impl VariationalSolution {
    /// The constant value `h(j(t)) j'(t)^{β+1}`.
    pub fn invariant(&self) -> f64 {
        self.normalizer.powf(self.beta + 1.0)
    }
}

pub fn variational_profile(problem: &VariationalProblem) -> VariationalSolution {
    problem.solve()
}
