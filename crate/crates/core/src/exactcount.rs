//! Exact linear-extension counts of `P_n^{m,a,b}` and `Q_n^{m,a,b}` by iterated
//! polynomial integration over the rationals.
//!
//! Conditioning a uniform labelling `φ : Q_n → (0,1)` on the values
//! `x_i = φ(X_i)` of the spine leaves independent chains between consecutive
//! spine elements and hanging below or above each of them, so
//!
//! ```text
//! e(Q_n) / |Q_n|! = ∫_{0<x_0<…<x_n<1} ∏ x_i^{a-1}/(a-1)! · (1-x_i)^{m-b}/(m-b)!
//!                                      · ∏ (x_{i+1}-x_i)^{b-a-1}/(b-a-1)!  dx.
//! ```
//!
//! For `P_n` the weight `x^{a-1}` is absent at `x_n` and `(1-x)^{m-b}` is
//! absent at `x_0`. The integral is evaluated innermost-first: a working
//! polynomial `G_k(x)` in the variable of `x_k` is advanced by the kernel
//! step `H(x) = ∫_0^x (x-t)^e G(t) dt` followed by multiplication with the
//! per-node weight. All factorial normalizers are applied once at the end.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, resource, Error, Result};
use crate::poset::ClusterParams;

/// Largest poset size the exact route accepts. Beyond this the working
/// polynomials reach tens of thousands of coefficients.
pub const MAX_EXACT_SIZE: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// The cluster poset `P_n^{m,a,b}`.
    P,
    /// The boundary-completed poset `Q_n^{m,a,b}`.
    Q,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::P => "P",
            Variant::Q => "Q",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" | "P" => Ok(Variant::P),
            "q" | "Q" => Ok(Variant::Q),
            other => Err(invalid(format!("unknown variant {other:?}, expected p or q"))),
        }
    }
}

/// A nonnegative arbitrary-precision count such as `e(P)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CountInteger(pub BigUint);

impl CountInteger {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn pow(&self, exp: u32) -> Self {
        Self(self.0.pow(exp))
    }

    /// Natural logarithm, from the top 64 bits and the binary exponent.
    /// Relative error is a few ulps regardless of size; `ln 0 = -inf`.
    pub fn ln(&self) -> f64 {
        ln_biguint(&self.0)
    }
}

pub(crate) fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return (x.to_u64().expect("fits in 64 bits") as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("exactly 64 bits");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

impl fmt::Display for CountInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

macro_rules! count_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CountInteger {
            fn from(v: $t) -> Self {
                Self(BigUint::from(v))
            }
        }
    )*};
}
count_from!(u32, u64, u128, usize);

impl From<BigUint> for CountInteger {
    fn from(v: BigUint) -> Self {
        Self(v)
    }
}

impl Mul<&CountInteger> for CountInteger {
    type Output = CountInteger;

    fn mul(self, rhs: &CountInteger) -> CountInteger {
        CountInteger(self.0 * &rhs.0)
    }
}

/// A reduced rational with positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(pub BigRational);

impl ExactRational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Self(BigRational::new(num.into(), den.into()))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        // ratio of logs keeps huge operands finite
        let (n, d) = (self.numer(), self.denom());
        let sign = if n.is_negative() { -1.0 } else { 1.0 };
        match (n.to_f64(), d.to_f64()) {
            (Some(a), Some(b)) if a.is_finite() && b.is_finite() && b != 0.0 => a / b,
            _ => sign * (ln_biguint(n.magnitude()) - ln_biguint(d.magnitude())).exp(),
        }
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn factorial(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Dense univariate polynomial with exact rational coefficients, stored as
/// integer numerators over one shared positive denominator.
///
/// Canonical form: no trailing zero numerators, and the content of the
/// numerators is coprime to the denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly {
    num: Vec<BigInt>,
    den: BigInt,
}

impl RationalPoly {
    pub fn zero() -> Self {
        Self { num: Vec::new(), den: BigInt::one() }
    }

    pub fn one() -> Self {
        Self { num: vec![BigInt::one()], den: BigInt::one() }
    }

    /// `x^deg`.
    pub fn monomial(deg: usize) -> Self {
        let mut num = vec![BigInt::zero(); deg + 1];
        num[deg] = BigInt::one();
        Self { num, den: BigInt::one() }
    }

    pub fn from_coefficients(coeffs: &[BigRational]) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Self::normalized(num, den)
    }

    fn normalized(mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        while num.last().is_some_and(Zero::is_zero) {
            num.pop();
        }
        if num.is_empty() {
            return Self::zero();
        }
        if den.is_negative() {
            den = -den;
            num.iter_mut().for_each(|c| *c = -&*c);
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            num.iter_mut().for_each(|c| *c /= &g);
            den /= &g;
        }
        Self { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.num.len().checked_sub(1)
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn coefficient(&self, k: usize) -> BigRational {
        match self.num.get(k) {
            Some(c) => BigRational::new(c.clone(), self.den.clone()),
            None => BigRational::zero(),
        }
    }

    pub fn coefficients(&self) -> Vec<BigRational> {
        (0..self.num.len()).map(|k| self.coefficient(k)).collect()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let acc =
            self.num.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()));
        acc / BigRational::from_integer(self.den.clone())
    }

    /// `self · x^k`.
    pub fn mul_x_pow(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut num = vec![BigInt::zero(); k];
        num.extend(self.num.iter().cloned());
        Self { num, den: self.den.clone() }
    }

    /// `self · (1 - x)^r`.
    pub fn mul_one_minus_x_pow(&self, r: usize) -> Self {
        if self.is_zero() || r == 0 {
            return self.clone();
        }
        let mut num = self.num.clone();
        for _ in 0..r {
            num.push(BigInt::zero());
            for k in (1..num.len()).rev() {
                let prev = num[k - 1].clone();
                num[k] -= prev;
            }
        }
        // (1-x)^r has unit content, so the product stays canonical
        Self { num, den: self.den.clone() }
    }

    /// `H(x) = ∫_0^x (x - t)^e G(t) dt`.
    ///
    /// Monomial by monomial, `∫_0^x (x-t)^e t^k dt = x^{k+e+1} k! e! / (k+e+1)!`.
    /// Numerators are scaled by `(K+e+1)!` (with `K = deg G`) so every
    /// coefficient stays integral, then the result is re-reduced.
    pub fn step_integral(&self, e: usize) -> Self {
        let Some(deg) = self.degree() else {
            return Self::zero();
        };
        let e_fact = factorial(e);
        // scale_k = k! (K+e+1)! / (k+e+1)!, walked upward from k = 0
        let mut scale = (e + 2..=deg + e + 1).fold(BigInt::one(), |acc, j| acc * j);
        let mut num = vec![BigInt::zero(); deg + e + 2];
        for (k, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                num[k + e + 1] = c * &scale * &e_fact;
            }
            if k < deg {
                scale = scale * (k + 1) / (k + e + 2);
            }
        }
        let den = &self.den * factorial(deg + e + 1);
        let out = Self::normalized(num, den);
        debug_assert_eq!(out.degree(), Some(deg + e + 1));
        out
    }

    /// `∫_0^1 self(x) dx`.
    pub fn integrate_unit(&self) -> ExactRational {
        let Some(deg) = self.degree() else {
            return ExactRational(BigRational::zero());
        };
        let big = factorial(deg + 1);
        let total: BigInt = self.num.iter().enumerate().map(|(k, c)| c * (&big / (k + 1))).sum();
        ExactRational(BigRational::new(total, &self.den * big))
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;

    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let mut num = vec![BigInt::zero(); self.num.len() + rhs.num.len() - 1];
        for (i, x) in self.num.iter().enumerate() {
            for (j, y) in rhs.num.iter().enumerate() {
                num[i + j] += x * y;
            }
        }
        RationalPoly::normalized(num, &self.den * &rhs.den)
    }
}

fn check_budget(params: &ClusterParams) -> Result<()> {
    if params.q_size() > MAX_EXACT_SIZE {
        return Err(resource(format!(
            "exact integration supports posets of at most {MAX_EXACT_SIZE} elements ({params})"
        )));
    }
    Ok(())
}

fn degree_check(g: &RationalPoly, expected: usize, step: usize) -> Result<()> {
    if g.degree() != Some(expected) {
        return Err(Error::Internal(format!(
            "working polynomial after step {step} has degree {:?}, expected {expected}",
            g.degree()
        )));
    }
    Ok(())
}

/// The integrals `I_1, …, I_{n_max}` for the shape `(m, a, b)` of `params`
/// (its own `n` is ignored), sharing the inner integrations across `n`.
pub fn iterated_integrals_upto(params: &ClusterParams, variant: Variant, n_max: usize) -> Result<Vec<ExactRational>> {
    let last = params.with_n(n_max.max(1))?;
    check_budget(&last)?;
    let (m, a, b) = (params.m, params.a, params.b);
    let e = b - a - 1;
    let (below, above) = (a - 1, m - b);
    let weigh = |g: &RationalPoly| g.mul_x_pow(below).mul_one_minus_x_pow(above);

    let mut out = Vec::with_capacity(n_max);
    match variant {
        Variant::Q => {
            let mut g = weigh(&RationalPoly::one());
            for n in 1..=n_max {
                g = weigh(&g.step_integral(e));
                degree_check(&g, below + above + n * (m - 1), n)?;
                out.push(g.integrate_unit());
            }
        }
        Variant::P => {
            let mut g = RationalPoly::monomial(below);
            for n in 1..=n_max {
                let h = g.step_integral(e);
                out.push(h.mul_one_minus_x_pow(above).integrate_unit());
                g = weigh(&h);
                degree_check(&g, below + n * (m - 1), n)?;
            }
        }
    }
    Ok(out)
}

/// The spine integral for `params` with factorial normalizers excluded.
pub fn iterated_integral(params: &ClusterParams, variant: Variant) -> Result<ExactRational> {
    let mut all = iterated_integrals_upto(params, variant, params.n)?;
    Ok(all.pop().expect("n >= 1"))
}

fn scale_to_count(params: &ClusterParams, variant: Variant, integral: &ExactRational) -> Result<CountInteger> {
    let n = params.n as u32;
    let (fa, fm, fe) = (factorial(params.a - 1), factorial(params.m - params.b), factorial(params.b - params.a - 1));
    let norm = match variant {
        Variant::P => fa.pow(n) * fm.pow(n) * fe.pow(n),
        Variant::Q => fa.pow(n + 1) * fm.pow(n + 1) * fe.pow(n),
    };
    let scaled =
        &integral.0 * BigRational::from_integer(factorial(params.size(variant))) / BigRational::from_integer(norm);
    if !scaled.is_integer() || scaled.is_negative() {
        return Err(Error::Internal(format!(
            "scaled integral for {variant} at {params} is not a nonnegative integer: {scaled}"
        )));
    }
    let (sign, mag) = scaled.to_integer().into_parts();
    debug_assert_ne!(sign, Sign::Minus);
    Ok(CountInteger(mag))
}

/// `e(P_n)` or `e(Q_n)` from the exact integral; the factorial scaling must
/// land on an integer, otherwise an internal-consistency error is raised.
pub fn exact_count(params: &ClusterParams, variant: Variant) -> Result<CountInteger> {
    let integral = iterated_integral(params, variant)?;
    scale_to_count(params, variant, &integral)
}

/// `e(·_1), …, e(·_{n_max})` for the shape `(m, a, b)` in one sweep.
pub fn exact_counts_upto(params: &ClusterParams, variant: Variant, n_max: usize) -> Result<Vec<CountInteger>> {
    iterated_integrals_upto(params, variant, n_max)?
        .iter()
        .enumerate()
        .map(|(i, integral)| scale_to_count(&params.with_n(i + 1)?, variant, integral))
        .collect()
}
