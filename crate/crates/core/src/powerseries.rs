//! Truncated power series `c_0 + c_1 t + … + c_N t^N`, `t = x − center`.
//!
//! Coefficients are exact Gaussian rationals whenever every input was exact;
//! the first floating input demotes the whole result to `Complex64`.

use crate::error::{Error, Result};
use crate::scalar::{exact_int, exact_real, rational, Coef, ExactComplex, Scalar, C64};
use num_traits::{One, Zero};
use std::fmt;

pub const DEFAULT_ORDER: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub enum Coeffs {
    Exact(Vec<ExactComplex>),
    Float(Vec<C64>),
}

impl Coeffs {
    fn len(&self) -> usize {
        match self {
            Coeffs::Exact(v) => v.len(),
            Coeffs::Float(v) => v.len(),
        }
    }

    fn to_float(&self) -> Vec<C64> {
        match self {
            Coeffs::Exact(v) => v.iter().map(Coef::to_c64).collect(),
            Coeffs::Float(v) => v.clone(),
        }
    }
}

/// Runs a generic coefficient routine on two series, exact if both are.
macro_rules! lift2 {
    ($a:expr, $b:expr, |$x:ident, $y:ident| $body:expr) => {
        match (&$a.coeffs, &$b.coeffs) {
            (Coeffs::Exact($x), Coeffs::Exact($y)) => Coeffs::Exact($body),
            _ => {
                let $x = &$a.coeffs.to_float();
                let $y = &$b.coeffs.to_float();
                Coeffs::Float($body)
            }
        }
    };
}

macro_rules! lift1 {
    ($a:expr, |$x:ident| $body:expr) => {
        match &$a.coeffs {
            Coeffs::Exact($x) => Coeffs::Exact($body),
            Coeffs::Float($x) => Coeffs::Float($body),
        }
    };
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries {
    coeffs: Coeffs,
    center: Scalar,
}

/// Value of a truncated series at a point together with a geometric-tail
/// estimate of what the discarded terms contribute; `None` means no bound.
#[derive(Clone, Debug)]
pub struct SeriesValue {
    pub value: Scalar,
    pub tail: Option<f64>,
}

impl PowerSeries {
    pub fn from_exact(coeffs: Vec<ExactComplex>) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least one coefficient");
        PowerSeries { coeffs: Coeffs::Exact(coeffs), center: Scalar::zero() }
    }

    pub fn from_float(coeffs: Vec<C64>) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least one coefficient");
        PowerSeries { coeffs: Coeffs::Float(coeffs), center: Scalar::zero() }
    }

    /// Exact when every scalar is exact.
    pub fn from_scalars(coeffs: Vec<Scalar>) -> Self {
        if coeffs.iter().all(Scalar::is_exact) {
            Self::from_exact(coeffs.into_iter().map(|s| s.as_exact().cloned().unwrap()).collect())
        } else {
            Self::from_float(coeffs.iter().map(Scalar::to_c64).collect())
        }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_exact(coeffs.iter().map(|&c| exact_int(c)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::from_exact(vec![ExactComplex::zero(); order + 1])
    }

    pub fn constant(c: Scalar, order: usize) -> Self {
        let mut v = vec![Scalar::zero(); order + 1];
        v[0] = c;
        Self::from_scalars(v)
    }

    /// The identity series `t`.
    pub fn variable(order: usize) -> Self {
        let mut v = vec![Scalar::zero(); order + 1];
        if order >= 1 {
            v[1] = Scalar::one();
        }
        Self::from_scalars(v)
    }

    pub fn with_center(mut self, center: Scalar) -> Self {
        self.center = center;
        self
    }

    pub fn center(&self) -> &Scalar {
        &self.center
    }

    pub fn coeffs(&self) -> &Coeffs {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.coeffs, Coeffs::Exact(_))
    }

    pub fn coeff(&self, n: usize) -> Scalar {
        match &self.coeffs {
            Coeffs::Exact(v) => v.get(n).cloned().map(Scalar::Exact).unwrap_or_else(Scalar::zero),
            Coeffs::Float(v) => v.get(n).map(|z| Scalar::Float(*z)).unwrap_or_else(Scalar::zero),
        }
    }

    pub fn scalars(&self) -> Vec<Scalar> {
        (0..=self.order()).map(|n| self.coeff(n)).collect()
    }

    pub fn to_float_vec(&self) -> Vec<C64> {
        self.coeffs.to_float()
    }

    pub fn to_float(&self) -> Self {
        PowerSeries { coeffs: Coeffs::Float(self.coeffs.to_float()), center: self.center.clone() }
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order()) + 1;
        PowerSeries { coeffs: lift1!(self, |v| v[..n].to_vec()), center: self.center.clone() }
    }

    /// Largest degree with a nonzero coefficient, if any.
    pub fn degree(&self) -> Option<usize> {
        (0..=self.order()).rev().find(|&n| !self.coeff(n).is_zero())
    }

    fn check_center(&self, other: &Self) -> Result<()> {
        if self.center == other.center {
            Ok(())
        } else {
            Err(Error::MismatchedCenters)
        }
    }

    // One body serves exact (non-`Copy`) and float coefficients.
    #[allow(clippy::op_ref)]
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_center(other)?;
        let n = self.order().min(other.order()) + 1;
        let coeffs = lift2!(self, other, |a, b| (0..n).map(|i| &a[i] + &b[i]).collect());
        Ok(PowerSeries { coeffs, center: self.center.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&Scalar::int(-1)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_center(other)?;
        let n = self.order().min(other.order()) + 1;
        let coeffs = lift2!(self, other, |a, b| mul_vec(a, b, n));
        Ok(PowerSeries { coeffs, center: self.center.clone() })
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let coeffs = match (&self.coeffs, s) {
            (Coeffs::Exact(v), Scalar::Exact(e)) => Coeffs::Exact(v.iter().map(|c| c.clone() * e.clone()).collect()),
            _ => {
                let z = s.to_c64();
                Coeffs::Float(self.coeffs.to_float().into_iter().map(|c| c * z).collect())
            }
        };
        PowerSeries { coeffs, center: self.center.clone() }
    }

    /// `self(inner(t))`; the inner series must vanish at its center.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeff(0).is_zero() {
            return Err(Error::ComposeConstantTerm);
        }
        let n = self.order().min(inner.order()) + 1;
        let coeffs = lift2!(self, inner, |outer, inn| compose_vec(outer, inn, n));
        Ok(PowerSeries { coeffs, center: inner.center.clone() })
    }

    /// `1 / self`; requires a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        if self.coeff(0).is_zero() {
            return Err(Error::ZeroDivisor);
        }
        Ok(PowerSeries { coeffs: lift1!(self, |v| recip_vec(v)), center: self.center.clone() })
    }

    /// `self / other`, cancelling common leading zeros (so `sin(x)/x` works).
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_center(other)?;
        let w = match (0..=other.order()).find(|&i| !other.coeff(i).is_zero()) {
            Some(w) => w,
            None => return Err(Error::ZeroDivisor),
        };
        if (0..w.min(self.order() + 1)).any(|i| !self.coeff(i).is_zero()) || w > self.order() {
            return Err(Error::ZeroDivisor);
        }
        let n = (self.order() - w).min(other.order() - w) + 1;
        let coeffs = lift2!(self, other, |a, b| {
            let num = &a[w..w + n];
            let den = &b[w..w + n];
            mul_vec(num, &recip_vec(den), n)
        });
        Ok(PowerSeries { coeffs, center: self.center.clone() })
    }

    pub fn powi(&self, k: u32) -> Result<Self> {
        let mut acc = PowerSeries::constant(Scalar::one(), self.order()).with_center(self.center.clone());
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `c_n → (n+1) c_{n+1}`, order drops by one (order 0 maps to the zero series).
    pub fn differentiate(&self) -> Self {
        let coeffs = lift1!(self, |v| deriv_vec(v));
        PowerSeries { coeffs, center: self.center.clone() }
    }

    /// `c_n → c_n/(n+1)` at position n+1, zero constant term, order grows by one.
    pub fn antiderivative(&self) -> Self {
        let coeffs = lift1!(self, |v| antideriv_vec(v));
        PowerSeries { coeffs, center: self.center.clone() }
    }

    /// Horner evaluation at `x` with a geometric tail estimate.
    pub fn eval(&self, x: &Scalar) -> SeriesValue {
        let t = x - &self.center;
        let value = match (&self.coeffs, &t) {
            (Coeffs::Exact(v), Scalar::Exact(te)) => Scalar::Exact(horner(v, te)),
            _ => Scalar::Float(horner(&self.coeffs.to_float(), &t.to_c64())),
        };
        SeriesValue { value, tail: self.tail_estimate(t.norm()) }
    }

    /// Tail estimate for `|t| = r`: with the last two nonzero terms `c_i t^i`
    /// and `c_j t^j`, the per-index ratio `q` extrapolates geometrically:
    /// `|c_j t^j| / (1 − q^{j−i})`. A long run of trailing zeros means the
    /// series is a polynomial and the tail is zero.
    pub fn tail_estimate(&self, r: f64) -> Option<f64> {
        if r == 0.0 {
            return Some(0.0);
        }
        let mags: Vec<f64> = self.coeffs.to_float().iter().map(|c| c.norm()).collect();
        let nz: Vec<usize> = (0..mags.len()).filter(|&i| mags[i] != 0.0).collect();
        let n = self.order();
        let Some(&j) = nz.last() else { return Some(0.0) };
        let max_gap = nz.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(1);
        if n - j > max_gap {
            return Some(0.0);
        }
        if nz.len() < 2 {
            return None;
        }
        let i = nz[nz.len() - 2];
        let last = mags[j] * r.powi(j as i32);
        let prev = mags[i] * r.powi(i as i32);
        let ratio_gap = last / prev;
        if !(ratio_gap < 1.0) || !last.is_finite() {
            return None;
        }
        Some(last / (1.0 - ratio_gap))
    }

    /// Ratio-test radius over the last eight nonzero coefficients; infinite
    /// for polynomials and for series with fewer than two nonzero terms.
    pub fn radius_estimate(&self) -> f64 {
        let mags: Vec<f64> = self.coeffs.to_float().iter().map(|c| c.norm()).collect();
        let nz: Vec<usize> = (0..mags.len()).filter(|&i| mags[i] != 0.0).collect();
        if nz.len() < 2 {
            return f64::INFINITY;
        }
        let max_gap = nz.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(1);
        if self.order() - nz[nz.len() - 1] > max_gap {
            return f64::INFINITY;
        }
        let window = &nz[nz.len().saturating_sub(8)..];
        let (i, j) = (window[0], window[window.len() - 1]);
        ((mags[i].ln() - mags[j].ln()) / (j - i) as f64).exp()
    }
}

fn deriv_vec<C: Coef>(v: &[C]) -> Vec<C> {
    if v.len() == 1 {
        return vec![C::zero()];
    }
    (1..v.len()).map(|i| v[i].clone() * C::from_i64(i as i64)).collect()
}

fn antideriv_vec<C: Coef>(v: &[C]) -> Vec<C> {
    std::iter::once(C::zero()).chain(v.iter().enumerate().map(|(i, c)| c.clone() / C::from_i64(i as i64 + 1))).collect()
}

fn horner<C: Coef>(v: &[C], t: &C) -> C {
    v.iter().rev().fold(C::zero(), |acc, c| acc * t.clone() + c.clone())
}

pub(crate) fn mul_vec<C: Coef>(a: &[C], b: &[C], n: usize) -> Vec<C> {
    let mut out = vec![C::zero(); n];
    for (i, ai) in a.iter().enumerate().take(n) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n - i) {
            out[i + j] = out[i + j].clone() + ai.clone() * bj.clone();
        }
    }
    out
}

pub(crate) fn recip_vec<C: Coef>(a: &[C]) -> Vec<C> {
    let n = a.len();
    let inv0 = C::one() / a[0].clone();
    let mut b: Vec<C> = Vec::with_capacity(n);
    b.push(inv0.clone());
    for k in 1..n {
        let mut s = C::zero();
        for j in 1..=k {
            if !a[j].is_zero() {
                s = s + a[j].clone() * b[k - j].clone();
            }
        }
        b.push(-(s * inv0.clone()));
    }
    b
}

fn compose_vec<C: Coef>(outer: &[C], inner: &[C], n: usize) -> Vec<C> {
    let mut acc = vec![C::zero(); n];
    for c in outer[..n].iter().rev() {
        acc = mul_vec(&acc, inner, n);
        acc[0] = acc[0].clone() + c.clone();
    }
    acc
}

fn factorial_exact(n: usize) -> ExactComplex {
    let mut acc = num_bigint::BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    exact_real(num_rational::BigRational::from_integer(acc))
}

fn param(params: &[Scalar], idx: usize, default: Scalar) -> Scalar {
    params.get(idx).cloned().unwrap_or(default)
}

/// Builds a series from per-index scalar coefficients.
fn build(order: usize, f: impl Fn(usize) -> Scalar) -> PowerSeries {
    PowerSeries::from_scalars((0..=order).map(f).collect())
}

fn inv_factorial(n: usize) -> Scalar {
    Scalar::Exact(ExactComplex::one() / factorial_exact(n))
}

/// Exact Maclaurin coefficients of a named function through order `order`.
///
/// Builtins (optional parameters in brackets):
/// `sin[a]`, `cos[a]`, `exp[a]`, `sinc[a]` — of `a·x`;
/// `geometric` (alias `geometric_1_over_1_plus_x2`)`[center]` — `1/(1+x²)`;
/// `gaussian[a]` — `e^{−a x²}`; `pole[a]` — `1/(x−a)`, `a ≠ 0`.
pub fn series_known(name: &str, params: &[Scalar], order: usize) -> Result<PowerSeries> {
    let a = param(params, 0, Scalar::one());
    let sign = |k: usize| if k.is_multiple_of(2) { Scalar::one() } else { Scalar::int(-1) };
    match name {
        "sin" => Ok(build(order, |n| {
            if n % 2 == 1 {
                sign(n / 2) * a.powi(n as i32) * inv_factorial(n)
            } else {
                Scalar::zero()
            }
        })),
        "cos" => Ok(build(order, |n| {
            if n % 2 == 0 {
                sign(n / 2) * a.powi(n as i32) * inv_factorial(n)
            } else {
                Scalar::zero()
            }
        })),
        "exp" => Ok(build(order, |n| a.powi(n as i32) * inv_factorial(n))),
        "sinc" => Ok(build(order, |n| {
            if n % 2 == 0 {
                sign(n / 2) * a.powi(n as i32) * inv_factorial(n + 1)
            } else {
                Scalar::zero()
            }
        })),
        "gaussian" => Ok(build(order, |n| {
            if n % 2 == 0 {
                sign(n / 2) * a.powi((n / 2) as i32) * inv_factorial(n / 2)
            } else {
                Scalar::zero()
            }
        })),
        "geometric" | "geometric_1_over_1_plus_x2" => {
            let c = param(params, 0, Scalar::zero());
            if c.is_zero() {
                return Ok(build(order, |n| if n % 2 == 0 { sign(n / 2) } else { Scalar::zero() }));
            }
            // 1/(1+x²) = (1/2i)·(1/(x−i) − 1/(x+i)), each pole expanded about c.
            let i = Scalar::i();
            let dp = &c - &i;
            let dm = &c + &i;
            if dp.is_zero() || dm.is_zero() {
                return Err(Error::InvalidParameter(format!("geometric series centered at the pole {c}")));
            }
            let half_over_i = Scalar::one() / (Scalar::int(2) * &i);
            let s = build(order, |n| {
                let term = sign(n) * (Scalar::one() / dp.powi(n as i32 + 1) - Scalar::one() / dm.powi(n as i32 + 1));
                &half_over_i * term
            });
            Ok(s.with_center(c))
        }
        "pole" => {
            let a = params.first().cloned().ok_or_else(|| Error::InvalidParameter("pole needs its location".into()))?;
            if a.is_zero() {
                return Err(Error::InvalidParameter("pole at the expansion point 0".into()));
            }
            Ok(build(order, |n| -(Scalar::one() / a.powi(n as i32 + 1))))
        }
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.scalars().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Exact rational `n/d` as a series coefficient (test and builder helper).
pub fn q(n: i64, d: i64) -> ExactComplex {
    exact_real(rational(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(v: &[(i64, i64)]) -> PowerSeries {
        PowerSeries::from_exact(v.iter().map(|&(n, d)| q(n, d)).collect())
    }

    #[test]
    fn known_series_match_table() {
        assert_eq!(series_known("sinc", &[], 4).unwrap(), exact(&[(1, 1), (0, 1), (-1, 6), (0, 1), (1, 120)]));
        assert_eq!(series_known("exp", &[], 2).unwrap(), exact(&[(1, 1), (1, 1), (1, 2)]));
        assert_eq!(
            series_known("geometric_1_over_1_plus_x2", &[], 4).unwrap(),
            PowerSeries::from_ints(&[1, 0, -1, 0, 1])
        );
        assert!(matches!(series_known("tan", &[], 3), Err(Error::UnknownBuiltin(_))));
        assert!(matches!(series_known("geometric", &[Scalar::i()], 3), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn arithmetic_examples() {
        let a = PowerSeries::from_ints(&[1, 2]);
        let b = PowerSeries::from_ints(&[0, 1]);
        assert_eq!(a.add(&b).unwrap(), PowerSeries::from_ints(&[1, 3]));
        let x = PowerSeries::from_ints(&[0, 1, 0]);
        assert_eq!(x.mul(&x).unwrap(), PowerSeries::from_ints(&[0, 0, 1]));
        let e = series_known("exp", &[], 4).unwrap();
        let neg = PowerSeries::from_ints(&[0, -1, 0, 0, 0]);
        assert_eq!(e.compose(&neg).unwrap(), exact(&[(1, 1), (-1, 1), (1, 2), (-1, 6), (1, 24)]));
        assert_eq!(e.compose(&PowerSeries::from_ints(&[1, 1])), Err(Error::ComposeConstantTerm));
    }

    #[test]
    fn calculus_examples() {
        assert_eq!(exact(&[(1, 1), (1, 1), (1, 2)]).differentiate(), PowerSeries::from_ints(&[1, 1]));
        assert_eq!(exact(&[(1, 1), (0, 1), (-1, 6)]).antiderivative(), exact(&[(0, 1), (1, 1), (0, 1), (-1, 18)]));
    }

    #[test]
    fn sinc_by_division() {
        let s = series_known("sin", &[], 9).unwrap();
        let x = PowerSeries::variable(9);
        let q = s.div(&x).unwrap();
        assert_eq!(q, series_known("sinc", &[], 8).unwrap());
    }

    #[test]
    fn evaluation_examples() {
        let e = series_known("exp", &[], 20).unwrap().to_float();
        let v = e.eval(&Scalar::one());
        assert!((v.value.re_f64() - std::f64::consts::E).abs() < 1e-12);
        let g = series_known("geometric", &[], 40).unwrap();
        let v = g.eval(&Scalar::ratio(1, 2));
        assert!((v.value.re_f64() - 0.8).abs() < 1e-10);
        assert!(v.tail.unwrap() < 1e-10);
        assert_eq!(g.eval(&Scalar::zero()).value, Scalar::one());
        assert_eq!(PowerSeries::zero(5).eval(&Scalar::int(3)).value, Scalar::zero());
    }

    #[test]
    fn radius_estimates() {
        let g = series_known("geometric", &[], 64).unwrap();
        assert!((g.radius_estimate() - 1.0).abs() < 1e-12);
        assert!(series_known("exp", &[], 64).unwrap().radius_estimate() > 30.0);
        assert!(PowerSeries::from_ints(&[1, 2, 3, 0, 0, 0]).radius_estimate().is_infinite());
        let p = series_known("pole", &[Scalar::int(2)], 30).unwrap();
        assert!((p.radius_estimate() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn recentered_geometric_matches_direct_value() {
        let g = series_known("geometric", &[Scalar::int(1)], 60).unwrap();
        let v = g.eval(&Scalar::ratio(3, 2)).value.to_c64();
        assert!((v.re - 1.0 / (1.0 + 2.25)).abs() < 1e-12);
        assert!(v.im.abs() < 1e-12);
        assert!(g.is_exact());
    }
}
