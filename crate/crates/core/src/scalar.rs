//! Scalars that stay exact (Gaussian rationals) for as long as the inputs
//! allow, and demote to `Complex64` the moment a floating value enters.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub type Rational = BigRational;
/// Gaussian rational `p + q i` with arbitrary-precision `p, q`.
pub type ExactComplex = Complex<BigRational>;
pub type C64 = Complex64;

pub fn rational(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact value of a finite double.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    BigRational::from_float(x)
}

pub fn exact_to_c64(z: &ExactComplex) -> C64 {
    C64::new(rational_to_f64(&z.re), rational_to_f64(&z.im))
}

pub fn exact_from_c64(z: C64) -> Option<ExactComplex> {
    Some(Complex::new(rational_from_f64(z.re)?, rational_from_f64(z.im)?))
}

pub fn exact_real(r: Rational) -> ExactComplex {
    Complex::new(r, Rational::zero())
}

pub fn exact_int(n: i64) -> ExactComplex {
    exact_real(Rational::from_integer(BigInt::from(n)))
}

/// Coefficient field used by the generic series, polynomial and matrix
/// routines. Implemented for exact Gaussian rationals and for `Complex64`.
pub trait Coef:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(n: i64) -> Self;
    fn to_c64(&self) -> C64;
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
    fn into_scalar(self) -> Scalar;
}

impl Coef for ExactComplex {
    fn from_i64(n: i64) -> Self {
        exact_int(n)
    }
    fn to_c64(&self) -> C64 {
        exact_to_c64(self)
    }
    fn into_scalar(self) -> Scalar {
        Scalar::Exact(self)
    }
}

impl Coef for C64 {
    fn from_i64(n: i64) -> Self {
        C64::new(n as f64, 0.0)
    }
    fn to_c64(&self) -> C64 {
        *self
    }
    fn into_scalar(self) -> Scalar {
        Scalar::Float(self)
    }
}

/// A complex number that is exact when it can be.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(ExactComplex),
    Float(C64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(ExactComplex::zero())
    }
    pub fn one() -> Self {
        Scalar::Exact(ExactComplex::one())
    }
    pub fn i() -> Self {
        Scalar::Exact(Complex::new(Rational::zero(), Rational::one()))
    }
    pub fn int(n: i64) -> Self {
        Scalar::Exact(exact_int(n))
    }
    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::Exact(exact_real(rational(n, d)))
    }
    pub fn rational(r: Rational) -> Self {
        Scalar::Exact(exact_real(r))
    }
    /// Exact image of a finite double; non-finite inputs stay floating.
    pub fn from_f64(x: f64) -> Self {
        match rational_from_f64(x) {
            Some(r) => Scalar::rational(r),
            None => Scalar::Float(C64::new(x, 0.0)),
        }
    }
    pub fn from_c64(z: C64) -> Self {
        match exact_from_c64(z) {
            Some(e) => Scalar::Exact(e),
            None => Scalar::Float(z),
        }
    }
    pub fn float(z: C64) -> Self {
        Scalar::Float(z)
    }
    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }
    pub fn as_exact(&self) -> Option<&ExactComplex> {
        match self {
            Scalar::Exact(e) => Some(e),
            Scalar::Float(_) => None,
        }
    }
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(e) => e.is_zero(),
            Scalar::Float(z) => *z == C64::new(0.0, 0.0),
        }
    }
    pub fn is_real(&self) -> bool {
        match self {
            Scalar::Exact(e) => e.im.is_zero(),
            Scalar::Float(z) => z.im == 0.0,
        }
    }
    pub fn to_c64(&self) -> C64 {
        match self {
            Scalar::Exact(e) => exact_to_c64(e),
            Scalar::Float(z) => *z,
        }
    }
    pub fn re_f64(&self) -> f64 {
        self.to_c64().re
    }
    pub fn norm(&self) -> f64 {
        self.to_c64().norm()
    }
    pub fn conj(&self) -> Self {
        match self {
            Scalar::Exact(e) => Scalar::Exact(e.conj()),
            Scalar::Float(z) => Scalar::Float(z.conj()),
        }
    }
    /// Sign of the real part, for exact real values only.
    pub fn real_sign(&self) -> Option<std::cmp::Ordering> {
        match self {
            Scalar::Exact(e) if e.im.is_zero() => Some(if e.re.is_positive() {
                std::cmp::Ordering::Greater
            } else if e.re.is_negative() {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Equal
            }),
            Scalar::Float(z) if z.im == 0.0 => z.re.partial_cmp(&0.0),
            _ => None,
        }
    }
    pub fn powi(&self, n: i32) -> Self {
        if n < 0 {
            return Scalar::one() / self.powi(-n);
        }
        let mut acc = Scalar::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
    pub fn factorial(n: u32) -> Self {
        let mut acc = BigInt::one();
        for k in 2..=n {
            acc *= k;
        }
        Scalar::rational(Rational::from_integer(acc))
    }
    pub fn demote(&self) -> Self {
        Scalar::Float(self.to_c64())
    }
    pub fn exp(&self) -> Self {
        if self.is_zero() {
            return Scalar::one();
        }
        Scalar::Float(self.to_c64().exp())
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => self.to_c64() == other.to_c64(),
        }
    }
}

/// Exact arithmetic with shortcuts for real operands, which dominate in
/// practice and skip most of the rational normalizations.
mod exact_ops {
    use super::{ExactComplex, Rational};
    use num_complex::Complex;
    use num_traits::Zero;

    pub fn add(a: &ExactComplex, b: &ExactComplex) -> ExactComplex {
        let im = match (a.im.is_zero(), b.im.is_zero()) {
            (true, true) => Rational::zero(),
            (false, true) => a.im.clone(),
            (true, false) => b.im.clone(),
            (false, false) => &a.im + &b.im,
        };
        Complex::new(&a.re + &b.re, im)
    }

    pub fn sub(a: &ExactComplex, b: &ExactComplex) -> ExactComplex {
        let im = match (a.im.is_zero(), b.im.is_zero()) {
            (true, true) => Rational::zero(),
            (false, true) => a.im.clone(),
            (true, false) => -b.im.clone(),
            (false, false) => &a.im - &b.im,
        };
        Complex::new(&a.re - &b.re, im)
    }

    pub fn mul(a: &ExactComplex, b: &ExactComplex) -> ExactComplex {
        match (a.im.is_zero(), b.im.is_zero()) {
            (true, true) => Complex::new(&a.re * &b.re, Rational::zero()),
            (false, true) => Complex::new(&a.re * &b.re, &a.im * &b.re),
            (true, false) => Complex::new(&a.re * &b.re, &a.re * &b.im),
            (false, false) => Complex::new(&a.re * &b.re - &a.im * &b.im, &a.re * &b.im + &a.im * &b.re),
        }
    }

    pub fn div(a: &ExactComplex, b: &ExactComplex) -> ExactComplex {
        if b.im.is_zero() {
            let im = if a.im.is_zero() { Rational::zero() } else { &a.im / &b.re };
            Complex::new(&a.re / &b.re, im)
        } else {
            a.clone() / b.clone()
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(exact_ops::$method(a, b)),
                    _ => Scalar::Float(self.to_c64().$method(rhs.to_c64())),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add);
scalar_binop!(Sub, sub);
scalar_binop!(Mul, mul);
scalar_binop!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(e) => Scalar::Exact(-e),
            Scalar::Float(z) => Scalar::Float(-z),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(self.clone())
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<ExactComplex> for Scalar {
    fn from(e: ExactComplex) -> Self {
        Scalar::Exact(e)
    }
}

pub fn fmt_exact(z: &ExactComplex, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => write!(f, "{}", z.re),
        (true, false) => write!(f, "{}i", z.im),
        (false, false) => {
            if z.im.is_negative() {
                write!(f, "({}-{}i)", z.re, -z.im.clone())
            } else {
                write!(f, "({}+{}i)", z.re, z.im)
            }
        }
    }
}

pub fn fmt_c64(z: C64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if z.im == 0.0 {
        write!(f, "{}", z.re)
    } else if z.re == 0.0 {
        write!(f, "{}i", z.im)
    } else if z.im < 0.0 {
        write!(f, "({}-{}i)", z.re, -z.im)
    } else {
        write!(f, "({}+{}i)", z.re, z.im)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(e) => fmt_exact(e, f),
            Scalar::Float(z) => fmt_c64(*z, f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_stays_exact() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::ratio(2, 3);
        let s = &a + &b;
        assert!(s.is_exact());
        assert_eq!(s, Scalar::one());
        let q = Scalar::i() * Scalar::i();
        assert_eq!(q, Scalar::int(-1));
    }

    #[test]
    fn mixing_demotes_to_float() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::float(C64::new(0.5, 0.0));
        let s = a + b;
        assert!(!s.is_exact());
        assert!((s.re_f64() - (1.0 / 3.0 + 0.5)).abs() < 1e-15);
    }

    #[test]
    fn doubles_convert_exactly() {
        let s = Scalar::from_f64(2.5);
        assert_eq!(s, Scalar::ratio(5, 2));
        assert!(s.is_exact());
        let t = Scalar::from_f64(0.1);
        assert_eq!(t.re_f64(), 0.1);
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::ratio(-1, 6).to_string(), "-1/6");
        assert_eq!((Scalar::i() * Scalar::ratio(1, 2)).to_string(), "1/2i");
        assert_eq!((Scalar::one() - Scalar::i()).to_string(), "(1-1i)");
    }
}
