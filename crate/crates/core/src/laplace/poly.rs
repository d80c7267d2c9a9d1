//! Polynomials and rational functions in the transform variable, with
//! root finding and partial fractions over ℂ.

use crate::error::{Error, Result};
use crate::scalar::{rational, Rational, Scalar, C64};
use nalgebra::{DMatrix, Schur};
use num_complex::Complex;
use std::fmt;

/// Dense polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    c: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut c: Vec<Scalar>) -> Self {
        while c.last().is_some_and(Scalar::is_zero) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn constant(s: Scalar) -> Self {
        Poly::new(vec![s])
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    /// The variable itself.
    pub fn x() -> Self {
        Poly::new(vec![Scalar::zero(), Scalar::one()])
    }

    /// `x − a`.
    pub fn linear(a: &Scalar) -> Self {
        Poly::new(vec![-a, Scalar::one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.c
    }

    pub fn coeff(&self, n: usize) -> Scalar {
        self.c.get(n).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.c.iter().all(Scalar::is_exact)
    }

    pub fn lead(&self) -> Scalar {
        self.c.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        Poly::new(self.c.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// Quotient and remainder.
    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::ZeroDivisor)?;
        let lead = d.lead();
        let mut r = self.c.clone();
        let Some(n) = self.degree().filter(|n| *n >= dd) else {
            return Ok((Poly::zero(), self.clone()));
        };
        let mut q = vec![Scalar::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let c = &r[k + dd] / &lead;
            for (j, dj) in d.c.iter().enumerate() {
                r[k + j] = &r[k + j] - &(&c * dj);
            }
            r[k + dd] = Scalar::zero();
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(q), Poly::new(r)))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.c.iter().enumerate().skip(1).map(|(i, c)| c * Scalar::int(i as i64)).collect())
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.c.iter().rev().fold(Scalar::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_c64(&self, x: C64) -> C64 {
        self.c.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * x + c.to_c64())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(Scalar::one() / self.lead()))
    }

    /// Monic greatest common divisor; exact inputs only (floating inputs
    /// return 1, treating them as coprime).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if !(a.is_exact() && b.is_exact()) {
            return Poly::one();
        }
        // Monic remainders keep the rational coefficients from growing.
        let (mut x, mut y) = (a.monic(), b.monic());
        while !y.is_zero() {
            let (_, r) = x.divrem(&y).expect("nonzero divisor");
            x = y;
            y = r.monic();
        }
        if x.is_zero() {
            Poly::one()
        } else {
            x.monic()
        }
    }

    /// `p(a + t)` as a polynomial in `t`.
    pub fn taylor_shift(&self, a: &Scalar) -> Poly {
        let lin = Poly::new(vec![a.clone(), Scalar::one()]);
        self.c.iter().rev().fold(Poly::zero(), |acc, c| acc.mul(&lin).add(&Poly::constant(c.clone())))
    }

    pub fn norm_inf(&self) -> f64 {
        self.c.iter().map(Scalar::norm).fold(0.0, f64::max)
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (k, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            parts.push(signed_term(c, &mono));
        }
        join_terms(&parts)
    }
}

/// `(negative, text)` for `c · mono`, with the sign pulled out when `c` is
/// real.
pub(crate) fn signed_term(c: &Scalar, mono: &str) -> (bool, String) {
    let (neg, mag) = match c.real_sign() {
        Some(std::cmp::Ordering::Less) => (true, -c),
        _ => (false, c.clone()),
    };
    let text = if mono.is_empty() {
        mag.to_string()
    } else if mag == Scalar::one() {
        mono.to_string()
    } else if mag.is_real() {
        format!("{mag}*{mono}")
    } else {
        format!("({mag})*{mono}")
    };
    (neg, text)
}

pub(crate) fn join_terms(parts: &[(bool, String)]) -> String {
    let mut s = String::new();
    for (i, (neg, t)) in parts.iter().enumerate() {
        match (i, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(t);
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

/// `num/den`, reduced (for exact input) with a monic denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.degree().unwrap_or(0) > 0 { (num.divrem(&g)?.0, den.divrem(&g)?.0) } else { (num, den) };
        let lead = den.lead();
        let inv = Scalar::one() / lead;
        Ok(RationalFunction { num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn polynomial(p: Poly) -> Self {
        RationalFunction { num: p, den: Poly::one() }
    }

    /// `c/(x − a)^order`.
    pub fn pole(c: Scalar, a: &Scalar, order: u32) -> Self {
        RationalFunction { num: Poly::constant(c), den: Poly::linear(a).pow(order) }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_proper(&self) -> bool {
        self.num.is_zero() || self.num.degree() < self.den.degree()
    }

    pub fn is_exact(&self) -> bool {
        self.num.is_exact() && self.den.is_exact()
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        Self::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        RationalFunction { num: self.num.scale(s), den: self.den.clone() }
    }

    pub fn eval(&self, x: &Scalar) -> Result<Scalar> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole(format!("denominator vanishes at {x}")));
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn display_in(&self, var: &str) -> String {
        let n = self.num.display_in(var);
        if self.den == Poly::one() {
            return n;
        }
        let wrap =
            |p: &Poly, s: String| if p.c.iter().filter(|c| !c.is_zero()).count() > 1 { format!("({s})") } else { s };
        format!("{}/{}", wrap(&self.num, n), wrap(&self.den, self.den.display_in(var)))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

/// `coef / (x − pole)^order`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialFraction {
    pub pole: Scalar,
    pub order: u32,
    pub coef: Scalar,
}

pub const DEFAULT_POLE_ORDER_CAP: u32 = 8;

/// Distinct roots with multiplicities. Exact input goes through a
/// square-free decomposition and each root is snapped to a Gaussian
/// rational when that is an exact root; the rest stay floating after a
/// residual check.
pub fn roots(p: &Poly) -> Result<Vec<(Scalar, u32)>> {
    let Some(deg) = p.degree() else {
        return Err(Error::RootFinding("the zero polynomial has no isolated roots".into()));
    };
    if deg == 0 {
        return Ok(Vec::new());
    }
    // A root at zero is read off the trailing zero coefficients; left in,
    // it would make the companion matrix nilpotent, where the QR iteration
    // stalls.
    let zeros = p.c.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        let mut out = vec![(Scalar::zero(), zeros as u32)];
        out.extend(roots(&Poly::new(p.c[zeros..].to_vec()))?);
        return Ok(out);
    }
    let mut out = Vec::new();
    if p.is_exact() {
        if let Some(found) = exact_roots_by_clustering(p) {
            return Ok(found);
        }
        for (factor, mult) in square_free(p) {
            for r in simple_roots(&factor)? {
                out.push((r, mult));
            }
        }
    } else {
        let zs = numeric_roots(p)?;
        let mut clusters: Vec<(C64, u32)> = Vec::new();
        for z in zs {
            match clusters.iter_mut().find(|(c, _)| (*c - z).norm() < 1e-6 * c.norm().max(1.0)) {
                Some((c, m)) => {
                    *c = (*c * *m as f64 + z) / (*m as f64 + 1.0);
                    *m += 1;
                }
                None => clusters.push((z, 1)),
            }
        }
        out = clusters.into_iter().map(|(z, m)| (Scalar::float(z), m)).collect();
    }
    Ok(out)
}

/// Fast path for exact polynomials whose roots are all Gaussian rationals:
/// cluster the numeric roots, refine each cluster on the derivative where
/// it is simple, snap, and confirm by exact reconstruction.
fn exact_roots_by_clustering(p: &Poly) -> Option<Vec<(Scalar, u32)>> {
    let zs = numeric_roots(p).ok()?;
    let mut clusters: Vec<(C64, u32)> = Vec::new();
    for z in zs {
        match clusters.iter_mut().find(|(c, _)| (*c - z).norm() < 1e-2 * c.norm().max(1.0)) {
            Some((c, m)) => {
                *c = (*c * *m as f64 + z) / (*m as f64 + 1.0);
                *m += 1;
            }
            None => clusters.push((z, 1)),
        }
    }
    let mut found = Vec::new();
    let mut rebuilt = Poly::constant(p.lead());
    for (c, m) in clusters {
        let mut d = p.clone();
        for _ in 1..m {
            d = d.derivative();
        }
        let dd = d.derivative();
        let mut z = c;
        for _ in 0..30 {
            let den = dd.eval_c64(z);
            if den.norm() == 0.0 {
                break;
            }
            let step = d.eval_c64(z) / den;
            z -= step;
            if step.norm() <= 1e-17 * z.norm().max(1.0) {
                break;
            }
        }
        let a = snap(z)?;
        rebuilt = rebuilt.mul(&Poly::linear(&a).pow(m));
        found.push((a, m));
    }
    (rebuilt == *p).then_some(found)
}

/// Yun's algorithm: `p = lead · Π a_i^i` with each `a_i` square-free.
fn square_free(p: &Poly) -> Vec<(Poly, u32)> {
    let p = p.monic();
    let dp = p.derivative();
    let b = Poly::gcd(&p, &dp);
    let mut c = p.divrem(&b).expect("gcd is nonzero").0;
    let mut d = dp.divrem(&b).expect("gcd is nonzero").0.sub(&c.derivative());
    let mut out = Vec::new();
    let mut i = 1;
    while c.degree().unwrap_or(0) > 0 {
        let a = Poly::gcd(&c, &d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        c = c.divrem(&a).expect("gcd is nonzero").0;
        d = d.divrem(&a).expect("gcd is nonzero").0.sub(&c.derivative());
        i += 1;
    }
    out
}

fn simple_roots(p: &Poly) -> Result<Vec<Scalar>> {
    if p.degree() == Some(1) {
        return Ok(vec![-(p.coeff(0) / p.coeff(1))]);
    }
    let scale = p.norm_inf();
    let deg = p.degree().unwrap_or(0) as i32;
    numeric_roots(p)?
        .into_iter()
        .map(|z| {
            if let Some(e) = snap(z).filter(|e| p.eval(e).is_zero()) {
                return Ok(e);
            }
            let res = p.eval_c64(z).norm();
            if res > 1e-12 * scale * z.norm().max(1.0).powi(deg) {
                return Err(Error::RootFinding(format!("residual {res:.3e} at root {z}")));
            }
            Ok(Scalar::float(z))
        })
        .collect()
}

/// Companion-matrix eigenvalues, polished by Newton's method.
fn numeric_roots(p: &Poly) -> Result<Vec<C64>> {
    let n = p.degree().unwrap_or(0);
    let lead = p.lead().to_c64();
    let c: Vec<C64> = p.c.iter().map(|x| x.to_c64() / lead).collect();
    let mut m = DMatrix::<Complex<f64>>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i];
    }
    // QR can stall on unitary companions (x^n + 1); simultaneous Newton
    // iteration does not.
    let eig: Vec<C64> = match Schur::try_new(m, f64::EPSILON, 10_000).and_then(|s| s.eigenvalues()) {
        Some(e) => e.iter().copied().collect(),
        None => aberth(&c)?,
    };
    let dp = p.derivative();
    Ok(eig
        .into_iter()
        .map(|z0| {
            let mut z = z0;
            for _ in 0..20 {
                let d = dp.eval_c64(z);
                if d.norm() == 0.0 {
                    break;
                }
                let step = p.eval_c64(z) / d;
                z -= step;
                if step.norm() <= 1e-17 * z.norm().max(1.0) {
                    break;
                }
            }
            z
        })
        .collect())
}

/// Aberth–Ehrlich iteration on the monic coefficients `c` (constant first),
/// started on a rotated circle of the Cauchy-bound radius.
fn aberth(c: &[C64]) -> Result<Vec<C64>> {
    let n = c.len() - 1;
    let eval = |z: C64| {
        let mut v = C64::new(0.0, 0.0);
        let mut d = C64::new(0.0, 0.0);
        for &a in c.iter().rev() {
            d = d * z + v;
            v = v * z + a;
        }
        (v, d)
    };
    let radius = 1.0 + c[..n].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(0.5 * radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for i in 0..n {
            let (v, d) = eval(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let repulsion: C64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (C64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= step;
            moved = moved.max(step.norm() / z[i].norm().max(1.0));
        }
        if moved <= 1e-15 {
            return Ok(z);
        }
    }
    Err(Error::RootFinding("companion eigenvalues and Aberth iteration did not converge".into()))
}

/// Nearest Gaussian rational with small denominators, if the float is
/// close to one.
fn snap(z: C64) -> Option<Scalar> {
    let re = approx_rational(z.re)?;
    let im = approx_rational(z.im)?;
    Some(Scalar::Exact(Complex::new(re, im)))
}

fn approx_rational(x: f64) -> Option<Rational> {
    if x.abs() < 1e-14 {
        return Some(rational(0, 1));
    }
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        if a.abs() > 1e12 {
            return None;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > 1_000_000 {
            return None;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= 1e-10 * x.abs().max(1.0) {
            return Some(rational(h1, k1));
        }
        let frac = r - a as f64;
        if frac == 0.0 {
            return Some(rational(h1, k1));
        }
        r = 1.0 / frac;
    }
    None
}

/// Partial fractions of a proper rational function.
pub fn partial_fractions(r: &RationalFunction, cap: u32) -> Result<Vec<PartialFraction>> {
    if !r.is_proper() {
        return Err(Error::Improper);
    }
    if r.num.is_zero() {
        return Ok(Vec::new());
    }
    let poles = roots(&r.den)?;
    if let Some(&(_, m)) = poles.iter().find(|(_, m)| *m > cap) {
        return Err(Error::PoleOrderCap { order: m, cap });
    }
    let mut out = Vec::new();
    for (i, (a, m)) in poles.iter().enumerate() {
        // num/den = (x−a)^{−m} · num/q with q the other factors; only the
        // first m Taylor coefficients at a are needed.
        let len = *m as usize;
        let mut qs = vec![r.den.lead()];
        qs.resize(len, Scalar::zero());
        for (j, (b, mb)) in poles.iter().enumerate() {
            if i != j {
                let lin = [a - b, Scalar::one()];
                for _ in 0..*mb {
                    for k in (0..len).rev() {
                        let mut v = &qs[k] * &lin[0];
                        if k > 0 {
                            v = v + &qs[k - 1];
                        }
                        qs[k] = v;
                    }
                }
            }
        }
        let ns = Poly::new(taylor_head(&r.num, a, len));
        let qs = Poly::new(qs);
        // Series division of ns by qs to m terms.
        let m = *m as usize;
        let mut g: Vec<Scalar> = Vec::with_capacity(m);
        let q0 = qs.coeff(0);
        for k in 0..m {
            let mut s = ns.coeff(k);
            for (j, gj) in g.iter().enumerate() {
                s = s - gj * &qs.coeff(k - j);
            }
            g.push(s / &q0);
        }
        for (k, gk) in g.into_iter().enumerate() {
            if !gk.is_zero() {
                out.push(PartialFraction { pole: a.clone(), order: (m - k) as u32, coef: gk });
            }
        }
    }
    Ok(out)
}

/// The first `len` Taylor coefficients of `p` at `a`, by repeated
/// synthetic division.
fn taylor_head(p: &Poly, a: &Scalar, len: usize) -> Vec<Scalar> {
    let mut c = p.c.clone();
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        if c.is_empty() {
            out.push(Scalar::zero());
            continue;
        }
        // c(x) = (x − a)·q(x) + c(a)
        let mut q = vec![Scalar::zero(); c.len() - 1];
        let mut acc = Scalar::zero();
        for k in (0..c.len()).rev() {
            acc = acc * a + &c[k];
            if k > 0 {
                q[k - 1] = acc.clone();
            }
        }
        out.push(acc);
        c = q;
    }
    out
}

/// Sum of the partial-fraction terms as one rational function.
pub fn recombine(terms: &[PartialFraction]) -> Result<RationalFunction> {
    from_poles(terms.iter().map(|t| (t.coef.clone(), t.pole.clone(), t.order)))
}

/// `Σ c/(x − a)^k` over a common denominator built from the distinct
/// poles. Zero coefficients are skipped, so every pole's top order has a
/// nonzero coefficient and the result is already reduced.
pub(crate) fn from_poles(terms: impl Iterator<Item = (Scalar, Scalar, u32)>) -> Result<RationalFunction> {
    let mut poles: Vec<(Scalar, u32)> = Vec::new();
    let mut merged: Vec<(Scalar, Scalar, u32)> = Vec::new();
    for (c, a, k) in terms {
        match merged.iter_mut().find(|(_, b, j)| *b == a && *j == k) {
            Some(t) => t.0 = &t.0 + &c,
            None => merged.push((c, a, k)),
        }
    }
    merged.retain(|(c, _, _)| !c.is_zero());
    for (_, a, k) in &merged {
        match poles.iter_mut().find(|(b, _)| b == a) {
            Some(p) => p.1 = p.1.max(*k),
            None => poles.push((a.clone(), *k)),
        }
    }
    let den = poles.iter().fold(Poly::one(), |acc, (a, m)| acc.mul(&Poly::linear(a).pow(*m)));
    let mut num = Poly::zero();
    for (c, a, k) in &merged {
        let mut q = Poly::constant(c.clone());
        for (b, m) in &poles {
            let e = if b == a { m - k } else { *m };
            q = q.mul(&Poly::linear(b).pow(e));
        }
        num = num.add(&q);
    }
    Ok(RationalFunction { num, den })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| Scalar::int(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (x²−1) = (x−1)(x+1)
        let (q, r) = p(&[-1, 0, 1]).divrem(&p(&[-1, 1])).unwrap();
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(Poly::gcd(&p(&[-1, 0, 1]), &p(&[1, 2, 1])), p(&[1, 1]));
    }

    #[test]
    fn exact_roots_with_multiplicity() {
        // (x−2)³(x²+1)
        let f = Poly::linear(&Scalar::int(2)).pow(3).mul(&p(&[1, 0, 1]));
        let mut rs = roots(&f).unwrap();
        rs.sort_by(|a, b| a.0.to_c64().im.partial_cmp(&b.0.to_c64().im).unwrap());
        assert_eq!(rs.len(), 3);
        assert!(rs.iter().all(|(r, _)| r.is_exact()));
        assert!(rs.contains(&(Scalar::int(2), 3)));
        assert!(rs.contains(&(Scalar::i(), 1)));
    }

    #[test]
    fn roots_at_zero_are_deflated() {
        // x³ and x²(x+3): nilpotent or nearly so without the deflation.
        assert_eq!(roots(&p(&[0, 0, 0, 1])).unwrap(), vec![(Scalar::zero(), 3)]);
        assert_eq!(roots(&p(&[0, 0, 3, 1])).unwrap(), vec![(Scalar::zero(), 2), (Scalar::int(-3), 1)]);
        let r = RationalFunction::new(Poly::one(), p(&[0, 0, 0, 1])).unwrap();
        let pf = partial_fractions(&r, DEFAULT_POLE_ORDER_CAP).unwrap();
        assert_eq!(pf, vec![PartialFraction { pole: Scalar::zero(), order: 3, coef: Scalar::one() }]);
    }

    #[test]
    fn unitary_companion() {
        // x^10 + 1: the roots are the odd 20th roots of unity.
        let mut c = vec![0; 11];
        c[0] = 1;
        c[10] = 1;
        let rs = roots(&p(&c)).unwrap();
        assert_eq!(rs.len(), 10);
        for (z, m) in rs {
            assert_eq!(m, 1);
            let z = z.to_c64();
            assert!((z.powi(10) + 1.0).norm() < 1e-12, "{z}");
        }
    }

    #[test]
    fn irrational_roots_stay_floating() {
        let rs = roots(&p(&[-2, 0, 1])).unwrap();
        assert_eq!(rs.len(), 2);
        for (r, m) in rs {
            assert_eq!(m, 1);
            assert!((r.to_c64().norm() - 2f64.sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn partial_fractions_recombine_exactly() {
        // (3x + 5)/((x−1)²(x+2))
        let den = Poly::linear(&Scalar::one()).pow(2).mul(&Poly::linear(&Scalar::int(-2)));
        let r = RationalFunction::new(p(&[5, 3]), den).unwrap();
        let pf = partial_fractions(&r, DEFAULT_POLE_ORDER_CAP).unwrap();
        assert_eq!(recombine(&pf).unwrap(), r);
        let lor = RationalFunction::new(p(&[1]), p(&[1, 0, 1])).unwrap();
        assert_eq!(recombine(&partial_fractions(&lor, 8).unwrap()).unwrap(), lor);
    }

    #[test]
    fn pole_cap_and_improper() {
        let r = RationalFunction::new(p(&[1]), Poly::linear(&Scalar::one()).pow(9)).unwrap();
        assert!(matches!(partial_fractions(&r, 8), Err(Error::PoleOrderCap { order: 9, cap: 8 })));
        let r = RationalFunction::new(p(&[0, 0, 1]), p(&[1, 1])).unwrap();
        assert!(matches!(partial_fractions(&r, 8), Err(Error::Improper)));
    }

    #[test]
    fn display() {
        let r = RationalFunction::new(p(&[1]), p(&[-2, 1])).unwrap();
        assert_eq!(r.to_string(), "1/(x - 2)");
        assert_eq!(p(&[1, 0, -3]).to_string(), "-3*x^2 + 1");
    }
}
