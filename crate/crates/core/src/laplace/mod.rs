//! Laplace transforms by differentiation.
//!
//! The forward transform is `L[f](x) = f(−∂_x)(1/x)`: a term `y^k e^{ay}`
//! becomes `k!/(x − a)^{k+1}` through the shift `e^{−a∂}`. The inverse is
//! `L⁻¹[F](x) = F(∂_x)δ(x)`; after partial fractions every
//! `1/(x − a)^{k+1}` is a resolvent applied `k+1` times to `δ`, which gives
//! `x^k e^{ax}/k!`.

pub(crate) mod poly;

pub use poly::{partial_fractions, recombine, roots, PartialFraction, Poly, RationalFunction, DEFAULT_POLE_ORDER_CAP};

use crate::error::{Error, Result};
use crate::integrate::{RegScheme, RegShape};
use crate::opcalc::{apply_class, reg_value, Atom, ConstantAllocator, ConstantPolicy, Kernel, KernelClass, Nu, Reg};
use crate::powerseries::PowerSeries;
use crate::scalar::{Scalar, C64};
use poly::{join_terms, signed_term};
use std::fmt;

/// `weight · x^power · e^{rate x}` on `x > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpTerm {
    pub weight: Scalar,
    pub power: u32,
    pub rate: Scalar,
}

/// A finite sum of [`ExpTerm`]s, like terms merged, sorted by rate then
/// power.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ExpPoly {
    terms: Vec<ExpTerm>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(terms: Vec<ExpTerm>) -> Self {
        let mut p = Self::zero();
        for t in terms {
            p.push(t);
        }
        p
    }

    pub fn term(weight: Scalar, power: u32, rate: Scalar) -> Self {
        Self::new(vec![ExpTerm { weight, power, rate }])
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, t: ExpTerm) {
        if t.weight.is_zero() {
            return;
        }
        if let Some(i) = self.terms.iter().position(|u| u.power == t.power && u.rate == t.rate) {
            let w = &self.terms[i].weight + &t.weight;
            if w.is_zero() {
                self.terms.remove(i);
            } else {
                self.terms[i].weight = w;
            }
            return;
        }
        let key = |u: &ExpTerm| {
            let r = u.rate.to_c64();
            (r.re, r.im, u.power)
        };
        let k = key(&t);
        let at = self.terms.iter().position(|u| key(u).partial_cmp(&k) == Some(std::cmp::Ordering::Greater));
        match at {
            Some(i) => self.terms.insert(i, t),
            None => self.terms.push(t),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for t in &o.terms {
            p.push(t.clone());
        }
        p
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::new(self.terms.iter().map(|t| ExpTerm { weight: &t.weight * s, ..t.clone() }).collect())
    }

    /// Value at `x`; exact when every rate is zero and `x` is exact.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for t in &self.terms {
            acc = acc + &t.weight * x.powi(t.power as i32) * (&t.rate * x).exp();
        }
        acc
    }

    pub fn eval_c64(&self, x: f64) -> C64 {
        self.terms.iter().map(|t| t.weight.to_c64() * x.powi(t.power as i32) * (t.rate.to_c64() * x).exp()).sum()
    }

    /// Value at `0⁺`: the sum of the weights of the `k = 0` terms.
    pub fn value_at_zero(&self) -> Scalar {
        self.terms.iter().filter(|t| t.power == 0).fold(Scalar::zero(), |acc, t| acc + &t.weight)
    }

    /// The same function as an operator symbol in `y`.
    pub fn to_class(&self) -> KernelClass {
        let mut c = KernelClass::zero();
        for t in &self.terms {
            c = c.add(&KernelClass::term(t.weight.clone(), t.power as i32, t.rate.clone(), Scalar::zero()));
        }
        c
    }

    /// Reads back `Σ w e^{au} u^k Θ(u)` atoms anchored at 0.
    pub fn from_kernel(k: &Kernel) -> Result<Self> {
        let mut p = Self::zero();
        for (w, atom) in k.terms() {
            match atom {
                Atom::Theta { rate, power, shift } if shift.is_zero() => {
                    p.push(ExpTerm { weight: w.clone(), power: *power, rate: rate.clone() })
                }
                other => {
                    return Err(Error::ClassViolation(format!(
                        "{other:?} is not an exponential-polynomial term on x > 0"
                    )))
                }
            }
        }
        Ok(p)
    }

    /// Largest real part among the rates.
    pub fn abscissa(&self) -> f64 {
        self.terms.iter().map(|t| t.rate.re_f64()).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn has_real_coefficients(&self) -> bool {
        self.terms.iter().all(|t| {
            if t.rate.is_real() {
                t.weight.is_real()
            } else {
                self.terms.iter().any(|u| u.power == t.power && u.rate == t.rate.conj() && u.weight == t.weight.conj())
            }
        })
    }

    /// Human-readable form; conjugate pairs become `cos`/`sin` when the
    /// function is real.
    pub fn display_in(&self, var: &str) -> String {
        let mut parts = Vec::new();
        let real = self.has_real_coefficients();
        for t in &self.terms {
            let mono = match t.power {
                0 => None,
                1 => Some(var.to_string()),
                k => Some(format!("{var}^{k}")),
            };
            if real && !t.rate.is_real() {
                let r = t.rate.to_c64();
                if r.im < 0.0 {
                    continue;
                }
                let (alpha, beta) = split(&t.rate);
                let two = Scalar::int(2);
                let (re, im) = split(&t.weight);
                let exp = exp_factor(&alpha, var);
                for (c, trig) in [(&two * &re, "cos"), (-(&two * &im), "sin")] {
                    if c.is_zero() {
                        continue;
                    }
                    let arg = if beta == Scalar::one() { var.to_string() } else { format!("{beta}*{var}") };
                    let f = [mono.clone(), exp.clone(), Some(format!("{trig}({arg})"))];
                    parts.push(signed_term(&c, &factors(&f)));
                }
            } else {
                let f = [mono, exp_factor(&t.rate, var)];
                parts.push(signed_term(&t.weight, &factors(&f)));
            }
        }
        join_terms(&parts)
    }
}

fn factors(f: &[Option<String>]) -> String {
    f.iter().flatten().cloned().collect::<Vec<_>>().join("*")
}

/// Real and imaginary parts as real scalars.
fn split(z: &Scalar) -> (Scalar, Scalar) {
    match z {
        Scalar::Exact(e) => (Scalar::rational(e.re.clone()), Scalar::rational(e.im.clone())),
        Scalar::Float(c) => (Scalar::float(C64::new(c.re, 0.0)), Scalar::float(C64::new(c.im, 0.0))),
    }
}

fn exp_factor(rate: &Scalar, var: &str) -> Option<String> {
    if rate.is_zero() {
        None
    } else if *rate == Scalar::one() {
        Some(format!("exp({var})"))
    } else if *rate == Scalar::int(-1) {
        Some(format!("exp(-{var})"))
    } else if rate.is_real() {
        Some(format!("exp({rate}*{var})"))
    } else {
        Some(format!("exp(({rate})*{var})"))
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

/// Forward transform of an [`ExpPoly`]: the rational function, the kernel
/// it came from, and the abscissa of convergence.
#[derive(Clone, Debug, PartialEq)]
pub struct LaplaceImage {
    pub rational: RationalFunction,
    pub kernel: Kernel,
    pub abscissa: f64,
}

impl LaplaceImage {
    /// Value at `x`, which must lie right of every rate.
    pub fn eval(&self, x: &Scalar) -> Result<Scalar> {
        if x.re_f64() <= self.abscissa {
            return Err(Error::OutsideRegion(format!(
                "Re x = {} is not right of the abscissa {}",
                x.re_f64(),
                self.abscissa
            )));
        }
        self.rational.eval(x)
    }
}

/// `L[f](x) = f(−∂_x)(1/x)`.
pub fn laplace_forward(f: &ExpPoly) -> Result<LaplaceImage> {
    let mut alloc = ConstantAllocator::new();
    let kernel = apply_class(&f.to_class(), Nu::Minus, &Kernel::recip(), &ConstantPolicy::Zero, &mut alloc)?;
    let poles = kernel
        .terms()
        .iter()
        .map(|(w, atom)| match atom {
            Atom::ExpPow { rate, power, shift } if rate.is_zero() && *power < 0 => {
                Ok((w.clone(), shift.clone(), (-power) as u32))
            }
            other => Err(Error::ClassViolation(format!("unexpected atom {other:?} in a Laplace image"))),
        })
        .collect::<Result<Vec<_>>>()?;
    let rational = poly::from_poles(poles.into_iter())?;
    Ok(LaplaceImage { rational, kernel, abscissa: f.abscissa() })
}

/// Note attached to term-wise transforms of non-polynomial series.
pub const ASYMPTOTIC_NOTE: &str = "asymptotic — do not sum naively";

/// Term-wise image `Σ c_n n!/x^{n+1}` of a power series.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticImage {
    /// Coefficient of `x^{−(n+1)}` at index `n`.
    pub coeffs: Vec<Scalar>,
    /// True when the input was a polynomial and the sum is exact.
    pub exact: bool,
}

impl AsymptoticImage {
    /// Optimal truncation: sum while the terms decrease. Returns the value
    /// and the first omitted term as the error estimate.
    pub fn eval(&self, x: &Scalar) -> Result<(Scalar, f64)> {
        if x.re_f64() <= 0.0 {
            return Err(Error::OutsideRegion(format!("x = {x} must have positive real part")));
        }
        let mut acc = Scalar::zero();
        let mut prev = f64::INFINITY;
        let mut xp = x.clone();
        for c in &self.coeffs {
            let term = c / &xp;
            let mag = term.norm();
            if !self.exact && mag > prev {
                return Ok((acc, prev));
            }
            acc = acc + term;
            if mag != 0.0 {
                prev = mag;
            }
            xp = &xp * x;
        }
        Ok((acc, if self.exact { 0.0 } else { prev }))
    }
}

pub fn laplace_forward_series(f: &PowerSeries) -> AsymptoticImage {
    let coeffs: Vec<Scalar> = (0..=f.order()).map(|n| f.coeff(n) * Scalar::factorial(n as u32)).collect();
    let exact = f.tail_estimate(1.0) == Some(0.0) && f.center().is_zero();
    AsymptoticImage { coeffs, exact }
}

/// `L⁻¹[R](x) = R(∂_x)δ(x)` for a proper rational function.
pub fn laplace_inverse_rational(r: &RationalFunction) -> Result<ExpPoly> {
    laplace_inverse_with_cap(r, DEFAULT_POLE_ORDER_CAP)
}

pub fn laplace_inverse_with_cap(r: &RationalFunction, cap: u32) -> Result<ExpPoly> {
    let mut k = Kernel::zero();
    for t in partial_fractions(r, cap)? {
        let mut g = Kernel::delta();
        for _ in 0..t.order {
            g = g.resolvent(&t.pole, true)?;
        }
        k = k.add(&g.scale(&t.coef));
    }
    ExpPoly::from_kernel(&k)
}

/// `L⁻¹∘L` on `f`: zero when the round trip reproduces `f` term by term,
/// else the largest deviation on `x ∈ (0, 10]`.
pub fn laplace_roundtrip_check(f: &ExpPoly) -> Result<f64> {
    if f.terms.iter().any(|t| t.rate.re_f64() >= 0.0) {
        return Err(Error::OutsideRegion("round trip needs every rate with negative real part".into()));
    }
    let back = laplace_inverse_rational(&laplace_forward(f)?.rational)?;
    if back == *f {
        return Ok(0.0);
    }
    Ok((1..=100)
        .map(|i| {
            let x = i as f64 * 0.1;
            (back.eval_c64(x) - f.eval_c64(x)).norm()
        })
        .fold(0.0, f64::max))
}

/// Discrete spectrum `Σ w_n δ(λ − λ_n)`, rates strictly increasing.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SpectralComb {
    lines: Vec<(Scalar, Scalar)>,
}

impl SpectralComb {
    /// Validates positive real rates and weights, sorts, merges repeats.
    pub fn new(lines: Vec<(Scalar, Scalar)>) -> Result<Self> {
        let mut out: Vec<(Scalar, Scalar)> = Vec::new();
        for (rate, weight) in lines {
            if !rate.is_real() || rate.re_f64() <= 0.0 {
                return Err(Error::Nonpositive(format!("rate {rate}")));
            }
            if !weight.is_real() || weight.re_f64() <= 0.0 {
                return Err(Error::Nonpositive(format!("weight {weight}")));
            }
            match out.iter_mut().find(|(r, _)| *r == rate) {
                Some((_, w)) => *w = &*w + &weight,
                None => out.push((rate, weight)),
            }
        }
        out.sort_by(|a, b| a.0.re_f64().total_cmp(&b.0.re_f64()));
        Ok(SpectralComb { lines: out })
    }

    pub fn lines(&self) -> &[(Scalar, Scalar)] {
        &self.lines
    }

    pub fn total_weight(&self) -> Scalar {
        self.lines.iter().fold(Scalar::zero(), |acc, (_, w)| acc + w)
    }

    /// `Σ w_n e^{−λ_n t}` as an [`ExpPoly`] in `t`.
    pub fn trace(&self) -> ExpPoly {
        ExpPoly::new(self.lines.iter().map(|(r, w)| ExpTerm { weight: w.clone(), power: 0, rate: -r }).collect())
    }
}

impl fmt::Display for SpectralComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.lines.iter().map(|(r, w)| format!("({r}, {w})")).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

/// `h(t) = Σ w_n e^{−λ_n t}`, with the smallest rate factored out.
pub fn heat_trace(spec: &SpectralComb, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Nonpositive(format!("time {t}")));
    }
    let Some((l0, _)) = spec.lines.first() else { return Ok(0.0) };
    let l0 = l0.re_f64();
    let s: f64 = spec.lines.iter().map(|(r, w)| w.re_f64() * (-(r.re_f64() - l0) * t).exp()).sum();
    Ok((-l0 * t).exp() * s)
}

/// Each `w e^{−λt}` is `w e^{−λ∂}` acting on `δ`, i.e. the line `w δ(λ' − λ)`.
pub fn spectrum_recover(h: &ExpPoly) -> Result<SpectralComb> {
    let mut comb = Kernel::zero();
    for t in &h.terms {
        if t.power != 0 {
            return Err(Error::ClassViolation(format!("term with x^{} is not a pure exponential", t.power)));
        }
        if !t.rate.is_real() || t.rate.re_f64() >= 0.0 {
            return Err(Error::Nonpositive(format!("rate {} must be real and negative", t.rate)));
        }
        comb = comb.add(&Kernel::delta().shift(&t.rate)?.scale(&t.weight));
    }
    let lines = comb
        .terms()
        .iter()
        .map(|(w, atom)| match atom {
            Atom::Delta { order: 0, shift } => Ok((shift.clone(), w.clone())),
            other => Err(Error::ClassViolation(format!("unexpected atom {other:?}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    SpectralComb::new(lines)
}

/// Samples `Σ w_n δ_reg(λ − λ_n)` on `grid`. The width is the scheme's
/// starting width (Gaussian spread, default 0.01; sinc cutoff, default 50).
pub fn comb_render(spec: &SpectralComb, reg: &RegScheme, grid: &[f64]) -> Result<Vec<f64>> {
    let r = match reg.shape {
        RegShape::Gaussian => Reg::Gaussian { spread: reg.width.unwrap_or(0.01) },
        RegShape::Sinc => Reg::Sinc { cutoff: reg.width.unwrap_or(50.0), heat: 0.0 },
    };
    if reg.width.is_some_and(|w| !(w > 0.0)) {
        return Err(Error::Nonpositive(format!("width {:?}", reg.width)));
    }
    grid.iter()
        .map(|&x| {
            spec.lines
                .iter()
                .try_fold(0.0, |acc, (l, w)| Ok(acc + w.re_f64() * reg_value(&r, 0, C64::new(x - l.re_f64(), 0.0))?.re))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(w: i64, k: u32, a: i64) -> ExpPoly {
        ExpPoly::term(Scalar::int(w), k, Scalar::int(a))
    }

    #[test]
    fn monomials_and_shifts() {
        for n in 0..=20u32 {
            let img = laplace_forward(&e(1, n, 0)).unwrap();
            let want = RationalFunction::pole(Scalar::factorial(n), &Scalar::zero(), n + 1);
            assert_eq!(img.rational, want, "n = {n}");
        }
        let img = laplace_forward(&e(1, 0, 2)).unwrap();
        assert_eq!(img.eval(&Scalar::int(5)).unwrap(), Scalar::ratio(1, 3));
        assert!(img.eval(&Scalar::int(2)).is_err());
    }

    #[test]
    fn inverse_examples() {
        let r = RationalFunction::pole(Scalar::one(), &Scalar::int(2), 1);
        assert_eq!(laplace_inverse_rational(&r).unwrap().to_string(), "exp(2*x)");
        let r = RationalFunction::pole(Scalar::one(), &Scalar::zero(), 1);
        assert_eq!(laplace_inverse_rational(&r).unwrap().to_string(), "1");
        let lor =
            RationalFunction::new(Poly::one(), Poly::new(vec![Scalar::one(), Scalar::zero(), Scalar::one()])).unwrap();
        assert_eq!(laplace_inverse_rational(&lor).unwrap().to_string(), "sin(x)");
    }

    #[test]
    fn round_trips() {
        assert_eq!(laplace_roundtrip_check(&e(1, 0, -3)).unwrap(), 0.0);
        let f = e(1, 2, -1);
        assert_eq!(laplace_roundtrip_check(&f).unwrap(), 0.0);
        assert!((f.eval_c64(1.0).re - 0.36787944117144233).abs() < 1e-15);
        assert!(laplace_roundtrip_check(&e(5, 0, 0)).is_err());
    }

    #[test]
    fn spectrum_examples() {
        let spec = SpectralComb::new(vec![(Scalar::int(1), Scalar::int(1)), (Scalar::int(2), Scalar::int(1))]).unwrap();
        assert!((heat_trace(&spec, 1.0).unwrap() - 0.5032147244).abs() < 1e-10);
        assert_eq!(spectrum_recover(&spec.trace()).unwrap(), spec);
        let grid: Vec<f64> = (0..=4000).map(|i| -1.0 + i as f64 * 0.001).collect();
        let one = SpectralComb::new(vec![(Scalar::int(1), Scalar::int(1))]).unwrap();
        let v = comb_render(&one, &RegScheme::gaussian(), &grid).unwrap();
        let peak = v.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        assert!((grid[peak] - 1.0).abs() < 1e-9);
        let mass: f64 = v.iter().sum::<f64>() * 0.001;
        assert!((mass - 1.0).abs() < 1e-3);
        assert!(comb_render(&SpectralComb::default(), &RegScheme::gaussian(), &grid)
            .unwrap()
            .iter()
            .all(|x| *x == 0.0));
    }
}
