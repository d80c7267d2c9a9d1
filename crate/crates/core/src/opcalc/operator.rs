//! `f(ν∂)` for `f` given either as a truncated power series or as an
//! exponential-polynomial class `Σ w y^j e^{ρ y} e^{−β y²}`.

use super::kernel::{ConstantAllocator, ConstantPolicy, Kernel};
use crate::error::{Error, Result};
use crate::powerseries::PowerSeries;
use crate::scalar::{Scalar, C64};

/// The unit `ν` in `f(ν∂)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nu {
    Plus,
    Minus,
    PlusI,
    MinusI,
}

impl Nu {
    pub fn value(self) -> Scalar {
        match self {
            Nu::Plus => Scalar::one(),
            Nu::Minus => Scalar::int(-1),
            Nu::PlusI => Scalar::i(),
            Nu::MinusI => -Scalar::i(),
        }
    }
}

/// One term `w · y^j · e^{ρ y} · e^{−β y²}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassTerm {
    pub weight: Scalar,
    pub power: i32,
    pub rate: Scalar,
    pub gauss: Scalar,
}

/// Integrands of the form `Σ p(y) e^{ρ y} e^{−β y²} y^{−m}`: trigonometric
/// polynomials over powers of `y`, optionally Gaussian-damped.
#[derive(Clone, Debug, Default)]
pub struct KernelClass {
    terms: Vec<ClassTerm>,
}

impl PartialEq for KernelClass {
    fn eq(&self, other: &Self) -> bool {
        self.terms.len() == other.terms.len() && self.terms.iter().all(|t| other.terms.contains(t))
    }
}

impl KernelClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(weight: Scalar, power: i32, rate: Scalar, gauss: Scalar) -> Self {
        let mut k = Self::zero();
        k.push(ClassTerm { weight, power, rate, gauss });
        k
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(c, 0, Scalar::zero(), Scalar::zero())
    }

    /// `y^j`, any integer `j`.
    pub fn monomial(j: i32) -> Self {
        Self::term(Scalar::one(), j, Scalar::zero(), Scalar::zero())
    }

    /// `e^{ρ y}`.
    pub fn exp(rate: Scalar) -> Self {
        Self::term(Scalar::one(), 0, rate, Scalar::zero())
    }

    /// `e^{−β y²}`.
    pub fn gaussian(beta: Scalar) -> Self {
        Self::term(Scalar::one(), 0, Scalar::zero(), beta)
    }

    /// `sin(ω y) = (e^{iωy} − e^{−iωy})/2i`.
    pub fn sin(omega: Scalar) -> Self {
        let iw = &Scalar::i() * &omega;
        let half_i = Scalar::one() / (Scalar::int(2) * Scalar::i());
        Self::exp(iw.clone()).sub(&Self::exp(-iw)).scale(&half_i)
    }

    /// `cos(ω y) = (e^{iωy} + e^{−iωy})/2`.
    pub fn cos(omega: Scalar) -> Self {
        let iw = &Scalar::i() * &omega;
        Self::exp(iw.clone()).add(&Self::exp(-iw)).scale(&Scalar::ratio(1, 2))
    }

    pub fn terms(&self) -> &[ClassTerm] {
        &self.terms
    }

    pub fn push(&mut self, t: ClassTerm) {
        if t.weight.is_zero() {
            return;
        }
        if let Some(pos) = self.terms.iter().position(|s| s.power == t.power && s.rate == t.rate && s.gauss == t.gauss)
        {
            let w = &self.terms[pos].weight + &t.weight;
            if w.is_zero() {
                self.terms.remove(pos);
            } else {
                self.terms[pos].weight = w;
            }
        } else {
            self.terms.push(t);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for t in &other.terms {
            out.push(t.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero();
        for t in &self.terms {
            out.push(ClassTerm { weight: &t.weight * s, ..t.clone() });
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for a in &self.terms {
            for b in &other.terms {
                out.push(ClassTerm {
                    weight: &a.weight * &b.weight,
                    power: a.power + b.power,
                    rate: &a.rate + &b.rate,
                    gauss: &a.gauss + &b.gauss,
                });
            }
        }
        out
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut acc = Self::constant(Scalar::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `f(y) → f(−y)`.
    pub fn reflect(&self) -> Self {
        let mut out = Self::zero();
        for t in &self.terms {
            let sign = if t.power.rem_euclid(2) == 0 { Scalar::one() } else { Scalar::int(-1) };
            out.push(ClassTerm {
                weight: &t.weight * &sign,
                power: t.power,
                rate: -t.rate.clone(),
                gauss: t.gauss.clone(),
            });
        }
        out
    }

    /// Most negative power of `y`, or 0.
    pub fn min_power(&self) -> i32 {
        self.terms.iter().map(|t| t.power).min().unwrap_or(0).min(0)
    }

    /// Distinct nonzero oscillation frequencies `|Im ρ|`.
    pub fn frequencies(&self) -> Vec<f64> {
        let mut f: Vec<f64> = self.terms.iter().map(|t| t.rate.to_c64().im.abs()).filter(|w| *w > 0.0).collect();
        f.sort_by(|a, b| a.partial_cmp(b).unwrap());
        f.dedup();
        f
    }

    /// Laurent coefficients from `y^{min_power}` through `y^{order}`.
    pub fn laurent(&self, order: usize) -> Vec<Scalar> {
        let lo = self.min_power();
        let len = (order as i32 - lo + 1).max(0) as usize;
        let mut out = vec![Scalar::zero(); len];
        for t in &self.terms {
            // Maclaurin coefficients of e^{ρy} e^{−βy²}.
            let need = (order as i32 - t.power).max(-1);
            if need < 0 {
                continue;
            }
            let need = need as usize;
            let mut er = vec![Scalar::one()];
            for n in 1..=need {
                er.push(&er[n - 1] * &t.rate / Scalar::int(n as i64));
            }
            let mut eg = vec![Scalar::zero(); need + 1];
            let mut c = Scalar::one();
            for m in 0..=need / 2 {
                eg[2 * m] = c.clone();
                c = &c * &(-t.gauss.clone()) / Scalar::int(m as i64 + 1);
            }
            for n in 0..=need {
                let mut s = Scalar::zero();
                for k in 0..=n {
                    if !eg[k].is_zero() {
                        s = s + &er[n - k] * &eg[k];
                    }
                }
                let idx = (t.power + n as i32 - lo) as usize;
                if idx < len {
                    out[idx] = &out[idx] + &(&t.weight * &s);
                }
            }
        }
        out
    }

    /// Maclaurin series through `order`; the principal part must vanish.
    pub fn maclaurin(&self, order: usize) -> Result<PowerSeries> {
        let lo = self.min_power();
        let l = self.laurent(order);
        let scale: f64 = l.iter().map(Scalar::norm).fold(0.0, f64::max).max(1.0);
        for (i, c) in l.iter().take((-lo) as usize).enumerate() {
            let vanishes = match c {
                Scalar::Exact(_) => c.is_zero(),
                Scalar::Float(z) => z.norm() <= 1e-12 * scale,
            };
            if !vanishes {
                return Err(Error::Pole(format!("0 (coefficient of y^{} is {c})", lo + i as i32)));
            }
        }
        Ok(PowerSeries::from_scalars(l[(-lo) as usize..].to_vec()))
    }

    /// Direct value at `y`; near 0 use [`ClassEvaluator`].
    pub fn eval_direct(&self, y: C64) -> C64 {
        self.terms
            .iter()
            .map(|t| {
                let (w, r, b) = (t.weight.to_c64(), t.rate.to_c64(), t.gauss.to_c64());
                w * y.powi(t.power) * (r * y - b * y * y).exp()
            })
            .sum()
    }

    /// Exact value when `y` and the class are exact and no exponential
    /// factor is transcendental at `y`.
    pub fn eval(&self, y: &Scalar) -> Result<Scalar> {
        if y.is_zero() {
            if self.min_power() < 0 {
                return Ok(self.maclaurin(0)?.coeff(0));
            }
            let mut s = Scalar::zero();
            for t in &self.terms {
                if t.power == 0 {
                    s = s + t.weight.clone();
                }
            }
            return Ok(s);
        }
        let mut s = Scalar::zero();
        for t in &self.terms {
            let e = (&t.rate * y - &t.gauss * y * y).exp();
            s = s + &t.weight * y.powi(t.power) * e;
        }
        Ok(s)
    }

    pub fn evaluator(&self) -> Result<ClassEvaluator> {
        ClassEvaluator::new(self)
    }
}

/// Precomputed evaluator that switches to the Maclaurin series near the
/// removable singularity at 0, where the direct sum cancels badly.
#[derive(Clone, Debug)]
pub struct ClassEvaluator {
    class: KernelClass,
    series: Option<Vec<C64>>,
}

const NEAR_ZERO: f64 = 0.25;
const NEAR_ZERO_ORDER: usize = 40;

impl ClassEvaluator {
    pub fn new(class: &KernelClass) -> Result<Self> {
        let series = if class.min_power() < 0 {
            // Exact coefficients avoid the cancellation between terms.
            Some(class.maclaurin(NEAR_ZERO_ORDER)?.to_float_vec())
        } else {
            None
        };
        Ok(ClassEvaluator { class: class.clone(), series })
    }

    pub fn eval(&self, y: f64) -> C64 {
        match &self.series {
            Some(c) if y.abs() < NEAR_ZERO => {
                let y = C64::new(y, 0.0);
                c.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * y + c)
            }
            _ => self.class.eval_direct(C64::new(y, 0.0)),
        }
    }
}

/// How the operator symbol `f` is carried.
#[derive(Clone, Debug, PartialEq)]
pub enum Symbol {
    Series(PowerSeries),
    Class(KernelClass),
}

/// `f(ν∂)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOperator {
    pub symbol: Symbol,
    pub nu: Nu,
}

impl DiffOperator {
    pub fn series(f: PowerSeries, nu: Nu) -> Self {
        DiffOperator { symbol: Symbol::Series(f), nu }
    }

    pub fn class(f: KernelClass, nu: Nu) -> Self {
        DiffOperator { symbol: Symbol::Class(f), nu }
    }

    /// `f(ν a)`, the eigenvalue on `e^{a ε}`.
    pub fn symbol_at(&self, a: &Scalar) -> Result<Scalar> {
        let y = &self.nu.value() * a;
        match &self.symbol {
            Symbol::Series(s) => {
                let r = s.radius_estimate();
                let d = (&y - s.center()).norm();
                if d > r * (1.0 + 1e-9) {
                    return Err(Error::OutsideRadius(format!("|{y}| exceeds the estimated radius {r}")));
                }
                Ok(s.eval(&y).value)
            }
            Symbol::Class(c) => {
                if y.is_zero() && c.min_power() < 0 {
                    c.maclaurin(0).map(|s| s.coeff(0))
                } else {
                    c.eval(&y)
                }
            }
        }
    }

    /// Applies the operator to a kernel.
    pub fn apply(&self, g: &Kernel, policy: &ConstantPolicy, alloc: &mut ConstantAllocator) -> Result<Kernel> {
        match &self.symbol {
            Symbol::Class(c) => apply_class(c, self.nu, g, policy, alloc),
            Symbol::Series(s) => {
                // Σ c_n ν^n ∂^n g, exact for polynomial symbols.
                let nu = self.nu.value();
                let mut out = Kernel::zero();
                let mut d = g.clone();
                for n in 0..=s.order() {
                    let c = s.coeff(n);
                    if !c.is_zero() {
                        out = out.add(&d.scale(&(c * nu.powi(n as i32))));
                    }
                    d = d.derivative();
                }
                Ok(out)
            }
        }
    }
}

/// Applies `f(ν∂)` for an exponential-polynomial `f`.
///
/// `y^j` becomes `ν^j ∂^j` (an antiderivative chain when `j < 0`), `e^{ρy}`
/// the shift by `ρν`, and `e^{−βy²}` the heat flow `e^{−βν²∂²}`. All terms
/// with the same `j` share one antiderivative chain, so the integration
/// constants are common and can cancel across terms.
pub fn apply_class(
    f: &KernelClass,
    nu: Nu,
    g: &Kernel,
    policy: &ConstantPolicy,
    alloc: &mut ConstantAllocator,
) -> Result<Kernel> {
    let nu_v = nu.value();
    let nu2 = &nu_v * &nu_v;
    let mut anti: Vec<Kernel> = vec![g.clone()];
    let mut deriv: Vec<Kernel> = vec![g.clone()];
    let mut heated: Vec<((i32, Scalar), Kernel)> = Vec::new();
    let mut out = Kernel::zero();
    for t in f.terms() {
        let j = t.power;
        let base = if j < 0 {
            while anti.len() <= (-j) as usize {
                let next = anti.last().unwrap().antiderivative(policy, alloc)?;
                anti.push(next);
            }
            &anti[(-j) as usize]
        } else {
            while deriv.len() <= j as usize {
                let next = deriv.last().unwrap().derivative();
                deriv.push(next);
            }
            &deriv[j as usize]
        };
        let key = (j, t.gauss.clone());
        let h = match heated.iter().find(|(k, _)| *k == key) {
            Some((_, h)) => h.clone(),
            None => {
                let a = -(&t.gauss * &nu2);
                if t.gauss.is_zero() {
                    base.clone()
                } else {
                    if a.re_f64() < 0.0 && base.terms().iter().any(|(_, at)| !is_smooth(at)) {
                        return Err(Error::ClassViolation(
                            "Gaussian factor turns into a backward heat flow for this ν".into(),
                        ));
                    }
                    let h = base.heat(&a)?;
                    heated.push((key, h.clone()));
                    h
                }
            }
        };
        let shifted = h.shift(&(&t.rate * &nu_v))?;
        out = out.add(&shifted.scale(&(&t.weight * nu_v.powi(j))));
    }
    Ok(out)
}

fn is_smooth(a: &super::kernel::Atom) -> bool {
    use super::kernel::Atom;
    matches!(a, Atom::ExpPow { power, .. } if *power >= 0) || matches!(a, Atom::Constant { .. })
}

/// `f(ν∂)` applied to a power series:
/// `result_m = Σ_n c_n ν^n (m+n)!/m! t_{m+n}` over the available products.
///
/// The result keeps the target's order; coefficient `m` is complete when
/// `m + N_f ≥ N_t` or when the target is a polynomial.
pub fn apply_series_operator(op: &DiffOperator, target: &PowerSeries) -> Result<PowerSeries> {
    let f = match &op.symbol {
        Symbol::Series(s) => s.clone(),
        Symbol::Class(c) => c.maclaurin(target.order())?,
    };
    let nt = target.order();
    let nu = op.nu.value();
    let nu_pows: Vec<Scalar> = (0..=nt).map(|n| nu.powi(n as i32)).collect();
    let fc: Vec<Scalar> = (0..=f.order().min(nt)).map(|n| f.coeff(n)).collect();
    if fc.iter().all(Scalar::is_zero) && f.order() > nt {
        return Err(Error::EmptyOverlap);
    }
    let tc = target.scalars();
    let mut out = Vec::with_capacity(nt + 1);
    for m in 0..=nt {
        let mut s = Scalar::zero();
        // (m+n)!/m! built incrementally.
        let mut fall = Scalar::one();
        for n in 0..fc.len() {
            if m + n > nt {
                break;
            }
            if n > 0 {
                fall = fall * Scalar::int((m + n) as i64);
            }
            if !fc[n].is_zero() && !tc[m + n].is_zero() {
                s = s + &fc[n] * &nu_pows[n] * &fall * &tc[m + n];
            }
        }
        out.push(s);
    }
    Ok(PowerSeries::from_scalars(out).with_center(target.center().clone()))
}

/// Eigenfunction rule: `f(ν∂) e^{aε} = f(νa) e^{aε}`.
pub fn apply_to_exponential(op: &DiffOperator, a: &Scalar) -> Result<(Scalar, Kernel)> {
    Ok((op.symbol_at(a)?, Kernel::exp(a.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcalc::kernel::Side;
    use crate::powerseries::series_known;

    #[test]
    fn eigenfunction_rule_examples() {
        let sq = DiffOperator::series(PowerSeries::from_ints(&[0, 0, 1]), Nu::Plus);
        let (v, k) = apply_to_exponential(&sq, &Scalar::int(3)).unwrap();
        assert_eq!(v, Scalar::int(9));
        assert_eq!(k, Kernel::exp(Scalar::int(3)));

        let sin = DiffOperator::series(series_known("sin", &[], 64).unwrap(), Nu::MinusI);
        let (v, _) = apply_to_exponential(&sin, &Scalar::i()).unwrap();
        assert!((v.re_f64() - 1f64.sin()).abs() < 1e-15);

        let one = DiffOperator::class(KernelClass::constant(Scalar::one()), Nu::PlusI);
        let (v, _) = apply_to_exponential(&one, &Scalar::int(7)).unwrap();
        assert_eq!(v, Scalar::one());

        let pole = DiffOperator::class(KernelClass::monomial(-1), Nu::Plus);
        assert!(apply_to_exponential(&pole, &Scalar::zero()).is_err());
    }

    #[test]
    fn identity_operator_leaves_kernels_alone() {
        let mut alloc = ConstantAllocator::new();
        let g = Kernel::recip().add(&Kernel::theta());
        let id = DiffOperator::class(KernelClass::constant(Scalar::one()), Nu::MinusI);
        assert_eq!(id.apply(&g, &ConstantPolicy::Symbolic, &mut alloc).unwrap(), g);
    }

    #[test]
    fn series_operator_examples() {
        let d = DiffOperator::series(PowerSeries::from_ints(&[0, 1]), Nu::Plus);
        let r = apply_series_operator(&d, &PowerSeries::from_ints(&[0, 1, 0, 0])).unwrap();
        assert_eq!(r, PowerSeries::from_ints(&[1, 0, 0, 0]));

        let e = DiffOperator::series(series_known("exp", &[], 8).unwrap(), Nu::Plus);
        let r = apply_series_operator(&e, &PowerSeries::from_ints(&[0, 0, 1])).unwrap();
        assert_eq!(r, PowerSeries::from_ints(&[1, 2, 1]));
    }

    #[test]
    fn geometric_operator_on_sinh_kernel_tends_to_half_pi() {
        let n = 60;
        let target = series_known("exp", &[], n + 1)
            .unwrap()
            .sub(&series_known("exp", &[Scalar::int(-1)], n + 1).unwrap())
            .unwrap()
            .div(&PowerSeries::variable(n + 1))
            .unwrap();
        let op = DiffOperator::series(series_known("geometric", &[], n).unwrap(), Nu::Plus);
        let r = apply_series_operator(&op, &target).unwrap();
        let v = r.coeff(0).re_f64();
        // Leibniz partial sum: error below the first omitted term 2/(n+1).
        assert!((v - std::f64::consts::FRAC_PI_2).abs() < 2.0 / (n as f64 + 1.0));
    }

    #[test]
    fn class_maclaurin_of_sinc_power() {
        // sin⁵(y)/y has a removable singularity; its series starts 0·1 + y⁴.
        let s5 = KernelClass::sin(Scalar::one()).powi(5).mul(&KernelClass::monomial(-1));
        let m = s5.maclaurin(6).unwrap();
        assert!(m.is_exact());
        assert_eq!(m.coeff(0), Scalar::zero());
        assert_eq!(m.coeff(4), Scalar::one());
        let ev = s5.evaluator().unwrap();
        let v = ev.eval(1e-3).re;
        assert!((v - 1e-12).abs() < 1e-18, "{v:e}");
        assert!((ev.eval(2.0).re - 2f64.sin().powi(5) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn real_line_sinc_by_delta() {
        // 2π·sinc(−i∂)δ at ε → 0 is π, via π[Θ(ε+1) − Θ(ε−1)].
        let mut alloc = ConstantAllocator::new();
        let sinc = KernelClass::sin(Scalar::one()).mul(&KernelClass::monomial(-1));
        let op = DiffOperator::class(sinc, Nu::MinusI);
        let k = op.apply(&Kernel::delta(), &ConstantPolicy::Symbolic, &mut alloc).unwrap();
        let v = k.limit(&Scalar::zero(), Side::Both).unwrap();
        assert_eq!(v, Scalar::ratio(1, 2));
    }
}
