//! Kernel expressions: finite linear combinations of atoms closed under
//! shift, derivative, antiderivative, heat flow and resolvent.
//!
//! Every atom is written in the shifted variable `u = ε − s`, so a shift
//! `g(ε) → g(ε + a)` only changes `s` and never Taylor-expands anything.

use crate::error::{Error, Result};
use crate::laplace::poly::{join_terms, signed_term};
use crate::numeric::composite_gl;
use crate::scalar::{Scalar, C64};
use diffint_oracle::special::{ei, erf, principal_ln, si, EULER_GAMMA};
use std::f64::consts::PI;
use std::fmt;

/// Smooth stand-in for the Dirac delta.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Reg {
    /// `e^{−u²/4a}/√(4πa)`, the heat kernel of spread `a`.
    Gaussian { spread: f64 },
    /// `(1/2π)∫_{−L}^{L} e^{−b k²} e^{iku} dk`; `b = 0` is `sin(Lu)/(πu)`.
    Sinc { cutoff: f64, heat: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Atom {
    /// `e^{r u} u^k`, any integer `k`: exponentials, monomials, reciprocals.
    ExpPow { rate: Scalar, power: i32, shift: Scalar },
    /// `u^k ln u`, principal branch.
    LogPow { power: u32, shift: Scalar },
    /// `Ei(r u)`.
    Ei { scale: Scalar, shift: Scalar },
    /// `e^{r u} u^k Θ(u)`; the shift must be real.
    Theta { rate: Scalar, power: u32, shift: Scalar },
    /// `δ^{(j)}(u)`; the shift must be real.
    Delta { order: u32, shift: Scalar },
    /// Regularized `δ^{(n)}(u)` for `n ≥ 0`; `n = −1` is the matching
    /// smoothed step and `n = −2` the smoothed ramp.
    DeltaReg { reg: Reg, order: i32, shift: Scalar },
    /// Symbolic integration constant `c_id · u^k`.
    Constant { id: u32, power: u32, shift: Scalar },
}

impl Atom {
    pub fn shift(&self) -> &Scalar {
        match self {
            Atom::ExpPow { shift, .. }
            | Atom::LogPow { shift, .. }
            | Atom::Ei { shift, .. }
            | Atom::Theta { shift, .. }
            | Atom::Delta { shift, .. }
            | Atom::DeltaReg { shift, .. }
            | Atom::Constant { shift, .. } => shift,
        }
    }

    fn with_shift(&self, s: Scalar) -> Atom {
        let mut a = self.clone();
        match &mut a {
            Atom::ExpPow { shift, .. }
            | Atom::LogPow { shift, .. }
            | Atom::Ei { shift, .. }
            | Atom::Theta { shift, .. }
            | Atom::Delta { shift, .. }
            | Atom::DeltaReg { shift, .. }
            | Atom::Constant { shift, .. } => *shift = s,
        }
        a
    }

    /// Atoms whose value does not depend on the shift get shift 0.
    fn canonical(self) -> Atom {
        match &self {
            Atom::ExpPow { rate, power: 0, .. } if rate.is_zero() => self.with_shift(Scalar::zero()),
            Atom::Constant { power: 0, .. } => self.with_shift(Scalar::zero()),
            _ => self,
        }
    }

    fn is_distributional(&self) -> bool {
        matches!(self, Atom::Theta { .. } | Atom::Delta { .. } | Atom::DeltaReg { reg: Reg::Sinc { .. }, .. })
    }
}

/// How the constant of each antiderivative step is chosen.
#[derive(Clone, Debug, PartialEq)]
pub enum ConstantPolicy {
    Zero,
    /// A fresh symbolic constant; it must cancel before a value is produced.
    Symbolic,
    Prescribed(Scalar),
}

/// Hands out identifiers for symbolic constants.
#[derive(Debug, Default, Clone)]
pub struct ConstantAllocator {
    next: u32,
}

impl ConstantAllocator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self) -> u32 {
        self.next += 1;
        self.next
    }
}

/// Direction of approach in [`Kernel::limit`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
    /// Both one-sided limits, which must agree.
    Both,
}

#[derive(Clone, Debug, Default)]
pub struct Kernel {
    terms: Vec<(Scalar, Atom)>,
}

impl PartialEq for Kernel {
    fn eq(&self, other: &Self) -> bool {
        self.terms.len() == other.terms.len()
            && self.terms.iter().all(|(w, a)| other.terms.iter().any(|(w2, a2)| a == a2 && w == w2))
    }
}

fn exp_pow(rate: Scalar, power: i32, shift: Scalar) -> Atom {
    Atom::ExpPow { rate, power, shift }
}

impl Kernel {
    pub fn zero() -> Self {
        Kernel::default()
    }

    pub fn atom(a: Atom) -> Self {
        let mut k = Kernel::zero();
        k.push(Scalar::one(), a);
        k
    }

    pub fn delta() -> Self {
        Kernel::atom(Atom::Delta { order: 0, shift: Scalar::zero() })
    }

    pub fn theta() -> Self {
        Kernel::atom(Atom::Theta { rate: Scalar::zero(), power: 0, shift: Scalar::zero() })
    }

    /// `1/ε`.
    pub fn recip() -> Self {
        Kernel::atom(exp_pow(Scalar::zero(), -1, Scalar::zero()))
    }

    /// `e^{a ε}`.
    pub fn exp(rate: Scalar) -> Self {
        Kernel::atom(exp_pow(rate, 0, Scalar::zero()))
    }

    /// `e^{a ε}/ε`.
    pub fn exp_over_eps(rate: Scalar) -> Self {
        Kernel::atom(exp_pow(rate, -1, Scalar::zero()))
    }

    pub fn monomial(k: i32) -> Self {
        Kernel::atom(exp_pow(Scalar::zero(), k, Scalar::zero()))
    }

    pub fn log() -> Self {
        Kernel::atom(Atom::LogPow { power: 0, shift: Scalar::zero() })
    }

    pub fn constant(c: Scalar) -> Self {
        let mut k = Kernel::zero();
        k.push(c, exp_pow(Scalar::zero(), 0, Scalar::zero()));
        k
    }

    pub fn delta_reg(reg: Reg) -> Self {
        Kernel::atom(Atom::DeltaReg { reg, order: 0, shift: Scalar::zero() })
    }

    pub fn terms(&self) -> &[(Scalar, Atom)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `w · atom`, merging with a like atom.
    pub fn push(&mut self, w: Scalar, atom: Atom) {
        if w.is_zero() {
            return;
        }
        let atom = atom.canonical();
        if let Some(pos) = self.terms.iter().position(|(_, a)| *a == atom) {
            let sum = &self.terms[pos].0 + &w;
            if sum.is_zero() {
                self.terms.remove(pos);
            } else {
                self.terms[pos].0 = sum;
            }
        } else {
            self.terms.push((w, atom));
        }
    }

    pub fn add(&self, other: &Kernel) -> Kernel {
        let mut out = self.clone();
        for (w, a) in &other.terms {
            out.push(w.clone(), a.clone());
        }
        out
    }

    pub fn sub(&self, other: &Kernel) -> Kernel {
        self.add(&other.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Kernel {
        let mut out = Kernel::zero();
        for (w, a) in &self.terms {
            out.push(w * s, a.clone());
        }
        out
    }

    /// Ids of symbolic constants still present.
    pub fn constant_ids(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = self
            .terms
            .iter()
            .filter_map(|(_, a)| match a {
                Atom::Constant { id, .. } => Some(*id),
                _ => None,
            })
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// `g(ε) → g(ε + a)`, exact on every atom.
    pub fn shift(&self, a: &Scalar) -> Result<Kernel> {
        if a.is_zero() {
            return Ok(self.clone());
        }
        let mut out = Kernel::zero();
        for (w, atom) in &self.terms {
            let s = atom.shift() - a;
            if atom.is_distributional() && !s.is_real() {
                return Err(Error::ClassViolation(format!("distributional atom shifted off the real axis by {a}")));
            }
            out.push(w.clone(), atom.with_shift(s));
        }
        Ok(out)
    }

    pub fn derivative(&self) -> Kernel {
        let mut out = Kernel::zero();
        for (w, atom) in &self.terms {
            for (c, a) in derivative_atom(atom) {
                out.push(w * &c, a);
            }
        }
        out
    }

    /// One antiderivative step; the constant follows `policy`.
    pub fn antiderivative(&self, policy: &ConstantPolicy, alloc: &mut ConstantAllocator) -> Result<Kernel> {
        let mut out = Kernel::zero();
        for (w, atom) in &self.terms {
            for (c, a) in antiderivative_atom(atom)? {
                out.push(w * &c, a);
            }
        }
        match policy {
            ConstantPolicy::Zero => {}
            ConstantPolicy::Symbolic => {
                out.push(Scalar::one(), Atom::Constant { id: alloc.fresh(), power: 0, shift: Scalar::zero() })
            }
            ConstantPolicy::Prescribed(c) => out.push(c.clone(), exp_pow(Scalar::zero(), 0, Scalar::zero())),
        }
        Ok(out)
    }

    /// Heat flow `e^{a ∂²}`. Deltas become Gaussians of spread `a`, and
    /// existing Gaussian spreads add.
    pub fn heat(&self, a: &Scalar) -> Result<Kernel> {
        if a.is_zero() {
            return Ok(self.clone());
        }
        let af = a.to_c64();
        let mut out = Kernel::zero();
        for (w, atom) in &self.terms {
            let reg_spread = |order: i32, shift: &Scalar| -> Result<Atom> {
                if af.im != 0.0 || af.re <= 0.0 {
                    return Err(Error::ClassViolation(format!("heat flow with parameter {a} on a distribution")));
                }
                Ok(Atom::DeltaReg { reg: Reg::Gaussian { spread: af.re }, order, shift: shift.clone() })
            };
            match atom {
                Atom::Delta { order, shift } => out.push(w.clone(), reg_spread(*order as i32, shift)?),
                Atom::Theta { rate, power, shift } if rate.is_zero() && *power <= 1 => {
                    out.push(w.clone(), reg_spread(-1 - *power as i32, shift)?)
                }
                Atom::DeltaReg { reg, order, shift } => {
                    if af.im != 0.0 {
                        return Err(Error::ClassViolation("complex heat parameter".into()));
                    }
                    let reg = match *reg {
                        Reg::Gaussian { spread } => {
                            let s = spread + af.re;
                            if s <= 0.0 {
                                return Err(Error::Nonpositive(format!("Gaussian spread {s}")));
                            }
                            Reg::Gaussian { spread: s }
                        }
                        Reg::Sinc { cutoff, heat } => {
                            let h = heat + af.re;
                            if h < 0.0 {
                                return Err(Error::Nonpositive(format!("sinc heat parameter {h}")));
                            }
                            Reg::Sinc { cutoff, heat: h }
                        }
                    };
                    out.push(w.clone(), Atom::DeltaReg { reg, order: *order, shift: shift.clone() });
                }
                Atom::ExpPow { rate, power: 0, shift } => {
                    let factor = (a * rate * rate).exp();
                    out.push(w * &factor, atom.clone().with_shift(shift.clone()));
                }
                Atom::ExpPow { rate, power, shift } if rate.is_zero() && *power > 0 => {
                    for (c, k) in heat_monomial(a, *power as u32) {
                        out.push(w * &c, exp_pow(Scalar::zero(), k as i32, shift.clone()));
                    }
                }
                Atom::Constant { id, power, shift } => {
                    for (c, k) in heat_monomial(a, *power) {
                        out.push(w * &c, Atom::Constant { id: *id, power: k, shift: shift.clone() });
                    }
                }
                other => {
                    return Err(Error::ClassViolation(format!("heat flow is not closed on {}", AtomDisplay(other))))
                }
            }
        }
        Ok(out)
    }

    /// Resolvent `(∂ − a)^{-1} g = ∫₀^∞ e^{a w} g(ε − w) dw`.
    ///
    /// Pure exponentials need `Re(rate − a) > 0` for the `w`-integral to
    /// converge; `continue_analytically` accepts the continued value anyway.
    pub fn resolvent(&self, a: &Scalar, continue_analytically: bool) -> Result<Kernel> {
        let mut out = Kernel::zero();
        for (w, atom) in &self.terms {
            match atom {
                Atom::Delta { order, shift } => {
                    let mut k = Kernel::atom(Atom::Theta { rate: a.clone(), power: 0, shift: shift.clone() });
                    for _ in 0..*order {
                        k = k.derivative();
                    }
                    out = out.add(&k.scale(w));
                }
                Atom::Theta { rate, power, shift } => {
                    let q = rate - a;
                    if q.is_zero() {
                        out.push(
                            w / &Scalar::int(*power as i64 + 1),
                            Atom::Theta { rate: a.clone(), power: power + 1, shift: shift.clone() },
                        );
                    } else {
                        for (c, m) in exp_poly_integral(&q, *power) {
                            out.push(w * &c, Atom::Theta { rate: rate.clone(), power: m, shift: shift.clone() });
                        }
                        let k = *power;
                        let sign = if k % 2 == 0 { Scalar::one() } else { Scalar::int(-1) };
                        let c = -(sign * Scalar::factorial(k) / q.powi(k as i32 + 1));
                        out.push(w * &c, Atom::Theta { rate: a.clone(), power: 0, shift: shift.clone() });
                    }
                }
                Atom::ExpPow { rate, power, shift } if *power >= 0 => {
                    let q = rate - a;
                    check_resolvent_convergence(&q, continue_analytically)?;
                    for (c, m) in laplace_of_shifted_monomial(&q, *power as u32) {
                        out.push(w * &c, exp_pow(rate.clone(), m as i32, shift.clone()));
                    }
                }
                Atom::Constant { id, power, shift } => {
                    let q = -a.clone();
                    check_resolvent_convergence(&q, continue_analytically)?;
                    for (c, m) in laplace_of_shifted_monomial(&q, *power) {
                        out.push(w * &c, Atom::Constant { id: *id, power: m, shift: shift.clone() });
                    }
                }
                other => return Err(Error::ClassViolation(format!("resolvent not closed on {}", AtomDisplay(other)))),
            }
        }
        Ok(out)
    }

    /// Limit as `ε → point` from the given side. Logarithmic and pole
    /// singularities must cancel between atoms (else `Divergent`), and every
    /// symbolic constant must cancel (else `NonCancellingConstant`).
    pub fn limit(&self, point: &Scalar, side: Side) -> Result<Scalar> {
        match side {
            Side::Both => {
                let plus = self.limit(point, Side::Plus)?;
                let minus = self.limit(point, Side::Minus)?;
                if plus == minus || close(&plus, &minus) {
                    Ok(plus)
                } else {
                    Err(Error::Divergent(format!("one-sided limits differ at {point}: {plus} vs {minus}")))
                }
            }
            _ => {
                let mut acc = LimitAccumulator::default();
                for (w, atom) in &self.terms {
                    acc.add_atom(w, atom, point, side)?;
                }
                acc.finish()
            }
        }
    }

    /// Value at a point where the kernel is continuous.
    pub fn eval(&self, x: &Scalar) -> Result<Scalar> {
        self.limit(x, Side::Both)
    }

    pub fn display_in(&self, var: &str) -> String {
        let parts: Vec<(bool, String)> = self
            .terms
            .iter()
            .map(|(w, a)| {
                let body = AtomDisplay(a).render(var);
                signed_term(w, if body == "1" { "" } else { &body })
            })
            .collect();
        join_terms(&parts)
    }
}

fn close(a: &Scalar, b: &Scalar) -> bool {
    let (x, y) = (a.to_c64(), b.to_c64());
    (x - y).norm() <= 1e-12 * (1.0 + x.norm().max(y.norm()))
}

fn check_resolvent_convergence(q: &Scalar, continue_analytically: bool) -> Result<()> {
    if q.is_zero() || (!continue_analytically && q.re_f64() <= 0.0) {
        return Err(Error::Divergent(format!(
            "resolvent integral diverges (Re of spectral shift {q} is not positive)"
        )));
    }
    Ok(())
}

/// `∫₀^∞ e^{−q w}(u − w)^k dw = Σ_m C(k,m)(−1)^m m!/q^{m+1} u^{k−m}`, as
/// `(coefficient, power)` pairs.
fn laplace_of_shifted_monomial(q: &Scalar, k: u32) -> Vec<(Scalar, u32)> {
    let mut out = Vec::new();
    let mut binom = Scalar::one();
    for m in 0..=k {
        let sign = if m % 2 == 0 { Scalar::one() } else { Scalar::int(-1) };
        out.push((&binom * &sign * Scalar::factorial(m) / q.powi(m as i32 + 1), k - m));
        binom = binom * Scalar::int((k - m) as i64) / Scalar::int(m as i64 + 1);
    }
    out
}

/// `∫ e^{q v} v^k dv = e^{q v} Σ_m (−1)^m k!/(k−m)! v^{k−m}/q^{m+1}` for
/// `q ≠ 0`, as `(coefficient, power)` pairs multiplying `e^{q v}`.
fn exp_poly_integral(q: &Scalar, k: u32) -> Vec<(Scalar, u32)> {
    let mut out = Vec::new();
    let mut falling = Scalar::one();
    for m in 0..=k {
        let sign = if m % 2 == 0 { Scalar::one() } else { Scalar::int(-1) };
        out.push((&sign * &falling / q.powi(m as i32 + 1), k - m));
        falling = falling * Scalar::int((k - m) as i64);
    }
    out
}

/// `e^{a∂²} u^k = Σ_m a^m k!/(m!(k−2m)!) u^{k−2m}`.
fn heat_monomial(a: &Scalar, k: u32) -> Vec<(Scalar, u32)> {
    (0..=k / 2)
        .map(|m| {
            let c = a.powi(m as i32) * Scalar::factorial(k) / (Scalar::factorial(m) * Scalar::factorial(k - 2 * m));
            (c, k - 2 * m)
        })
        .collect()
}

fn derivative_atom(atom: &Atom) -> Vec<(Scalar, Atom)> {
    match atom {
        Atom::ExpPow { rate, power, shift } => {
            let mut v = Vec::new();
            if !rate.is_zero() {
                v.push((rate.clone(), atom.clone()));
            }
            if *power != 0 {
                v.push((Scalar::int(*power as i64), exp_pow(rate.clone(), power - 1, shift.clone())));
            }
            v
        }
        Atom::LogPow { power, shift } => {
            let mut v = vec![(Scalar::one(), exp_pow(Scalar::zero(), *power as i32 - 1, shift.clone()))];
            if *power > 0 {
                v.push((Scalar::int(*power as i64), Atom::LogPow { power: power - 1, shift: shift.clone() }));
            }
            v
        }
        Atom::Ei { scale, shift } => vec![(Scalar::one(), exp_pow(scale.clone(), -1, shift.clone()))],
        Atom::Theta { rate, power, shift } => {
            let mut v = Vec::new();
            if !rate.is_zero() {
                v.push((rate.clone(), atom.clone()));
            }
            if *power > 0 {
                v.push((
                    Scalar::int(*power as i64),
                    Atom::Theta { rate: rate.clone(), power: power - 1, shift: shift.clone() },
                ));
            } else {
                v.push((Scalar::one(), Atom::Delta { order: 0, shift: shift.clone() }));
            }
            v
        }
        Atom::Delta { order, shift } => vec![(Scalar::one(), Atom::Delta { order: order + 1, shift: shift.clone() })],
        Atom::DeltaReg { reg, order, shift } => {
            vec![(Scalar::one(), Atom::DeltaReg { reg: *reg, order: order + 1, shift: shift.clone() })]
        }
        Atom::Constant { id, power, shift } => {
            if *power == 0 {
                vec![]
            } else {
                vec![(Scalar::int(*power as i64), Atom::Constant { id: *id, power: power - 1, shift: shift.clone() })]
            }
        }
    }
}

fn antiderivative_atom(atom: &Atom) -> Result<Vec<(Scalar, Atom)>> {
    Ok(match atom {
        Atom::ExpPow { rate, power, shift } => antiderivative_exp_pow(rate, *power, shift),
        Atom::LogPow { power, shift } => {
            let k1 = Scalar::int(*power as i64 + 1);
            vec![
                (Scalar::one() / &k1, Atom::LogPow { power: power + 1, shift: shift.clone() }),
                (-(Scalar::one() / (&k1 * &k1)), exp_pow(Scalar::zero(), *power as i32 + 1, shift.clone())),
            ]
        }
        Atom::Ei { .. } => return Err(Error::NoAntiderivative(AtomDisplay(atom).render("ε"))),
        Atom::Theta { rate, power, shift } => {
            if rate.is_zero() {
                vec![(
                    Scalar::one() / Scalar::int(*power as i64 + 1),
                    Atom::Theta { rate: rate.clone(), power: power + 1, shift: shift.clone() },
                )]
            } else {
                let mut v: Vec<(Scalar, Atom)> = exp_poly_integral(rate, *power)
                    .into_iter()
                    .map(|(c, m)| (c, Atom::Theta { rate: rate.clone(), power: m, shift: shift.clone() }))
                    .collect();
                let k = *power;
                let sign = if k % 2 == 0 { Scalar::one() } else { Scalar::int(-1) };
                v.push((
                    -(sign * Scalar::factorial(k) / rate.powi(k as i32 + 1)),
                    Atom::Theta { rate: Scalar::zero(), power: 0, shift: shift.clone() },
                ));
                v
            }
        }
        Atom::Delta { order, shift } => {
            if *order == 0 {
                vec![(Scalar::one(), Atom::Theta { rate: Scalar::zero(), power: 0, shift: shift.clone() })]
            } else {
                vec![(Scalar::one(), Atom::Delta { order: order - 1, shift: shift.clone() })]
            }
        }
        Atom::DeltaReg { reg, order, shift } => {
            if *order <= -2 {
                return Err(Error::NoAntiderivative(AtomDisplay(atom).render("ε")));
            }
            vec![(Scalar::one(), Atom::DeltaReg { reg: *reg, order: order - 1, shift: shift.clone() })]
        }
        Atom::Constant { id, power, shift } => vec![(
            Scalar::one() / Scalar::int(*power as i64 + 1),
            Atom::Constant { id: *id, power: power + 1, shift: shift.clone() },
        )],
    })
}

fn antiderivative_exp_pow(rate: &Scalar, k: i32, shift: &Scalar) -> Vec<(Scalar, Atom)> {
    if rate.is_zero() {
        return if k == -1 {
            vec![(Scalar::one(), Atom::LogPow { power: 0, shift: shift.clone() })]
        } else {
            vec![(Scalar::one() / Scalar::int(k as i64 + 1), exp_pow(Scalar::zero(), k + 1, shift.clone()))]
        };
    }
    if k >= 0 {
        return exp_poly_integral(rate, k as u32)
            .into_iter()
            .map(|(c, m)| (c, exp_pow(rate.clone(), m as i32, shift.clone())))
            .collect();
    }
    if k == -1 {
        return vec![(Scalar::one(), Atom::Ei { scale: rate.clone(), shift: shift.clone() })];
    }
    // ∫e^{ru}u^k = e^{ru}u^{k+1}/(k+1) − r/(k+1) ∫e^{ru}u^{k+1}
    let k1 = Scalar::int(k as i64 + 1);
    let mut v = vec![(Scalar::one() / &k1, exp_pow(rate.clone(), k + 1, shift.clone()))];
    for (c, a) in antiderivative_exp_pow(rate, k + 1, shift) {
        v.push((-(rate / &k1) * c, a));
    }
    v
}

/// Collects finite parts, logarithmic and pole coefficients, and symbolic
/// constants while taking a one-sided limit.
#[derive(Default)]
struct LimitAccumulator {
    finite: Option<Scalar>,
    scale: f64,
    log: Option<Scalar>,
    log_scale: f64,
    poles: Vec<(i32, Scalar, f64)>,
    constants: Vec<(u32, Scalar)>,
}

fn accumulate(slot: &mut Option<Scalar>, v: Scalar) {
    *slot = Some(match slot.take() {
        Some(s) => s + v,
        None => v,
    });
}

fn negligible(s: &Scalar, scale: f64) -> bool {
    match s {
        Scalar::Exact(_) => s.is_zero(),
        Scalar::Float(z) => z.norm() <= 1e-10 * scale.max(1e-300),
    }
}

impl LimitAccumulator {
    fn finite(&mut self, v: Scalar) {
        self.scale += v.norm();
        accumulate(&mut self.finite, v);
    }

    fn pole(&mut self, order: i32, v: Scalar) {
        let mag = v.norm();
        if let Some(p) = self.poles.iter_mut().find(|p| p.0 == order) {
            p.1 = &p.1 + &v;
            p.2 += mag;
        } else {
            self.poles.push((order, v, mag));
        }
    }

    fn log(&mut self, v: Scalar) {
        self.log_scale += v.norm();
        accumulate(&mut self.log, v);
    }

    fn add_atom(&mut self, w: &Scalar, atom: &Atom, point: &Scalar, side: Side) -> Result<()> {
        let u0 = point - atom.shift();
        let at_singularity = u0.is_zero();
        match atom {
            Atom::ExpPow { rate, power, .. } => {
                if !at_singularity {
                    self.finite(w * (rate * &u0).exp() * u0.powi(*power));
                } else if *power >= 0 {
                    if *power == 0 {
                        self.finite(w.clone());
                    }
                } else {
                    // e^{ru}u^k = Σ_m r^m/m! u^{m+k}
                    let k = -*power;
                    for m in 0..=k {
                        let c = w * rate.powi(m) / Scalar::factorial(m as u32);
                        if m == k {
                            self.finite(c);
                        } else {
                            self.pole(k - m, c);
                        }
                    }
                }
            }
            Atom::LogPow { power, .. } => {
                if !at_singularity {
                    let ln =
                        if u0 == Scalar::one() { Scalar::zero() } else { Scalar::float(principal_ln(u0.to_c64())) };
                    self.finite(w * ln * u0.powi(*power as i32));
                } else if *power == 0 {
                    self.log(w.clone());
                    if side == Side::Minus {
                        self.finite(w * Scalar::float(C64::new(0.0, PI)));
                    }
                }
            }
            Atom::Ei { scale, .. } => {
                if !at_singularity {
                    self.finite(w * Scalar::float(ei((scale * &u0).to_c64())));
                } else {
                    self.log(w.clone());
                    let r = scale.to_c64();
                    let ln = if scale.is_real() {
                        r.re.abs().ln().into()
                    } else if side == Side::Plus {
                        principal_ln(r)
                    } else {
                        principal_ln(-r)
                    };
                    self.finite(w * Scalar::float(C64::new(EULER_GAMMA, 0.0) + ln));
                }
            }
            Atom::Theta { rate, power, .. } => {
                let Some(sign) = u0.real_sign() else {
                    return Err(Error::ClassViolation("step evaluated off the real axis".into()));
                };
                let on = match sign {
                    std::cmp::Ordering::Greater => true,
                    std::cmp::Ordering::Less => false,
                    std::cmp::Ordering::Equal => side == Side::Plus,
                };
                if on {
                    self.finite(w * (rate * &u0).exp() * u0.powi(*power as i32));
                }
            }
            Atom::Delta { .. } => {
                if at_singularity {
                    return Err(Error::Divergent("delta evaluated on its support".into()));
                }
            }
            Atom::DeltaReg { reg, order, .. } => {
                self.finite(w * Scalar::float(reg_value(reg, *order, u0.to_c64())?));
            }
            Atom::Constant { id, power, .. } => {
                let v = w * u0.powi(*power as i32);
                if let Some(c) = self.constants.iter_mut().find(|c| c.0 == *id) {
                    c.1 = &c.1 + &v;
                } else {
                    self.constants.push((*id, v));
                }
            }
        }
        Ok(())
    }

    fn finish(self) -> Result<Scalar> {
        if let Some(l) = &self.log {
            if !negligible(l, self.log_scale) {
                return Err(Error::Divergent(format!("logarithmic singularity with coefficient {l}")));
            }
        }
        for (order, c, mag) in &self.poles {
            if !negligible(c, *mag) {
                return Err(Error::Divergent(format!("pole of order {order} with coefficient {c}")));
            }
        }
        if self.constants.iter().any(|(_, c)| !c.is_zero()) {
            return Err(Error::NonCancellingConstant);
        }
        Ok(self.finite.unwrap_or_else(Scalar::zero))
    }
}

/// Value of a regularized delta derivative (`order ≥ 0`), step (`−1`) or
/// ramp (`−2`) at `u`.
pub fn reg_value(reg: &Reg, order: i32, u: C64) -> Result<C64> {
    match *reg {
        Reg::Gaussian { spread: a } => {
            let sa = a.sqrt();
            let z = u / (2.0 * sa);
            let g = (-z * z).exp() / (4.0 * PI * a).sqrt();
            match order {
                n if n >= 0 => {
                    let mut h0 = C64::new(1.0, 0.0);
                    let mut h1 = 2.0 * z;
                    if n == 0 {
                        return Ok(g);
                    }
                    for m in 1..n {
                        let h2 = 2.0 * z * h1 - 2.0 * m as f64 * h0;
                        h0 = h1;
                        h1 = h2;
                    }
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    Ok(g * h1 * sign / (2.0 * sa).powi(n))
                }
                -1 | -2 => {
                    if u.im != 0.0 {
                        return Err(Error::ClassViolation("regularized step off the real axis".into()));
                    }
                    let theta = 0.5 * (1.0 + erf(z.re));
                    if order == -1 {
                        Ok(C64::new(theta, 0.0))
                    } else {
                        Ok(C64::new(u.re * theta, 0.0) + 2.0 * a * g)
                    }
                }
                _ => Err(Error::ClassViolation(format!("regularized delta of order {order}"))),
            }
        }
        Reg::Sinc { cutoff: l, heat: b } => {
            if u.im != 0.0 {
                return Err(Error::ClassViolation("sinc-regularized delta off the real axis".into()));
            }
            let u = u.re;
            // Gaussian damping makes the tail beyond √(40/b) invisible.
            let top = if b > 0.0 { l.min((40.0 / b).sqrt()) } else { l };
            let panels = (4.0 + top * u.abs() / PI + order.max(0) as f64).ceil().min(40_000.0) as usize;
            let damp = |k: f64| (-b * k * k).exp();
            let v = match order {
                0 if b == 0.0 => {
                    if u == 0.0 {
                        l / PI
                    } else {
                        (l * u).sin() / (PI * u)
                    }
                }
                n if n >= 0 => {
                    let sign = if (n / 2 + n % 2) % 2 == 0 { 1.0 } else { -1.0 };
                    let odd = n % 2 == 1;
                    sign / PI
                        * composite_gl(
                            |k| {
                                let osc = if odd { (k * u).sin() } else { (k * u).cos() };
                                k.powi(n) * damp(k) * osc
                            },
                            0.0,
                            top,
                            panels,
                        )
                }
                -1 if b == 0.0 => 0.5 + si(l * u) / PI,
                -1 => 0.5 + composite_gl(|k| damp(k) * (k * u).sin() / k, 0.0, top, panels) / PI,
                -2 if b == 0.0 => u / 2.0 + (u * si(l * u) + ((l * u).cos() - 1.0) / l) / PI,
                -2 => {
                    let tail = if top < l {
                        // Undamped remainder of ∫ 1/k² over [top, L].
                        1.0 / top - 1.0 / l
                    } else {
                        0.0
                    };
                    u / 2.0
                        + (composite_gl(
                            |k| {
                                let s = (0.5 * k * u).sin();
                                (-(-b * k * k).exp_m1() * (k * u).cos() + 2.0 * s * s) / (k * k)
                            },
                            0.0,
                            top,
                            panels,
                        ) + tail)
                            / PI
                }
                _ => return Err(Error::ClassViolation(format!("regularized delta of order {order}"))),
            };
            Ok(C64::new(v, 0.0))
        }
    }
}

struct AtomDisplay<'a>(&'a Atom);

fn arg(var: &str, shift: &Scalar) -> String {
    if shift.is_zero() {
        return var.to_string();
    }
    match shift.real_sign() {
        Some(std::cmp::Ordering::Less) => format!("{var}+{}", -shift.clone()),
        _ => format!("{var}-{shift}"),
    }
}

fn with_power(base: &str, var_arg: &str, k: i32) -> String {
    let p = match k {
        0 => return base.to_string(),
        1 => format!("({var_arg})"),
        -1 => return format!("{base}/({var_arg})"),
        k if k < 0 => return format!("{base}/({var_arg})^{}", -k),
        k => format!("({var_arg})^{k}"),
    };
    if base == "1" {
        p
    } else {
        format!("{base}*{p}")
    }
}

impl AtomDisplay<'_> {
    fn render(&self, var: &str) -> String {
        match self.0 {
            Atom::ExpPow { rate, power, shift } => {
                let a = arg(var, shift);
                let base = if rate.is_zero() { "1".to_string() } else { format!("exp({rate}*({a}))") };
                with_power(&base, &a, *power)
            }
            Atom::LogPow { power, shift } => {
                let a = arg(var, shift);
                with_power(&format!("ln({a})"), &a, *power as i32)
            }
            Atom::Ei { scale, shift } => format!("Ei({scale}*({}))", arg(var, shift)),
            Atom::Theta { rate, power, shift } => {
                let a = arg(var, shift);
                let base = if rate.is_zero() { format!("Θ({a})") } else { format!("exp({rate}*({a}))*Θ({a})") };
                with_power(&base, &a, *power as i32)
            }
            Atom::Delta { order, shift } => {
                let a = arg(var, shift);
                if *order == 0 {
                    format!("δ({a})")
                } else {
                    format!("δ^({order})({a})")
                }
            }
            Atom::DeltaReg { reg, order, shift } => {
                let a = arg(var, shift);
                let tag = match reg {
                    Reg::Gaussian { spread } => format!("gauss[{spread}]"),
                    Reg::Sinc { cutoff, heat } if *heat == 0.0 => format!("sinc[{cutoff}]"),
                    Reg::Sinc { cutoff, heat } => format!("sinc[{cutoff},{heat}]"),
                };
                match order {
                    -1 => format!("Θ_{tag}({a})"),
                    -2 => format!("ramp_{tag}({a})"),
                    0 => format!("δ_{tag}({a})"),
                    n => format!("δ_{tag}^({n})({a})"),
                }
            }
            Atom::Constant { id, power, shift } => {
                let a = arg(var, shift);
                with_power(&format!("c{id}"), &a, *power as i32)
            }
        }
    }
}

impl fmt::Display for AtomDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("ε"))
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("ε"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(s: &Scalar) -> f64 {
        s.re_f64()
    }

    #[test]
    fn shift_examples() {
        let t = Kernel::theta().shift(&Scalar::one()).unwrap();
        assert_eq!(t, Kernel::atom(Atom::Theta { rate: Scalar::zero(), power: 0, shift: Scalar::int(-1) }));
        let l = Kernel::log().shift(&-Scalar::i()).unwrap();
        assert_eq!(l, Kernel::atom(Atom::LogPow { power: 0, shift: Scalar::i() }));
        assert_eq!(l.to_string(), "ln(ε-1i)");
        let g = Kernel::recip().add(&Kernel::exp(Scalar::int(2)));
        assert_eq!(g.shift(&Scalar::zero()).unwrap(), g);
        assert!(Kernel::theta().shift(&Scalar::i()).is_err());
    }

    #[test]
    fn shift_group_law() {
        let g = Kernel::recip().add(&Kernel::log()).add(&Kernel::theta()).add(&Kernel::exp(Scalar::int(3)));
        let a = Scalar::ratio(1, 3);
        let b = Scalar::ratio(-5, 2);
        let lhs = g.shift(&b).unwrap().shift(&a).unwrap();
        let rhs = g.shift(&(&a + &b)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn antiderivative_examples() {
        let mut alloc = ConstantAllocator::new();
        let r = Kernel::recip().antiderivative(&ConstantPolicy::Symbolic, &mut alloc).unwrap();
        assert_eq!(r.to_string(), "ln(ε) + c1");
        let d = Kernel::delta().antiderivative(&ConstantPolicy::Symbolic, &mut alloc).unwrap();
        assert_eq!(d.to_string(), "Θ(ε) + c2");
        let e = Kernel::exp(Scalar::int(2)).antiderivative(&ConstantPolicy::Zero, &mut alloc).unwrap();
        assert_eq!(e, Kernel::exp(Scalar::int(2)).scale(&Scalar::ratio(1, 2)));
    }

    #[test]
    fn derivative_inverts_antiderivative() {
        let mut alloc = ConstantAllocator::new();
        let cases = vec![
            Kernel::recip(),
            Kernel::exp_over_eps(Scalar::int(2)),
            Kernel::atom(exp_pow(Scalar::int(3), -3, Scalar::one())),
            Kernel::atom(exp_pow(Scalar::i(), 2, Scalar::zero())),
            Kernel::log(),
            Kernel::atom(Atom::LogPow { power: 2, shift: Scalar::int(-1) }),
            Kernel::delta(),
            Kernel::theta(),
            Kernel::atom(Atom::Theta { rate: Scalar::int(-2), power: 2, shift: Scalar::zero() }),
        ];
        for g in cases {
            let back = g.antiderivative(&ConstantPolicy::Zero, &mut alloc).unwrap().derivative();
            // Compare numerically at a few points, away from singular supports.
            for x in [0.3, 1.7, -0.4] {
                let p = Scalar::from_f64(x);
                match (back.eval(&p), g.eval(&p)) {
                    (Ok(a), Ok(b)) => assert!((a.to_c64() - b.to_c64()).norm() < 1e-12, "{g}: {a} vs {b}"),
                    (a, b) => assert_eq!(a.is_ok(), b.is_ok(), "{g}"),
                }
            }
        }
    }

    #[test]
    fn half_line_sinc_limit() {
        // −(1/2i)[ln(ε−i) − ln(ε+i)] at ε → 0⁺ is π/2.
        let mut alloc = ConstantAllocator::new();
        let l = Kernel::recip().antiderivative(&ConstantPolicy::Symbolic, &mut alloc).unwrap();
        let k = l.shift(&-Scalar::i()).unwrap().sub(&l.shift(&Scalar::i()).unwrap());
        let k = k.scale(&(Scalar::int(-1) / (Scalar::int(2) * Scalar::i())));
        let v = k.limit(&Scalar::zero(), Side::Plus).unwrap();
        assert!((v.to_c64() - C64::new(PI / 2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn uncancelled_constant_is_reported() {
        let mut alloc = ConstantAllocator::new();
        let g = Kernel::exp_over_eps(Scalar::one()).sub(&Kernel::exp_over_eps(Scalar::int(-1)));
        let a = g.antiderivative(&ConstantPolicy::Symbolic, &mut alloc).unwrap();
        assert_eq!(a.limit(&Scalar::zero(), Side::Plus), Err(Error::NonCancellingConstant));
        let p = g.antiderivative(&ConstantPolicy::Prescribed(Scalar::int(3)), &mut alloc).unwrap();
        let v = p.limit(&Scalar::zero(), Side::Both).unwrap();
        assert!((num(&v) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn exact_pole_cancellation() {
        // (e^{bε} − e^{aε})/ε at 0 is b − a, exactly.
        let g = Kernel::exp_over_eps(Scalar::ratio(3, 2)).sub(&Kernel::exp_over_eps(Scalar::int(-1)));
        assert_eq!(g.limit(&Scalar::zero(), Side::Both).unwrap(), Scalar::ratio(5, 2));
        assert!(matches!(Kernel::recip().limit(&Scalar::zero(), Side::Plus), Err(Error::Divergent(_))));
    }

    #[test]
    fn resolvent_examples() {
        let r = Kernel::delta().resolvent(&Scalar::int(2), false).unwrap();
        assert_eq!(r, Kernel::atom(Atom::Theta { rate: Scalar::int(2), power: 0, shift: Scalar::zero() }));
        assert_eq!(Kernel::delta().resolvent(&Scalar::zero(), false).unwrap(), Kernel::theta());
        let g = Kernel::atom(Atom::Theta { rate: Scalar::int(-2), power: 0, shift: Scalar::zero() });
        let r = g.resolvent(&Scalar::int(-1), false).unwrap();
        let v = r.eval(&Scalar::one()).unwrap();
        assert!((num(&v) - 0.2325441579).abs() < 1e-10);
        assert!(Kernel::exp(Scalar::one()).resolvent(&Scalar::int(2), false).is_err());
        assert!(Kernel::exp(Scalar::one()).resolvent(&Scalar::int(2), true).is_ok());
    }

    #[test]
    fn heat_semigroup_on_delta() {
        let one = Kernel::delta().heat(&Scalar::one()).unwrap();
        let v = one.eval(&Scalar::one()).unwrap();
        assert!((num(&v) - (-0.25_f64).exp() / (4.0 * PI).sqrt()).abs() < 1e-15);
        let two_step = one.heat(&Scalar::int(2)).unwrap();
        let direct = Kernel::delta().heat(&Scalar::int(3)).unwrap();
        assert_eq!(two_step, direct);
    }

    #[test]
    fn regularized_atoms_are_consistent() {
        // Step and ramp are antiderivatives of the regularized delta.
        for reg in
            [Reg::Gaussian { spread: 0.3 }, Reg::Sinc { cutoff: 7.0, heat: 0.0 }, Reg::Sinc { cutoff: 7.0, heat: 0.2 }]
        {
            let h = 1e-5;
            for order in [-2, -1, 0] {
                let u = C64::new(0.7, 0.0);
                let up = reg_value(&reg, order, u + h).unwrap();
                let dn = reg_value(&reg, order, u - h).unwrap();
                let d = reg_value(&reg, order + 1, u).unwrap();
                assert!(((up - dn) / (2.0 * h) - d).norm() < 1e-6, "{reg:?} {order}");
            }
        }
    }
}
