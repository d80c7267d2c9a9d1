//! Lowering parsed expressions into the engines' integrand types.
//!
//! * series mode: a truncated Taylor series about a chosen center, built
//!   compositionally;
//! * kernel mode: a sum `Σ w x^j e^{ρx} e^{−βx²}`, with sines and cosines
//!   rewritten as complex exponentials;
//! * rational mode: a quotient of polynomials;
//! * exponential-polynomial mode: kernel terms with `j ≥ 0` and no Gaussian
//!   factor, the class the Laplace transform maps to rational functions.

use crate::expr::{literal_value, BinOp, Expr, Func, CONSTANTS};
use crate::CliError;
use diffint::laplace::{ExpPoly, ExpTerm, Poly, RationalFunction};
use diffint::opcalc::{ClassTerm, KernelClass};
use diffint::{series_known, PowerSeries, Scalar, C64};
use num_traits::{ToPrimitive, Zero};

fn unsupported(what: impl Into<String>) -> CliError {
    CliError::Unsupported(what.into())
}

/// The value of a variable-free expression, exact when only rational
/// arithmetic and integer powers are involved.
pub fn constant_value(e: &Expr, var: &str) -> Result<Option<Scalar>, CliError> {
    if e.mentions(var) {
        return Ok(None);
    }
    fold_constant(e).map(Some)
}

fn fold_constant(e: &Expr) -> Result<Scalar, CliError> {
    Ok(match e {
        Expr::Num(s) => Scalar::rational(literal_value(s).ok_or_else(|| unsupported(format!("bad literal {s}")))?),
        Expr::Ident(n) => match CONSTANTS.iter().find(|(c, _)| c == n) {
            Some((_, v)) => Scalar::float(C64::new(*v, 0.0)),
            None => return Err(unsupported(format!("unbound identifier `{n}`; pass it with --param {n}=value"))),
        },
        Expr::Neg(a) => -fold_constant(a)?,
        Expr::Bin(op, a, b) => {
            let (u, v) = (fold_constant(a)?, fold_constant(b)?);
            match op {
                BinOp::Add => u + v,
                BinOp::Sub => u - v,
                BinOp::Mul => u * v,
                BinOp::Div => {
                    if v.is_zero() {
                        return Err(unsupported(format!("division by zero in `{e}`")));
                    }
                    u / v
                }
                BinOp::Pow => match integer_of(&v) {
                    Some(k) if !(u.is_zero() && k < 0) => u.powi(k),
                    _ => Scalar::float(u.to_c64().powc(v.to_c64())),
                },
            }
        }
        Expr::Call(f, a) => {
            let u = fold_constant(a)?;
            if u.is_zero() {
                match f {
                    Func::Sin => return Ok(Scalar::zero()),
                    Func::Cos | Func::Exp | Func::Sinc => return Ok(Scalar::one()),
                    Func::Sqrt | Func::Abs => return Ok(Scalar::zero()),
                    Func::Log => return Err(unsupported("log(0)")),
                }
            }
            if *f == Func::Log && u == Scalar::one() {
                return Ok(Scalar::zero());
            }
            if *f == Func::Abs && u.is_exact() {
                return Ok(match u.real_sign() {
                    Some(std::cmp::Ordering::Less) => -u,
                    Some(_) => u,
                    None => Scalar::float(C64::new(u.norm(), 0.0)),
                });
            }
            let z = u.to_c64();
            Scalar::float(match f {
                Func::Sin => z.sin(),
                Func::Cos => z.cos(),
                Func::Exp => z.exp(),
                Func::Sinc => z.sin() / z,
                Func::Log => z.ln(),
                Func::Sqrt => z.sqrt(),
                Func::Abs => C64::new(z.norm(), 0.0),
            })
        }
    })
}

/// `Some(k)` when `s` is an exact integer of moderate size.
fn integer_of(s: &Scalar) -> Option<i32> {
    let e = s.as_exact()?;
    if !e.im.is_zero() || !e.re.is_integer() {
        return None;
    }
    e.re.to_integer().to_i32().filter(|k| k.abs() <= 4096)
}

// ---------------------------------------------------------------------------
// series mode

/// Taylor series of `e` in `var` about `center`, to `order`.
pub fn to_series(e: &Expr, var: &str, center: &Scalar, order: usize) -> Result<PowerSeries, CliError> {
    SeriesLowering { var, center, order }.lower(e)
}

struct SeriesLowering<'a> {
    var: &'a str,
    center: &'a Scalar,
    order: usize,
}

impl SeriesLowering<'_> {
    fn constant(&self, c: Scalar) -> PowerSeries {
        PowerSeries::constant(c, self.order).with_center(self.center.clone())
    }

    /// Series of `outer` (about 0) composed with `inner − inner(center)`.
    fn compose(&self, outer: PowerSeries, inner: &PowerSeries) -> Result<PowerSeries, CliError> {
        let shifted = inner.sub(&self.constant(inner.coeff(0)))?;
        Ok(outer.compose(&shifted)?)
    }

    fn lower(&self, e: &Expr) -> Result<PowerSeries, CliError> {
        if let Some(c) = constant_value(e, self.var)? {
            return Ok(self.constant(c));
        }
        let n = self.order;
        match e {
            Expr::Num(_) => unreachable!("constants are folded"),
            Expr::Ident(_) => {
                // x = center + t
                Ok(PowerSeries::variable(n)
                    .with_center(self.center.clone())
                    .add(&self.constant(self.center.clone()))?)
            }
            Expr::Neg(a) => Ok(self.lower(a)?.scale(&Scalar::int(-1))),
            Expr::Bin(op, a, b) => {
                if *op == BinOp::Pow {
                    return self.power(a, b);
                }
                let (u, v) = (self.lower(a)?, self.lower(b)?);
                Ok(match op {
                    BinOp::Add => u.add(&v)?,
                    BinOp::Sub => u.sub(&v)?,
                    BinOp::Mul => u.mul(&v)?,
                    BinOp::Div => u.div(&v).map_err(|_| {
                        unsupported(format!(
                            "`{e}` has no Taylor series at {}: the denominator vanishes there",
                            self.center
                        ))
                    })?,
                    BinOp::Pow => unreachable!(),
                })
            }
            Expr::Call(f, a) => self.call(*f, a, e),
        }
    }

    fn power(&self, a: &Expr, b: &Expr) -> Result<PowerSeries, CliError> {
        let u = self.lower(a)?;
        match constant_value(b, self.var)? {
            Some(k) => match integer_of(&k) {
                Some(k) if k >= 0 => Ok(u.powi(k as u32)?),
                Some(k) => {
                    let r = u.reciprocal().map_err(|_| {
                        unsupported(format!("`{a}` vanishes at {}, so `({a})^{k}` has no Taylor series", self.center))
                    })?;
                    Ok(r.powi((-k) as u32)?)
                }
                None => self.binomial(&u, &k, a),
            },
            // u^v = exp(v log u)
            None => {
                let log = self.log(&u, a)?;
                let exponent = self.lower(b)?.mul(&log)?;
                self.exp(&exponent)
            }
        }
    }

    /// `(c + h)^p = c^p (1 + h/c)^p` with binomial coefficients.
    fn binomial(&self, u: &PowerSeries, p: &Scalar, what: &Expr) -> Result<PowerSeries, CliError> {
        let c = u.coeff(0);
        if c.is_zero() {
            return Err(unsupported(format!(
                "`{what}` vanishes at {}; a fractional power has no Taylor series there",
                self.center
            )));
        }
        let mut coeffs = vec![Scalar::one()];
        for k in 1..=self.order {
            let prev = coeffs[k - 1].clone();
            coeffs.push(prev * (p - &Scalar::int(k as i64 - 1)) / Scalar::int(k as i64));
        }
        let outer = PowerSeries::from_scalars(coeffs);
        let lead = if p == &Scalar::ratio(1, 2) && c == Scalar::one() {
            Scalar::one()
        } else {
            Scalar::float(c.to_c64().powc(p.to_c64()))
        };
        let unit = u.scale(&(Scalar::one() / c));
        Ok(self.compose(outer, &unit)?.scale(&lead))
    }

    fn exp(&self, u: &PowerSeries) -> Result<PowerSeries, CliError> {
        let outer = series_known("exp", &[], self.order)?;
        Ok(self.compose(outer, u)?.scale(&u.coeff(0).exp()))
    }

    /// `log(c + h) = log c + log(1 + h/c)`.
    fn log(&self, u: &PowerSeries, what: &Expr) -> Result<PowerSeries, CliError> {
        let c = u.coeff(0);
        if c.is_zero() {
            return Err(unsupported(format!("log({what}) is singular at {}", self.center)));
        }
        let mut coeffs = vec![Scalar::zero()];
        for k in 1..=self.order {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            coeffs.push(Scalar::ratio(sign, k as i64));
        }
        let outer = PowerSeries::from_scalars(coeffs);
        let unit = u.scale(&(Scalar::one() / c.clone()));
        let head = if c == Scalar::one() { Scalar::zero() } else { Scalar::float(c.to_c64().ln()) };
        Ok(self.compose(outer, &unit)?.add(&self.constant(head))?)
    }

    fn call(&self, f: Func, a: &Expr, whole: &Expr) -> Result<PowerSeries, CliError> {
        let u = self.lower(a)?;
        let c = u.coeff(0);
        let n = self.order;
        match f {
            Func::Exp => self.exp(&u),
            Func::Sin | Func::Cos => {
                let s = self.compose(series_known("sin", &[], n)?, &u)?;
                let k = self.compose(series_known("cos", &[], n)?, &u)?;
                if c.is_zero() {
                    return Ok(if f == Func::Sin { s } else { k });
                }
                let (sc, cc) = (trig_const(&c, Func::Sin), trig_const(&c, Func::Cos));
                Ok(if f == Func::Sin {
                    // sin(c + h) = sin c cos h + cos c sin h
                    k.scale(&sc).add(&s.scale(&cc))?
                } else {
                    k.scale(&cc).sub(&s.scale(&sc))?
                })
            }
            Func::Sinc => {
                if c.is_zero() {
                    self.compose(series_known("sinc", &[], n)?, &u)
                } else {
                    Ok(self.call(Func::Sin, a, whole)?.div(&u)?)
                }
            }
            Func::Log => self.log(&u, a),
            Func::Sqrt => self.binomial(&u, &Scalar::ratio(1, 2), a),
            Func::Abs => match c.real_sign() {
                Some(std::cmp::Ordering::Greater) if u.scalars().iter().all(Scalar::is_real) => Ok(u),
                Some(std::cmp::Ordering::Less) if u.scalars().iter().all(Scalar::is_real) => {
                    Ok(u.scale(&Scalar::int(-1)))
                }
                _ => Err(unsupported(format!("`{whole}` is not analytic at {}", self.center))),
            },
        }
    }
}

fn trig_const(c: &Scalar, f: Func) -> Scalar {
    let z = c.to_c64();
    Scalar::float(if f == Func::Sin { z.sin() } else { z.cos() })
}

// ---------------------------------------------------------------------------
// kernel mode

/// `Σ w x^j e^{ρx} e^{−βx²}` form of `e`.
pub fn to_class(e: &Expr, var: &str) -> Result<KernelClass, CliError> {
    if let Some(c) = constant_value(e, var)? {
        return Ok(KernelClass::constant(c));
    }
    match e {
        Expr::Num(_) => unreachable!("constants are folded"),
        Expr::Ident(_) => Ok(KernelClass::monomial(1)),
        Expr::Neg(a) => Ok(to_class(a, var)?.scale(&Scalar::int(-1))),
        Expr::Bin(op, a, b) => match op {
            BinOp::Add => Ok(to_class(a, var)?.add(&to_class(b, var)?)),
            BinOp::Sub => Ok(to_class(a, var)?.sub(&to_class(b, var)?)),
            BinOp::Mul => Ok(to_class(a, var)?.mul(&to_class(b, var)?)),
            BinOp::Div => {
                let den = to_class(b, var)?;
                let inv = invert_single_term(&den).ok_or_else(|| {
                    unsupported(format!(
                        "`{e}`: only divisions by a single term w·x^j·e^(ρx)·e^(−βx²) stay in the kernel class; \
                         try the series or split route"
                    ))
                })?;
                Ok(to_class(a, var)?.mul(&inv))
            }
            BinOp::Pow => {
                let k = constant_value(b, var)?
                    .and_then(|k| integer_of(&k))
                    .ok_or_else(|| unsupported(format!("`{e}`: kernel mode needs a constant integer exponent")))?;
                let base = to_class(a, var)?;
                if k >= 0 {
                    Ok(base.powi(k as u32))
                } else {
                    let inv = invert_single_term(&base)
                        .ok_or_else(|| unsupported(format!("`{e}`: negative powers need a single-term base")))?;
                    Ok(inv.powi((-k) as u32))
                }
            }
        },
        Expr::Call(f, a) => {
            let arg = to_class(a, var)?;
            match f {
                Func::Exp => {
                    let [c0, c1, c2] = quadratic(&arg).ok_or_else(|| {
                        unsupported(format!("`{e}`: the exponent must be a polynomial of degree at most 2"))
                    })?;
                    Ok(KernelClass::term(c0.exp(), 0, c1, -c2))
                }
                Func::Sin | Func::Cos | Func::Sinc => {
                    let [c0, c1, _] = quadratic(&arg)
                        .filter(|q| q[2].is_zero())
                        .ok_or_else(|| unsupported(format!("`{e}`: the argument must be linear in {var}")))?;
                    let i = Scalar::i();
                    let plus = (&i * &c0).exp();
                    let minus = (-(&i * &c0)).exp();
                    let (wp, wm) = if *f == Func::Cos {
                        (plus * Scalar::ratio(1, 2), minus * Scalar::ratio(1, 2))
                    } else {
                        let half_i = Scalar::one() / (Scalar::int(2) * &i);
                        (plus * &half_i, -(minus * half_i))
                    };
                    let s = KernelClass::term(wp, 0, &i * &c1, Scalar::zero()).add(&KernelClass::term(
                        wm,
                        0,
                        -(&i * &c1),
                        Scalar::zero(),
                    ));
                    if *f != Func::Sinc {
                        return Ok(s);
                    }
                    if !c0.is_zero() {
                        return Err(unsupported(format!("`{e}`: sinc needs an argument of the form a·{var}")));
                    }
                    Ok(s.mul(&KernelClass::monomial(-1)).scale(&(Scalar::one() / c1)))
                }
                Func::Log | Func::Sqrt | Func::Abs => Err(unsupported(format!(
                    "`{e}`: {} of a non-constant argument is outside the kernel class",
                    f.name()
                ))),
            }
        }
    }
}

/// `[c0, c1, c2]` when the class is `c0 + c1 x + c2 x²`.
fn quadratic(k: &KernelClass) -> Option<[Scalar; 3]> {
    let mut c = [Scalar::zero(), Scalar::zero(), Scalar::zero()];
    for t in k.terms() {
        if !t.rate.is_zero() || !t.gauss.is_zero() || !(0..=2).contains(&t.power) {
            return None;
        }
        c[t.power as usize] = &c[t.power as usize] + &t.weight;
    }
    Some(c)
}

fn invert_single_term(k: &KernelClass) -> Option<KernelClass> {
    match k.terms() {
        [ClassTerm { weight, power, rate, gauss }] => {
            Some(KernelClass::term(Scalar::one() / weight.clone(), -power, -rate.clone(), -gauss.clone()))
        }
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// rational mode

pub fn to_rational(e: &Expr, var: &str) -> Result<RationalFunction, CliError> {
    if let Some(c) = constant_value(e, var)? {
        return Ok(RationalFunction::polynomial(Poly::constant(c)));
    }
    Ok(match e {
        Expr::Num(_) => unreachable!("constants are folded"),
        Expr::Ident(_) => RationalFunction::polynomial(Poly::x()),
        Expr::Neg(a) => to_rational(a, var)?.scale(&Scalar::int(-1)),
        Expr::Bin(op, a, b) => {
            let u = to_rational(a, var)?;
            match op {
                BinOp::Add => u.add(&to_rational(b, var)?)?,
                BinOp::Sub => u.add(&to_rational(b, var)?.scale(&Scalar::int(-1)))?,
                BinOp::Mul => u.mul(&to_rational(b, var)?)?,
                BinOp::Div => u.mul(&reciprocal(&to_rational(b, var)?, e)?)?,
                BinOp::Pow => {
                    let k = constant_value(b, var)?
                        .and_then(|k| integer_of(&k))
                        .ok_or_else(|| unsupported(format!("`{e}`: rational mode needs an integer exponent")))?;
                    let base = if k < 0 { reciprocal(&u, e)? } else { u };
                    let mut acc = RationalFunction::polynomial(Poly::one());
                    for _ in 0..k.unsigned_abs() {
                        acc = acc.mul(&base)?;
                    }
                    acc
                }
            }
        }
        Expr::Call(f, _) => {
            return Err(unsupported(format!("`{e}`: {} is not rational in {var}", f.name())));
        }
    })
}

fn reciprocal(r: &RationalFunction, e: &Expr) -> Result<RationalFunction, CliError> {
    if r.num().is_zero() {
        return Err(unsupported(format!("`{e}` divides by zero")));
    }
    Ok(RationalFunction::new(r.den().clone(), r.num().clone())?)
}

/// `R(1/u)/u²`, the integrand of `∫_{|x|>1} R` after `x = 1/u`, as a
/// rational function of `u`. Needs `deg den ≥ deg num + 2`.
pub fn outer_substitution(r: &RationalFunction) -> Result<RationalFunction, CliError> {
    let dn = r.num().degree().unwrap_or(0);
    let dd = r.den().degree().unwrap_or(0);
    if r.num().is_zero() {
        return Ok(r.clone());
    }
    if dd < dn + 2 {
        return Err(unsupported(format!(
            "{r} decays too slowly for the x = 1/u substitution (needs denominator degree ≥ numerator degree + 2)"
        )));
    }
    let reversed = |p: &Poly, d: usize| Poly::new((0..=d).rev().map(|k| p.coeff(k)).collect());
    let shift = Poly::x().pow((dd - dn - 2) as u32);
    Ok(RationalFunction::new(reversed(r.num(), dn).mul(&shift), reversed(r.den(), dd))?)
}

/// Taylor series of a rational function about 0.
pub fn rational_series(r: &RationalFunction, order: usize) -> Result<PowerSeries, CliError> {
    let pad = |p: &Poly| {
        let mut c: Vec<Scalar> = (0..=order).map(|k| p.coeff(k)).collect();
        c.truncate(order + 1);
        PowerSeries::from_scalars(c)
    };
    pad(r.num()).div(&pad(r.den())).map_err(|_| unsupported(format!("{r} has a pole at 0")))
}

// ---------------------------------------------------------------------------
// exponential-polynomial mode

pub fn to_exppoly(e: &Expr, var: &str) -> Result<ExpPoly, CliError> {
    let class = to_class(e, var)?;
    let mut terms = Vec::new();
    for t in class.terms() {
        if t.power < 0 || !t.gauss.is_zero() {
            return Err(unsupported(format!(
                "`{e}` is not a sum of {var}^k·e^(a{var}) terms (k ≥ 0, no Gaussian factor)"
            )));
        }
        terms.push(ExpTerm { weight: t.weight.clone(), power: t.power as u32, rate: t.rate.clone() });
    }
    Ok(ExpPoly::new(terms))
}

/// Greatest common "divisor" of positive reals, for periods of
/// trigonometric sums: the largest `g` with every value an integer
/// multiple of `g` to within `1e−9` relative.
pub fn fundamental(values: &[f64]) -> Option<f64> {
    let mut g: Option<f64> = None;
    for &v in values.iter().filter(|v| **v > 0.0) {
        g = Some(match g {
            None => v,
            Some(mut a) => {
                let mut b = v;
                let tol = 1e-9 * a.max(b);
                while b > tol {
                    let r = a % b;
                    a = b;
                    b = if r < tol || b - r < tol { 0.0 } else { r };
                }
                a
            }
        });
    }
    g
}

/// Parses a constant such as `-1`, `2.5` or `pi/2`.
pub fn constant_from_text(text: &str) -> Result<Scalar, CliError> {
    let e = crate::expr::parse_in(text, &crate::expr::Scope::new("\u{0}", &[]))?;
    fold_constant(&e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;

    fn p(s: &str) -> Expr {
        parse_expression(s).unwrap()
    }

    #[test]
    fn geometric_series() {
        let s = to_series(&p("1/(1+x^2)"), "x", &Scalar::zero(), 4).unwrap();
        assert_eq!(s, PowerSeries::from_ints(&[1, 0, -1, 0, 1]));
        assert_eq!(to_series(&p("2"), "x", &Scalar::zero(), 0).unwrap(), PowerSeries::from_ints(&[2]));
    }

    #[test]
    fn series_match_builtins() {
        let n = 12;
        let z = Scalar::zero();
        assert_eq!(to_series(&p("sin(x)"), "x", &z, n).unwrap(), series_known("sin", &[], n).unwrap());
        assert_eq!(to_series(&p("exp(2*x)"), "x", &z, n).unwrap(), series_known("exp", &[Scalar::int(2)], n).unwrap());
        let sinc = to_series(&p("sin(x)/x"), "x", &z, n).unwrap();
        assert_eq!(sinc, series_known("sinc", &[], n - 1).unwrap());
        let g = to_series(&p("exp(-x^2)"), "x", &z, n).unwrap();
        assert_eq!(g, series_known("gaussian", &[], n).unwrap());
    }

    #[test]
    fn shifted_centers() {
        let c = Scalar::ratio(3, 2);
        let s = to_series(&p("1/x"), "x", &c, 30).unwrap();
        let v = s.eval(&Scalar::int(2)).value;
        assert!((v.re_f64() - 0.5).abs() < 1e-12);
        let s = to_series(&p("sqrt(1+x)"), "x", &Scalar::zero(), 30).unwrap();
        assert!((s.eval(&Scalar::ratio(1, 4)).value.re_f64() - 1.25f64.sqrt()).abs() < 1e-14);
        let s = to_series(&p("log(x)"), "x", &Scalar::one(), 40).unwrap();
        assert!((s.eval(&Scalar::ratio(3, 2)).value.re_f64() - 1.5f64.ln()).abs() < 1e-12);
        assert!(to_series(&p("1/x"), "x", &Scalar::zero(), 8).is_err());
        assert!(to_series(&p("abs(x)"), "x", &Scalar::zero(), 8).is_err());
    }

    #[test]
    fn sin_fifth_over_x_in_kernel_form() {
        let k = to_class(&p("sin(x)^5/x"), "x").unwrap();
        assert_eq!(k.frequencies(), vec![1.0, 3.0, 5.0]);
        // ((e^{ix} − e^{−ix})/2i)^5 = Σ C(5,k)(−1)^k e^{i(5−2k)x} / (2i)^5
        let two_i_5 = (Scalar::int(2) * Scalar::i()).powi(5);
        for (j, binom) in [1i64, 5, 10, 10, 5, 1].iter().enumerate() {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            let want = ClassTerm {
                weight: Scalar::int(sign * binom) / two_i_5.clone(),
                power: -1,
                rate: Scalar::i() * Scalar::int(5 - 2 * j as i64),
                gauss: Scalar::zero(),
            };
            assert!(k.terms().contains(&want), "j = {j}");
        }
        let want = KernelClass::sin(Scalar::one()).powi(5).mul(&KernelClass::monomial(-1));
        assert_eq!(k, want);
    }

    #[test]
    fn kernel_lowering_shapes() {
        let k = to_class(&p("x^2*cos(x)*exp(-x^2)"), "x").unwrap();
        let want =
            KernelClass::monomial(2).mul(&KernelClass::cos(Scalar::one())).mul(&KernelClass::gaussian(Scalar::one()));
        assert_eq!(k, want);
        let k = to_class(&p("sinc(3*x)"), "x").unwrap();
        let want = KernelClass::sin(Scalar::int(3)).mul(&KernelClass::monomial(-1)).scale(&Scalar::ratio(1, 3));
        assert_eq!(k, want);
        assert!(to_class(&p("1/(1+x^2)"), "x").is_err());
        assert!(to_class(&p("sin(x^2)"), "x").is_err());
    }

    #[test]
    fn rational_and_outer_substitution() {
        let r = to_rational(&p("1/(1+x^2)"), "x").unwrap();
        assert_eq!(outer_substitution(&r).unwrap(), r);
        let r = to_rational(&p("1/(x-2)"), "x").unwrap();
        assert_eq!(r.to_string(), "1/(x - 2)");
        assert!(outer_substitution(&r).is_err());
        let s = rational_series(&to_rational(&p("1/(1+x^2)"), "x").unwrap(), 4).unwrap();
        assert_eq!(s, PowerSeries::from_ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn exppoly_lowering() {
        let f = to_exppoly(&p("x^2*exp(-x)"), "x").unwrap();
        assert_eq!(f, ExpPoly::term(Scalar::one(), 2, Scalar::int(-1)));
        assert!(to_exppoly(&p("sin(x)/x"), "x").is_err());
    }

    #[test]
    fn fundamentals() {
        assert!((fundamental(&[1.0, 3.0, 5.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((fundamental(&[2.5]).unwrap() - 2.5).abs() < 1e-12);
        assert!((fundamental(&[0.5, 0.75]).unwrap() - 0.25).abs() < 1e-12);
        assert_eq!(fundamental(&[]), None);
    }
}
