//! Integrals over finite intervals.

use super::extrapolate::wynn_epsilon;
use super::{ConvergenceRow, Diagnostics, IntegralResult, Route};
use crate::error::{Error, Result};
use crate::opcalc::{apply_class, ConstantAllocator, ConstantPolicy, Kernel, KernelClass, Nu, Side};
use crate::powerseries::PowerSeries;
use crate::scalar::{Scalar, C64};

/// `∫_a^b f` from the series, termwise: `Σ c_n (t_b^{n+1} − t_a^{n+1})/(n+1)`
/// with `t = x − center`.
///
/// The partial sums are exact for exact input. When the geometric tail
/// estimate does not meet `tol`, the partial sums are accelerated with the
/// epsilon algorithm; if neither gives a bound within `tol` the integral is
/// reported as unbounded.
pub fn integrate_finite(f: &PowerSeries, a: &Scalar, b: &Scalar, tol: f64) -> Result<IntegralResult> {
    let ta = a - f.center();
    let tb = b - f.center();
    let r = f.radius_estimate();
    let reach = ta.norm().max(tb.norm());
    if reach > r * (1.0 + 1e-9) {
        return Err(Error::OutsideRadius(format!(
            "the interval reaches {reach} from the center but the radius is about {r}; split the interval"
        )));
    }

    let mut pa = ta.clone();
    let mut pb = tb.clone();
    let mut sum = Scalar::zero();
    let mut rows = Vec::new();
    let mut sums = Vec::new();
    let mut prev: Option<C64> = None;
    for n in 0..=f.order() {
        let c = f.coeff(n);
        if !c.is_zero() {
            let term = c * (&pb - &pa) / Scalar::int(n as i64 + 1);
            sum = sum + term;
            let est = sum.to_c64();
            rows.push(ConvergenceRow {
                step: rows.len(),
                parameter: n as f64,
                estimate: est,
                delta_prev: prev.map(|p| (est - p).norm()),
                bound: None,
            });
            sums.push(est);
            prev = Some(est);
        }
        pa = &pa * &ta;
        pb = &pb * &tb;
    }

    let anti = f.antiderivative();
    let tail = match (anti.tail_estimate(ta.norm()), anti.tail_estimate(tb.norm())) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    };
    let mut diagnostics = Diagnostics { truncation_order: Some(f.order()), rows, ..Default::default() };
    if let Some(t) = tail.filter(|t| *t <= tol) {
        diagnostics.error_estimate = Some(t);
        if let Some(last) = diagnostics.rows.last_mut() {
            last.bound = Some(t);
        }
        return Ok(IntegralResult {
            value: sum,
            route: Route::Series,
            diagnostics,
            oracle_delta: None,
            verified: true,
        });
    }
    if let Some(est) = wynn_epsilon(&sums).filter(|e| e.error <= tol) {
        diagnostics.error_estimate = Some(est.error);
        diagnostics.extrapolation_steps = sums.len();
        diagnostics.notes.push(format!(
            "partial sums accelerated (tail estimate {})",
            tail.map_or("unavailable".to_string(), |t| format!("{t:.3e}"))
        ));
        if let Some(last) = diagnostics.rows.last_mut() {
            last.bound = Some(est.error);
        }
        return Ok(IntegralResult {
            value: Scalar::float(est.value),
            route: Route::Series,
            diagnostics,
            oracle_delta: None,
            verified: true,
        });
    }
    Err(Error::NoBound(format!(
        "partial sum {} at order {}, tail estimate {}",
        sum.to_c64(),
        f.order(),
        tail.map_or("unavailable".to_string(), |t| format!("{t:.3e}"))
    )))
}

/// `∫_a^b f = lim_{ε→0} f(∂)(e^{bε} − e^{aε})/ε` for an
/// exponential-polynomial `f`.
pub fn integrate_finite_kernel(
    f: &KernelClass,
    a: &Scalar,
    b: &Scalar,
    policy: &ConstantPolicy,
) -> Result<IntegralResult> {
    let base = Kernel::exp_over_eps(b.clone()).sub(&Kernel::exp_over_eps(a.clone()));
    let mut alloc = ConstantAllocator::new();
    let k = apply_class(f, Nu::Plus, &base, policy, &mut alloc)?;
    let value = k.limit(&Scalar::zero(), Side::Both)?;
    Ok(IntegralResult::exact(value, Route::Kernel, Some(k.to_string())))
}

/// A finite piece of a split integral. Substitutions (such as `x → 1/u`
/// for the outer parts of the real line) are applied by the caller, so
/// `integrand` is already the transformed series.
#[derive(Clone, Debug)]
pub struct Piece {
    pub integrand: PowerSeries,
    pub a: Scalar,
    pub b: Scalar,
    pub label: String,
}

/// Sum of [`integrate_finite`] over the pieces; the error budget is shared
/// equally.
pub fn integrate_finite_split(pieces: &[Piece], tol: f64) -> Result<IntegralResult> {
    if pieces.is_empty() {
        return Err(Error::InvalidParameter("no pieces to integrate".into()));
    }
    let share = tol / pieces.len() as f64;
    let mut total = Scalar::zero();
    let mut err = 0.0;
    let mut diagnostics = Diagnostics::default();
    for (i, p) in pieces.iter().enumerate() {
        let r = integrate_finite(&p.integrand, &p.a, &p.b, share)
            .map_err(|e| Error::NoBound(format!("piece {}: {e}", p.label)))?;
        err += r.diagnostics.error_estimate.unwrap_or(0.0);
        diagnostics.rows.push(ConvergenceRow {
            step: i,
            parameter: r.diagnostics.truncation_order.unwrap_or(0) as f64,
            estimate: r.value.to_c64(),
            delta_prev: None,
            bound: r.diagnostics.error_estimate,
        });
        diagnostics.notes.push(format!("{}: {} on [{}, {}]", p.label, r.value, p.a, p.b));
        diagnostics.notes.extend(r.diagnostics.notes);
        diagnostics.truncation_order = diagnostics.truncation_order.max(r.diagnostics.truncation_order);
        total = total + r.value;
    }
    diagnostics.error_estimate = Some(err);
    Ok(IntegralResult { value: total, route: Route::Split, diagnostics, oracle_delta: None, verified: err <= tol })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FtcCheck {
    /// `∫_a^b f′` by the series route.
    pub lhs: Scalar,
    /// `f(b) − f(a)`.
    pub rhs: Scalar,
    pub residual: f64,
}

/// Fundamental theorem check `∫_a^b f′ = f(b) − f(a)`.
pub fn ftc_check(f: &PowerSeries, a: &Scalar, b: &Scalar, tol: f64) -> Result<FtcCheck> {
    let lhs = integrate_finite(&f.differentiate(), a, b, tol)?.value;
    let rhs = f.eval(b).value - f.eval(a).value;
    let residual = (lhs.to_c64() - rhs.to_c64()).norm();
    Ok(FtcCheck { lhs, rhs, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::powerseries::series_known;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        // ∫_0^1 (1 + 2x + 3x²) = 3
        let f = PowerSeries::from_ints(&[1, 2, 3, 0, 0, 0, 0, 0]);
        let r = integrate_finite(&f, &Scalar::zero(), &Scalar::one(), 1e-12).unwrap();
        assert_eq!(r.value, Scalar::int(3));
        assert!(r.verified);
    }

    #[test]
    fn exp_on_unit_interval() {
        let f = series_known("exp", &[], 30).unwrap();
        let r = integrate_finite(&f, &Scalar::zero(), &Scalar::one(), 1e-12).unwrap();
        assert!((r.value.re_f64() - (1f64.exp() - 1.0)).abs() < 1e-14);
        assert!(r.value.is_exact());
    }

    #[test]
    fn geometric_on_the_boundary_is_accelerated() {
        let f = series_known("geometric_1_over_1_plus_x2", &[], 120).unwrap();
        let r = integrate_finite(&f, &Scalar::int(-1), &Scalar::one(), 1e-8).unwrap();
        assert!((r.value.re_f64() - PI / 2.0).abs() < 1e-9, "{}", r.value);
        assert!(integrate_finite(&f, &Scalar::int(-2), &Scalar::one(), 1e-8).is_err());
    }

    #[test]
    fn kernel_route_matches_closed_forms() {
        let r = integrate_finite_kernel(
            &KernelClass::monomial(2),
            &Scalar::zero(),
            &Scalar::int(3),
            &ConstantPolicy::Symbolic,
        )
        .unwrap();
        assert_eq!(r.value, Scalar::int(9));
        let r = integrate_finite_kernel(
            &KernelClass::cos(Scalar::one()),
            &Scalar::zero(),
            &Scalar::from_f64(PI / 2.0),
            &ConstantPolicy::Symbolic,
        )
        .unwrap();
        assert!((r.value.re_f64() - 1.0).abs() < 1e-14);
        let r = integrate_finite_kernel(
            &KernelClass::exp(Scalar::one()),
            &Scalar::zero(),
            &Scalar::one(),
            &ConstantPolicy::Symbolic,
        )
        .unwrap();
        assert!((r.value.re_f64() - (1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn reciprocal_needs_a_prescription() {
        let f = KernelClass::monomial(-1);
        let (a, b) = (Scalar::int(-1), Scalar::one());
        let e = integrate_finite_kernel(&f, &a, &b, &ConstantPolicy::Symbolic).unwrap_err();
        assert!(matches!(e, Error::NonCancellingConstant));
        let v = integrate_finite_kernel(&f, &a, &b, &ConstantPolicy::Prescribed(Scalar::zero())).unwrap();
        assert_eq!(v.value, Scalar::zero());
    }

    #[test]
    fn split_real_line_for_lorentzian() {
        let f = series_known("geometric_1_over_1_plus_x2", &[], 160).unwrap();
        let pieces = vec![
            Piece { integrand: f.clone(), a: Scalar::int(-1), b: Scalar::one(), label: "inner".into() },
            Piece { integrand: f, a: Scalar::int(-1), b: Scalar::one(), label: "outer (x = 1/u)".into() },
        ];
        let r = integrate_finite_split(&pieces, 1e-8).unwrap();
        assert!((r.value.re_f64() - PI).abs() < 1e-8);
    }

    #[test]
    fn ftc_residual_vanishes() {
        let f = series_known("sin", &[], 40).unwrap();
        let c = ftc_check(&f, &Scalar::ratio(-1, 2), &Scalar::one(), 1e-12).unwrap();
        assert!(c.residual < 1e-14);
    }
}
