//! Half-line, real-line and Fourier integrals.

use super::extrapolate::{richardson_prefixes, Estimate};
use super::{ConvergenceRow, Diagnostics, Extrapolation, IntegralResult, RegScheme, Route};
use crate::error::{Error, Result};
use crate::numeric::composite_gl_complex;
use crate::opcalc::{apply_class, ConstantAllocator, ConstantPolicy, Kernel, KernelClass, Nu, Side};
use crate::scalar::{Scalar, C64};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfLine {
    /// `∫_0^∞`.
    Positive,
    /// `∫_{−∞}^0`.
    Negative,
}

/// `∫_0^∞ f = lim_{ε→0⁺} f(−∂)(1/ε)`; the negative half-line reflects `f`.
pub fn integrate_half_line(f: &KernelClass, side: HalfLine, policy: &ConstantPolicy) -> Result<IntegralResult> {
    let (g, route) = match side {
        HalfLine::Positive => (f.clone(), Route::HalfLinePositive),
        HalfLine::Negative => (f.reflect(), Route::HalfLineNegative),
    };
    let mut alloc = ConstantAllocator::new();
    let k = apply_class(&g, Nu::Minus, &Kernel::recip(), policy, &mut alloc)?;
    let value = k.limit(&Scalar::zero(), Side::Plus)?;
    Ok(IntegralResult::exact(value, route, Some(k.to_string())))
}

/// Sum of both half-line integrals.
pub fn integrate_two_sided(f: &KernelClass, policy: &ConstantPolicy) -> Result<IntegralResult> {
    let p = integrate_half_line(f, HalfLine::Positive, policy)?;
    let n = integrate_half_line(f, HalfLine::Negative, policy)?;
    let mut r = IntegralResult::exact(p.value.clone() + n.value.clone(), Route::TwoSided, None);
    r.diagnostics.notes.push(format!("positive half {} , negative half {}", p.value, n.value));
    Ok(r)
}

fn two_pi() -> Scalar {
    Scalar::float(C64::new(2.0 * PI, 0.0))
}

fn sqrt_two_pi() -> Scalar {
    Scalar::float(C64::new((2.0 * PI).sqrt(), 0.0))
}

/// `∫_ℝ f = 2π f(−i∂)δ(ε)` at `ε = 0`, with exact delta calculus.
pub fn integrate_real_line(f: &KernelClass, policy: &ConstantPolicy) -> Result<IntegralResult> {
    let mut alloc = ConstantAllocator::new();
    let k = apply_class(f, Nu::MinusI, &Kernel::delta(), policy, &mut alloc)?;
    let value = k.limit(&Scalar::zero(), Side::Both)?;
    Ok(IntegralResult::exact(two_pi() * value, Route::Delta, Some(format!("2π·[{k}]"))))
}

/// The real-line integral through a regularized delta, extrapolated to
/// zero width along `scheme`.
pub fn integrate_real_line_reg(
    f: &KernelClass,
    scheme: &RegScheme,
    policy: &ConstantPolicy,
    tol: f64,
) -> Result<IntegralResult> {
    regularized(f, 0.0, &two_pi(), scheme, policy, tol, Route::DeltaReg(scheme.shape))
}

fn regularized(
    f: &KernelClass,
    x: f64,
    scale: &Scalar,
    scheme: &RegScheme,
    policy: &ConstantPolicy,
    tol: f64,
    route: Route,
) -> Result<IntegralResult> {
    let schedule = scheme.schedule(&f.frequencies())?;
    let at = Scalar::from_f64(x);
    let mut params = Vec::new();
    let mut hs = Vec::new();
    let mut values = Vec::new();
    for (param, h, reg) in schedule {
        let mut alloc = ConstantAllocator::new();
        let k = apply_class(f, Nu::MinusI, &Kernel::delta_reg(reg), policy, &mut alloc)?;
        let v = (scale * &k.limit(&at, Side::Both)?).to_c64();
        params.push(param);
        hs.push(h);
        values.push(v);
    }
    let depth = match scheme.extrapolation {
        Extrapolation::None => 0,
        Extrapolation::Richardson(d) => d,
    };
    let mut result = extrapolated(&params, &hs, &values, depth, tol, route)?;
    result.diagnostics.notes.push(format!("{} regularization, {} steps", scheme.shape, values.len()));
    Ok(result)
}

/// Tabulates a schedule, extrapolates and applies the divergence and
/// tolerance checks shared by the numeric routes.
fn extrapolated(
    params: &[f64],
    hs: &[f64],
    values: &[C64],
    depth: usize,
    tol: f64,
    route: Route,
) -> Result<IntegralResult> {
    let best = if depth == 0 {
        values
            .iter()
            .enumerate()
            .map(|(k, v)| Estimate {
                value: *v,
                error: if k == 0 { f64::INFINITY } else { (*v - values[k - 1]).norm() },
            })
            .collect()
    } else {
        richardson_prefixes(hs, values, depth)
    };
    check_divergence(values)?;
    let rows: Vec<ConvergenceRow> = (0..values.len())
        .map(|k| ConvergenceRow {
            step: k,
            parameter: params[k],
            estimate: best[k].value,
            delta_prev: (k > 0).then(|| (best[k].value - best[k - 1].value).norm()),
            bound: best[k].error.is_finite().then_some(best[k].error),
        })
        .collect();
    let last = *best.last().expect("non-empty schedule");
    let diagnostics =
        Diagnostics { extrapolation_steps: values.len(), error_estimate: Some(last.error), rows, ..Default::default() };
    if !(last.error <= tol) {
        return Err(Error::NoBound(format!(
            "extrapolated value {} with error estimate {:.3e} above tolerance {tol:.1e}",
            last.value, last.error
        )));
    }
    Ok(IntegralResult { value: Scalar::float(last.value), route, diagnostics, oracle_delta: None, verified: true })
}

/// Values that keep growing along the schedule mean the integral does not
/// exist (or needs a prescription the regularization cannot supply).
fn check_divergence(values: &[C64]) -> Result<()> {
    let first = values[0].norm();
    let n = values.len();
    let blowup = values.iter().any(|v| v.norm() > 1e6 * first.max(1e-300) && v.norm() > 1e-6);
    let growing = n >= 4
        && (n - 3..n).all(|k| values[k].norm() > 1.3 * values[k - 1].norm())
        && values[n - 1].norm() > 4.0 * first;
    if blowup || growing || values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Divergent(format!(
            "regularized values grow along the schedule ({} → {})",
            values[0],
            values[n - 1]
        )));
    }
    Ok(())
}

/// Default sample points for the w-route's ε-independence check.
pub const DEFAULT_W_POINTS: [f64; 4] = [-0.5, 0.0, 0.3, 1.0];

#[derive(Clone, Debug, PartialEq)]
pub struct WRouteResult {
    pub result: IntegralResult,
    /// Extrapolated value at each sample ε.
    pub per_point: Vec<(f64, C64)>,
    /// Largest difference between the per-ε values.
    pub spread: f64,
}

/// `∫_ℝ f = 2π δ(i∂_ε) f(ε)`: with the Gaussian-regularized delta this is
/// the windowed shifted integral `∫ e^{−σw²} f(ε − w) dw`, extrapolated to
/// `σ → 0` at several `ε`. The value must not depend on `ε`.
///
/// `frequencies` sets the quadrature panel length.
pub fn integrate_w_route<F: Fn(f64) -> C64>(
    f: F,
    frequencies: &[f64],
    points: &[f64],
    tol: f64,
) -> Result<WRouteResult> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("the w-route needs at least one sample point".into()));
    }
    let omega = frequencies.iter().cloned().fold(0.0, f64::max);
    let panel = if omega > 0.0 { (2.0 * PI / omega).min(2.0) } else { 2.0 };
    // Features of the spectrum at frequency ω leak in like e^{−ω²/4σ};
    // start where the lowest one is already negligible.
    let sigma0 = match frequencies.iter().cloned().reduce(f64::min) {
        Some(w) => (w * w / 64.0).min(1.0 / 16.0),
        None => 1.0 / 16.0,
    };
    let steps = 7;
    let sigmas: Vec<f64> = (0..steps).map(|k| sigma0 / 4f64.powi(k)).collect();
    let hs: Vec<f64> = sigmas.iter().map(|s| s.sqrt()).collect();
    let mut per_point = Vec::new();
    let mut results = Vec::new();
    for &eps in points {
        let values: Vec<C64> = sigmas
            .iter()
            .map(|&s| {
                let half = (41.0 / s).sqrt();
                let panels = ((2.0 * half) / panel).ceil() as usize + 1;
                composite_gl_complex(|x| f(x) * (-s * (eps - x) * (eps - x)).exp(), eps - half, eps + half, panels)
            })
            .collect();
        let r = extrapolated(&sigmas, &hs, &values, 4, tol, Route::WRoute)?;
        per_point.push((eps, r.value.to_c64()));
        results.push(r);
    }
    let mut spread = 0.0_f64;
    for (_, a) in &per_point {
        for (_, b) in &per_point {
            spread = spread.max((a - b).norm());
        }
    }
    if spread > tol {
        return Err(Error::SpreadExceeded { spread, tol });
    }
    let idx = points.iter().position(|p| *p == 0.0).unwrap_or(0);
    let mut result = results.swap_remove(idx);
    let worst = per_point.len();
    result.diagnostics.notes.push(format!("{worst} sample points, spread {spread:.3e}"));
    result.diagnostics.error_estimate = result.diagnostics.error_estimate.map(|e| e.max(spread));
    Ok(WRouteResult { result, per_point, spread })
}

/// `f(−i∂)δ(x)` as a kernel in `x`; the transform is `√(2π)` times it,
/// with the convention `F(x) = (2π)^{−1/2} ∫ f(t) e^{ixt} dt`.
pub fn fourier_kernel(f: &KernelClass, policy: &ConstantPolicy) -> Result<Kernel> {
    let mut alloc = ConstantAllocator::new();
    apply_class(f, Nu::MinusI, &Kernel::delta(), policy, &mut alloc)
}

/// The Fourier transform at `x`: exact when the kernel has a value there,
/// otherwise (a delta or a jump at `x`) through `reg` or the default
/// Gaussian schedule.
pub fn fourier_transform(
    f: &KernelClass,
    x: f64,
    reg: Option<&RegScheme>,
    policy: &ConstantPolicy,
    tol: f64,
) -> Result<IntegralResult> {
    let k = fourier_kernel(f, policy)?;
    let symbolic = format!("sqrt(2π)·[{}]", k.display_in("x"));
    let exact = k.limit(&Scalar::from_f64(x), Side::Both);
    match (exact, reg) {
        (Ok(v), _) => Ok(IntegralResult::exact(sqrt_two_pi() * v, Route::Fourier, Some(symbolic))),
        (Err(e @ Error::NonCancellingConstant), _) => Err(e),
        (Err(e), reg) => {
            let scheme = reg.copied().unwrap_or_default();
            let mut r = regularized(f, x, &sqrt_two_pi(), &scheme, policy, tol, Route::FourierReg(scheme.shape))?;
            r.diagnostics.notes.push(format!("exact kernel has no value here: {e}"));
            r.diagnostics.symbolic = Some(symbolic);
            Ok(r)
        }
    }
}

/// `e^{a∂²} g`, which turns `δ` into the heat kernel of spread `a`;
/// `a` must be positive.
pub fn delta_semigroup(a: &Scalar, g: &Kernel) -> Result<Kernel> {
    if !a.is_real() || a.re_f64() <= 0.0 {
        return Err(Error::Nonpositive(format!("spread {a} must be positive")));
    }
    g.heat(a)
}
