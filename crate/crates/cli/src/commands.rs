//! One function per command; [`run_command`] dispatches.

use crate::config::{CommandId, DomainChoice, Payload, RouteChoice, RunConfig};
use crate::expr::{parse_in, Expr, Scope};
use crate::lower::{
    constant_from_text, fundamental, outer_substitution, rational_series, to_class, to_exppoly, to_rational, to_series,
};
use crate::report::{decimal, OracleCheck, Report};
use crate::{selftest, CliError};
use diffint::integrate::{
    fourier_transform, ftc_check, integrate_finite, integrate_finite_kernel, integrate_finite_split,
    integrate_half_line, integrate_real_line, integrate_real_line_reg, integrate_two_sided, integrate_w_route,
    HalfLine, IntegralResult, Piece, RegScheme, RegShape, DEFAULT_W_POINTS,
};
use diffint::laplace::{
    comb_render, heat_trace, laplace_forward, laplace_forward_series, laplace_inverse_rational, partial_fractions,
    roots, spectrum_recover, SpectralComb, ASYMPTOTIC_NOTE, DEFAULT_POLE_ORDER_CAP,
};
use diffint::opcalc::KernelClass;
use diffint::{Error, Scalar, C64};
use diffint_oracle::{quad_finite, quad_unbounded, Domain, QuadResult, UnboundedOptions};
use std::f64::consts::PI;

/// Operator-route values must agree with the oracle to this accuracy.
pub const ORACLE_AGREEMENT: f64 = 1e-6;
/// Tolerance requested from the oracle itself.
const ORACLE_TOL: f64 = 1e-8;

pub fn run_command(cfg: &RunConfig, payload: &Payload) -> Result<Report, CliError> {
    cfg.validate()?;
    match cfg.command {
        CommandId::Integrate => integrate(cfg, payload),
        CommandId::Fourier => fourier(cfg, payload),
        CommandId::Laplace => laplace(cfg, payload),
        CommandId::Invlaplace => invlaplace(cfg, payload),
        CommandId::Spectrum => spectrum(cfg, payload),
        CommandId::FtcCheck => ftc(cfg, payload),
        CommandId::Selftest => Ok(selftest::report(&selftest::run_all())),
    }
}

/// Parses the payload expression with its parameters substituted.
pub fn prepare(p: &Payload) -> Result<Expr, CliError> {
    let text = p.expr.as_deref().ok_or_else(|| CliError::Config("an expression is required".into()))?;
    let names: Vec<String> = p.params.iter().map(|(k, _)| k.clone()).collect();
    if names.contains(&p.var) {
        return Err(CliError::Config(format!("`{}` is the variable and cannot be a parameter", p.var)));
    }
    let mut e = parse_in(text, &Scope::new(&p.var, &names))?;
    for (k, v) in &p.params {
        let value =
            parse_in(v, &Scope::new("\u{0}", &[])).map_err(|err| CliError::Config(format!("parameter {k}: {err}")))?;
        e = e.substitute(k, &value);
    }
    Ok(e)
}

fn required(text: &Option<String>, flag: &str) -> Result<Scalar, CliError> {
    let t = text.as_deref().ok_or_else(|| CliError::Config(format!("{flag} is required")))?;
    constant_from_text(t)
}

type Attempt<'a> = Box<dyn FnOnce() -> Result<IntegralResult, CliError> + 'a>;

/// Runs the candidates in order and returns the first success. When all
/// fail, a non-cancelling constant and then a divergence are reported in
/// preference to other failures: they are properties of the integral, not
/// limitations of a route.
fn escalate(candidates: Vec<(&str, Attempt<'_>)>) -> Result<IntegralResult, CliError> {
    let mut failures = Vec::new();
    let mut telling: Option<CliError> = None;
    for (name, run) in candidates {
        match run() {
            Ok(mut r) => {
                if !failures.is_empty() {
                    r.diagnostics.notes.insert(0, format!("auto route: {}", failures.join("; ")));
                }
                return Ok(r);
            }
            Err(e) => {
                failures.push(format!("{name} failed ({e})"));
                let rank = |e: &CliError| match e {
                    CliError::Engine(Error::NonCancellingConstant) => 2,
                    CliError::Engine(Error::Divergent(_)) => 1,
                    _ => 0,
                };
                if rank(&e) > telling.as_ref().map_or(0, rank) {
                    telling = Some(e);
                }
            }
        }
    }
    Err(telling.unwrap_or_else(|| CliError::Unsupported(format!("no route succeeded: {}", failures.join("; ")))))
}

fn not_applicable(route: RouteChoice, domain: &str) -> CliError {
    CliError::Config(format!("route {route} does not apply to {domain}"))
}

fn scheme(shape: RegShape) -> RegScheme {
    match shape {
        RegShape::Gaussian => RegScheme::gaussian(),
        RegShape::Sinc => RegScheme::sinc(),
    }
}

fn integrate(cfg: &RunConfig, p: &Payload) -> Result<Report, CliError> {
    let expr = prepare(p)?;
    let var = p.var.as_str();
    let policy = &cfg.constant;
    let (result, bounds) = match p.domain {
        DomainChoice::Finite => {
            let a = required(&p.from, "--from")?;
            let b = required(&p.to, "--to")?;
            let kernel = || -> Result<IntegralResult, CliError> {
                Ok(integrate_finite_kernel(&to_class(&expr, var)?, &a, &b, policy)?)
            };
            let series = || -> Result<IntegralResult, CliError> {
                let center = (&a + &b) / Scalar::int(2);
                let s = to_series(&expr, var, &center, cfg.order)?;
                Ok(integrate_finite(&s, &a, &b, cfg.tol)?)
            };
            let split = || split_finite(cfg, &expr, var, &a, &b);
            let r = match cfg.route {
                RouteChoice::Kernel => kernel(),
                RouteChoice::Series => series(),
                RouteChoice::Split => split(),
                RouteChoice::Auto => escalate(vec![
                    ("kernel", Box::new(kernel)),
                    ("series", Box::new(series)),
                    ("split", Box::new(split)),
                ]),
                other => Err(not_applicable(other, "a finite interval")),
            }?;
            (r, Some((a.re_f64(), b.re_f64())))
        }
        DomainChoice::HalfPlus | DomainChoice::HalfMinus => {
            if !matches!(cfg.route, RouteChoice::Auto | RouteChoice::Kernel) {
                return Err(not_applicable(cfg.route, "a half-line"));
            }
            let side = if p.domain == DomainChoice::HalfPlus { HalfLine::Positive } else { HalfLine::Negative };
            (integrate_half_line(&to_class(&expr, var)?, side, policy)?, None)
        }
        DomainChoice::Real => (real_line(cfg, &expr, var)?, None),
    };
    let mut report = Report::from_integral(CommandId::Integrate, &expr.to_string(), result);
    if cfg.oracle {
        let f = |x: f64| expr.eval_filled(var, x);
        let q = match (p.domain, bounds) {
            (DomainChoice::Finite, Some((a, b))) => quad_finite(f, a, b, ORACLE_TOL),
            (DomainChoice::HalfMinus, _) => quad_line(|x| f(-x), Domain::HalfLine, oracle_period(&expr, var, &[])),
            (DomainChoice::Real, _) => quad_line(f, Domain::RealLine, oracle_period(&expr, var, &[])),
            _ => quad_line(f, Domain::HalfLine, oracle_period(&expr, var, &[])),
        };
        attach_oracle(&mut report, "integral", C64::new(q.value, 0.0), &q, cfg.tol);
    }
    Ok(report)
}

fn real_line(cfg: &RunConfig, expr: &Expr, var: &str) -> Result<IntegralResult, CliError> {
    let policy = &cfg.constant;
    let class = || to_class(expr, var);
    let exact = || -> Result<IntegralResult, CliError> { Ok(integrate_real_line(&class()?, policy)?) };
    let reg = |shape: RegShape| -> Result<IntegralResult, CliError> {
        Ok(integrate_real_line_reg(&class()?, &scheme(shape), policy, cfg.tol)?)
    };
    let split = || split_real_line(cfg, expr, var);
    match cfg.route {
        RouteChoice::Delta | RouteChoice::Kernel => match cfg.reg {
            Some(shape) => reg(shape),
            None => exact(),
        },
        RouteChoice::TwoSided => Ok(integrate_two_sided(&class()?, policy)?),
        RouteChoice::Series | RouteChoice::Split => split(),
        RouteChoice::W => w_route(cfg, expr, var),
        RouteChoice::Auto => match cfg.reg {
            Some(shape) => reg(shape),
            None => escalate(vec![
                ("delta", Box::new(exact)),
                ("split", Box::new(split)),
                ("delta-reg", Box::new(move || reg(RegShape::Gaussian))),
            ]),
        },
    }
}

/// Upper limit on the number of series pieces in a split.
const MAX_PIECES: usize = 200;

/// Cuts `[a, b]` so that each piece's series about its midpoint is needed
/// at most about half-way to its radius; `radius(x)` is the distance from
/// `x` to the nearest singularity. Cut points are dyadic so that exact
/// lowering stays cheap.
fn cut_points(a: f64, b: f64, radius: impl Fn(f64) -> f64) -> Result<Vec<(f64, f64)>, CliError> {
    let mut out = Vec::new();
    let mut lo = a;
    while lo < b {
        let h = radius(lo) / 3.0;
        if !(h > 0.0) {
            return Err(Error::NoBound(format!("singularity at {lo}")).into());
        }
        let hi = if lo + 2.0 * h >= b {
            b
        } else {
            let grid = 2f64.powi((h / 4.0).log2().floor() as i32);
            ((lo + 2.0 * h) / grid).round() * grid
        };
        out.push((lo, hi));
        if out.len() > MAX_PIECES {
            return Err(Error::NoBound(format!("more than {MAX_PIECES} pieces needed near {lo}")).into());
        }
        lo = hi;
    }
    Ok(out)
}

fn series_pieces(cfg: &RunConfig, expr: &Expr, var: &str, cuts: &[(f64, f64)]) -> Result<Vec<Piece>, CliError> {
    cuts.iter()
        .map(|&(lo, hi)| {
            // Piece values are floating anyway; exact lowering about a
            // dyadic center only costs time.
            let center = Scalar::float(C64::new(0.5 * (lo + hi), 0.0));
            Ok(Piece {
                integrand: to_series(expr, var, &center, cfg.order)?,
                a: Scalar::from_f64(lo),
                b: Scalar::from_f64(hi),
                label: format!("[{}, {}]", decimal(lo), decimal(hi)),
            })
        })
        .collect()
}

/// A finite interval in series pieces, each reaching about half-way to the
/// radius estimated at its left end.
fn split_finite(cfg: &RunConfig, expr: &Expr, var: &str, a: &Scalar, b: &Scalar) -> Result<IntegralResult, CliError> {
    let (lo, hi) = (a.re_f64(), b.re_f64());
    if !a.is_real() || !b.is_real() || lo >= hi {
        return Err(CliError::Unsupported("the split route needs real bounds with from < to".into()));
    }
    let radius =
        |x: f64| to_series(expr, var, &Scalar::float(C64::new(x, 0.0)), cfg.order).map_or(0.0, |s| s.radius_estimate());
    let cuts = cut_points(lo, hi, radius)?;
    Ok(integrate_finite_split(&series_pieces(cfg, expr, var, &cuts)?, cfg.tol)?)
}

/// A rational integrand on the real line: `|x| > R` through `x = 1/u` as
/// one series in `u`, and `[−R, R]` in pieces kept clear of the poles.
/// `R` is at least twice the largest pole modulus, so the outer series
/// converges at ratio one half.
fn split_real_line(cfg: &RunConfig, expr: &Expr, var: &str) -> Result<IntegralResult, CliError> {
    let r = to_rational(expr, var)?;
    let outer = outer_substitution(&r)?;
    let poles: Vec<C64> = roots(r.den())?.into_iter().map(|(p, _)| p.to_c64()).collect();
    if let Some(p) = poles.iter().find(|p| p.im.abs() <= 1e-12 * p.norm().max(1.0)) {
        return Err(Error::Divergent(format!("pole on the real line at {}", decimal(p.re))).into());
    }
    let reach = poles.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let big = (2.0 * reach).ceil().max(1.0);
    let cuts =
        cut_points(-big, big, |x| poles.iter().map(|p| (C64::new(x, 0.0) - p).norm()).fold(f64::INFINITY, f64::min))?;
    let mut pieces = series_pieces(cfg, expr, var, &cuts)?;
    let inv = Scalar::ratio(1, big as i64);
    pieces.push(Piece {
        integrand: rational_series(&outer, cfg.order)?,
        a: -&inv,
        b: inv,
        label: format!("|{var}| > {big} via {var} = 1/u"),
    });
    Ok(integrate_finite_split(&pieces, cfg.tol)?)
}

fn w_route(cfg: &RunConfig, expr: &Expr, var: &str) -> Result<IntegralResult, CliError> {
    let (freqs, w) = match to_class(expr, var) {
        Ok(class) => {
            let ev = class.evaluator()?;
            (class.frequencies(), integrate_w_route(|x| ev.eval(x), &class.frequencies(), &DEFAULT_W_POINTS, cfg.tol)?)
        }
        Err(_) => (
            Vec::new(),
            integrate_w_route(|x| C64::new(expr.eval_filled(var, x), 0.0), &[], &DEFAULT_W_POINTS, cfg.tol)?,
        ),
    };
    let mut r = w.result;
    let points: Vec<String> = w.per_point.iter().map(|(e, v)| format!("ε={e}: {}", decimal(v.re))).collect();
    r.diagnostics.notes.push(format!("per-point values {}", points.join(", ")));
    if freqs.is_empty() {
        r.diagnostics.notes.push("no oscillation frequencies; default quadrature panels".into());
    }
    Ok(r)
}

/// Fundamental period of the integrand's oscillation (after shifting the
/// frequencies by `extra`), or `None` when it decays or does not lower to
/// the kernel class.
fn oracle_period(expr: &Expr, var: &str, extra: &[f64]) -> Option<f64> {
    let k = to_class(expr, var).ok()?;
    if k.terms().iter().any(|t| !t.gauss.is_zero() || t.rate.re_f64() != 0.0) {
        return None;
    }
    let freqs = k.frequencies();
    let shifted: Vec<f64> = if extra.is_empty() {
        freqs
    } else {
        let base = if freqs.is_empty() { vec![0.0] } else { freqs };
        base.iter().flat_map(|w| extra.iter().flat_map(move |x| [(w + x).abs(), (w - x).abs()])).collect()
    };
    fundamental(&shifted).map(|g| 2.0 * PI / g)
}

/// Oscillatory integrands are first summed half a period per panel, where
/// an alternating tail accelerates to rounding level; a non-alternating one
/// is retried with full-period panels, whose sums form a smooth sequence.
/// Decaying integrands use the compactifying map.
fn quad_line<F: Fn(f64) -> f64>(f: F, domain: Domain, period: Option<f64>) -> QuadResult {
    let Some(p) = period else {
        return quad_unbounded(f, domain, ORACLE_TOL, UnboundedOptions::default());
    };
    let half = quad_unbounded(&f, domain, ORACLE_TOL, UnboundedOptions { period: Some(p / 2.0), ..Default::default() });
    if half.converged {
        return half;
    }
    let full = quad_unbounded(&f, domain, ORACLE_TOL, UnboundedOptions { period: Some(p), ..Default::default() });
    if full.converged || full.abs_error_estimate < half.abs_error_estimate {
        full
    } else {
        half
    }
}

fn attach_oracle(report: &mut Report, quantity: &str, value: C64, q: &QuadResult, tol: f64) {
    let reported = report.value.as_ref().map_or(C64::new(f64::NAN, 0.0), Scalar::to_c64);
    let delta = (reported - value).norm();
    if q.converged && !(delta <= ORACLE_AGREEMENT.max(tol)) {
        report.verified = false;
        report.diagnostics.notes.push(format!("oracle disagrees by {}", decimal(delta)));
    }
    if !q.converged {
        report.diagnostics.notes.push("oracle did not reach its tolerance".into());
    }
    report.oracle = Some(OracleCheck {
        quantity: quantity.to_string(),
        value,
        abs_error_estimate: q.abs_error_estimate,
        converged: q.converged,
        delta,
    });
}

fn fourier(cfg: &RunConfig, p: &Payload) -> Result<Report, CliError> {
    let expr = prepare(p)?;
    let var = p.var.as_str();
    let at = p.at.as_deref().unwrap_or("0");
    let x = constant_from_text(at)?.re_f64();
    let class = to_class(&expr, var)?;
    let reg = cfg.reg.map(scheme);
    let r = fourier_transform(&class, x, reg.as_ref(), &cfg.constant, cfg.tol)?;
    let mut report = Report::from_integral(CommandId::Fourier, &expr.to_string(), r);
    report.detail("at", at);
    if cfg.oracle {
        let period = oracle_period(&expr, var, &[x.abs()]);
        let f = |t: f64| expr.eval_filled(var, t);
        let re = quad_line(|t| f(t) * (x * t).cos(), Domain::RealLine, period);
        let im = quad_line(|t| f(t) * (x * t).sin(), Domain::RealLine, period);
        let s = (2.0 * PI).sqrt();
        let combined = QuadResult {
            value: re.value,
            abs_error_estimate: (re.abs_error_estimate + im.abs_error_estimate) / s,
            evaluations: re.evaluations + im.evaluations,
            converged: re.converged && im.converged,
        };
        attach_oracle(&mut report, &format!("F({at})"), C64::new(re.value, im.value) / s, &combined, cfg.tol);
    }
    Ok(report)
}

fn laplace(cfg: &RunConfig, p: &Payload) -> Result<Report, CliError> {
    let expr = prepare(p)?;
    let var = p.var.as_str();
    let at = p.at.as_deref().map(constant_from_text).transpose()?;
    let mut report = Report::new(CommandId::Laplace, &expr.to_string(), "shift");
    match to_exppoly(&expr, var) {
        Ok(f) => {
            let img = laplace_forward(&f)?;
            report.expression = Some(img.rational.display_in(var));
            report.diagnostics.symbolic = Some(img.kernel.display_in(var));
            report.detail("abscissa", decimal(img.abscissa));
            if let Some(s) = &at {
                report.value = Some(img.eval(s)?);
            }
        }
        Err(reason) => {
            let series = to_series(&expr, var, &Scalar::zero(), cfg.order)?;
            let img = laplace_forward_series(&series);
            report.route = "term-wise".into();
            let shown: Vec<(&Scalar, String)> = img
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .take(6)
                .map(|(n, c)| (c, if n == 0 { var.to_string() } else { format!("{var}^{}", n + 1) }))
                .collect();
            report.expression = Some(format!("{}{}", fraction_sum(&shown), if img.exact { "" } else { " + …" }));
            report.diagnostics.truncation_order = Some(cfg.order);
            report.diagnostics.notes.push(format!("not an exponential polynomial ({reason})"));
            if !img.exact {
                report.diagnostics.notes.push(ASYMPTOTIC_NOTE.into());
            }
            report.verified = img.exact;
            if let Some(s) = &at {
                let (v, err) = img.eval(s)?;
                report.value = Some(v);
                report.diagnostics.error_estimate = Some(err);
                report.verified = err <= cfg.tol;
            }
        }
    }
    if cfg.oracle {
        match &at {
            Some(s) => {
                let s = s.re_f64();
                let q = quad_unbounded(
                    |t| expr.eval_filled(var, t) * (-s * t).exp(),
                    Domain::HalfLine,
                    ORACLE_TOL,
                    UnboundedOptions::default(),
                );
                attach_oracle(&mut report, &format!("L({s})"), C64::new(q.value, 0.0), &q, cfg.tol);
            }
            None => report.diagnostics.notes.push("oracle comparison needs --at".into()),
        }
    }
    Ok(report)
}

fn invlaplace(cfg: &RunConfig, p: &Payload) -> Result<Report, CliError> {
    let expr = prepare(p)?;
    let var = p.var.as_str();
    let r = to_rational(&expr, var)?;
    let f = laplace_inverse_rational(&r)?;
    let mut report = Report::new(CommandId::Invlaplace, &expr.to_string(), "resolvent");
    report.expression = Some(f.display_in(var));
    let pf = partial_fractions(&r, DEFAULT_POLE_ORDER_CAP)?;
    let terms: Vec<(&Scalar, String)> = pf
        .iter()
        .map(|t| {
            let base = match t.pole.real_sign() {
                _ if t.pole.is_zero() => var.to_string(),
                Some(std::cmp::Ordering::Less) if t.pole.is_real() => format!("({var} + {})", -&t.pole),
                _ => format!("({var} - {})", t.pole),
            };
            (&t.coef, if t.order == 1 { base } else { format!("{base}^{}", t.order) })
        })
        .collect();
    report.detail("partial fractions", fraction_sum(&terms));
    if let Some(t) = p.at.as_deref() {
        report.value = Some(f.eval(&constant_from_text(t)?));
    }
    if cfg.oracle {
        // Forward-transform the result numerically at a point right of
        // every pole and compare with the input there.
        let s = f.abscissa().max(0.0) + 1.0;
        let q = quad_unbounded(
            |t| f.eval_c64(t).re * (-s * t).exp(),
            Domain::HalfLine,
            ORACLE_TOL,
            UnboundedOptions::default(),
        );
        let want = r.eval(&Scalar::from_f64(s))?.to_c64();
        let value = report.value.take();
        report.value = Some(Scalar::float(want));
        attach_oracle(&mut report, &format!("∫ f(t)e^(-{s}t) dt vs R({s})"), C64::new(q.value, 0.0), &q, cfg.tol);
        report.value = value;
    }
    Ok(report)
}

/// `Σ c_k / d_k` with signs pulled out: `1/x - 1/(2*x^2) + (1+2i)/(x - 1)`.
fn fraction_sum(terms: &[(&Scalar, String)]) -> String {
    let mut out = String::new();
    for (i, (c, den)) in terms.iter().enumerate() {
        let negative = c.is_real() && c.real_sign() == Some(std::cmp::Ordering::Less);
        let mag = if negative { -*c } else { (*c).clone() };
        let text = match mag.as_exact().filter(|_| mag.is_real()) {
            Some(z) if z.re.is_integer() => format!("{}/{den}", z.re),
            Some(z) => format!("{}/({}*{den})", z.re.numer(), z.re.denom()),
            None if mag.is_real() => format!("{mag}/{den}"),
            None => format!("({mag})/{den}"),
        };
        out.push_str(match (i, negative) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        out.push_str(&text);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn parse_lines(text: &str) -> Result<SpectralComb, CliError> {
    let mut lines = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (rate, weight) = item.split_once(':').unwrap_or((item, "1"));
        lines.push((constant_from_text(rate)?, constant_from_text(weight)?));
    }
    Ok(SpectralComb::new(lines)?)
}

fn spectrum(cfg: &RunConfig, p: &Payload) -> Result<Report, CliError> {
    let (comb, input) = match (&p.lines, &p.expr) {
        (Some(l), None) => {
            let comb = parse_lines(l)?;
            let back = spectrum_recover(&comb.trace())?;
            if back != comb {
                return Err(CliError::Unsupported(format!("recovered {back} differs from {comb}")));
            }
            (comb, l.clone())
        }
        (None, Some(_)) => {
            let expr = prepare(p)?;
            (spectrum_recover(&to_exppoly(&expr, &p.var)?)?, expr.to_string())
        }
        _ => return Err(CliError::Config("give either a heat-trace expression or --lines".into())),
    };
    let mut report = Report::new(CommandId::Spectrum, &input, "delta-shift");
    report.expression = Some(comb.to_string());
    report.detail("heat trace", comb.trace().display_in(&p.var));
    report.detail("total weight", comb.total_weight().to_string());
    if let Some(t) = p.at.as_deref() {
        let t = constant_from_text(t)?.re_f64();
        report.value = Some(Scalar::float(C64::new(heat_trace(&comb, t)?, 0.0)));
    }
    if let Some(shape) = cfg.reg {
        let (lo, hi) = match (comb.lines().first(), comb.lines().last()) {
            (Some(a), Some(b)) => (a.0.re_f64().min(0.0) - 1.0, b.0.re_f64() + 1.0),
            _ => (0.0, 1.0),
        };
        let dx = 1e-3;
        let grid: Vec<f64> = (0..=((hi - lo) / dx).round() as usize).map(|i| lo + i as f64 * dx).collect();
        let v = comb_render(&comb, &RegScheme { width: None, ..scheme(shape) }, &grid)?;
        let mass: f64 = v.iter().sum::<f64>() * dx;
        let total = comb.total_weight().re_f64();
        report.detail("rendered mass", format!("{} on [{lo}, {hi}] ({shape})", decimal(mass)));
        if (mass - total).abs() > 1e-3 {
            report.verified = false;
            report.diagnostics.notes.push("rendered mass differs from the total weight by more than 1e-3".into());
        }
    }
    if cfg.oracle {
        report.diagnostics.notes.push("spectrum recovery is exact; no oracle comparison".into());
    }
    Ok(report)
}

fn ftc(cfg: &RunConfig, p: &Payload) -> Result<Report, CliError> {
    let expr = prepare(p)?;
    let a = required(&p.from, "--from")?;
    let b = required(&p.to, "--to")?;
    let center = (&a + &b) / Scalar::int(2);
    let f = to_series(&expr, &p.var, &center, cfg.order)?;
    let c = ftc_check(&f, &a, &b, cfg.tol)?;
    let mut report = Report::new(CommandId::FtcCheck, &expr.to_string(), "series");
    report.value = Some(c.lhs.clone());
    report.detail("f(b) - f(a)", c.rhs.to_string());
    report.detail("residual", decimal(c.residual));
    report.diagnostics.truncation_order = Some(cfg.order);
    report.verified = c.residual <= cfg.tol;
    Ok(report)
}

/// Kernel class of an expression, exposed for the selftest.
pub fn class_of(text: &str, params: &[(&str, &str)]) -> Result<KernelClass, CliError> {
    let p = Payload {
        params: params.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        ..Payload::expression(text)
    };
    to_class(&prepare(&p)?, "x")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_args;

    fn run(args: &[&str]) -> Result<Report, CliError> {
        let mut v = vec!["diffint"];
        v.extend_from_slice(args);
        let (cfg, p) = parse_args(v).unwrap();
        run_command(&cfg, &p)
    }

    #[test]
    fn spec_examples() {
        let r = run(&["integrate", "--domain", "real", "--route", "delta", "--oracle", "sin(x)/x"]).unwrap();
        assert!((r.value.unwrap().re_f64() - PI).abs() < 1e-12);
        assert!(r.oracle.unwrap().delta < 1e-8);
        assert!(r.verified);
        let r = run(&["invlaplace", "1/(x-2)"]).unwrap();
        assert_eq!(r.expression.as_deref(), Some("exp(2*x)"));
        let r = run(&["integrate", "--from", "0", "--to", "0", "exp(x)"]).unwrap();
        assert_eq!(r.value.unwrap(), Scalar::zero());
    }

    #[test]
    fn auto_escalates_to_split_for_rational_integrands() {
        let r = run(&["integrate", "--domain", "real", "--order", "200", "--tol", "1e-6", "1/(1+x^2)"]).unwrap();
        assert_eq!(r.route, "split");
        assert!((r.value.unwrap().re_f64() - PI).abs() < 1e-6);
    }

    #[test]
    fn split_pieces_stay_clear_of_poles() {
        let r = run(&["integrate", "--domain", "real", "1/(1+x^2)^2"]).unwrap();
        assert!((r.value.unwrap().re_f64() - PI / 2.0).abs() < 1e-12);
        let r = run(&["integrate", "--domain", "real", "x^2/(x^4+1)"]).unwrap();
        assert!((r.value.unwrap().re_f64() - PI / 2f64.sqrt()).abs() < 1e-12);
        let r = run(&["integrate", "--from", "0", "--to", "3", "1/(1+x^2)"]).unwrap();
        assert_eq!(r.route, "split");
        assert!((r.value.unwrap().re_f64() - 3f64.atan()).abs() < 1e-12);
        assert!(matches!(
            run(&["integrate", "--domain", "real", "1/(x^2-1)"]),
            Err(CliError::Engine(Error::Divergent(_)))
        ));
    }

    #[test]
    fn fraction_display() {
        let r = run(&["invlaplace", "(x+3)/((x-1)^2*(x+2))"]).unwrap();
        assert_eq!(r.details[0].1, "4/(3*(x - 1)^2) - 1/(9*(x - 1)) + 1/(9*(x + 2))");
        let r = run(&["laplace", "--at", "2", "sqrt(1+x)"]).unwrap();
        assert!(r.expression.unwrap().starts_with("1/x + 1/(2*x^2) - 1/(4*x^3)"));
    }

    #[test]
    fn parameters_are_substituted() {
        let r = run(&["integrate", "--domain", "real", "--param", "t=-2.5", "(1-cos(t*x))/x^2"]).unwrap();
        assert!((r.value.unwrap().re_f64() - 2.5 * PI).abs() < 1e-9);
        assert!(run(&["integrate", "--domain", "real", "(1-cos(t*x))/x^2", "--var", "y"]).is_err());
    }

    #[test]
    fn series_route_about_the_midpoint() {
        let r = run(&["integrate", "--from", "1", "--to", "2", "--route", "series", "1/x"]).unwrap();
        assert!((r.value.unwrap().re_f64() - 2f64.ln()).abs() < 1e-8);
    }

    #[test]
    fn ambiguous_reciprocal() {
        let e = run(&["integrate", "--from", "-1", "--to", "1", "1/x", "--constant", "symbolic"]).unwrap_err();
        assert_eq!(e.to_string(), "non-cancelling integration constant / pole prescription required");
        let v =
            |c: &str| run(&["integrate", "--from", "-1", "--to", "1", "1/x", "--constant", c]).unwrap().value.unwrap();
        assert_eq!(v("value=2") - v("value=0"), Scalar::int(2));
    }

    #[test]
    fn transforms() {
        let r = run(&["fourier", "--at", "0.7", "--oracle", "exp(-x^2/2)"]).unwrap();
        assert!((r.value.unwrap().re_f64() - (-0.245f64).exp()).abs() < 1e-12);
        assert!(r.verified, "{:?}", r.oracle);
        let r = run(&["laplace", "--at", "2", "--oracle", "x^2*exp(-x)"]).unwrap();
        assert_eq!(r.value.unwrap(), Scalar::ratio(2, 27));
        assert!(r.verified);
        let r = run(&["laplace", "x^3"]).unwrap();
        assert_eq!(r.expression.as_deref(), Some("6/x^4"));
        let r = run(&["laplace", "--at", "10", "1/(1+x)"]).unwrap();
        assert_eq!(r.route, "term-wise");
        assert!(r.diagnostics.notes.iter().any(|n| n == ASYMPTOTIC_NOTE));
        let r = run(&["invlaplace", "--oracle", "1/(x^2+1)"]).unwrap();
        assert_eq!(r.expression.as_deref(), Some("sin(x)"));
        assert!(r.verified);
    }

    #[test]
    fn spectrum_and_ftc() {
        let r = run(&["spectrum", "--lines", "1:1,2:1", "--at", "1", "--reg", "gaussian"]).unwrap();
        assert!((r.value.unwrap().re_f64() - 0.5032147244).abs() < 1e-10);
        assert_eq!(r.expression.as_deref(), Some("{(1, 1), (2, 1)}"));
        assert!(r.verified);
        let r = run(&["spectrum", "--var", "t", "exp(-t) + 3*exp(-5*t/2)"]).unwrap();
        assert_eq!(r.expression.as_deref(), Some("{(1, 1), (5/2, 3)}"));
        let r = run(&["ftc-check", "--from", "-1", "--to", "1", "--order", "30", "exp(x)"]).unwrap();
        assert!(r.verified);
    }

    #[test]
    fn route_domain_mismatch_is_a_config_error() {
        assert!(matches!(
            run(&["integrate", "--from", "0", "--to", "1", "--route", "w", "x"]),
            Err(CliError::Config(_))
        ));
    }
}
