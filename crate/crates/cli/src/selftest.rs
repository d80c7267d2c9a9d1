//! Built-in acceptance checks, run by `diffint selftest` and by the
//! acceptance test target.

use crate::commands::{class_of, run_command, ORACLE_AGREEMENT};
use crate::config::{CommandId, DomainChoice, Payload, RouteChoice, RunConfig};
use crate::lower::{outer_substitution, rational_series, to_rational};
use crate::report::{decimal, Report};
use crate::CliError;
use diffint::integrate::{
    ftc_check, integrate_finite, integrate_finite_split, integrate_real_line_reg, integrate_w_route, Piece, RegScheme,
    Route, DEFAULT_W_POINTS,
};
use diffint::laplace::{
    comb_render, laplace_forward, laplace_inverse_rational, laplace_roundtrip_check, spectrum_recover, ExpPoly,
    ExpTerm, RationalFunction, SpectralComb,
};
use diffint::opcalc::{commutator_derivative_check, ConstantPolicy};
use diffint::{series_known, PowerSeries, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

pub const CRITERIA: [(u32, &str); 9] = [
    (1, "exact kernel routes"),
    (2, "series and split routes"),
    (3, "Laplace pairs and round trips"),
    (4, "spectrum recovery"),
    (5, "operator algebra"),
    (6, "w-route independence"),
    (7, "regularization shapes agree"),
    (8, "oracle agreement"),
    (9, "integration constants"),
];

const SEED: u64 = 0x5eed_d1ff;

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub fn run_all() -> Vec<Outcome> {
    CRITERIA.iter().map(|(id, _)| criterion(*id)).collect()
}

pub fn report(outcomes: &[Outcome]) -> Report {
    let mut r = Report::new(CommandId::Selftest, "criteria 1-9", "selftest");
    for o in outcomes {
        r.detail(
            &format!("criterion {}", o.id),
            format!("{} {} ({})", if o.passed { "PASS" } else { "FAIL" }, o.title, o.detail),
        );
    }
    r.verified = outcomes.iter().all(|o| o.passed);
    r
}

pub fn criterion(id: u32) -> Outcome {
    let title = CRITERIA.iter().find(|(i, _)| *i == id).map_or("unknown criterion", |(_, t)| *t);
    let checked = match id {
        1 => exact_routes(),
        2 => series_routes(),
        3 => laplace_pairs(),
        4 => spectra(),
        5 => operator_algebra(),
        6 => w_route(),
        7 => reg_shapes(),
        8 => oracle_agreement(),
        9 => constants(),
        _ => Err(format!("no criterion {id}")),
    };
    match checked {
        Ok(detail) => Outcome { id, title, passed: true, detail },
        Err(detail) => Outcome { id, title, passed: false, detail },
    }
}

type Check = Result<String, String>;

fn run(cmd: CommandId, expr: &str, edit: impl FnOnce(&mut RunConfig, &mut Payload)) -> Result<Report, CliError> {
    let mut cfg = RunConfig::new(cmd);
    let mut p = Payload::expression(expr);
    edit(&mut cfg, &mut p);
    run_command(&cfg, &p)
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn real(r: &Report) -> f64 {
    r.value.as_ref().map_or(f64::NAN, Scalar::re_f64)
}

/// An integral with a known value and the command-line setup producing it.
struct Case {
    label: String,
    expr: &'static str,
    params: Vec<(String, String)>,
    domain: DomainChoice,
    route: RouteChoice,
    bounds: Option<(&'static str, &'static str)>,
    order: usize,
    tol: f64,
    expected: f64,
}

impl Case {
    fn line(expr: &'static str, domain: DomainChoice, expected: f64) -> Case {
        Case {
            label: expr.to_string(),
            expr,
            params: Vec::new(),
            domain,
            route: RouteChoice::Auto,
            bounds: None,
            order: 64,
            tol: 1e-8,
            expected,
        }
    }

    fn run(&self, edit: impl FnOnce(&mut RunConfig)) -> Result<Report, String> {
        run(CommandId::Integrate, self.expr, |cfg, p| {
            cfg.route = self.route;
            cfg.order = self.order;
            cfg.tol = self.tol;
            p.domain = self.domain;
            p.params = self.params.clone();
            if let Some((a, b)) = self.bounds {
                p.from = Some(a.into());
                p.to = Some(b.into());
            }
            edit(cfg);
        })
        .map_err(|e| format!("{}: {e}", self.label))
    }
}

fn exact_cases() -> Vec<Case> {
    let mut cases = vec![
        Case::line("sin(x)/x", DomainChoice::HalfPlus, PI / 2.0),
        Case::line("sin(x)/x", DomainChoice::Real, PI),
        Case::line("sin(x)^5/x", DomainChoice::Real, 3.0 * PI / 8.0),
        Case::line("sin(x)^2/x^2", DomainChoice::Real, PI),
    ];
    for t in ["-2.5", "0.5", "3"] {
        let tv: f64 = t.parse().unwrap();
        let mut c = Case::line("(1-cos(t*x))/x^2", DomainChoice::Real, PI * tv.abs());
        c.label = format!("(1-cos(t*x))/x^2 at t = {t}");
        c.params = vec![("t".into(), t.into())];
        cases.push(c);
    }
    cases.push(Case::line("x^2*cos(x)*exp(-x^2)", DomainChoice::Real, PI.sqrt() * (-0.25f64).exp() / 4.0));
    cases
}

fn series_cases() -> Vec<Case> {
    let mut finite = Case::line("1/(1+x^2)", DomainChoice::Finite, PI / 2.0);
    finite.route = RouteChoice::Series;
    finite.bounds = Some(("-1", "1"));
    finite.order = 200;
    finite.tol = 1e-6;
    let mut split = Case::line("1/(1+x^2)", DomainChoice::Real, PI);
    split.route = RouteChoice::Split;
    split.order = 200;
    split.tol = 1e-6;
    vec![finite, split]
}

fn exact_routes() -> Check {
    for c in exact_cases() {
        let r = c.run(|_| ())?;
        ensure(
            r.value.as_ref().is_some_and(Scalar::is_exact) || r.route == "delta" || r.route.starts_with("half"),
            || format!("{}: route {} is not exact", c.label, r.route),
        )?;
        let err = (real(&r) - c.expected).abs();
        ensure(err <= 1e-9, || format!("{}: error {} via {}", c.label, decimal(err), r.route))?;
    }
    Ok(format!("{} integrals within 1e-9", exact_cases().len()))
}

fn series_routes() -> Check {
    for c in series_cases() {
        let r = c.run(|_| ())?;
        let err = (real(&r) - c.expected).abs();
        ensure(err <= 1e-6, || format!("{} on route {}: error {}", c.label, r.route, decimal(err)))?;
    }
    // Partial sums of the truncated pieces are exact: 4 Σ_{k≤n} (−1)^k/(2k+1).
    let r = to_rational(&crate::expr::parse_expression("1/(1+x^2)").map_err(|e| e.to_string())?, "x")
        .map_err(|e| e.to_string())?;
    let outer = outer_substitution(&r).map_err(|e| e.to_string())?;
    for n in 0..=30usize {
        let truncated = |r: &RationalFunction| -> Result<PowerSeries, String> {
            let s = rational_series(r, 2 * n).map_err(|e| e.to_string())?;
            let mut c = s.scalars();
            c.truncate(2 * n + 1);
            c.extend(std::iter::repeat_n(Scalar::zero(), 8));
            Ok(PowerSeries::from_scalars(c))
        };
        let pieces = [
            Piece { integrand: truncated(&r)?, a: Scalar::int(-1), b: Scalar::one(), label: "inner".into() },
            Piece { integrand: truncated(&outer)?, a: Scalar::int(-1), b: Scalar::one(), label: "outer".into() },
        ];
        let got = integrate_finite_split(&pieces, 1e-12).map_err(|e| format!("n = {n}: {e}"))?.value;
        let want = (0..=n as i64)
            .fold(Scalar::zero(), |acc, k| acc + Scalar::ratio(if k % 2 == 0 { 4 } else { -4 }, 2 * k + 1));
        ensure(got == want, || format!("partial sum n = {n}: {got} ≠ {want}"))?;
    }
    Ok("series ∫₋₁¹ and split ∫ℝ of 1/(1+x²) within 1e-6; 31 exact partial sums".into())
}

fn laplace_pairs() -> Check {
    for n in 0..=20u32 {
        let img = laplace_forward(&ExpPoly::term(Scalar::one(), n, Scalar::zero())).map_err(|e| e.to_string())?;
        let want = RationalFunction::pole(Scalar::factorial(n), &Scalar::zero(), n + 1);
        ensure(img.rational == want, || format!("L[x^{n}] = {}", img.rational.display_in("s")))?;
    }
    let poles = [Scalar::int(-3), Scalar::zero(), Scalar::int(2), Scalar::int(1) + Scalar::int(2) * Scalar::i()];
    for a in &poles {
        let f = laplace_inverse_rational(&RationalFunction::pole(Scalar::one(), a, 1)).map_err(|e| e.to_string())?;
        ensure(f == ExpPoly::term(Scalar::one(), 0, a.clone()), || {
            format!("inverse of 1/(s - {a}) = {}", f.display_in("x"))
        })?;
    }
    let r = run(CommandId::Invlaplace, "(2*x-2)/((x-1)^2+4)", |_, _| ()).map_err(|e| e.to_string())?;
    ensure(r.expression.as_deref() == Some("2*exp(x)*cos(2*x)"), || format!("conjugate pair gave {:?}", r.expression))?;

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for trial in 0..100 {
        let terms = (0..rng.gen_range(1..=6))
            .map(|_| ExpTerm {
                weight: Scalar::int(rng.gen_range(1..=9)) * Scalar::int(if rng.gen_bool(0.5) { 1 } else { -1 }),
                power: rng.gen_range(0..=4),
                rate: Scalar::ratio(-rng.gen_range(1..=50), 10),
            })
            .collect();
        let f = ExpPoly::new(terms);
        if f.is_zero() {
            continue;
        }
        let dev = laplace_roundtrip_check(&f).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(dev == 0.0, || format!("trial {trial}: {} deviates by {}", f.display_in("x"), decimal(dev)))?;
    }
    Ok("21 monomials, 4 poles, a conjugate pair and 100 random round trips exact".into())
}

fn spectra() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    for trial in 0..50 {
        let lines = (0..rng.gen_range(1..=6))
            .map(|_| (Scalar::ratio(rng.gen_range(1..=40), rng.gen_range(1..=4)), Scalar::int(rng.gen_range(1..=5))))
            .collect();
        let comb = SpectralComb::new(lines).map_err(|e| e.to_string())?;
        let back = spectrum_recover(&comb.trace()).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(back == comb, || format!("trial {trial}: {back} ≠ {comb}"))?;
        let hi = comb.lines().last().map_or(1.0, |l| l.0.re_f64()) + 1.0;
        let dx = 1e-3;
        let grid: Vec<f64> = (0..=((hi + 1.0) / dx) as usize).map(|i| -1.0 + i as f64 * dx).collect();
        let v = comb_render(&comb, &RegScheme::gaussian(), &grid).map_err(|e| e.to_string())?;
        let mass = v.iter().sum::<f64>() * dx;
        let total = comb.total_weight().re_f64();
        ensure((mass - total).abs() <= 1e-3, || format!("trial {trial}: mass {mass} vs {total}"))?;
    }
    Ok("50 random combs recovered exactly, rendered mass within 1e-3".into())
}

fn operator_algebra() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    for trial in 0..20 {
        let deg = rng.gen_range(0..=10);
        let mut coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-9..=9)).collect();
        // Trailing zeros mark the series as a finished polynomial.
        coeffs.extend([0; 12]);
        let f = PowerSeries::from_ints(&coeffs);
        let c = commutator_derivative_check(&f.truncate(deg), 24).map_err(|e| e.to_string())?;
        ensure(c.is_zero(), || format!("trial {trial}: commutator residual {c} for {coeffs:?}"))?;
        let ftc = ftc_check(&f, &Scalar::ratio(-3, 2), &Scalar::int(2), 1e-12).map_err(|e| e.to_string())?;
        ensure(ftc.lhs == ftc.rhs, || format!("trial {trial}: FTC {} ≠ {}", ftc.lhs, ftc.rhs))?;
    }
    for name in ["exp", "sin", "cos"] {
        let f = series_known(name, &[], 30).map_err(|e| e.to_string())?;
        let c = ftc_check(&f, &Scalar::int(-1), &Scalar::one(), 1e-12).map_err(|e| e.to_string())?;
        ensure(c.residual <= 1e-9, || format!("{name}: FTC residual {}", decimal(c.residual)))?;
        // The integral of the derivative must match the increment.
        let i =
            integrate_finite(&f.differentiate(), &Scalar::int(-1), &Scalar::one(), 1e-12).map_err(|e| e.to_string())?;
        ensure((&i.value - &c.rhs).norm() <= 1e-9, || format!("{name}: ∫ f′ vs f(b) − f(a)"))?;
    }
    Ok("commutator exact at N = 24 on 20 polynomials; FTC exact and ≤ 1e-9 on exp, sin, cos".into())
}

fn w_route() -> Check {
    let cases = [("sin(x)/x", PI), ("x^2*cos(x)*exp(-x^2)", PI.sqrt() * (-0.25f64).exp() / 4.0)];
    let mut spreads = Vec::new();
    for (expr, want) in cases {
        let class = class_of(expr, &[]).map_err(|e| e.to_string())?;
        let ev = class.evaluator().map_err(|e| e.to_string())?;
        let w = integrate_w_route(|x| ev.eval(x), &class.frequencies(), &DEFAULT_W_POINTS, 1e-8)
            .map_err(|e| format!("{expr}: {e}"))?;
        ensure(w.spread <= 1e-6, || format!("{expr}: spread {}", decimal(w.spread)))?;
        let err = (w.result.value.re_f64() - want).abs();
        ensure(err <= 1e-6, || format!("{expr}: error {}", decimal(err)))?;
        spreads.push(decimal(w.spread));
    }
    Ok(format!("spreads {}", spreads.join(", ")))
}

fn reg_shapes() -> Check {
    let mut worst: f64 = 0.0;
    for c in exact_cases().into_iter().filter(|c| c.domain == DomainChoice::Real) {
        let params: Vec<(&str, &str)> = c.params.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
        let class = class_of(c.expr, &params).map_err(|e| e.to_string())?;
        let mut values = Vec::new();
        for scheme in [RegScheme::gaussian(), RegScheme::sinc()] {
            let r = integrate_real_line_reg(&class, &scheme, &ConstantPolicy::Symbolic, 1e-6)
                .map_err(|e| format!("{} ({}): {e}", c.label, scheme.shape))?;
            ensure(r.route == Route::DeltaReg(scheme.shape), || format!("{}: route {}", c.label, r.route))?;
            let run = r.diagnostics.decreasing_run();
            ensure(run >= 3, || format!("{} ({}): only {run} decreasing differences", c.label, scheme.shape))?;
            values.push(r.value.re_f64());
        }
        let gap = (values[0] - values[1]).abs();
        ensure(gap <= 1e-4, || format!("{}: gaussian {} vs sinc {}", c.label, values[0], values[1]))?;
        ensure((values[0] - c.expected).abs() <= 1e-4, || format!("{}: {} vs {}", c.label, values[0], c.expected))?;
        worst = worst.max(gap);
    }
    Ok(format!("largest gaussian/sinc gap {}", decimal(worst)))
}

fn oracle_agreement() -> Check {
    let mut worst: f64 = 0.0;
    for c in exact_cases().into_iter().chain(series_cases()) {
        let r = c.run(|cfg| cfg.oracle = true)?;
        let o = r.oracle.as_ref().ok_or_else(|| format!("{}: no oracle result", c.label))?;
        ensure(o.converged, || format!("{}: oracle did not converge", c.label))?;
        ensure(o.delta <= ORACLE_AGREEMENT, || format!("{}: oracle differs by {}", c.label, decimal(o.delta)))?;
        ensure(r.verified, || format!("{}: not verified", c.label))?;
        worst = worst.max(o.delta);
    }
    Ok(format!("largest |delta| {}", decimal(worst)))
}

fn constants() -> Check {
    let reciprocal = |constant: ConstantPolicy| {
        run(CommandId::Integrate, "1/x", |cfg, p| {
            cfg.constant = constant;
            p.from = Some("-1".into());
            p.to = Some("1".into());
        })
    };
    match reciprocal(ConstantPolicy::Symbolic) {
        Err(e) => {
            ensure(e.to_string() == diffint::Error::NonCancellingConstant.to_string(), || format!("wrong error: {e}"))?
        }
        Ok(r) => return Err(format!("symbolic constant gave {:?}", r.value)),
    }
    let v0 = reciprocal(ConstantPolicy::Prescribed(Scalar::zero())).map_err(|e| e.to_string())?;
    for c in [Scalar::zero(), Scalar::one(), Scalar::ratio(5, 2)] {
        let v = reciprocal(ConstantPolicy::Prescribed(c.clone())).map_err(|e| e.to_string())?;
        ensure(real(&v).is_finite(), || format!("value=({c}) is not finite"))?;
        let shift = v.value.clone().unwrap() - v0.value.clone().unwrap();
        ensure(shift == c, || format!("value=({c}) shifts the result by {shift}"))?;
    }
    Ok("symbolic constant refused; prescribed constants shift the value exactly".into())
}
