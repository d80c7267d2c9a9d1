//! Direct evaluation of the special functions the operator routes need:
//! the exponential integrals, the sine and cosine integrals, erf, gamma and
//! the principal logarithm.

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialFn {
    Ei,
    Erf,
    Log,
    Gamma,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("{func:?} is not defined at {z}")]
    Domain { func: SpecialFn, z: Complex64 },
    #[error("{func:?} is only implemented for real arguments, got {z}")]
    ComplexUnsupported { func: SpecialFn, z: Complex64 },
}

/// Evaluates one of the supported special functions on the principal branch.
pub fn special_eval(func: SpecialFn, z: Complex64) -> Result<Complex64, SpecialError> {
    match func {
        SpecialFn::Ei => {
            if z == Complex64::new(0.0, 0.0) {
                return Err(SpecialError::Domain { func, z });
            }
            Ok(ei(z))
        }
        SpecialFn::Log => {
            if z == Complex64::new(0.0, 0.0) {
                return Err(SpecialError::Domain { func, z });
            }
            Ok(principal_ln(z))
        }
        SpecialFn::Erf => {
            if z.im != 0.0 {
                return Err(SpecialError::ComplexUnsupported { func, z });
            }
            Ok(Complex64::new(erf(z.re), 0.0))
        }
        SpecialFn::Gamma => {
            if z.im != 0.0 {
                return Err(SpecialError::ComplexUnsupported { func, z });
            }
            if z.re <= 0.0 && z.re.fract() == 0.0 {
                return Err(SpecialError::Domain { func, z });
            }
            Ok(Complex64::new(statrs::function::gamma::gamma(z.re), 0.0))
        }
    }
}

/// Principal logarithm with `Im ∈ (-π, π]`. A negative zero imaginary part
/// is treated as zero so that `ln(-1) = iπ`.
pub fn principal_ln(z: Complex64) -> Complex64 {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    Complex64::new(z.re, im).ln()
}

pub fn erf(x: f64) -> f64 {
    statrs::function::erf::erf(x)
}

/// Exponential integral `E1` on the principal branch (cut along the
/// negative real axis, continuous from above).
pub fn e1(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        return Complex64::new(f64::INFINITY, 0.0);
    }
    // The power series loses about exp(|z| + Re z) relative digits; the
    // continued fraction is used wherever that loss would be noticeable.
    if r < 2.0 || r + z.re < 10.0 {
        e1_series(z)
    } else {
        e1_continued_fraction(z)
    }
}

fn e1_series(z: Complex64) -> Complex64 {
    // E1(z) = -γ - ln z - Σ_{n≥1} (-z)^n / (n n!)
    let mut sum = Complex64::new(0.0, 0.0);
    let mut power = Complex64::new(1.0, 0.0);
    for n in 1..500 {
        power = power * (-z) / n as f64;
        let term = power / n as f64;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    -EULER_GAMMA - principal_ln(z) - sum
}

fn e1_continued_fraction(z: Complex64) -> Complex64 {
    // Modified Lentz evaluation of e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - ...)))
    let tiny = Complex64::new(1e-30, 0.0);
    let mut b = z + 1.0;
    let mut c = Complex64::new(1.0, 0.0) / tiny;
    let mut d = Complex64::new(1.0, 0.0) / b;
    let mut h = d;
    for i in 1..20_000 {
        let an = -(i as f64) * (i as f64);
        b += 2.0;
        d = Complex64::new(1.0, 0.0) / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 4.0 * f64::EPSILON {
            break;
        }
    }
    h * (-z).exp()
}

/// Exponential integral `Ei`. On the real axis this is the principal-value
/// integral `PV ∫_{-∞}^x e^t/t dt`; off the axis it is the analytic
/// continuation `γ + ln z + Σ z^n/(n n!)` with the principal logarithm.
pub fn ei(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        return Complex64::new(ei_real(z.re), 0.0);
    }
    let sign = if z.im > 0.0 { 1.0 } else { -1.0 };
    -e1(-z) + Complex64::new(0.0, sign * PI)
}

/// Real exponential integral (principal value for positive arguments).
pub fn ei_real(x: f64) -> f64 {
    if x == 0.0 {
        return f64::NEG_INFINITY;
    }
    if x < 0.0 {
        return -e1(Complex64::new(-x, 0.0)).re;
    }
    if x < 40.0 {
        let mut sum = 0.0;
        let mut power = 1.0;
        for n in 1..400 {
            power *= x / n as f64;
            let term = power / n as f64;
            sum += term;
            if term < 1e-17 * sum.abs() {
                break;
            }
        }
        EULER_GAMMA + x.ln() + sum
    } else {
        // Asymptotic series e^x/x Σ k!/x^k, truncated at its smallest term.
        let mut sum = 1.0;
        let mut term = 1.0;
        for k in 1..200 {
            let next = term * k as f64 / x;
            if next > term {
                break;
            }
            term = next;
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        x.exp() / x * sum
    }
}

/// Sine integral `Si(x) = ∫_0^x sin t / t dt`.
pub fn si(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if x < 0.0 {
        return -si(-x);
    }
    e1(Complex64::new(0.0, x)).im + PI / 2.0
}

/// Cosine integral `Ci(x) = γ + ln x + ∫_0^x (cos t - 1)/t dt` for `x > 0`.
pub fn ci(x: f64) -> f64 {
    -e1(Complex64::new(0.0, x)).re
}

// Reference values are quoted to their published precision.
#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Reference values computed with 30-digit arbitrary-precision arithmetic.
    const EI_REFERENCE: &[(f64, f64)] = &[
        (1.0, 1.895_117_816_355_936_8),
        (-1.0, -0.219_383_934_395_520_27),
        (10.0, 2_492.228_976_241_877_8),
        (-10.0, -4.156_968_929_685_324e-6),
        (50.0, 1.058_563_689_713_169_1e20),
        (-50.0, -3.783_264_029_550_459e-24),
        (0.1, -1.622_812_813_969_276_6),
        (-0.5, -0.559_773_594_776_160_8),
        (25.0, 3_005_950_906.525_548_7),
        (3.0, 9.933_832_570_625_416),
        (-3.0, -0.013_048_381_094_197_037),
        (40.0, 6.039_718_263_611_241_6e15),
        (45.0, 7.943_916_035_704_453_8e17),
        (-45.0, -6.225_690_809_462_383_6e-22),
    ];

    #[test]
    fn real_ei_matches_reference() {
        for &(x, expected) in EI_REFERENCE {
            assert_relative_eq!(ei_real(x), expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn ei_one_via_special_eval() {
        let v = special_eval(SpecialFn::Ei, Complex64::new(1.0, 0.0)).unwrap();
        assert!((v.re - 1.895_117_816_4).abs() < 1e-10);
    }

    #[test]
    fn ei_one_agrees_with_principal_value_quadrature() {
        // Ei(1) = ∫_{-∞}^{-1} e^t/t dt + PV ∫_{-1}^{1} e^t/t dt
        //       = -E1(1) + ∫_0^1 (e^t - e^{-t})/t dt
        use crate::quad::quad_finite;
        let shi2 = quad_finite(|t| if t == 0.0 { 2.0 } else { (t.exp() - (-t).exp()) / t }, 0.0, 1.0, 1e-14);
        let e1_one = quad_finite(|t| (-1.0 / t).exp() / t, 0.0, 1.0, 1e-14);
        // ∫_1^∞ e^{-t}/t dt with t = 1/s
        let value = shi2.value - e1_one.value;
        assert!((value - ei_real(1.0)).abs() < 1e-12);
    }

    #[test]
    fn complex_e1_matches_reference() {
        let cases = [
            ((0.0, 1.0), (-0.337_403_922_900_968_1, -0.624_713_256_427_713_6)),
            ((0.0, -1.0), (-0.337_403_922_900_968_1, 0.624_713_256_427_713_6)),
            ((1.0, 2.0), (-0.126_784_285_591_559_67, -0.035_081_582_928_187_016)),
            ((-3.0, 4.0), (4.154_091_651_642_69, 1.152_825_966_434_564_2)),
            ((-10.0, 30.0), (633.946_547_999_647, -302.965_459_323_125_2)),
            ((-30.0, 1.0), (-209_840_771_895.599_3, 303_224_387_102.124_45)),
            ((0.5, 0.5), (0.257_866_457_137_983_8, -0.396_690_435_455_815_2)),
            ((20.0, -5.0), (4.771_137_451_576_535e-11, -8.290_265_240_512_695e-11)),
            ((-50.0, 32.0), (-8.860_083_203_267_454e19, 4.670_659_796_923_201e17)),
            ((0.0, 12.0), (0.049_780_006_884_113_676, -0.065_825_085_268_523_25)),
        ];
        for ((zr, zi), (er, eim)) in cases {
            let got = e1(Complex64::new(zr, zi));
            let expected = Complex64::new(er, eim);
            let rel = (got - expected).norm() / expected.norm();
            assert!(rel < 1e-11, "E1({zr}+{zi}i): got {got}, rel {rel:e}");
        }
    }

    #[test]
    fn sine_and_cosine_integrals() {
        let cases = [
            (1.0, 0.946_083_070_367_183, 0.337_403_922_900_968_1),
            (10.0, 1.658_347_594_218_874, -0.045_456_433_004_455_37),
            (1e4, 1.570_891_545_385_961_9, -3.055_191_672_448_521_3e-5),
            (0.01, 0.009_999_944_444_611_111, -4.027_979_520_982_392),
            (2.5, 1.778_520_173_443_826_6, 0.285_871_196_365_383_5),
            (100.0, 1.562_225_466_889_056_3, -0.005_148_825_142_610_492),
        ];
        for (x, s, c) in cases {
            assert!((si(x) - s).abs() < 1e-13, "Si({x})");
            assert!((ci(x) - c).abs() < 1e-13 * c.abs().max(1.0), "Ci({x})");
            assert_eq!(si(-x), -si(x));
        }
    }

    #[test]
    fn complex_ei_continues_the_series() {
        // Ei(iy) = Ci(y) + i (Si(y) + π/2)
        let y = 1.3;
        let v = ei(Complex64::new(0.0, y));
        assert!((v.re - ci(y)).abs() < 1e-14);
        assert!((v.im - (si(y) + PI / 2.0)).abs() < 1e-14);
    }

    #[test]
    fn principal_branch_conventions() {
        let l = special_eval(SpecialFn::Log, Complex64::new(-1.0, 0.0)).unwrap();
        assert!((l - Complex64::new(0.0, PI)).norm() < 1e-15);
        let l = special_eval(SpecialFn::Log, Complex64::new(-1.0, -0.0)).unwrap();
        assert!((l.im - PI).abs() < 1e-15);
        assert_eq!(special_eval(SpecialFn::Erf, Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(0.0, 0.0));
        let g = special_eval(SpecialFn::Gamma, Complex64::new(5.0, 0.0)).unwrap();
        assert!((g.re - 24.0).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(special_eval(SpecialFn::Ei, Complex64::new(0.0, 0.0)).is_err());
        assert!(special_eval(SpecialFn::Log, Complex64::new(0.0, 0.0)).is_err());
        assert!(special_eval(SpecialFn::Gamma, Complex64::new(-2.0, 0.0)).is_err());
        assert!(special_eval(SpecialFn::Erf, Complex64::new(0.0, 1.0)).is_err());
    }
}
