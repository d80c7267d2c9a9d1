use diffint::integrate::{
    ftc_check, integrate_finite, integrate_finite_kernel, integrate_real_line, integrate_real_line_reg,
    integrate_two_sided, RegScheme,
};
use diffint::opcalc::{commutator_derivative_check, ConstantPolicy, KernelClass};
use diffint::{series_known, PowerSeries, Scalar};
use proptest::prelude::*;
use std::f64::consts::PI;

fn small_poly() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-9i64..=9, 1..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn interval_additivity(c in small_poly(), a in -4i64..4, b in -4i64..4, m in -4i64..4) {
        let mut coeffs = c.clone();
        coeffs.resize(c.len() + 4, 0);
        let f = PowerSeries::from_ints(&coeffs);
        let (a, b, m) = (Scalar::ratio(a, 2), Scalar::ratio(b, 2), Scalar::ratio(m, 2));
        let ab = integrate_finite(&f, &a, &b, 1e-12).unwrap().value;
        let bm = integrate_finite(&f, &b, &m, 1e-12).unwrap().value;
        let am = integrate_finite(&f, &a, &m, 1e-12).unwrap().value;
        prop_assert_eq!(ab + bm, am);
    }

    #[test]
    fn series_and_kernel_routes_agree(c in small_poly(), b in 1i64..5) {
        let mut coeffs = c.clone();
        coeffs.resize(c.len() + 4, 0);
        let f = PowerSeries::from_ints(&coeffs);
        let class = c.iter().enumerate().fold(KernelClass::zero(), |acc, (k, &ck)| {
            acc.add(&KernelClass::monomial(k as i32).scale(&Scalar::int(ck)))
        });
        let b = Scalar::int(b);
        let s = integrate_finite(&f, &Scalar::zero(), &b, 1e-12).unwrap().value;
        let k = integrate_finite_kernel(&class, &Scalar::zero(), &b, &ConstantPolicy::Symbolic).unwrap().value;
        prop_assert_eq!(s, k);
    }

    #[test]
    fn ftc_on_polynomials(c in small_poly(), a in -3i64..3, b in -3i64..3) {
        let mut coeffs = c.clone();
        coeffs.resize(c.len() + 4, 0);
        let f = PowerSeries::from_ints(&coeffs);
        let r = ftc_check(&f, &Scalar::int(a), &Scalar::int(b), 1e-12).unwrap();
        prop_assert_eq!(r.lhs, r.rhs);
    }

    #[test]
    fn commutator_vanishes_on_window(c in small_poly()) {
        let f = PowerSeries::from_ints(&c);
        let n = c.len() + 4;
        prop_assert_eq!(commutator_derivative_check(&f, n).unwrap(), Scalar::zero());
    }
}

#[test]
fn exact_partial_sums_match_leibniz() {
    let f = series_known("geometric_1_over_1_plus_x2", &[], 40).unwrap();
    let r = integrate_finite(&f, &Scalar::int(-1), &Scalar::one(), 1e-6).unwrap();
    let mut want = Scalar::zero();
    for (n, row) in r.diagnostics.rows.iter().enumerate() {
        // doubled: 4 Σ (−1)^n/(2n+1) over nonzero terms
        want = want + Scalar::ratio(if n % 2 == 0 { 2 } else { -2 }, 2 * n as i64 + 1);
        assert_eq!(row.estimate, want.to_c64());
    }
    assert!((r.value.re_f64() - PI / 2.0).abs() < 1e-6);
}

#[test]
fn real_line_routes_agree() {
    let sinc5 = KernelClass::sin(Scalar::one()).powi(5).mul(&KernelClass::monomial(-1));
    let p = ConstantPolicy::Symbolic;
    let want = 3.0 * PI / 8.0;
    let exact = integrate_real_line(&sinc5, &p).unwrap().value.re_f64();
    let two = integrate_two_sided(&sinc5, &p).unwrap().value.re_f64();
    let reg = integrate_real_line_reg(&sinc5, &RegScheme::sinc(), &p, 1e-7).unwrap().value.re_f64();
    for v in [exact, two, reg] {
        assert!((v - want).abs() < 1e-7, "{v}");
    }
}
