use diffint::laplace::{
    laplace_forward, laplace_inverse_rational, laplace_roundtrip_check, partial_fractions, recombine, spectrum_recover,
    ExpPoly, ExpTerm, SpectralComb, DEFAULT_POLE_ORDER_CAP,
};
use diffint::Scalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_exppoly(rng: &mut ChaCha8Rng) -> ExpPoly {
    let n = rng.gen_range(1..=6);
    ExpPoly::new(
        (0..n)
            .map(|_| ExpTerm {
                weight: Scalar::ratio(
                    rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 },
                    rng.gen_range(1..=4),
                ),
                power: rng.gen_range(0..=4),
                rate: Scalar::ratio(-rng.gen_range(1..=50), 10),
            })
            .collect(),
    )
}

#[test]
fn roundtrip_is_exact_on_random_exppolys() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..100 {
        let f = random_exppoly(&mut rng);
        assert_eq!(laplace_roundtrip_check(&f).unwrap(), 0.0, "instance {i}: {f}");
    }
}

#[test]
fn partial_fractions_recombine_on_random_images() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let r = laplace_forward(&random_exppoly(&mut rng)).unwrap().rational;
        let pf = partial_fractions(&r, DEFAULT_POLE_ORDER_CAP).unwrap();
        assert_eq!(recombine(&pf).unwrap(), r);
    }
}

#[test]
fn transforms_are_linear() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let f = random_exppoly(&mut rng);
        let g = random_exppoly(&mut rng);
        let c = Scalar::ratio(rng.gen_range(-5..=5), 3);
        let lhs = laplace_forward(&f.add(&g.scale(&c))).unwrap().rational;
        let (lf, lg) = (laplace_forward(&f).unwrap(), laplace_forward(&g).unwrap());
        for x in [Scalar::int(1), Scalar::ratio(7, 3), Scalar::int(11)] {
            let rhs = lf.eval(&x).unwrap() + &c * lg.eval(&x).unwrap();
            assert_eq!(lhs.eval(&x).unwrap(), rhs);
        }
        let back = laplace_inverse_rational(&lhs).unwrap();
        assert_eq!(back, f.add(&g.scale(&c)));
    }
}

#[test]
fn shift_law() {
    // L[e^{ax} f](x) = L[f](x − a)
    let f = ExpPoly::new(vec![
        ExpTerm { weight: Scalar::int(2), power: 1, rate: Scalar::int(-1) },
        ExpTerm { weight: Scalar::int(-1), power: 3, rate: Scalar::ratio(-1, 2) },
    ]);
    let a = Scalar::ratio(3, 4);
    let shifted = ExpPoly::new(f.terms().iter().map(|t| ExpTerm { rate: &t.rate + &a, ..t.clone() }).collect());
    let x = Scalar::int(7);
    let lhs = laplace_forward(&shifted).unwrap().eval(&x).unwrap();
    let rhs = laplace_forward(&f).unwrap().eval(&(&x - &a)).unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn spectrum_recovery_on_random_combs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let n = rng.gen_range(1..=6);
        let lines = (0..n)
            .map(|_| {
                (Scalar::ratio(rng.gen_range(1..=200), 20), Scalar::ratio(rng.gen_range(1..=9), rng.gen_range(1..=3)))
            })
            .collect();
        let spec = SpectralComb::new(lines).unwrap();
        assert_eq!(spectrum_recover(&spec.trace()).unwrap(), spec);
    }
}
