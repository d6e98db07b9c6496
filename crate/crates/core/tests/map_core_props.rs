use fab_core::dd::Dd;
use fab_core::map_core::{
    apply_f, classify, is_generic, jacobian_det, sigma, tau, ChartPoint, Direction, ExceptionalCurve, Incidence,
    Params, VCurve,
};
use fab_core::scalar::rat;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn q() -> impl Strategy<Value = BigRational> {
    (-400i64..400, 1i64..60).prop_map(|(n, d)| rat(n, d))
}

fn params() -> impl Strategy<Value = Params> {
    (q(), q()).prop_map(|(a, b)| Params::new(a, b))
}

fn off_exceptional(p: &ChartPoint<BigRational>, pa: &Params) -> bool {
    classify(p, pa).is_regular()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn involutions_and_inverse(pa in params(), x in q(), y in q()) {
        let p = ChartPoint::affine(x.clone(), y.clone());
        prop_assume!(off_exceptional(&p, &pa));
        let s = sigma(&p, &pa).unwrap();
        prop_assert_eq!(sigma(&s, &pa).unwrap(), p.clone());
        let (tx, ty) = tau(&x, &y, &pa);
        prop_assert_eq!(tau(&tx, &ty, &pa), (x.clone(), y.clone()));
        let fp = apply_f(&p, &pa, Direction::Forward).unwrap();
        prop_assert_eq!(apply_f(&fp, &pa, Direction::Backward).unwrap(), p.clone());
        let bp = apply_f(&p, &pa, Direction::Backward).unwrap();
        prop_assert_eq!(apply_f(&bp, &pa, Direction::Forward).unwrap(), p);
    }

    #[test]
    fn two_form_is_invariant(pa in params(), x in q(), y in q()) {
        let p = ChartPoint::affine(x.clone(), y.clone());
        prop_assume!(off_exceptional(&p, &pa));
        let d = jacobian_det(&x, &y, &pa).unwrap();
        let ChartPoint::Affine { x: fx, .. } = apply_f(&p, &pa, Direction::Forward).unwrap() else {
            return Err(TestCaseError::fail("image left the affine chart"));
        };
        prop_assert_eq!(d * &x, fx);
    }

    #[test]
    fn c1_plus_collapses(pa in params(), x in q()) {
        // (x-1)(y-1) = 1
        prop_assume!(x != rat(1, 1) && x != rat(0, 1));
        let y = rat(1, 1) + rat(1, 1) / (&x - rat(1, 1));
        prop_assume!(y != rat(0, 1));
        let img = apply_f(&ChartPoint::affine(x, y), &pa, Direction::Forward).unwrap();
        prop_assert_eq!(img, ChartPoint::affine(rat(0, 1), &pa.a + rat(1, 1)));
    }

    #[test]
    fn c0_plus_collapses_in_the_limit(pa in params(), x in q(), k in 1u32..12) {
        prop_assume!(x != rat(0, 1));
        let img = apply_f(&ChartPoint::affine(x.clone(), rat(0, 1)), &pa, Direction::Forward).unwrap();
        prop_assert_eq!(img, ChartPoint::on(VCurve::V5, pa.a.clone()));
        // Approaching C0+ along (x, eps) the V5 coordinate y - bx tends to a.
        let eps = BigRational::new(BigInt::from(1), BigInt::from(10).pow(k));
        let ChartPoint::Affine { x: fx, y: fy } =
            apply_f(&ChartPoint::affine(x.clone(), eps.clone()), &pa, Direction::Forward).unwrap() else {
            return Err(TestCaseError::fail("image left the affine chart"));
        };
        let t5 = fy - &pa.b * fx;
        prop_assert_eq!(t5 - &pa.a, &eps - &eps / x);
    }
}

#[test]
fn chart_coherence_at_infinity() {
    let pa = Params::from_ints(-2, 1);
    let m = fab_core::map_core::FamilyMap::<Dd>::new(&pa);
    for t0 in [-3.0, -0.5, 0.25, 2.0, 7.0] {
        let x = Dd::from_f64(1e12);
        let y = x * t0;
        let (u, v) = m.forward_raw(&x, &y).unwrap();
        let slope = (v / u).to_f64();
        assert!((slope - (1.0 - t0)).abs() < 1e-8, "t0={t0} slope={slope}");
    }
}

#[test]
fn genericity_matches_brute_force_scan() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut samples: Vec<(i64, i64)> = (0..80).map(|_| (rng.gen_range(-50..50), rng.gen_range(1..40))).collect();
    // Exceptional values of both kinds so the scan has something to find.
    for n in [0i64, 1, 2, 5, 17, 999, 5000, 123_456, 999_999, 2] {
        samples.push((-n, 2 * n + 2));
        samples.push((n - 1, n + 1));
    }
    for (p, d) in samples {
        let a = rat(p, d);
        let (p, d) = (a.numer().clone(), a.denom().clone());
        let (p, d): (i128, i128) = (p.try_into().unwrap(), d.try_into().unwrap());
        // (n+1)(2a+1) = 1 and a+1+n(a-1) = 0 over integers.
        let scan = (0..=1_000_000i128).find(|&n| (n + 1) * (2 * p + d) == d || p + d + n * (p - d) == 0);
        let pa = Params::new(a.clone(), rat(1, 1));
        let (generic, w) = is_generic(&pa, 1_000_000);
        assert_eq!(generic, scan.is_none(), "a = {a}");
        assert_eq!(w.map(|w| w.n as i128), scan, "a = {a}");
    }
}

#[test]
fn composite_status_at_reference_point() {
    let pa = Params::from_ints(-2, 1);
    let s = classify(&ChartPoint::affine(rat(1, 1), rat(0, 1)), &pa);
    assert!(s.contains(Incidence::OnExceptionalPlus(ExceptionalCurve::C0)));
    assert!(s.contains(Incidence::OnExceptionalMinus(ExceptionalCurve::C0)));
    assert_eq!(s.incidences().len(), 2);
}
