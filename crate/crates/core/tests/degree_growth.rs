use fab_core::degree_growth::*;
use fab_core::map_core::{apply_f, ChartPoint, Direction, Params};
use fab_core::scalar::rat;
use proptest::prelude::*;

#[test]
fn iterated_composition_in_both_orders() {
    let p = Params::from_ints(-2, 1);
    let f = f_homogeneous(&p);
    let r = Reducer::for_params(&p);
    let f2 = compose_reduce(&f, &f);
    assert_eq!(f2.degree(), 7);
    // Outer composition f∘f² needs the general gcd: f² contracts curves of
    // degree > 2.
    let (f3, stats) = compose_reduce_with(&f, &f2, &r);
    assert_eq!(f3.degree(), 16);
    let (f3_inner, _) = compose_with_f(&f2, &p);
    assert_eq!(f3_inner.degree(), 16);
    let (x, y) = (rat(5, 3), rat(-7, 2));
    assert_eq!(f3.eval_affine(&x, &y), f3_inner.eval_affine(&x, &y));
    assert!(stats.removed == 5);
    // Agrees with iterating the affine map.
    let mut q = ChartPoint::affine(x.clone(), y.clone());
    for _ in 0..3 {
        q = apply_f(&q, &p, Direction::Forward).unwrap();
    }
    let (u, v) = f3.eval_affine(&x, &y).unwrap();
    assert_eq!(ChartPoint::affine(u, v), q);
}

#[test]
fn reference_sequence_to_eight() {
    let p = Params::from_ints(-2, 1);
    let s = degree_sequence(&p, 8, DEFAULT_CEILING);
    assert!(!s.truncated);
    let d: Vec<i128> = s.degrees().iter().map(|&x| x as i128).collect();
    assert_eq!(d, predicted_degrees(8));
    assert_eq!(d, vec![1, 3, 7, 16, 35, 76, 164, 353, 759]);
    let ratio = s.records[8].ratio.unwrap();
    assert!((ratio - 2.1479).abs() < 0.05, "ratio {ratio}");
    assert!(recurrence_residuals(&d[2..]).iter().all(|&r| r == 0));
    // Composition bound, strict somewhere early.
    assert!(d.windows(2).all(|w| w[1] <= 3 * w[0]));
    assert!(d[..5].windows(2).any(|w| w[1] < 3 * w[0]));
    assert_eq!(s.first_drop, None);
}

#[test]
fn memory_guard_truncates() {
    let p = Params::from_ints(-2, 1);
    let s = degree_sequence(&p, 5, 3);
    assert!(s.truncated);
    assert_eq!(s.degrees(), vec![1, 3, 7, 16]);
}

#[test]
fn exceptional_parameter_drops_below_prediction() {
    // a = -1/4: f^4(C0+) lands on the indeterminacy point.
    let p = Params::new(rat(-1, 4), rat(1, 1));
    let s = degree_sequence(&p, 6, DEFAULT_CEILING);
    assert_eq!(s.first_drop, Some(5));
    assert_eq!(s.records[5].degree, 75);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn generic_parameters_follow_prediction(an in -9i64..9, ad in 1i64..5, bn in 1i64..7, bd in 1i64..4) {
        let p = Params::new(rat(an, ad), rat(bn, bd));
        prop_assume!(p.generic);
        let s = degree_sequence(&p, 5, DEFAULT_CEILING);
        let d: Vec<i128> = s.degrees().iter().map(|&x| x as i128).collect();
        prop_assert_eq!(d, predicted_degrees(5));
    }
}
