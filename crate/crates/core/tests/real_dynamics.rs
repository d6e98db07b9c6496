use fab_core::dd::Dd;
use fab_core::map_core::{apply_f, ChartPoint, Direction, Params, VCurve};
use fab_core::picard::Side;
use fab_core::real_dynamics::regions::{region_of_params, PERMUTATION};
use fab_core::real_dynamics::{canonical_arcs, e_intervals, Flavor};
use proptest::prelude::*;

fn region(p: &ChartPoint<Dd>, params: &Params, side: Side) -> Option<u8> {
    region_of_params(p, params, side).region()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn f_carries_plus_regions_to_permuted_minus_regions(x in -20.0f64..20.0, y in -20.0f64..20.0, a in 110i64..400, b in 1i64..30) {
        let params = Params::parse(&format!("-{a}/100"), &format!("{b}/10")).unwrap();
        let p = ChartPoint::affine(Dd::from(x), Dd::from(y));
        let Some(j) = region(&p, &params, Side::Plus) else { return Ok(()) };
        let Ok(q) = apply_f(&p, &params, Direction::Forward) else { return Ok(()) };
        if let Some(k) = region(&q, &params, Side::Minus) {
            prop_assert_eq!(k, PERMUTATION[j as usize - 1]);
        }
    }

    #[test]
    fn e_intervals_separate_below_minus_one(num in 101i64..2000) {
        let params = Params::parse(&format!("-{num}/100"), "1").unwrap();
        prop_assert!(e_intervals(&params).disjoint());
    }

    #[test]
    fn e_intervals_overlap_between_minus_one_and_zero(num in 1i64..100) {
        let params = Params::parse(&format!("-{num}/100"), "1").unwrap();
        let e = e_intervals(&params);
        prop_assert!(!e.disjoint());
        prop_assert!(!e.overlaps.is_empty());
    }
}

#[test]
fn canonical_arcs_join_opposite_intervals() {
    for params in [Params::from_ints(-2, 1), Params::parse("-3/2", "2").unwrap()] {
        let e = e_intervals(&params);
        let canon = canonical_arcs(&params).unwrap();
        assert_eq!(canon.len(), 8);
        for c in &canon {
            for end in [&c.start, &c.end] {
                // s-arcs join the u-intervals and u-arcs join the s-intervals
                let opposite = if c.arc_type.flavor == Flavor::S { Flavor::U } else { Flavor::S };
                let iv = e.get(end.curve, opposite).unwrap_or_else(|| panic!("{:?} ends off the E-curves", c.arc_type));
                assert!(iv.contains(end.t), "{:?} end {:?} outside {}", c.arc_type, end, iv);
            }
        }
        let one_s = canon.iter().find(|c| c.arc_type.index == 1 && c.arc_type.flavor == Flavor::S).unwrap();
        let (p, q) = one_s.tag();
        assert!(matches!(p, VCurve::V1 | VCurve::V4) && q == VCurve::V5 || matches!(q, VCurve::V1 | VCurve::V4) && p == VCurve::V5);
        for j in 1..=4 {
            for flavor in [Flavor::S, Flavor::U] {
                assert_eq!(canon.iter().filter(|c| c.arc_type.index == j && c.arc_type.flavor == flavor).count(), 1);
            }
        }
    }
}

#[test]
fn zero_b_has_no_canonical_arcs() {
    assert!(canonical_arcs(&Params::from_ints(-2, 0)).is_err());
}
