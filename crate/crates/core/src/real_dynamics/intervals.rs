//! The intervals E_j^{s/u} on V1, V3, V4, V5.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::map_core::{Params, VCurve};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Flavor {
    S,
    U,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if *self == Flavor::S { "s" } else { "u" })
    }
}

/// Closed interval of the extended line; `None` is −∞ for `lo` and +∞ for `hi`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EInterval {
    pub curve: VCurve,
    pub flavor: Flavor,
    #[serde(serialize_with = "ser_bound")]
    pub lo: Option<BigRational>,
    #[serde(serialize_with = "ser_bound")]
    pub hi: Option<BigRational>,
}

fn ser_bound<S: serde::Serializer>(b: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match b {
        Some(q) => s.serialize_str(&q.to_string()),
        None => s.serialize_str("inf"),
    }
}

/// Tolerance used when a floating endpoint is tested against an interval.
pub const END_TOL: f64 = 1e-7;

impl EInterval {
    pub fn contains_exact(&self, t: &BigRational) -> bool {
        self.lo.as_ref().is_none_or(|l| t >= l) && self.hi.as_ref().is_none_or(|h| t <= h)
    }

    pub fn contains(&self, t: f64) -> bool {
        let tol = END_TOL * (1.0 + t.abs());
        self.lo.as_ref().is_none_or(|l| t >= l.to_f64().unwrap_or(f64::NAN) - tol)
            && self.hi.as_ref().is_none_or(|h| t <= h.to_f64().unwrap_or(f64::NAN) + tol)
    }

    /// Intersection with another interval on the same curve.
    pub fn meet(&self, o: &EInterval) -> Option<(Option<BigRational>, Option<BigRational>)> {
        let lo = match (&self.lo, &o.lo) {
            (Some(a), Some(b)) => Some(a.max(b).clone()),
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        };
        let hi = match (&self.hi, &o.hi) {
            (Some(a), Some(b)) => Some(a.min(b).clone()),
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        };
        match (&lo, &hi) {
            (Some(l), Some(h)) if l > h => None,
            _ => Some((lo, hi)),
        }
    }
}

impl fmt::Display for EInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = self.lo.as_ref().map_or("-inf".to_string(), |q| q.to_string());
        let hi = self.hi.as_ref().map_or("inf".to_string(), |q| q.to_string());
        write!(f, "E{}{} = [{lo}, {hi}]", &self.curve.to_string()[1..], self.flavor)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Overlap {
    pub curve: VCurve,
    pub lo: String,
    pub hi: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EIntervals {
    pub intervals: Vec<EInterval>,
    /// Curves on which E^s and E^u meet.
    pub overlaps: Vec<Overlap>,
    /// True when the standing assumption a < −1 holds.
    pub standard: bool,
}

pub const E_CURVES: [VCurve; 4] = [VCurve::V1, VCurve::V3, VCurve::V4, VCurve::V5];

impl EIntervals {
    pub fn get(&self, curve: VCurve, flavor: Flavor) -> Option<&EInterval> {
        self.intervals.iter().find(|e| e.curve == curve && e.flavor == flavor)
    }

    pub fn disjoint(&self) -> bool {
        self.overlaps.is_empty()
    }
}

pub fn e_intervals(params: &Params) -> EIntervals {
    let a = params.a.clone();
    let one = BigRational::one();
    let mk = |curve, flavor, lo: Option<BigRational>, hi: Option<BigRational>| EInterval { curve, flavor, lo, hi };
    let intervals = vec![
        mk(VCurve::V1, Flavor::S, None, Some(a.clone() + one.clone())),
        mk(VCurve::V1, Flavor::U, Some(BigRational::zero()), None),
        mk(VCurve::V3, Flavor::S, None, Some(-one.clone())),
        mk(VCurve::V3, Flavor::U, Some(one.clone()), None),
        mk(VCurve::V4, Flavor::S, None, Some((a.clone() + one.clone()) * BigRational::from_integer(2.into()))),
        mk(VCurve::V4, Flavor::U, Some(BigRational::zero()), None),
        mk(VCurve::V5, Flavor::S, None, Some(a.clone() + one.clone())),
        mk(VCurve::V5, Flavor::U, Some(-one - a.clone()), None),
    ];
    let mut overlaps = Vec::new();
    for c in E_CURVES {
        let s = intervals.iter().find(|e| e.curve == c && e.flavor == Flavor::S).unwrap();
        let u = intervals.iter().find(|e| e.curve == c && e.flavor == Flavor::U).unwrap();
        if let Some((lo, hi)) = s.meet(u) {
            let show = |b: Option<BigRational>, inf: &str| b.map_or(inf.to_string(), |q| q.to_string());
            overlaps.push(Overlap { curve: c, lo: show(lo, "-inf"), hi: show(hi, "inf") });
        }
    }
    let standard = a < -BigRational::one();
    EIntervals { intervals, overlaps, standard }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_parameters_are_disjoint() {
        let e = e_intervals(&Params::from_ints(-2, 1));
        assert!(e.disjoint() && e.standard);
        assert_eq!(e.get(VCurve::V4, Flavor::S).unwrap().to_string(), "E4s = [-inf, -2]");
        assert_eq!(e.get(VCurve::V5, Flavor::U).unwrap().to_string(), "E5u = [1, inf]");
    }

    #[test]
    fn overlap_flagged_above_minus_one() {
        let e = e_intervals(&Params::parse("-1/2", "1").unwrap());
        assert!(!e.disjoint());
        assert!(e.overlaps.iter().any(|o| o.curve == VCurve::V1));
    }
}
