use serde::Serialize;

use super::params::Params;
use super::point::{ChartPoint, ExceptionalCurve, Incidence, PointStatus, VCurve};
use crate::scalar::Scalar;

/// Exclusion radius around indeterminacy points in float mode.
pub const DEFAULT_NEAR_RADIUS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn is_forward(self) -> bool {
        self == Direction::Forward
    }
}

/// The map with its parameters converted once into the working scalar.
#[derive(Clone, Debug)]
pub struct FamilyMap<S> {
    pub a: S,
    pub b: S,
    pub near_radius: f64,
}

impl<S: Scalar> FamilyMap<S> {
    pub fn new(params: &Params) -> Self {
        FamilyMap { a: params.a_as(), b: params.b_as(), near_radius: DEFAULT_NEAR_RADIUS }
    }

    pub fn from_values(a: S, b: S) -> Self {
        FamilyMap { a, b, near_radius: DEFAULT_NEAR_RADIUS }
    }

    pub fn with_near_radius(mut self, r: f64) -> Self {
        self.near_radius = r;
        self
    }

    /// σ on the affine chart; `None` when x = 0 or y = 0.
    pub fn sigma_raw(&self, x: &S, y: &S) -> Option<(S, S)> {
        if x.is_zero() || y.is_zero() {
            return None;
        }
        let one = S::one();
        let u = one.clone() - x.clone() + x.clone() / y.clone();
        let v = one - y.clone() + y.clone() / x.clone();
        Some((u, v))
    }

    pub fn tau_raw(&self, x: &S, y: &S) -> (S, S) {
        let y2 = self.b.clone() * x.clone() + self.a.clone() + S::one() - y.clone();
        (x.clone(), y2)
    }

    /// f on the affine chart off x = 0 and y = 0.
    pub fn forward_raw(&self, x: &S, y: &S) -> Option<(S, S)> {
        let (u, v) = self.sigma_raw(x, y)?;
        Some(self.tau_raw(&u, &v))
    }

    /// f⁻¹ on the affine chart off x = 0 and C0-.
    pub fn backward_raw(&self, x: &S, y: &S) -> Option<(S, S)> {
        let (u, v) = self.tau_raw(x, y);
        self.sigma_raw(&u, &v)
    }

    fn near(&self, d: S) -> bool {
        !S::EXACT && d.abs_f64() <= self.near_radius
    }

    pub fn classify(&self, p: &ChartPoint<S>) -> PointStatus {
        let mut v = Vec::new();
        let one = S::one();
        let a1 = self.a.clone() + one.clone();
        match p {
            ChartPoint::Affine { x, y } => {
                if x.is_zero() {
                    v.push(Incidence::OnInvariantCurve(VCurve::V1));
                }
                if y.is_zero() {
                    v.push(Incidence::OnExceptionalPlus(ExceptionalCurve::C0));
                }
                let c1p = (x.clone() - one.clone()) * (y.clone() - one.clone()) - one.clone();
                if c1p.is_zero() {
                    v.push(Incidence::OnExceptionalPlus(ExceptionalCurve::C1));
                }
                let c0m = self.b.clone() * x.clone() + a1.clone() - y.clone();
                if c0m.is_zero() {
                    v.push(Incidence::OnExceptionalMinus(ExceptionalCurve::C0));
                }
                let c1m = (x.clone() - one.clone()) * (self.b.clone() * x.clone() + self.a.clone() - y.clone())
                    - one.clone();
                if c1m.is_zero() {
                    v.push(Incidence::OnExceptionalMinus(ExceptionalCurve::C1));
                }
                if x.is_zero() && y.is_zero() {
                    v.push(Incidence::IndeterminateForward);
                }
                if x.is_zero() && (y.clone() - a1.clone()).is_zero() {
                    v.push(Incidence::IndeterminateBackward);
                }
                let xs = x.abs_f64() <= self.near_radius;
                if !S::EXACT && xs && (self.near(y.clone()) || self.near(y.clone() - a1)) {
                    v.push(Incidence::NearIndeterminate);
                }
            }
            ChartPoint::On { curve, t } => {
                v.push(Incidence::OnInvariantCurve(*curve));
                match curve {
                    VCurve::V4 => {
                        if t.is_zero() {
                            v.push(Incidence::OnExceptionalPlus(ExceptionalCurve::C0));
                        }
                        if (t.clone() - one.clone()).is_zero() {
                            v.push(Incidence::OnExceptionalPlus(ExceptionalCurve::C1));
                            v.push(Incidence::IndeterminateForward);
                        }
                        if self.near(t.clone() - one) {
                            v.push(Incidence::NearIndeterminate);
                        }
                    }
                    VCurve::V5 => {
                        if (t.clone() - self.a.clone()).is_zero() {
                            v.push(Incidence::OnExceptionalMinus(ExceptionalCurve::C1));
                            v.push(Incidence::IndeterminateBackward);
                        }
                        if (t.clone() - a1).is_zero() {
                            v.push(Incidence::OnExceptionalMinus(ExceptionalCurve::C0));
                        }
                        if self.near(t.clone() - self.a.clone()) {
                            v.push(Incidence::NearIndeterminate);
                        }
                    }
                    VCurve::V3 => {
                        if (t.clone() - one.clone()).is_zero() {
                            v.push(Incidence::OnExceptionalPlus(ExceptionalCurve::C1));
                        }
                        if (t.clone() + one).is_zero() {
                            v.push(Incidence::OnExceptionalMinus(ExceptionalCurve::C1));
                        }
                    }
                    _ => {}
                }
            }
        }
        PointStatus::from_incidences(v)
    }

    fn halt(&self, p: &ChartPoint<S>, dir: Direction) -> Option<PointStatus> {
        let s = self.classify(p);
        if s.is_indeterminate(dir.is_forward()) {
            return Some(s);
        }
        let one = S::one();
        let near = match (p, dir) {
            (ChartPoint::Affine { x, y }, Direction::Forward) => self.near(x.clone()) && self.near(y.clone()),
            (ChartPoint::Affine { x, y }, Direction::Backward) => {
                self.near(x.clone()) && self.near(y.clone() - self.a.clone() - one)
            }
            (ChartPoint::On { curve: VCurve::V4, t }, Direction::Forward) => self.near(t.clone() - one),
            (ChartPoint::On { curve: VCurve::V5, t }, Direction::Backward) => self.near(t.clone() - self.a.clone()),
            _ => false,
        };
        near.then_some(s)
    }

    pub fn apply(&self, p: &ChartPoint<S>, dir: Direction) -> Result<ChartPoint<S>, PointStatus> {
        if let Some(s) = self.halt(p, dir) {
            return Err(s);
        }
        let one = S::one();
        let a = self.a.clone();
        Ok(match (p, dir) {
            (ChartPoint::Affine { x, y }, Direction::Forward) => {
                if x.is_zero() {
                    ChartPoint::on(VCurve::V3, y.clone() - one)
                } else if y.is_zero() {
                    ChartPoint::on(VCurve::V5, a)
                } else {
                    let (u, v) = self.forward_raw(x, y).expect("x, y nonzero");
                    ChartPoint::affine(u, v)
                }
            }
            (ChartPoint::Affine { x, y }, Direction::Backward) => {
                if x.is_zero() {
                    return Ok(ChartPoint::on(VCurve::V3, y.clone() - a));
                }
                let (u, v) = self.tau_raw(x, y);
                if v.is_zero() {
                    ChartPoint::on(VCurve::V4, one)
                } else {
                    let (s, t) = self.sigma_raw(&u, &v).expect("x, y nonzero");
                    ChartPoint::affine(s, t)
                }
            }
            (ChartPoint::On { curve, t }, Direction::Forward) => {
                let t = t.clone();
                match curve {
                    VCurve::V0 => ChartPoint::on(VCurve::V0, self.b.clone() - t),
                    VCurve::V2 => ChartPoint::on(VCurve::V2, one - t),
                    VCurve::V3 => ChartPoint::on(VCurve::V1, t + a),
                    VCurve::V4 => ChartPoint::on(VCurve::V5, t + a),
                    VCurve::V5 => ChartPoint::on(VCurve::V4, t + a + one),
                    VCurve::V1 => unreachable!("V1 points are affine"),
                }
            }
            (ChartPoint::On { curve, t }, Direction::Backward) => {
                let t = t.clone();
                match curve {
                    VCurve::V0 => ChartPoint::on(VCurve::V0, self.b.clone() - t),
                    VCurve::V2 => ChartPoint::on(VCurve::V2, one - t),
                    VCurve::V3 => ChartPoint::on(VCurve::V1, t + one),
                    VCurve::V5 => ChartPoint::on(VCurve::V4, t - a),
                    VCurve::V4 => ChartPoint::on(VCurve::V5, t - a - one),
                    VCurve::V1 => unreachable!("V1 points are affine"),
                }
            }
        })
    }

    /// Df at an affine point off x = 0 and y = 0, as rows `[[∂u/∂x, ∂u/∂y], [∂v/∂x, ∂v/∂y]]`.
    pub fn jacobian_matrix(&self, x: &S, y: &S) -> Result<[[S; 2]; 2], PointStatus> {
        if x.is_zero() || y.is_zero() {
            return Err(self.classify(&ChartPoint::affine(x.clone(), y.clone())));
        }
        let one = S::one();
        // Dσ
        let s11 = y.clone().recip_s() - one.clone();
        let s12 = -(x.clone() / (y.clone() * y.clone()));
        let s21 = -(y.clone() / (x.clone() * x.clone()));
        let s22 = x.clone().recip_s() - one;
        // Dτ = [[1, 0], [b, -1]]
        let m21 = self.b.clone() * s11.clone() - s21;
        let m22 = self.b.clone() * s12.clone() - s22;
        Ok([[s11, s12], [m21, m22]])
    }

    /// det Df at an affine point off x = 0 and y = 0.
    pub fn jacobian_det(&self, x: &S, y: &S) -> Result<S, PointStatus> {
        let [[m11, m12], [m21, m22]] = self.jacobian_matrix(x, y)?;
        Ok(m11 * m22 - m12 * m21)
    }
}

trait Recip {
    fn recip_s(self) -> Self;
}

impl<S: Scalar> Recip for S {
    fn recip_s(self) -> Self {
        S::one() / self
    }
}

pub fn sigma<S: Scalar>(p: &ChartPoint<S>, params: &Params) -> Result<ChartPoint<S>, PointStatus> {
    let m = FamilyMap::<S>::new(params);
    match p {
        ChartPoint::Affine { x, y } => match m.sigma_raw(x, y) {
            Some((u, v)) => Ok(ChartPoint::affine(u, v)),
            None => Err(m.classify(p)),
        },
        ChartPoint::On { .. } => Err(m.classify(p)),
    }
}

pub fn tau<S: Scalar>(x: &S, y: &S, params: &Params) -> (S, S) {
    FamilyMap::<S>::new(params).tau_raw(x, y)
}

pub fn apply_f<S: Scalar>(p: &ChartPoint<S>, params: &Params, dir: Direction) -> Result<ChartPoint<S>, PointStatus> {
    FamilyMap::<S>::new(params).apply(p, dir)
}

pub fn classify<S: Scalar>(p: &ChartPoint<S>, params: &Params) -> PointStatus {
    FamilyMap::<S>::new(params).classify(p)
}

pub fn jacobian_det<S: Scalar>(x: &S, y: &S, params: &Params) -> Result<S, PointStatus> {
    FamilyMap::<S>::new(params).jacobian_det(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num_rational::BigRational;

    fn pt(x: i64, y: i64) -> ChartPoint<BigRational> {
        ChartPoint::affine(rat(x, 1), rat(y, 1))
    }

    fn ref_params() -> Params {
        Params::from_ints(-2, 1)
    }

    #[test]
    fn sigma_examples() {
        let p = ref_params();
        let s = sigma(&pt(2, 3), &p).unwrap();
        assert_eq!(s, ChartPoint::affine(rat(-1, 3), rat(-1, 2)));
        assert_eq!(sigma(&s, &p).unwrap(), pt(2, 3));
        let st = sigma(&pt(3, 0), &p).unwrap_err();
        assert!(st.contains(Incidence::OnExceptionalPlus(ExceptionalCurve::C0)));
    }

    #[test]
    fn tau_examples() {
        let p = ref_params();
        assert_eq!(tau(&rat(1, 1), &rat(1, 1), &p), (rat(1, 1), rat(-1, 1)));
        assert_eq!(tau(&rat(0, 1), &rat(0, 1), &p), (rat(0, 1), rat(-1, 1)));
    }

    #[test]
    fn apply_examples() {
        let p = ref_params();
        let q = apply_f(&pt(2, 2), &p, Direction::Forward).unwrap();
        assert_eq!(q, pt(0, -1));
        let v5 = ChartPoint::on(VCurve::V5, rat(0, 1));
        assert_eq!(apply_f(&v5, &p, Direction::Forward).unwrap(), ChartPoint::on(VCurve::V4, rat(-1, 1)));
        let v4 = ChartPoint::on(VCurve::V4, rat(1, 1));
        assert!(apply_f(&v4, &p, Direction::Forward).unwrap_err().contains(Incidence::IndeterminateForward));
    }

    #[test]
    fn collapsed_curves_and_their_preimages() {
        let p = ref_params();
        // f(C0+) is the point t5 = a, and f⁻¹(C0-) is the point t4 = 1.
        assert_eq!(apply_f(&pt(5, 0), &p, Direction::Forward).unwrap(), ChartPoint::on(VCurve::V5, rat(-2, 1)));
        assert_eq!(apply_f(&pt(1, 0), &p, Direction::Backward).unwrap(), ChartPoint::on(VCurve::V4, rat(1, 1)));
        // f⁻¹(C1-) = (0,0)
        let c1m = ChartPoint::affine(rat(2, 1), rat(-1, 1));
        assert!(classify(&c1m, &p).contains(Incidence::OnExceptionalMinus(ExceptionalCurve::C1)));
        assert_eq!(apply_f(&c1m, &p, Direction::Backward).unwrap(), pt(0, 0));
        // (0, a+1) is backward indeterminate.
        assert!(apply_f(&pt(0, -1), &p, Direction::Backward).unwrap_err().is_indeterminate(false));
    }

    #[test]
    fn v_chart_round_trips() {
        let p = ref_params();
        for c in [VCurve::V0, VCurve::V2, VCurve::V3, VCurve::V4, VCurve::V5] {
            let q = ChartPoint::on(c, rat(7, 3));
            let img = apply_f(&q, &p, Direction::Forward).unwrap();
            assert_eq!(apply_f(&img, &p, Direction::Backward).unwrap(), q, "{c}");
        }
    }

    #[test]
    fn classify_examples() {
        let p = ref_params();
        let s = classify(&pt(0, 0), &p);
        assert!(s.contains(Incidence::IndeterminateForward));
        let s = classify(&pt(3, 0), &p);
        assert_eq!(s, PointStatus::single(Incidence::OnExceptionalPlus(ExceptionalCurve::C0)));
        let s = classify(&pt(1, 0), &p);
        assert!(s.contains(Incidence::OnExceptionalPlus(ExceptionalCurve::C0)));
        assert!(s.contains(Incidence::OnExceptionalMinus(ExceptionalCurve::C0)));
        assert!(classify(&pt(2, 3), &p).is_regular());
    }

    #[test]
    fn float_mode_flags_near_indeterminacy() {
        let p = ref_params();
        let q = ChartPoint::affine(1e-14, -3e-13);
        let s = classify(&q, &p);
        assert!(s.contains(Incidence::NearIndeterminate));
        assert!(apply_f(&q, &p, Direction::Forward).is_err());
        // Near (0,0) does not block the backward map.
        assert!(apply_f(&q, &p, Direction::Backward).is_ok());
    }

    #[test]
    fn jacobian_ratio_is_one() {
        let p = ref_params();
        for (x, y) in [(2, 3), (-1, -1), (5, -7)] {
            let (x, y) = (rat(x, 1), rat(y, 1));
            let d = jacobian_det(&x, &y, &p).unwrap();
            let ChartPoint::Affine { x: fx, .. } = apply_f(&ChartPoint::affine(x.clone(), y), &p, Direction::Forward).unwrap()
            else {
                panic!()
            };
            assert_eq!(d * x / fx, rat(1, 1));
        }
    }
}
