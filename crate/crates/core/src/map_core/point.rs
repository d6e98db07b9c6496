use std::fmt;

use num_rational::BigRational;
use serde::Serialize;

use crate::dd::Dd;
use crate::scalar::Scalar;

/// The six curves added at infinity and along x = 0 by the blow-ups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum VCurve {
    V0,
    V1,
    V2,
    V3,
    V4,
    V5,
}

impl VCurve {
    pub const ALL: [VCurve; 6] = [VCurve::V0, VCurve::V1, VCurve::V2, VCurve::V3, VCurve::V4, VCurve::V5];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for VCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V{}", self.index())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Chart {
    Affine,
    V(VCurve),
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Chart::Affine => f.write_str("Affine"),
            Chart::V(v) => v.fmt(f),
        }
    }
}

/// A point of the blown-up surface.
///
/// Points on V1 are stored as affine points `(0, t1)`, so an affine point with
/// `x = 0` is the same thing as `On(V1, y)`.
#[derive(Clone, Debug, PartialEq)]
pub enum ChartPoint<S> {
    Affine { x: S, y: S },
    On { curve: VCurve, t: S },
}

impl<S: Scalar> ChartPoint<S> {
    pub fn affine(x: S, y: S) -> Self {
        ChartPoint::Affine { x, y }
    }

    pub fn on(curve: VCurve, t: S) -> Self {
        match curve {
            VCurve::V1 => ChartPoint::Affine { x: S::zero(), y: t },
            _ => ChartPoint::On { curve, t },
        }
    }

    pub fn chart(&self) -> Chart {
        match self {
            ChartPoint::Affine { x, .. } if x.is_zero() => Chart::V(VCurve::V1),
            ChartPoint::Affine { .. } => Chart::Affine,
            ChartPoint::On { curve, .. } => Chart::V(*curve),
        }
    }

    /// Chart coordinates: `(x, y)` or `(t, None)`.
    pub fn coords(&self) -> (S, Option<S>) {
        match self {
            ChartPoint::Affine { x, y } => (x.clone(), Some(y.clone())),
            ChartPoint::On { t, .. } => (t.clone(), None),
        }
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, ChartPoint::Affine { .. })
    }

    /// Image in the projective plane `[x:y:z]`. Points on the V-curves other
    /// than V1 and V0 all project to the three points at infinity.
    pub fn to_projective(&self, b: &S) -> [S; 3] {
        match self {
            ChartPoint::Affine { x, y } => [x.clone(), y.clone(), S::one()],
            ChartPoint::On { curve, t } => match curve {
                VCurve::V0 => [S::one(), t.clone(), S::zero()],
                VCurve::V2 | VCurve::V3 => [S::zero(), S::one(), S::zero()],
                VCurve::V4 => [S::one(), S::zero(), S::zero()],
                VCurve::V5 => [S::one(), b.clone(), S::zero()],
                VCurve::V1 => [S::zero(), t.clone(), S::one()],
            },
        }
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> ChartPoint<T> {
        match self {
            ChartPoint::Affine { x, y } => ChartPoint::Affine { x: f(x), y: f(y) },
            ChartPoint::On { curve, t } => ChartPoint::On { curve: *curve, t: f(t) },
        }
    }

    pub fn to_dd(&self) -> ChartPoint<Dd>
    where
        S: ToDd,
    {
        self.map_scalar(|s| s.to_dd())
    }
}

/// Conversion into double-double used by the float fallback.
pub trait ToDd {
    fn to_dd(&self) -> Dd;
}

impl ToDd for BigRational {
    fn to_dd(&self) -> Dd {
        Dd::from_rational(self)
    }
}

impl ToDd for Dd {
    fn to_dd(&self) -> Dd {
        *self
    }
}

impl ToDd for f64 {
    fn to_dd(&self) -> Dd {
        Dd::from_f64(*self)
    }
}

impl ChartPoint<BigRational> {
    /// Projective coordinates for a finite point, exactly.
    pub fn from_projective(p: &[BigRational; 3]) -> Option<Self> {
        if num_traits::Zero::is_zero(&p[2]) {
            return None;
        }
        Some(ChartPoint::Affine { x: &p[0] / &p[2], y: &p[1] / &p[2] })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ExceptionalCurve {
    C0,
    C1,
}

/// One membership of a point in a distinguished set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Incidence {
    IndeterminateForward,
    IndeterminateBackward,
    OnExceptionalPlus(ExceptionalCurve),
    OnExceptionalMinus(ExceptionalCurve),
    OnInvariantCurve(VCurve),
    /// Float mode only: within the exclusion radius of an indeterminacy point.
    NearIndeterminate,
}

impl fmt::Display for Incidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Incidence::IndeterminateForward => f.write_str("IndeterminateForward"),
            Incidence::IndeterminateBackward => f.write_str("IndeterminateBackward"),
            Incidence::OnExceptionalPlus(c) => write!(f, "OnExceptionalPlus({c:?}+)"),
            Incidence::OnExceptionalMinus(c) => write!(f, "OnExceptionalMinus({c:?}-)"),
            Incidence::OnInvariantCurve(v) => write!(f, "OnInvariantCurve({v})"),
            Incidence::NearIndeterminate => f.write_str("NearIndeterminate"),
        }
    }
}

/// Composite status: the empty set means the point is regular.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct PointStatus {
    incidences: Vec<Incidence>,
}

impl PointStatus {
    pub fn regular() -> Self {
        PointStatus::default()
    }

    pub fn from_incidences(mut v: Vec<Incidence>) -> Self {
        v.sort();
        v.dedup();
        PointStatus { incidences: v }
    }

    pub fn single(i: Incidence) -> Self {
        PointStatus { incidences: vec![i] }
    }

    pub fn is_regular(&self) -> bool {
        self.incidences.is_empty()
    }

    pub fn contains(&self, i: Incidence) -> bool {
        self.incidences.contains(&i)
    }

    pub fn incidences(&self) -> &[Incidence] {
        &self.incidences
    }

    pub fn insert(&mut self, i: Incidence) {
        if let Err(pos) = self.incidences.binary_search(&i) {
            self.incidences.insert(pos, i);
        }
    }

    pub fn is_indeterminate(&self, forward: bool) -> bool {
        self.contains(if forward { Incidence::IndeterminateForward } else { Incidence::IndeterminateBackward })
    }
}

impl fmt::Display for PointStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.incidences.is_empty() {
            return f.write_str("Regular");
        }
        for (k, i) in self.incidences.iter().enumerate() {
            if k > 0 {
                f.write_str("|")?;
            }
            i.fmt(f)?;
        }
        Ok(())
    }
}
