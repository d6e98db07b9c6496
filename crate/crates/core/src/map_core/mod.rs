//! The family f = τ∘σ on the blown-up plane: charts, point classification,
//! exact iteration.

mod map;
mod orbit;
mod params;
mod point;

pub use map::{apply_f, classify, jacobian_det, sigma, tau, Direction, FamilyMap, DEFAULT_NEAR_RADIUS};
pub use orbit::{orbit, Orbit, OrbitConfig, OrbitEntry, OrbitEvent, OrbitPoint, DEFAULT_BIT_CAP};
pub use params::{genericity_witnesses, is_generic, ExceptionalOrbit, Params, Witness};
pub use point::{Chart, ChartPoint, ExceptionalCurve, Incidence, PointStatus, ToDd, VCurve};
