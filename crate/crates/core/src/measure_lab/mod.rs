//! Curve iteration, intersections, the empirical measure and manifold tracing.

pub mod basin;
pub mod counting;
pub mod disk;
pub mod intersect;
pub mod manifold;
pub mod measure;
pub mod pairing;
pub mod saddle;
pub mod tracer;

pub use basin::{basin_escape, descent_check, BasinReport, Verdict};
pub use counting::{count_vs_formula, CountReport};
pub use disk::disk_coords;
pub use intersect::{intersect, IntersectConfig, IntersectionSet};
pub use pairing::{pairing_report, OracleRow, PairingReport};
pub use manifold::{homoclinic_check, trace_manifold, write_curves_csv, Branch, ManifoldConfig, ManifoldTrace};
pub use measure::{empirical_measure, grid, EmpiricalMeasure};
pub use saddle::{find_saddle, real_fixed_points, periodic_point, FixedPoint, PeriodicPoint};
pub use tracer::{Source, TraceConfig, TracedCurve, Tracer};
