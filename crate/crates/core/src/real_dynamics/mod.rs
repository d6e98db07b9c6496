//! Regions, the intervals E_j^{s/u}, arc typing and the matrices F and Q.

pub mod arcs;
pub mod intervals;
pub mod pairing;
pub mod regions;

pub use arcs::{arc_counts, canonical_arcs, verify_pullback_domination, ArcCounts, ArcType};
pub use intervals::{e_intervals, EInterval, EIntervals, Flavor};
pub use regions::{calibrate, region_of, Calibration, RegionLabel};
