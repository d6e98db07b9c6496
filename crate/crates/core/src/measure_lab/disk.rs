//! The compactified disk ρ = (2/π) arctan r used for plotting and as the
//! tracer's metric.

use std::f64::consts::{FRAC_2_PI, TAU};

use crate::dd::Dd;
use crate::map_core::{ChartPoint, VCurve};
use crate::scalar::Scalar;

/// Affine radius beyond which a vertex is treated as sitting on a V-curve.
pub const R_INF: f64 = 1e9;

fn direction_at_infinity(curve: VCurve, t: f64, b: f64) -> [f64; 2] {
    let d = match curve {
        VCurve::V0 => [1.0, t],
        VCurve::V4 => [1.0, 0.0],
        VCurve::V5 => [1.0, b],
        VCurve::V2 | VCurve::V3 => [0.0, 1.0],
        VCurve::V1 => [0.0, 1.0],
    };
    let n = d[0].hypot(d[1]);
    [d[0] / n, d[1] / n]
}

/// Disk position and affine radius (infinite on the V-curves at infinity).
pub fn disk_of(p: &ChartPoint<Dd>, b: f64) -> ([f64; 2], f64) {
    match p {
        ChartPoint::Affine { x, y } => {
            let (x, y) = (x.to_f64(), y.to_f64());
            let r = x.hypot(y);
            if r == 0.0 {
                return ([0.0, 0.0], 0.0);
            }
            let rho = FRAC_2_PI * r.atan();
            ([rho * x / r, rho * y / r], r)
        }
        ChartPoint::On { curve, t } => (direction_at_infinity(*curve, t.to_f64(), b), f64::INFINITY),
    }
}

/// Distance in the disk with antipodal points of the boundary identified.
pub fn pdist(p: [f64; 2], q: [f64; 2]) -> f64 {
    let direct = (p[0] - q[0]).hypot(p[1] - q[1]);
    let np = p[0].hypot(p[1]);
    let nq = q[0].hypot(q[1]);
    let across = (p[0] + q[0]).hypot(p[1] + q[1]) + (1.0 - np) + (1.0 - nq);
    direct.min(across)
}

/// Polar disk coordinates (ρ, θ) of a point, θ ∈ [0, 2π).
pub fn disk_coords<S: Scalar>(p: &ChartPoint<S>, b: f64) -> (f64, f64) {
    let (d, _) = disk_of(&p.map_scalar(|s| Dd::from(s.to_f64())), b);
    let rho = d[0].hypot(d[1]);
    if rho == 0.0 {
        return (0.0, 0.0);
    }
    let mut th = d[1].atan2(d[0]);
    if th < 0.0 {
        th += TAU;
    }
    (rho, th)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn disk_examples() {
        assert_eq!(disk_coords(&ChartPoint::affine(0.0, 0.0), 1.0), (0.0, 0.0));
        let (rho, _) = disk_coords(&ChartPoint::affine(1.0, 0.0), 1.0);
        assert!((rho - 0.5).abs() < 1e-15);
        let (rho, th) = disk_coords(&ChartPoint::on(VCurve::V0, 1.0), 1.0);
        assert!((rho - 1.0).abs() < 1e-15);
        assert!((th - FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn antipodes_at_infinity_are_close() {
        let a = [0.999_999, 0.0];
        let b = [-0.999_999, 0.0];
        assert!(pdist(a, b) < 1e-5);
        assert!(pdist([0.1, 0.0], [-0.1, 0.0]) > 0.19);
    }
}
