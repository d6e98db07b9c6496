//! Sign-cell model of the regions R_j^± and its calibration.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::map_core::{ChartPoint, ExceptionalCurve, FamilyMap, Params, VCurve};
use crate::picard::Side;
use crate::scalar::Scalar;

/// Image of R_k^+ under f is R_{PERMUTATION[k-1]}^-.
pub const PERMUTATION: [u8; 7] = [2, 1, 3, 4, 7, 6, 5];

/// Image of R_k^+ under σ, a plus region again.
pub const SIGMA_PERMUTATION: [u8; 7] = PERMUTATION;

/// Sign vectors (y, g, x) with g = (x−1)(y−1) − 1 of the plus regions.
pub const SIGN_CELLS: [(i8, i8, i8); 7] =
    [(-1, 1, -1), (1, 1, 1), (1, -1, 1), (-1, 1, 1), (-1, -1, 1), (1, 1, -1), (1, -1, -1)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RegionLabel {
    Region { index: u8, side: Side },
    Boundary { curve: ExceptionalCurve, side: Side },
    OnV(VCurve),
    Excluded(VCurve),
}

impl RegionLabel {
    pub fn region(self) -> Option<u8> {
        match self {
            RegionLabel::Region { index, .. } => Some(index),
            _ => None,
        }
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |s: &Side| if *s == Side::Plus { "+" } else { "-" };
        match self {
            RegionLabel::Region { index, side } => write!(f, "R{index}{}", sign(side)),
            RegionLabel::Boundary { curve, side } => write!(f, "Boundary({curve:?}{})", sign(side)),
            RegionLabel::OnV(v) => write!(f, "On{v}"),
            RegionLabel::Excluded(v) => write!(f, "Excluded({v})"),
        }
    }
}

fn sgn<S: Scalar>(v: &S) -> i8 {
    if v.is_zero() {
        0
    } else if *v > S::zero() {
        1
    } else {
        -1
    }
}

/// Plus-side index of an affine point from the sign vector, or the curve it lies on.
pub fn plus_cell<S: Scalar>(x: &S, y: &S) -> std::result::Result<u8, Option<ExceptionalCurve>> {
    let one = S::one();
    let g = (x.clone() - one.clone()) * (y.clone() - one.clone()) - one;
    let (sy, sg, sx) = (sgn(y), sgn(&g), sgn(x));
    if sx == 0 {
        return Err(None);
    }
    if sy == 0 {
        return Err(Some(ExceptionalCurve::C0));
    }
    if sg == 0 {
        return Err(Some(ExceptionalCurve::C1));
    }
    let k = SIGN_CELLS.iter().position(|&c| c == (sy, sg, sx)).expect("the eighth sign cell is empty");
    Ok(k as u8 + 1)
}

/// Region label of a point; the minus side is the τ-image of the plus side.
pub fn region_of<S: Scalar>(p: &ChartPoint<S>, map: &FamilyMap<S>, side: Side) -> RegionLabel {
    match p {
        ChartPoint::On { curve, .. } => match curve {
            VCurve::V0 | VCurve::V2 => RegionLabel::Excluded(*curve),
            c => RegionLabel::OnV(*c),
        },
        ChartPoint::Affine { x, y } => {
            let (x, y) = match side {
                Side::Plus => (x.clone(), y.clone()),
                Side::Minus => map.tau_raw(x, y),
            };
            match plus_cell(&x, &y) {
                Ok(index) => RegionLabel::Region { index, side },
                Err(Some(curve)) => RegionLabel::Boundary { curve, side },
                Err(None) => RegionLabel::OnV(VCurve::V1),
            }
        }
    }
}

/// Convenience wrapper taking params.
pub fn region_of_params<S: Scalar>(p: &ChartPoint<S>, params: &Params, side: Side) -> RegionLabel {
    region_of(p, &FamilyMap::new(params), side)
}

/// Disk coordinates (ρ, θ) ↦ affine point.
pub fn from_disk(rho: f64, theta: f64) -> (f64, f64) {
    let r = (rho * std::f64::consts::FRAC_PI_2).tan();
    (r * theta.cos(), r * theta.sin())
}

/// Outcome of the per-parameter calibration.
#[derive(Clone, Debug, Serialize)]
pub struct Calibration {
    pub params: String,
    pub grid: usize,
    pub seed: u64,
    /// Connected grid components per sign cell, ignoring fragments smaller
    /// than `min_component` cells.
    pub components: [usize; 7],
    pub min_component: usize,
    pub samples_per_region: usize,
    /// `table[k][m]`: samples of R_{k+1}^+ whose image lies in R_{m+1}^-.
    pub table: [[usize; 7]; 7],
    pub violations: usize,
    /// Label assignment, sign vector (y, g, x) per region index.
    pub labels: [(i8, i8, i8); 7],
}

impl Calibration {
    pub fn ok(&self) -> bool {
        self.components.iter().all(|&c| c == 1) && self.violations == 0
    }
}

pub const CALIBRATION_SEED: u64 = 0x5eed_4a11;

/// Flood fill on a polar grid of the disk, then transition sampling.
pub fn calibrate(params: &Params, grid: usize, samples: usize) -> Result<Calibration> {
    if params.b_f64() == 0.0 {
        return Err(Error::InvalidParams("region model requires b ≠ 0".into()));
    }
    let map = FamilyMap::<Dd>::new(params).with_near_radius(0.0);
    let n_r = grid;
    let n_t = 4 * grid;
    let mut cell = vec![0u8; n_r * n_t];
    for i in 0..n_r {
        for j in 0..n_t {
            let rho = (i as f64 + 0.5) / n_r as f64 * 0.999;
            let th = (j as f64 + 0.5) / n_t as f64 * std::f64::consts::TAU;
            let (x, y) = from_disk(rho, th);
            cell[i * n_t + j] = plus_cell(&x, &y).unwrap_or(0);
        }
    }
    let mut seen = vec![false; cell.len()];
    let mut components = [0usize; 7];
    let min_component = 4;
    let mut members: [Vec<usize>; 7] = Default::default();
    for start in 0..cell.len() {
        if seen[start] || cell[start] == 0 {
            continue;
        }
        let lab = cell[start];
        let mut stack = vec![start];
        let mut comp = Vec::new();
        seen[start] = true;
        while let Some(c) = stack.pop() {
            comp.push(c);
            let (i, j) = (c / n_t, c % n_t);
            let mut nb = vec![i * n_t + (j + 1) % n_t, i * n_t + (j + n_t - 1) % n_t];
            if i + 1 < n_r {
                nb.push((i + 1) * n_t + j);
            }
            if i > 0 {
                nb.push((i - 1) * n_t + j);
            } else {
                // across the centre
                nb.push((j + n_t / 2) % n_t);
            }
            for d in nb {
                if !seen[d] && cell[d] == lab {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        if comp.len() >= min_component {
            components[(lab - 1) as usize] += 1;
            members[(lab - 1) as usize].extend(comp);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(CALIBRATION_SEED);
    let mut table = [[0usize; 7]; 7];
    let mut violations = 0;
    for k in 0..7 {
        let cells = &members[k];
        if cells.is_empty() {
            return Err(Error::Calibration(format!("region R{} has no grid cells", k + 1)));
        }
        let mut got = 0;
        while got < samples {
            let c = cells[rng.gen_range(0..cells.len())];
            let (i, j) = (c / n_t, c % n_t);
            let rho = (i as f64 + rng.gen::<f64>()) / n_r as f64 * 0.999;
            let th = (j as f64 + rng.gen::<f64>()) / n_t as f64 * std::f64::consts::TAU;
            let (x, y) = from_disk(rho, th);
            if plus_cell(&x, &y) != Ok(k as u8 + 1) {
                continue;
            }
            got += 1;
            let p = ChartPoint::affine(Dd::from(x), Dd::from(y));
            let image = match map.apply(&p, crate::map_core::Direction::Forward) {
                Ok(q) => q,
                Err(_) => {
                    violations += 1;
                    continue;
                }
            };
            match region_of(&image, &map, Side::Minus).region() {
                Some(m) => {
                    table[k][(m - 1) as usize] += 1;
                    if m != PERMUTATION[k] {
                        violations += 1;
                    }
                }
                None => violations += 1,
            }
        }
    }
    Ok(Calibration {
        params: params.label(),
        grid,
        seed: CALIBRATION_SEED,
        components,
        min_component,
        samples_per_region: samples,
        table,
        violations,
        labels: SIGN_CELLS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn sign_cells_on_sample_points() {
        assert_eq!(plus_cell(&0.5, &1e6), Ok(3));
        assert_eq!(plus_cell(&3.0, &0.0), Err(Some(ExceptionalCurve::C0)));
        assert_eq!(plus_cell(&2.0, &2.0), Err(Some(ExceptionalCurve::C1)));
        assert_eq!(plus_cell(&0.0, &2.0), Err(None));
    }

    #[test]
    fn sigma_permutes_plus_cells() {
        let params = Params::from_ints(-2, 1);
        let map = FamilyMap::<BigRational>::new(&params);
        let pts = ["-1 -3", "3 4", "1/2 2", "1/2 -5", "5 -1", "-1 1/4", "-2 5"];
        for (k, pt) in pts.iter().enumerate() {
            let mut it = pt.split(' ').map(|s| crate::scalar::parse_rational(s).unwrap());
            let (x, y) = (it.next().unwrap(), it.next().unwrap());
            assert_eq!(plus_cell(&x, &y), Ok(k as u8 + 1), "sample {k}");
            let (u, v) = map.sigma_raw(&x, &y).unwrap();
            assert_eq!(plus_cell(&u, &v), Ok(SIGMA_PERMUTATION[k]));
        }
    }

    #[test]
    fn calibration_at_standard_params() {
        let c = calibrate(&Params::from_ints(-2, 1), 120, 200).unwrap();
        assert_eq!(c.components, [1; 7]);
        assert_eq!(c.violations, 0);
    }
}
