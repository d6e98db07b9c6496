//! Escape to infinity: certificates through R_5^+ (forward) and R_6^+ ∪ R_7^+
//! (backward), immediate escape on the curves at infinity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dd::Dd;
use crate::map_core::{ChartPoint, Direction, FamilyMap, Params, VCurve};
use crate::real_dynamics::regions::plus_cell;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    StaysInOmegaWindow,
    EscapesForward,
    EscapesBackward,
    EscapesBoth,
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    /// The iterate lies on one of the curves at infinity.
    AtInfinity,
    /// Forward certificate: the iterate is in R_5^+ (or R_6^- ∪ R_7^-, mapped into R_5^+).
    EnteredR5,
    /// Backward certificate: the iterate is in R_6^+ ∪ R_7^+ (or R_5^-).
    EnteredR67,
    /// Periodic orbit inside R_1^+ ∪ .. ∪ R_4^+.
    Periodic(usize),
    /// Stayed in R_1^+ ∪ .. ∪ R_4^+ for the whole budget.
    Survived,
    /// The map is undefined at an iterate.
    Indeterminate,
    /// Left R_1^+ ∪ .. ∪ R_4^+ without a certificate.
    Uncertified,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct HalfOrbit {
    pub reason: Reason,
    /// Iterate at which the reason was established.
    pub step: usize,
}

impl HalfOrbit {
    fn escapes(&self) -> bool {
        matches!(self.reason, Reason::AtInfinity | Reason::EnteredR5 | Reason::EnteredR67)
    }

    fn stays(&self) -> bool {
        matches!(self.reason, Reason::Periodic(_) | Reason::Survived)
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BasinReport {
    pub verdict: Verdict,
    pub forward: HalfOrbit,
    pub backward: HalfOrbit,
}

/// Largest period looked for.
pub const MAX_PERIOD: usize = 12;

fn close(p: &ChartPoint<Dd>, q: &ChartPoint<Dd>) -> bool {
    match (p, q) {
        (ChartPoint::Affine { x, y }, ChartPoint::Affine { x: u, y: v }) => {
            let s = 1.0 + x.abs().to_f64().max(y.abs().to_f64());
            (*x - *u).abs().to_f64().max((*y - *v).abs().to_f64()) <= 1e-20 * s
        }
        _ => false,
    }
}

fn half(map: &FamilyMap<Dd>, p: &ChartPoint<Dd>, dir: Direction, maxiter: usize) -> HalfOrbit {
    let fwd = dir.is_forward();
    let mut q = *p;
    for step in 0..=maxiter {
        let (x, y) = match q {
            ChartPoint::On { .. } => return HalfOrbit { reason: Reason::AtInfinity, step },
            ChartPoint::Affine { x, y } => (x, y),
        };
        let (tx, ty) = map.tau_raw(&x, &y);
        let plus = plus_cell(&x, &y);
        let minus = plus_cell(&tx, &ty);
        match (plus, fwd) {
            (Err(None), _) => {
                // x = 0 is V1; its images run along V1 and V3
                return HalfOrbit { reason: Reason::AtInfinity, step };
            }
            (Ok(5), true) => return HalfOrbit { reason: Reason::EnteredR5, step },
            (Ok(6 | 7), false) => return HalfOrbit { reason: Reason::EnteredR67, step },
            _ => {}
        }
        match (minus, fwd) {
            (Ok(6 | 7), true) => return HalfOrbit { reason: Reason::EnteredR5, step: step + 1 },
            (Ok(5), false) => return HalfOrbit { reason: Reason::EnteredR67, step: step + 1 },
            _ => {}
        }
        if step == maxiter {
            break;
        }
        if !matches!(plus, Ok(1..=4)) {
            // on a dividing curve or in a region without certificate in this direction
            let next = map.apply(&q, dir);
            match next {
                Ok(ChartPoint::On { .. }) => return HalfOrbit { reason: Reason::AtInfinity, step: step + 1 },
                Ok(n) => {
                    q = n;
                    continue;
                }
                Err(_) => return HalfOrbit { reason: Reason::Indeterminate, step },
            }
        }
        q = match map.apply(&q, dir) {
            Ok(n) => n,
            Err(_) => return HalfOrbit { reason: Reason::Indeterminate, step },
        };
        if step < MAX_PERIOD && close(&q, p) {
            return HalfOrbit { reason: Reason::Periodic(step + 1), step: step + 1 };
        }
    }
    HalfOrbit { reason: Reason::Survived, step: maxiter }
}

/// Classifies the orbit of `p` within `maxiter` iterates each way.
pub fn basin_escape(p: &ChartPoint<Dd>, params: &Params, maxiter: usize) -> BasinReport {
    let map = FamilyMap::<Dd>::new(params).with_near_radius(0.0);
    let forward = half(&map, p, Direction::Forward, maxiter);
    let backward = half(&map, p, Direction::Backward, maxiter);
    let verdict = match (forward.escapes(), backward.escapes()) {
        (true, true) => Verdict::EscapesBoth,
        (true, false) => Verdict::EscapesForward,
        (false, true) => Verdict::EscapesBackward,
        (false, false) if forward.stays() && backward.stays() => Verdict::StaysInOmegaWindow,
        _ => Verdict::Undecided,
    };
    BasinReport { verdict, forward, backward }
}

#[derive(Clone, Debug, Serialize)]
pub struct DescentReport {
    pub samples: usize,
    pub seed: u64,
    pub bound: f64,
    /// Largest φ(f²p) − φ(p) seen.
    pub max_drop: f64,
    pub violations: usize,
}

pub const DESCENT_SEED: u64 = 0xd05c_e27d;

/// Samples points of R_5^+ in the box |x|, |y| ≤ `extent` and checks
/// y(f²p) − y(p) ≤ 2a with slack 1e-9.
pub fn descent_check(params: &Params, samples: usize, extent: f64) -> DescentReport {
    let map = FamilyMap::<Dd>::new(params).with_near_radius(0.0);
    let bound = 2.0 * params.a_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(DESCENT_SEED);
    let mut got = 0;
    let mut violations = 0;
    let mut max_drop = f64::NEG_INFINITY;
    while got < samples {
        let x: f64 = rng.gen_range(-extent..extent);
        let y: f64 = rng.gen_range(-extent..extent);
        if plus_cell(&x, &y) != Ok(5) {
            continue;
        }
        got += 1;
        let p = ChartPoint::affine(Dd::from(x), Dd::from(y));
        let q = map.apply(&p, Direction::Forward).and_then(|q| map.apply(&q, Direction::Forward));
        match q {
            Ok(ChartPoint::Affine { y: y2, .. }) => {
                let d = (y2 - Dd::from(y)).to_f64();
                max_drop = max_drop.max(d);
                if d > bound + 1e-9 {
                    violations += 1;
                }
            }
            _ => violations += 1,
        }
    }
    DescentReport { samples, seed: DESCENT_SEED, bound, max_drop, violations }
}

/// Coordinate of f^k(p) for p on a V-curve at infinity, or `None` once the
/// orbit leaves the curves at infinity.
pub fn v_orbit(curve: VCurve, t: f64, params: &Params, steps: usize) -> Vec<Option<(VCurve, f64)>> {
    let map = FamilyMap::<Dd>::new(params).with_near_radius(0.0);
    let mut q = ChartPoint::on(curve, Dd::from(t));
    let mut out = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        match q {
            ChartPoint::On { curve, t } => out.push(Some((curve, t.to_f64()))),
            ChartPoint::Affine { x, y } if x.is_zero() => out.push(Some((VCurve::V1, y.to_f64()))),
            _ => out.push(None),
        }
        if k < steps {
            match map.apply(&q, Direction::Forward) {
                Ok(n) => q = n,
                Err(_) => {
                    out.extend(std::iter::repeat_n(None, steps - k));
                    break;
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct RegionMapReport {
    pub samples: usize,
    /// Images of R_5^+ samples outside R_7^-.
    pub r5_violations: usize,
    /// Images of R_6^- ∪ R_7^- samples outside R_5^+.
    pub r67_violations: usize,
}

/// Samples f(R_5^+) ⊂ R_7^- and f(R_6^- ∪ R_7^-) ⊂ R_5^+.
pub fn region_map_check(params: &Params, samples: usize, extent: f64) -> RegionMapReport {
    let map = FamilyMap::<Dd>::new(params).with_near_radius(0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(DESCENT_SEED ^ 0x61);
    let image = |x: f64, y: f64| -> Option<(u8, u8)> {
        let p = map.apply(&ChartPoint::affine(Dd::from(x), Dd::from(y)), Direction::Forward).ok()?;
        let ChartPoint::Affine { x, y } = p else { return None };
        let (tx, ty) = map.tau_raw(&x, &y);
        Some((plus_cell(&x, &y).ok()?, plus_cell(&tx, &ty).ok()?))
    };
    let (mut a, mut b) = (0, 0);
    let (mut got_a, mut got_b) = (0, 0);
    while got_a < samples || got_b < samples {
        let x: f64 = rng.gen_range(-extent..extent);
        let y: f64 = rng.gen_range(-extent..extent);
        let (tx, ty) = map.tau_raw(&Dd::from(x), &Dd::from(y));
        if got_a < samples && plus_cell(&x, &y) == Ok(5) {
            got_a += 1;
            if !matches!(image(x, y), Some((_, 7))) {
                a += 1;
            }
        }
        if got_b < samples && matches!(plus_cell(&tx, &ty), Ok(6 | 7)) {
            got_b += 1;
            if !matches!(image(x, y), Some((5, _))) {
                b += 1;
            }
        }
    }
    RegionMapReport { samples, r5_violations: a, r67_violations: b }
}
