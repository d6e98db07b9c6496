//! Fixed points, saddle data and periodic orbits with a prescribed itinerary.

use serde::Serialize;

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::map_core::{ChartPoint, Direction, FamilyMap, Params};
use crate::real_dynamics::regions::plus_cell;
use crate::symbolic::{code_window, is_admissible_symbols, realize_word, transition, RealizeConfig, Word};

/// Search box for fixed points.
pub const BOX: f64 = 1e3;

type M2 = [[Dd; 2]; 2];

fn mul(p: &M2, q: &M2) -> M2 {
    let mut r = [[Dd::ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = p[i][0] * q[0][j] + p[i][1] * q[1][j];
        }
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Eigen {
    Real { small: f64, large: f64 },
    Complex { re: f64, im: f64 },
}

/// Eigenvalues of a real 2×2 matrix, real ones sorted by modulus.
pub fn eigenvalues(m: &[[f64; 2]; 2]) -> Eigen {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = tr * tr / 4.0 - det;
    if disc >= 0.0 {
        let r = disc.sqrt();
        // stable form for the smaller root
        let big = tr / 2.0 + r.copysign(tr);
        let small = if big != 0.0 { det / big } else { tr / 2.0 - r.copysign(tr) };
        Eigen::Real { small, large: big }
    } else {
        Eigen::Complex { re: tr / 2.0, im: (-disc).sqrt() }
    }
}

/// Unit eigenvector of `m` for the real eigenvalue `l`.
pub fn eigenvector(m: &[[f64; 2]; 2], l: f64) -> [f64; 2] {
    let (a, b, c, d) = (m[0][0] - l, m[0][1], m[1][0], m[1][1] - l);
    let v = if a.abs() + b.abs() >= c.abs() + d.abs() { [-b, a] } else { [-d, c] };
    let n = v[0].hypot(v[1]);
    [v[0] / n, v[1] / n]
}

fn to_f64(m: &M2) -> [[f64; 2]; 2] {
    [[m[0][0].to_f64(), m[0][1].to_f64()], [m[1][0].to_f64(), m[1][1].to_f64()]]
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedPoint {
    pub x: f64,
    pub y: f64,
    #[serde(skip)]
    pub point: (Dd, Dd),
    /// Plus-side region, 0 on a dividing curve.
    pub region: u8,
    pub eigen: Eigen,
    pub det: f64,
    pub jacobian: [[f64; 2]; 2],
    pub saddle: bool,
}

impl FixedPoint {
    pub fn chart_point(&self) -> ChartPoint<Dd> {
        ChartPoint::affine(self.point.0, self.point.1)
    }

    /// Stable and unstable unit eigenvectors of a saddle.
    pub fn directions(&self) -> Option<([f64; 2], [f64; 2])> {
        match self.eigen {
            Eigen::Real { small, large } if self.saddle => {
                Some((eigenvector(&self.jacobian, small), eigenvector(&self.jacobian, large)))
            }
            _ => None,
        }
    }
}

fn region(x: &Dd, y: &Dd) -> u8 {
    plus_cell(x, y).unwrap_or(0)
}

fn fixed_from_x(x: Dd, map: &FamilyMap<Dd>) -> Option<FixedPoint> {
    let two = Dd::from(2.0);
    let den = two * x - Dd::ONE;
    if x.is_zero() || den.is_zero() {
        return None;
    }
    let y = x / den;
    if y.is_zero() || !y.is_finite() {
        return None;
    }
    let j = map.jacobian_matrix(&x, &y).ok()?;
    let det = (j[0][0] * j[1][1] - j[0][1] * j[1][0]).to_f64();
    let jf = to_f64(&j);
    let eigen = eigenvalues(&jf);
    let saddle = matches!(eigen, Eigen::Real { small, large } if small.abs() < 1.0 && large.abs() > 1.0);
    Some(FixedPoint {
        x: x.to_f64(),
        y: y.to_f64(),
        point: (x, y),
        region: region(&x, &y),
        eigen,
        det,
        jacobian: jf,
        saddle,
    })
}

/// Real fixed points in |x| ≤ BOX: roots of 2b x² + (2a − b) x − a − 1 with
/// y = x / (2x − 1), bracketed on a grid, bisected and polished by Newton.
pub fn real_fixed_points(params: &Params) -> Vec<FixedPoint> {
    let (a, b) = (params.a_dd(), params.b_dd());
    let two = Dd::from(2.0);
    let p = |x: Dd| two * b * x * x + (two * a - b) * x - a - Dd::ONE;
    let dp = |x: Dd| Dd::from(4.0) * b * x + two * a - b;
    let n = 200_000;
    let xs: Vec<f64> = (0..=n).map(|i| -BOX + 2.0 * BOX * i as f64 / n as f64).collect();
    let mut roots: Vec<Dd> = Vec::new();
    for w in xs.windows(2) {
        let (mut lo, mut hi) = (Dd::from(w[0]), Dd::from(w[1]));
        let (plo, phi) = (p(lo), p(hi));
        if plo.is_zero() {
            roots.push(lo);
            continue;
        }
        if plo.signum() * phi.signum() > 0.0 {
            continue;
        }
        for _ in 0..60 {
            let mid = (lo + hi) * Dd::from(0.5);
            if p(mid).signum() * plo.signum() > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut x = (lo + hi) * Dd::from(0.5);
        for _ in 0..4 {
            let d = dp(x);
            if d.is_zero() {
                break;
            }
            x = x - p(x) / d;
        }
        roots.push(x);
    }
    roots.dedup_by(|u, v| (*u - *v).abs().to_f64() < 1e-12);
    let map = FamilyMap::<Dd>::new(params).with_near_radius(0.0);
    roots.into_iter().filter_map(|x| fixed_from_x(x, &map)).collect()
}

/// A saddle fixed point; the one in R_3^+ when there is a choice.
pub fn find_saddle(params: &Params) -> Result<FixedPoint> {
    let mut s: Vec<FixedPoint> = real_fixed_points(params).into_iter().filter(|f| f.saddle).collect();
    s.sort_by_key(|f| if f.region == 3 { 0 } else { 1 + f.region });
    s.into_iter().next().ok_or_else(|| Error::InvalidParams(format!("no real saddle fixed point for {}", params.label())))
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodicPoint {
    pub word: String,
    pub period: usize,
    pub orbit: Vec<(f64, f64)>,
    #[serde(skip)]
    pub point: (Dd, Dd),
    /// max-norm of f^period(p) − p.
    pub residual: f64,
    pub eigen: Eigen,
    pub newton_steps: usize,
}

impl PeriodicPoint {
    pub fn chart_point(&self) -> ChartPoint<Dd> {
        ChartPoint::affine(self.point.0, self.point.1)
    }
}

fn orbit_and_jacobian(map: &FamilyMap<Dd>, x: Dd, y: Dd, k: usize) -> Option<((Dd, Dd), M2)> {
    let mut m = [[Dd::ONE, Dd::ZERO], [Dd::ZERO, Dd::ONE]];
    let (mut u, mut v) = (x, y);
    for _ in 0..k {
        let j = map.jacobian_matrix(&u, &v).ok()?;
        m = mul(&j, &m);
        let (nu, nv) = map.forward_raw(&u, &v)?;
        u = nu;
        v = nv;
    }
    Some(((u, v), m))
}

/// The periodic orbit whose itinerary repeats the admissible cyclic word
/// `w` (read from j = 0), found by Newton on f^k(p) = p from a realized seed.
pub fn periodic_point(word: &Word, params: &Params) -> Result<PeriodicPoint> {
    let syms = word.symbols().to_vec();
    let k = syms.len();
    let cyclic = k > 0 && is_admissible_symbols(&syms)? && transition(syms[k - 1], syms[0]);
    if !cyclic {
        return Err(Error::InvalidParams(format!("word {word} is not cyclically admissible")));
    }
    let reps = (12 / k).max(3);
    let cfg = RealizeConfig { cap: k * reps, ..RealizeConfig::default() };
    let long: Vec<u8> = syms.iter().copied().cycle().take(k * reps).collect();
    let r = realize_word(&Word::from_symbols(&long)?, params, &cfg)?;
    let map = FamilyMap::<Dd>::new(params).with_near_radius(0.0);
    let mut q = r.witness;
    for _ in 0..k * (reps / 2) {
        q = map.apply(&q, Direction::Forward).map_err(|s| Error::Tracer { step: 0, reason: format!("seed orbit: {s:?}") })?;
    }
    let (mut x, mut y) = match q {
        ChartPoint::Affine { x, y } => (x, y),
        _ => return Err(Error::Tracer { step: 0, reason: "seed at infinity".into() }),
    };
    let fail = |why: &str| Error::Tracer { step: 0, reason: format!("periodic point for {word}: {why}") };
    let mut steps = 0;
    let mut res = f64::INFINITY;
    for it in 0..60 {
        let ((u, v), m) = orbit_and_jacobian(&map, x, y, k).ok_or_else(|| fail("orbit undefined"))?;
        let (gx, gy) = (u - x, v - y);
        let scale = 1.0 + x.abs().to_f64().max(y.abs().to_f64());
        res = gx.abs().to_f64().max(gy.abs().to_f64());
        steps = it;
        if res <= 1e-28 * scale {
            break;
        }
        let (a11, a12, a21, a22) = (m[0][0] - Dd::ONE, m[0][1], m[1][0], m[1][1] - Dd::ONE);
        let det = a11 * a22 - a12 * a21;
        if det.is_zero() {
            return Err(fail("singular Newton matrix"));
        }
        let dx = (a22 * gx - a12 * gy) / det;
        let dy = (a11 * gy - a21 * gx) / det;
        x -= dx;
        y -= dy;
        if !(x.abs().to_f64() <= BOX && y.abs().to_f64() <= BOX) {
            return Err(fail("Newton left the search box"));
        }
    }
    if res > 1e-20 * (1.0 + x.abs().to_f64().max(y.abs().to_f64())) {
        return Err(fail(&format!("Newton residual {res:.2e}")));
    }
    // Newton may land on another phase of the same cycle
    let mut found = None;
    for _ in 0..k {
        let code = code_window(&ChartPoint::affine(x, y), params, 0, k as i64 - 1).map_err(|e| fail(&e.to_string()))?;
        if code.symbols() == syms.as_slice() {
            found = Some(());
            break;
        }
        (x, y) = map.forward_raw(&x, &y).ok_or_else(|| fail("orbit undefined"))?;
    }
    if found.is_none() {
        let code = code_window(&ChartPoint::affine(x, y), params, 0, k as i64 - 1).map_err(|e| fail(&e.to_string()))?;
        return Err(fail(&format!("converged to an orbit coded {code}")));
    }
    let (_, m) = orbit_and_jacobian(&map, x, y, k).ok_or_else(|| fail("orbit undefined"))?;
    let mut orbit = Vec::with_capacity(k);
    let (mut u, mut v) = (x, y);
    for _ in 0..k {
        orbit.push((u.to_f64(), v.to_f64()));
        let n = map.forward_raw(&u, &v).ok_or_else(|| fail("orbit undefined"))?;
        u = n.0;
        v = n.1;
    }
    Ok(PeriodicPoint {
        word: word.to_string(),
        period: k,
        orbit,
        point: (x, y),
        residual: res,
        eigen: eigenvalues(&to_f64(&m)),
        newton_steps: steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_of_diagonal() {
        assert_eq!(eigenvalues(&[[2.0, 0.0], [0.0, 0.5]]), Eigen::Real { small: 0.5, large: 2.0 });
        assert!(matches!(eigenvalues(&[[0.0, -1.0], [1.0, 0.0]]), Eigen::Complex { .. }));
        let v = eigenvector(&[[2.0, 1.0], [0.0, 0.5]], 2.0);
        assert!((v[1]).abs() < 1e-15 && (v[0].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fixed_points_at_reference_parameters() {
        let f = real_fixed_points(&Params::from_ints(-2, 1));
        assert_eq!(f.len(), 2);
        let r = 17f64.sqrt();
        let mut xs: Vec<f64> = f.iter().map(|p| p.x).collect();
        xs.sort_by(f64::total_cmp);
        assert!((xs[0] - (5.0 - r) / 4.0).abs() < 1e-14);
        assert!((xs[1] - (5.0 + r) / 4.0).abs() < 1e-14);
        for p in &f {
            assert!((p.det.abs() - 1.0).abs() < 1e-12);
        }
    }
}
