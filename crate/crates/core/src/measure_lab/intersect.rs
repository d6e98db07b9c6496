//! Real intersections of two traced curves.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::dd::Dd;
use crate::map_core::ChartPoint;

use super::disk::R_INF;
use super::tracer::TracedCurve;

#[derive(Clone, Debug)]
pub struct IntersectConfig {
    /// Disk distance below which two segments are handed to Newton.
    pub slack: f64,
    pub residual: f64,
    pub min_angle: f64,
    pub merge: f64,
    pub max_newton: usize,
}

impl Default for IntersectConfig {
    fn default() -> Self {
        IntersectConfig { slack: 4e-4, residual: 1e-12, min_angle: 1e-4, merge: 1e-8, max_newton: 40 }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct IntersectionPoint {
    pub x: f64,
    pub y: f64,
    #[serde(skip)]
    pub p: ChartPoint<Dd>,
    /// Source parameters on the two curves.
    #[serde(skip)]
    pub u: Dd,
    #[serde(skip)]
    pub v: Dd,
    pub residual: f64,
    /// |sin| of the angle between the tangents.
    pub angle: f64,
    pub transversal: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct IntersectionSet {
    pub points: Vec<IntersectionPoint>,
    pub count: usize,
    /// Seeds that converged onto an already known root.
    pub duplicates: usize,
    /// Distinct roots closer than 1e-6 to each other.
    pub close_pairs: usize,
    pub candidates: usize,
    pub newton_failures: usize,
}

impl IntersectionSet {
    pub fn all_transversal(&self) -> bool {
        self.points.iter().all(|p| p.transversal)
    }
}

struct Seg {
    i: usize,
    a: [f64; 2],
    b: [f64; 2],
}

fn drawable(c: &TracedCurve) -> Vec<Seg> {
    c.segments()
        .into_iter()
        .filter(|&i| c.vertices[i].r < R_INF && c.vertices[i + 1].r < R_INF)
        .map(|i| Seg { i, a: c.vertices[i].disk, b: c.vertices[i + 1].disk })
        .collect()
}

fn seg_dist(p: &Seg, q: &Seg) -> (f64, f64, f64) {
    // closest points of two segments, parameters clamped to [0, 1]
    let d1 = [p.b[0] - p.a[0], p.b[1] - p.a[1]];
    let d2 = [q.b[0] - q.a[0], q.b[1] - q.a[1]];
    let r = [p.a[0] - q.a[0], p.a[1] - q.a[1]];
    let a = d1[0] * d1[0] + d1[1] * d1[1];
    let e = d2[0] * d2[0] + d2[1] * d2[1];
    let f = d2[0] * r[0] + d2[1] * r[1];
    let (s, t);
    if a <= 1e-300 && e <= 1e-300 {
        s = 0.0;
        t = 0.0;
    } else if a <= 1e-300 {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1[0] * r[0] + d1[1] * r[1];
        if e <= 1e-300 {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1[0] * d2[0] + d1[1] * d2[1];
            let den = a * e - b * b;
            let mut s0 = if den > 1e-300 { ((b * f - c * e) / den).clamp(0.0, 1.0) } else { 0.0 };
            let mut t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t0 = 0.0;
                s0 = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t0 = 1.0;
                s0 = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = s0;
            t = t0;
        }
    }
    let cp = [p.a[0] + d1[0] * s - q.a[0] - d2[0] * t, p.a[1] + d1[1] * s - q.a[1] - d2[1] * t];
    (cp[0].hypot(cp[1]), s, t)
}

fn affine(p: Option<ChartPoint<Dd>>) -> Option<(Dd, Dd)> {
    match p? {
        ChartPoint::Affine { x, y } => Some((x, y)),
        _ => None,
    }
}

struct Root {
    u: Dd,
    v: Dd,
    x: Dd,
    y: Dd,
    residual: f64,
    angle: f64,
}

fn newton(a: &TracedCurve, b: &TracedCurve, mut u: Dd, mut v: Dd, hu: Dd, hv: Dd, cfg: &IntersectConfig) -> Option<Root> {
    let in_range = |c: &TracedCurve, w: Dd| {
        let (lo, hi) = c.source.range;
        w >= lo.min_dd(hi) && w <= lo.max_dd(hi)
    };
    let mut prev = f64::INFINITY;
    for _ in 0..cfg.max_newton {
        let (ax, ay) = affine(a.eval(u))?;
        let (bx, by) = affine(b.eval(v))?;
        let (gx, gy) = (ax - bx, ay - by);
        let (a1x, a1y) = affine(a.eval(u + hu))?;
        let (a0x, a0y) = affine(a.eval(u - hu))?;
        let (b1x, b1y) = affine(b.eval(v + hv))?;
        let (b0x, b0y) = affine(b.eval(v - hv))?;
        let two = Dd::from(2.0);
        let (dax, day) = ((a1x - a0x) / (two * hu), (a1y - a0y) / (two * hu));
        let (dbx, dby) = ((b1x - b0x) / (two * hv), (b1y - b0y) / (two * hv));
        let scale = 1.0 + ax.abs().to_f64().max(ay.abs().to_f64());
        let res = gx.abs().to_f64().max(gy.abs().to_f64());
        let na = dax.to_f64().hypot(day.to_f64());
        let nb = dbx.to_f64().hypot(dby.to_f64());
        let cross = (dax * dby - day * dbx).to_f64();
        let angle = if na > 0.0 && nb > 0.0 { (cross / (na * nb)).abs() } else { 0.0 };
        // stop at full precision, or once progress stalls below the cap
        if res <= 1e-28 * scale || (res <= cfg.residual * scale && res > 0.25 * prev) {
            return Some(Root { u, v, x: ax, y: ay, residual: res / scale, angle });
        }
        prev = res;
        // solve [da, -db] (du, dv) = -g
        let det = dax * (-dby) - (-dbx) * day;
        if det.is_zero() || !det.is_finite() {
            return None;
        }
        let du = ((-gx) * (-dby) - (-dbx) * (-gy)) / det;
        let dv = (dax * (-gy) - day * (-gx)) / det;
        u += du;
        v += dv;
        if !in_range(a, u) || !in_range(b, v) {
            return None;
        }
    }
    None
}

trait MinMax {
    fn min_dd(self, o: Self) -> Self;
    fn max_dd(self, o: Self) -> Self;
}

impl MinMax for Dd {
    fn min_dd(self, o: Self) -> Self {
        if self <= o {
            self
        } else {
            o
        }
    }
    fn max_dd(self, o: Self) -> Self {
        if self >= o {
            self
        } else {
            o
        }
    }
}

/// Intersections of the affine parts of two traced curves: grid pruning in
/// the disk, closest-point seeds, then Newton on the source parameters.
pub fn intersect(a: &TracedCurve, b: &TracedCurve, cfg: &IntersectConfig) -> IntersectionSet {
    let sa = drawable(a);
    let sb = drawable(b);
    if sa.is_empty() || sb.is_empty() {
        return IntersectionSet::default();
    }
    let cell = 2e-3_f64.max(4.0 * cfg.slack);
    let key = |x: f64| (x / cell).floor() as i32;
    let mut grid: HashMap<(i32, i32), Vec<usize>> = HashMap::new();
    for (k, s) in sb.iter().enumerate() {
        let (x0, x1) = (s.a[0].min(s.b[0]) - cfg.slack, s.a[0].max(s.b[0]) + cfg.slack);
        let (y0, y1) = (s.a[1].min(s.b[1]) - cfg.slack, s.a[1].max(s.b[1]) + cfg.slack);
        for i in key(x0)..=key(x1) {
            for j in key(y0)..=key(y1) {
                grid.entry((i, j)).or_default().push(k);
            }
        }
    }
    let pairs: Vec<(usize, usize, f64, f64)> = sa
        .par_iter()
        .enumerate()
        .flat_map_iter(|(ka, s)| {
            let mut near = Vec::new();
            let (x0, x1) = (s.a[0].min(s.b[0]), s.a[0].max(s.b[0]));
            let (y0, y1) = (s.a[1].min(s.b[1]), s.a[1].max(s.b[1]));
            for i in key(x0)..=key(x1) {
                for j in key(y0)..=key(y1) {
                    if let Some(list) = grid.get(&(i, j)) {
                        for &kb in list {
                            let (d, ps, pt) = seg_dist(s, &sb[kb]);
                            if d <= cfg.slack {
                                near.push((ka, kb, ps, pt));
                            }
                        }
                    }
                }
            }
            near.sort_by_key(|p| p.1);
            near.dedup_by_key(|p| p.1);
            near
        })
        .collect();
    // Seed Newton only at local minima of the segment distance over the
    // (segment of a, segment of b) grid; each crossing produces one.
    let dist: HashMap<(usize, usize), f64> = pairs
        .iter()
        .map(|&(ka, kb, _, _)| ((ka, kb), seg_dist(&sa[ka], &sb[kb]).0))
        .collect();
    let pairs: Vec<(usize, usize, f64, f64)> = pairs
        .into_iter()
        .filter(|&(ka, kb, _, _)| {
            let d = dist[&(ka, kb)];
            let mut ok = true;
            for da in -1i64..=1 {
                for db in -1i64..=1 {
                    if da == 0 && db == 0 {
                        continue;
                    }
                    let (ia, ib) = (ka as i64 + da, kb as i64 + db);
                    if ia < 0 || ib < 0 {
                        continue;
                    }
                    if let Some(&e) = dist.get(&(ia as usize, ib as usize)) {
                        // ties go to the lexicographically first pair
                        if e < d || (e == d && (ia, ib) < (ka as i64, kb as i64)) {
                            ok = false;
                        }
                    }
                }
            }
            ok
        })
        .collect();
    let candidates = pairs.len();
    let roots: Vec<Option<Root>> = pairs
        .par_iter()
        .map(|&(ka, kb, ps, pt)| {
            let (va0, va1) = (&a.vertices[sa[ka].i], &a.vertices[sa[ka].i + 1]);
            let (vb0, vb1) = (&b.vertices[sb[kb].i], &b.vertices[sb[kb].i + 1]);
            let u = va0.u + (va1.u - va0.u) * Dd::from(ps);
            let v = vb0.u + (vb1.u - vb0.u) * Dd::from(pt);
            let hu = (va1.u - va0.u).abs() * Dd::from(1e-7);
            let hv = (vb1.u - vb0.u).abs() * Dd::from(1e-7);
            if hu.is_zero() || hv.is_zero() {
                return None;
            }
            newton(a, b, u, v, hu, hv, cfg)
        })
        .collect();
    let mut set = IntersectionSet { candidates, ..Default::default() };
    let mut found: Vec<Root> = Vec::new();
    for r in roots {
        let Some(r) = r else {
            set.newton_failures += 1;
            continue;
        };
        let dup = found.iter().any(|q| {
            let d = (q.x - r.x).abs().to_f64().max((q.y - r.y).abs().to_f64());
            d <= cfg.merge * (1.0 + r.x.abs().to_f64().max(r.y.abs().to_f64()))
        });
        if dup {
            set.duplicates += 1;
        } else {
            found.push(r);
        }
    }
    found.sort_by(|p, q| p.x.partial_cmp(&q.x).unwrap().then(p.y.partial_cmp(&q.y).unwrap()));
    for i in 1..found.len() {
        let (p, q) = (&found[i - 1], &found[i]);
        if (p.x - q.x).abs().to_f64() < 1e-6 && (p.y - q.y).abs().to_f64() < 1e-6 {
            set.close_pairs += 1;
        }
    }
    set.points = found
        .into_iter()
        .map(|r| IntersectionPoint {
            x: r.x.to_f64(),
            y: r.y.to_f64(),
            p: ChartPoint::affine(r.x, r.y),
            u: r.u,
            v: r.v,
            residual: r.residual,
            angle: r.angle,
            transversal: r.angle > cfg.min_angle,
        })
        .collect();
    set.count = set.points.len();
    set
}
