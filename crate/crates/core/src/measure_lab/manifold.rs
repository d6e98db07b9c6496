//! Stable and unstable manifolds of a saddle fixed point, grown from a short
//! eigen-segment, with arc counts per iterate and plot output.

use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::map_core::{ChartPoint, FamilyMap, Params};
use crate::real_dynamics::arcs::{arc_counts, default_rows, TypeTable};

use super::disk::{disk_coords, disk_of, pdist};
use super::intersect::{intersect, IntersectConfig};
use super::saddle::FixedPoint;
use super::tracer::{Source, TraceConfig, TracedCurve, Tracer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Unstable,
    Stable,
}

#[derive(Clone, Debug)]
pub struct ManifoldConfig {
    /// Half-length of the seed segment along the eigenvector.
    pub delta: f64,
    /// Iterates of the seed segment to trace.
    pub iterates: usize,
    /// Stop this many iterates after the first typed arc appears.
    pub window: Option<usize>,
    /// Stop once the traced length in the disk reaches this value.
    pub budget: Option<f64>,
    pub trace: TraceConfig,
}

impl Default for ManifoldConfig {
    fn default() -> Self {
        ManifoldConfig {
            delta: 1e-7,
            iterates: 24,
            window: None,
            budget: None,
            trace: TraceConfig { initial: 64, eps: 1e-2, dev: 1e-3, ..TraceConfig::default() },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IterateCount {
    pub k: usize,
    pub vertices: usize,
    pub length: f64,
    /// Typed pieces of the branch's own flavor (u-arcs for the unstable branch).
    pub arcs: usize,
    pub svec: [usize; 4],
    pub uvec: [usize; 4],
}

#[derive(Clone, Debug, Serialize)]
pub struct ManifoldTrace {
    pub branch: Branch,
    pub saddle: (f64, f64),
    pub eigenvalue: f64,
    pub direction: [f64; 2],
    pub delta: f64,
    /// |f^{±1}(p + δv) − (p + λδv)| / δ², a check on the seed.
    pub seed_defect: f64,
    pub counts: Vec<IterateCount>,
    #[serde(skip)]
    pub curves: Vec<TracedCurve>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Growth {
    /// First iterate with a typed arc of the branch's flavor.
    pub first: Option<usize>,
    /// count(k0 + j) / count(k0 + j − 1) for the requested j.
    pub ratios: Vec<(usize, f64)>,
}

impl ManifoldTrace {
    /// The last traced iterate.
    pub fn curve(&self) -> &TracedCurve {
        self.curves.last().expect("at least the seed is traced")
    }

    pub fn growth(&self, js: std::ops::RangeInclusive<usize>) -> Growth {
        let first = self.counts.iter().find(|c| c.arcs > 0).map(|c| c.k);
        let mut ratios = Vec::new();
        if let Some(k0) = first {
            for j in js {
                let (Some(c), Some(p)) = (self.counts.get(k0 + j), self.counts.get(k0 + j - 1)) else { break };
                if p.arcs > 0 {
                    ratios.push((j, c.arcs as f64 / p.arcs as f64));
                }
            }
        }
        Growth { first, ratios }
    }
}

fn seed_source(saddle: &FixedPoint, v: [f64; 2], delta: f64, branch: Branch) -> Source {
    let (x, y) = saddle.point;
    let name = match branch {
        Branch::Unstable => "Wu",
        Branch::Stable => "Ws",
    };
    Source::segment([x, y], [Dd::from(v[0] * delta), Dd::from(v[1] * delta)], name)
}

/// Traces f^{±k}(p + [−δ, δ] v) for k = 0 ..= iterates (unstable: f^k, stable: f^{-k}).
pub fn trace_manifold(saddle: &FixedPoint, branch: Branch, params: &Params, cfg: &ManifoldConfig) -> Result<ManifoldTrace> {
    let (vs, vu) = saddle
        .directions()
        .ok_or_else(|| Error::InvalidParams(format!("({}, {}) is not a saddle", saddle.x, saddle.y)))?;
    let (v, lambda) = match (branch, saddle.eigen) {
        (Branch::Unstable, super::saddle::Eigen::Real { large, .. }) => (vu, large),
        (Branch::Stable, super::saddle::Eigen::Real { small, .. }) => (vs, 1.0 / small),
        _ => unreachable!("saddles have real eigenvalues"),
    };
    let sign = match branch {
        Branch::Unstable => 1,
        Branch::Stable => -1,
    };
    let source = seed_source(saddle, v, cfg.delta, branch);
    let tracer = Tracer::new(params, cfg.trace.clone());
    let table = TypeTable::new(params, default_rows());

    let q = tracer.eval(&source, sign, Dd::ONE);
    let (x, y) = saddle.point;
    let seed_defect = match q {
        Some(ChartPoint::Affine { x: u, y: w }) => {
            let ex = u - x - Dd::from(lambda * v[0] * cfg.delta);
            let ey = w - y - Dd::from(lambda * v[1] * cfg.delta);
            ex.to_f64().hypot(ey.to_f64()) / (cfg.delta * cfg.delta)
        }
        _ => f64::INFINITY,
    };

    let mut curves = Vec::with_capacity(cfg.iterates + 1);
    let mut counts = Vec::with_capacity(cfg.iterates + 1);
    for k in 0..=cfg.iterates {
        let curve = tracer.iterate_curve(&source, sign * k as i32)?;
        let c = arc_counts(&curve, &table);
        let arcs = match branch {
            Branch::Unstable => c.uvec.iter().sum(),
            Branch::Stable => c.svec.iter().sum(),
        };
        log::debug!("{branch:?} k={k} vertices={} arcs={arcs}", curve.stats.vertices);
        counts.push(IterateCount {
            k,
            vertices: curve.stats.vertices,
            length: curve.length(),
            arcs,
            svec: c.svec,
            uvec: c.uvec,
        });
        let long = cfg.budget.is_some_and(|b| curve.length() >= b);
        curves.push(curve);
        if long {
            break;
        }
        let first = counts.iter().find(|c| c.arcs > 0).map(|c| c.k);
        if let (Some(w), Some(k0)) = (cfg.window, first) {
            if k >= k0 + w {
                break;
            }
        }
    }
    Ok(ManifoldTrace {
        branch,
        saddle: (saddle.x, saddle.y),
        eigenvalue: lambda,
        direction: v,
        delta: cfg.delta,
        seed_defect,
        counts,
        curves,
    })
}

/// Largest disk distance between τ of the unstable trace and the stable trace
/// at matching parameters, over the vertices of iterate `k`.
pub fn conjugacy_defect(unstable: &ManifoldTrace, stable: &ManifoldTrace, k: usize, params: &Params) -> Option<f64> {
    let (cu, cs) = (unstable.curves.get(k)?, stable.curves.get(k)?);
    let map = FamilyMap::<Dd>::new(params);
    // Dτ v_u = c v_s, so the parameters correspond through c
    let b = params.b_f64();
    let tv = [unstable.direction[0], b * unstable.direction[0] - unstable.direction[1]];
    let c = tv[0] * stable.direction[0] + tv[1] * stable.direction[1];
    let mut worst: f64 = 0.0;
    for v in cu.vertices.iter().filter(|v| v.r < 1e6) {
        let Some(ChartPoint::Affine { x, y }) = v.p else { continue };
        let (tx, ty) = map.tau_raw(&x, &y);
        let Some(q) = cs.eval(v.u * Dd::from(c)) else { continue };
        let (d, _) = disk_of(&q, b);
        let (e, _) = disk_of(&ChartPoint::affine(tx, ty), b);
        worst = worst.max(pdist(d, e));
    }
    Some(worst)
}

#[derive(Clone, Debug, Serialize)]
pub struct HomoclinicRow {
    pub k: usize,
    pub count: usize,
    pub transversal: bool,
    pub ratio: Option<f64>,
}

/// Intersections of the k-th unstable and stable iterates, excluding the saddle.
pub fn homoclinic_check(unstable: &ManifoldTrace, stable: &ManifoldTrace, ks: &[usize]) -> Vec<HomoclinicRow> {
    let mut rows: Vec<HomoclinicRow> = Vec::new();
    for &k in ks {
        let (Some(a), Some(b)) = (unstable.curves.get(k), stable.curves.get(k)) else { continue };
        let set = intersect(a, b, &IntersectConfig::default());
        let (sx, sy) = unstable.saddle;
        let away: Vec<_> = set
            .points
            .iter()
            .filter(|p| (p.x - sx).abs() + (p.y - sy).abs() > 1e-6 * (1.0 + sx.abs() + sy.abs()))
            .collect();
        let count = away.len();
        let ratio = rows.last().filter(|r| r.count > 0).map(|r| count as f64 / r.count as f64);
        rows.push(HomoclinicRow { k, count, transversal: away.iter().all(|p| p.transversal), ratio });
    }
    rows
}

/// One row per drawn vertex: chart, chart coordinates, disk polar coordinates.
pub fn write_csv<W: Write>(out: W, traces: &[&ManifoldTrace], b: f64) -> Result<()> {
    let named: Vec<(&str, &TracedCurve)> = traces
        .iter()
        .map(|t| {
            let name = match t.branch {
                Branch::Unstable => "unstable",
                Branch::Stable => "stable",
            };
            (name, t.curve())
        })
        .collect();
    write_curves_csv(out, &named, b)
}

/// Same layout as `write_csv` for arbitrary named curves.
pub fn write_curves_csv<W: Write>(out: W, curves: &[(&str, &TracedCurve)], b: f64) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["curve", "chart", "c1", "c2", "rho", "theta"]).map_err(csv_err)?;
    for (name, curve) in curves {
        for v in &curve.vertices {
            let Some(p) = v.p else { continue };
            let (c1, c2) = p.coords();
            let (rho, theta) = disk_coords(&p, b);
            let c2 = c2.map(|c| format!("{:.15e}", c.to_f64())).unwrap_or_default();
            w.write_record([
                name.to_string(),
                p.chart().to_string(),
                format!("{:.15e}", c1.to_f64()),
                c2,
                format!("{rho:.15}"),
                format!("{theta:.15}"),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// The traces drawn in the compactified disk.
pub fn svg(traces: &[&ManifoldTrace], size: f64) -> String {
    let h = size / 2.0;
    let r = h * 0.95;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(s, r##"<circle cx="{h}" cy="{h}" r="{r}" fill="none" stroke="#888" stroke-width="1"/>"##);
    for t in traces {
        let color = match t.branch {
            Branch::Unstable => "#c0392b",
            Branch::Stable => "#2471a3",
        };
        let c = t.curve();
        let mut runs: Vec<Vec<[f64; 2]>> = Vec::new();
        let mut last = usize::MAX;
        for i in c.segments() {
            if i != last.wrapping_add(1) || runs.is_empty() {
                runs.push(vec![c.vertices[i].disk]);
            }
            runs.last_mut().unwrap().push(c.vertices[i + 1].disk);
            last = i;
        }
        for run in runs {
            let pts: Vec<String> =
                run.iter().map(|d| format!("{:.2},{:.2}", h + r * d[0], h - r * d[1])).collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="0.6" points="{}"/>"#,
                pts.join(" ")
            );
        }
    }
    if let Some(t) = traces.first() {
        let (d, _) = disk_of(&ChartPoint::affine(Dd::from(t.saddle.0), Dd::from(t.saddle.1)), 0.0);
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="black"/>"#, h + r * d[0], h - r * d[1]);
    }
    s.push_str("</svg>\n");
    s
}
