//! Adaptive iteration of parametrized curves on the compactified plane.
//!
//! A curve is a base parametrization `u ↦ γ(u)` together with a signed
//! iterate count; every vertex is computed from its source parameter, so the
//! result never accumulates polyline error across iterates. Vertices are
//! refined in the compactified disk, and every crossing of a V-curve is
//! bracketed by bisection down to a tiny parameter window.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::map_core::{ChartPoint, Direction, FamilyMap, Params, VCurve};
use crate::real_dynamics::regions::plus_cell;

use super::disk::{disk_of, pdist, R_INF};

/// Base curves.
#[derive(Clone, Debug)]
pub enum SourceKind {
    /// `(x0, y0) + φ(u)(dx, dy)`, φ(u) = u/(1 − u²), u ∈ (−1, 1); closed
    /// through its point at infinity.
    Line { x0: Dd, y0: Dd, dx: Dd, dy: Dd },
    /// `(x−1)(y−1) = 1` as `(1 + w, 1 + 1/w)`, w = φ(u).
    C1Plus,
    /// τ of `C1Plus`.
    C1Minus,
    /// `p + u v`, u ∈ [−1, 1].
    Segment { p: [Dd; 2], v: [Dd; 2] },
}

fn phi(u: Dd) -> Dd {
    u / (Dd::ONE - u * u)
}

/// A base curve restricted to a parameter range and pushed by `pre` iterates.
#[derive(Clone, Debug)]
pub struct Source {
    pub kind: SourceKind,
    pub name: String,
    pub range: (Dd, Dd),
    pub pre: i32,
    /// Exact points replacing the evaluation at the range ends.
    pub ends: (Option<ChartPoint<Dd>>, Option<ChartPoint<Dd>>),
}

impl Source {
    pub fn new(kind: SourceKind, name: impl Into<String>) -> Self {
        Source { kind, name: name.into(), range: (-Dd::ONE, Dd::ONE), pre: 0, ends: (None, None) }
    }

    /// Horizontal line `y = t`.
    pub fn horizontal(t: f64) -> Self {
        let kind = SourceKind::Line { x0: Dd::ZERO, y0: Dd::from(t), dx: Dd::ONE, dy: Dd::ZERO };
        Source::new(kind, format!("H_{t}"))
    }

    /// τ of the horizontal line `y = t`, the line `y = bx + a + 1 − t`.
    pub fn tau_horizontal(t: f64, params: &Params) -> Self {
        let y0 = params.a_dd() + Dd::ONE - Dd::from(t);
        let kind = SourceKind::Line { x0: Dd::ZERO, y0, dx: Dd::ONE, dy: params.b_dd() };
        Source::new(kind, format!("tauH_{t}"))
    }

    /// A general line through `(x0, y0)` with direction `(dx, dy)`.
    pub fn line(x0: f64, y0: f64, dx: f64, dy: f64) -> Self {
        let kind = SourceKind::Line { x0: x0.into(), y0: y0.into(), dx: dx.into(), dy: dy.into() };
        Source::new(kind, format!("line({x0},{y0};{dx},{dy})"))
    }

    pub fn c0_plus() -> Self {
        let kind = SourceKind::Line { x0: Dd::ZERO, y0: Dd::ZERO, dx: Dd::ONE, dy: Dd::ZERO };
        Source::new(kind, "C0+")
    }

    pub fn c0_minus(params: &Params) -> Self {
        let kind = SourceKind::Line { x0: Dd::ZERO, y0: params.a_dd() + Dd::ONE, dx: Dd::ONE, dy: params.b_dd() };
        Source::new(kind, "C0-")
    }

    pub fn c1_plus() -> Self {
        Source::new(SourceKind::C1Plus, "C1+")
    }

    pub fn c1_minus() -> Self {
        Source::new(SourceKind::C1Minus, "C1-")
    }

    pub fn segment(p: [Dd; 2], v: [Dd; 2], name: impl Into<String>) -> Self {
        Source::new(SourceKind::Segment { p, v }, name)
    }

    pub fn with_range(mut self, lo: Dd, hi: Dd) -> Self {
        self.range = (lo, hi);
        self.ends = (None, None);
        self
    }

    pub fn with_ends(mut self, lo: Option<ChartPoint<Dd>>, hi: Option<ChartPoint<Dd>>) -> Self {
        self.ends = (lo, hi);
        self
    }

    pub fn with_pre(mut self, pre: i32) -> Self {
        self.pre = pre;
        self
    }

    fn at_infinity(&self, a: Dd, b: Dd) -> Option<ChartPoint<Dd>> {
        match &self.kind {
            SourceKind::Line { x0, y0, dx, dy } => Some(line_at_infinity(*x0, *y0, *dx, *dy, b)),
            SourceKind::C1Plus => Some(ChartPoint::on(VCurve::V4, Dd::ONE)),
            SourceKind::C1Minus => Some(ChartPoint::on(VCurve::V5, a)),
            SourceKind::Segment { .. } => None,
        }
    }

    /// Base point at parameter `u`.
    pub fn base(&self, u: Dd, map: &FamilyMap<Dd>) -> Option<ChartPoint<Dd>> {
        if u == self.range.0 {
            if let Some(p) = &self.ends.0 {
                return Some(*p);
            }
        }
        if u == self.range.1 {
            if let Some(p) = &self.ends.1 {
                return Some(*p);
            }
        }
        if (u.abs() - Dd::ONE).is_zero() {
            if let Some(p) = self.at_infinity(map.a, map.b) {
                return Some(p);
            }
        }
        let p = match &self.kind {
            SourceKind::Line { x0, y0, dx, dy } => {
                let s = phi(u);
                ChartPoint::affine(*x0 + s * *dx, *y0 + s * *dy)
            }
            SourceKind::C1Plus | SourceKind::C1Minus => {
                let w = phi(u);
                if w.is_zero() {
                    let t = if matches!(self.kind, SourceKind::C1Plus) { Dd::ONE } else { -Dd::ONE };
                    return Some(ChartPoint::on(VCurve::V3, t));
                }
                let (x, y) = (Dd::ONE + w, Dd::ONE + Dd::ONE / w);
                if matches!(self.kind, SourceKind::C1Plus) {
                    ChartPoint::affine(x, y)
                } else {
                    let (x, y) = map.tau_raw(&x, &y);
                    ChartPoint::affine(x, y)
                }
            }
            SourceKind::Segment { p, v } => ChartPoint::affine(p[0] + u * v[0], p[1] + u * v[1]),
        };
        Some(p)
    }
}

fn line_at_infinity(x0: Dd, y0: Dd, dx: Dd, dy: Dd, b: Dd) -> ChartPoint<Dd> {
    if dy.is_zero() {
        ChartPoint::on(VCurve::V4, y0)
    } else if dx.is_zero() {
        if (x0 - Dd::ONE).is_zero() {
            ChartPoint::on(VCurve::V3, Dd::ZERO)
        } else {
            ChartPoint::on(VCurve::V2, x0)
        }
    } else if (dy - b * dx).is_zero() {
        ChartPoint::on(VCurve::V5, y0 - b * x0)
    } else {
        ChartPoint::on(VCurve::V0, dy / dx)
    }
}

#[derive(Clone, Debug)]
pub struct TraceConfig {
    /// Maximal vertex spacing in the disk metric.
    pub eps: f64,
    /// Maximal midpoint deviation from the chord, disk metric.
    pub dev: f64,
    /// Parameter width below which a segment is resolved as a crossing.
    pub min_width: f64,
    pub initial: usize,
    pub max_vertices: usize,
    pub max_iterate: u32,
    /// Report indeterminacy hits as errors instead of cuts.
    pub strict: bool,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig {
            eps: 1e-3,
            dev: 1e-4,
            min_width: 1e-25,
            initial: 256,
            max_vertices: 8_000_000,
            max_iterate: 40,
            strict: false,
        }
    }
}

/// Label codes: 1..=7 regions, 0 on a dividing curve, 8 + j on V_j, 255 failed.
pub const FAILED: u8 = 255;

#[derive(Clone, Copy, Debug)]
pub struct Vertex {
    pub u: Dd,
    pub p: Option<ChartPoint<Dd>>,
    pub disk: [f64; 2],
    pub r: f64,
    pub plus: u8,
    pub minus: u8,
}

impl Vertex {
    pub fn failed(&self) -> bool {
        self.p.is_none()
    }

    pub fn affine(&self) -> Option<(Dd, Dd)> {
        match self.p {
            Some(ChartPoint::Affine { x, y }) => Some((x, y)),
            _ => None,
        }
    }
}

/// Endpoint of a piece on one of the V-curves.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VEnd {
    pub curve: VCurve,
    pub t: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum CutKind {
    /// Crossing of a V-curve at infinity; `gap` is the disagreement of the two sides.
    Infinity { end: VEnd, gap: f64 },
    /// Crossing of the line x = 0.
    V1 { t: f64 },
    /// Change of region across a dividing curve, per side.
    Boundary { plus: bool, minus: bool },
    /// Evaluation failed on a parameter window that could not be resolved.
    Halt { u: f64 },
    /// A jump that bisection could not explain.
    Unresolved { u: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Cut {
    /// The cut sits between vertices `after` and `after + 1`.
    pub after: usize,
    pub kind: CutKind,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct TraceStats {
    pub vertices: usize,
    pub min_spacing: f64,
    pub max_spacing: f64,
    pub chart_switches: usize,
    pub v1_crossings: usize,
    pub boundary_cuts: usize,
    pub halts: usize,
    pub unresolved: usize,
    pub length: f64,
}

#[derive(Clone, Debug)]
pub struct TracedCurve {
    pub source: Source,
    pub n: i32,
    pub vertices: Vec<Vertex>,
    pub cuts: Vec<Cut>,
    pub stats: TraceStats,
    pub(crate) map: FamilyMap<Dd>,
}

enum Item {
    V(Vertex),
    C(CutKind),
}

/// Iterates `source` by f^n (n < 0 for preimages) and refines the image.
pub struct Tracer {
    pub map: FamilyMap<Dd>,
    pub cfg: TraceConfig,
}

/// Relative size below which a dividing-curve equation counts as zero, so
/// curves lying on C0 or C1 keep a constant label.
const ON_CURVE: f64 = 1e-29;

fn label_code(x: &Dd, y: &Dd) -> u8 {
    let (xm, ym) = (*x - Dd::ONE, *y - Dd::ONE);
    let g = xm * ym - Dd::ONE;
    let (ax, ay) = (x.abs().to_f64(), y.abs().to_f64());
    let scale = 1.0 + ax + ay;
    if g.abs().to_f64() <= ON_CURVE * scale * scale || ay <= ON_CURVE * scale {
        return if x.is_zero() { 8 + 1 } else { 0 };
    }
    match plus_cell(x, y) {
        Ok(k) => k,
        Err(Some(_)) => 0,
        Err(None) => 8 + 1,
    }
}

impl Tracer {
    pub fn new(params: &Params, cfg: TraceConfig) -> Self {
        Tracer { map: FamilyMap::<Dd>::new(params).with_near_radius(0.0), cfg }
    }

    /// Point f^{pre + n}(γ(u)).
    pub fn eval(&self, source: &Source, n: i32, u: Dd) -> Option<ChartPoint<Dd>> {
        eval_with(&self.map, source, n, u)
    }

    fn vertex(&self, source: &Source, n: i32, u: Dd) -> Vertex {
        make_vertex(&self.map, u, self.eval(source, n, u))
    }

    pub fn iterate_curve(&self, source: &Source, n: i32) -> Result<TracedCurve> {
        if (source.pre + n).unsigned_abs() > self.cfg.max_iterate {
            return Err(Error::Tracer { step: 0, reason: format!("iterate {} beyond cap", source.pre + n) });
        }
        let (lo, hi) = source.range;
        let k = self.cfg.initial.max(2);
        // A generic offset keeps bisection midpoints away from special parameters.
        let us: Vec<Dd> = (0..=k)
            .map(|i| {
                if i == 0 {
                    lo
                } else if i == k {
                    hi
                } else {
                    let f = (i as f64 + std::f64::consts::FRAC_1_PI) / (k as f64 + std::f64::consts::FRAC_2_PI);
                    lo + (hi - lo) * Dd::from(f)
                }
            })
            .collect();
        let verts: Vec<Vertex> = us.par_iter().map(|&u| self.vertex(source, n, u)).collect();
        let budget = AtomicUsize::new(verts.len());
        let chunks: Vec<Vec<Item>> = (0..k)
            .into_par_iter()
            .map(|i| {
                let mut out = Vec::new();
                self.refine(source, n, &verts[i], &verts[i + 1], &mut out, &budget, 0);
                out
            })
            .collect();
        if budget.load(Ordering::Relaxed) > self.cfg.max_vertices {
            return Err(Error::RefinementBudgetExceeded { vertices: budget.load(Ordering::Relaxed) });
        }
        let mut vertices = Vec::new();
        let mut cuts = Vec::new();
        vertices.push(verts[0]);
        for (i, chunk) in chunks.into_iter().enumerate() {
            for item in chunk {
                match item {
                    Item::V(v) => vertices.push(v),
                    Item::C(kind) => cuts.push(Cut { after: vertices.len() - 1, kind }),
                }
            }
            vertices.push(verts[i + 1]);
        }
        if self.cfg.strict {
            if let Some(c) = cuts.iter().find(|c| matches!(c.kind, CutKind::Halt { .. })) {
                if let CutKind::Halt { u } = c.kind {
                    return Err(Error::IndeterminacyHit { param: u });
                }
            }
        }
        let stats = compute_stats(&vertices, &cuts);
        Ok(TracedCurve { source: source.clone(), n, vertices, cuts, stats, map: self.map.clone() })
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(
        &self,
        source: &Source,
        n: i32,
        a: &Vertex,
        b: &Vertex,
        out: &mut Vec<Item>,
        budget: &AtomicUsize,
        depth: usize,
    ) {
        let width = (b.u - a.u).abs().to_f64();
        if budget.load(Ordering::Relaxed) > self.cfg.max_vertices {
            return;
        }
        let scale = a.u.abs().to_f64().max(b.u.abs().to_f64()).max(1e-3);
        if width < self.cfg.min_width * scale || depth > 200 {
            if let Some(kind) = self.resolve(a, b) {
                out.push(Item::C(kind));
            }
            return;
        }
        let mu = a.u + (b.u - a.u) * Dd::from(0.5);
        let m = self.vertex(source, n, mu);
        if !self.needs_split(a, b, &m) {
            return;
        }
        budget.fetch_add(1, Ordering::Relaxed);
        self.refine(source, n, a, &m, out, budget, depth + 1);
        out.push(Item::V(m));
        self.refine(source, n, &m, b, out, budget, depth + 1);
    }

    fn needs_split(&self, a: &Vertex, b: &Vertex, m: &Vertex) -> bool {
        if a.failed() || b.failed() || m.failed() {
            return true;
        }
        if a.plus != b.plus || a.minus != b.minus || m.plus != a.plus || m.minus != a.minus {
            return true;
        }
        let d = pdist(a.disk, b.disk);
        if d > self.cfg.eps {
            return true;
        }
        let d_am = pdist(a.disk, m.disk);
        let d_mb = pdist(m.disk, b.disk);
        // Chord deviation from the triangle inequality defect.
        let h2 = (d_am + d_mb).powi(2) - d.powi(2);
        h2 > 0.0 && h2.sqrt() * 0.5 > self.cfg.dev
    }

    fn resolve(&self, a: &Vertex, b: &Vertex) -> Option<CutKind> {
        if a.failed() || b.failed() {
            return Some(CutKind::Halt { u: a.u.to_f64() });
        }
        let same = a.plus == b.plus && a.minus == b.minus;
        if same && pdist(a.disk, b.disk) <= self.cfg.eps {
            return None;
        }
        if a.r >= R_INF && b.r >= R_INF {
            let ea = end_of(a, &self.map);
            let eb = end_of(b, &self.map);
            return match (ea, eb) {
                (Some(ea), Some(eb)) if ea.curve == eb.curve => {
                    Some(CutKind::Infinity { end: VEnd { curve: ea.curve, t: 0.5 * (ea.t + eb.t) }, gap: (ea.t - eb.t).abs() })
                }
                (Some(ea), _) => Some(CutKind::Infinity { end: ea, gap: f64::INFINITY }),
                _ => Some(CutKind::Unresolved { u: a.u.to_f64() }),
            };
        }
        if same {
            if pdist(a.disk, b.disk) > self.cfg.eps {
                return Some(CutKind::Unresolved { u: a.u.to_f64() });
            }
            return None;
        }
        let (xa, ya) = a.affine()?;
        let (xb, yb) = b.affine()?;
        if xa.signum() != xb.signum() || xa.is_zero() || xb.is_zero() {
            let t = 0.5 * (ya.to_f64() + yb.to_f64());
            return Some(CutKind::V1 { t });
        }
        Some(CutKind::Boundary { plus: a.plus != b.plus, minus: a.minus != b.minus })
    }
}

pub(crate) fn eval_with(map: &FamilyMap<Dd>, source: &Source, n: i32, u: Dd) -> Option<ChartPoint<Dd>> {
    let mut p = source.base(u, map)?;
    let k = source.pre + n;
    let dir = if k >= 0 { Direction::Forward } else { Direction::Backward };
    for _ in 0..k.unsigned_abs() {
        p = map.apply(&p, dir).ok()?;
        if let ChartPoint::Affine { x, y } = &p {
            if !x.is_finite() || !y.is_finite() {
                return None;
            }
        }
    }
    Some(p)
}

pub(crate) fn make_vertex(map: &FamilyMap<Dd>, u: Dd, p: Option<ChartPoint<Dd>>) -> Vertex {
    let Some(p) = p else {
        return Vertex { u, p: None, disk: [0.0; 2], r: f64::NAN, plus: FAILED, minus: FAILED };
    };
    let (disk, r) = disk_of(&p, map.b.to_f64());
    let (plus, minus) = match &p {
        ChartPoint::Affine { x, y } => {
            let (tx, ty) = map.tau_raw(x, y);
            (label_code(x, y), label_code(&tx, &ty))
        }
        ChartPoint::On { curve, .. } => (8 + curve.index() as u8, 8 + curve.index() as u8),
    };
    Vertex { u, p: Some(p), disk, r, plus, minus }
}

/// Chart of a point near infinity from the sizes of the chart functions.
pub fn classify_infinity(x: Dd, y: Dd, b: Dd) -> VEnd {
    let r = x.to_f64().hypot(y.to_f64());
    let small = r.sqrt();
    let t5 = y - b * x;
    if t5.to_f64().abs() <= small {
        return VEnd { curve: VCurve::V5, t: t5.to_f64() };
    }
    if y.to_f64().abs() <= small {
        return VEnd { curve: VCurve::V4, t: y.to_f64() };
    }
    if x.to_f64().abs() <= small {
        let t3 = (x - Dd::ONE) * (y - Dd::ONE);
        if t3.to_f64().abs() <= small {
            return VEnd { curve: VCurve::V3, t: t3.to_f64() };
        }
        return VEnd { curve: VCurve::V2, t: x.to_f64() };
    }
    VEnd { curve: VCurve::V0, t: (y / x).to_f64() }
}

/// V-curve position of an end vertex, if it sits on or next to one.
pub fn end_of(v: &Vertex, map: &FamilyMap<Dd>) -> Option<VEnd> {
    match v.p? {
        ChartPoint::On { curve, t } => Some(VEnd { curve, t: t.to_f64() }),
        ChartPoint::Affine { x, y } => {
            if v.r >= R_INF {
                Some(classify_infinity(x, y, map.b))
            } else if x.abs().to_f64() <= 1e-12 {
                Some(VEnd { curve: VCurve::V1, t: y.to_f64() })
            } else {
                None
            }
        }
    }
}

fn compute_stats(vertices: &[Vertex], cuts: &[Cut]) -> TraceStats {
    let mut s = TraceStats { vertices: vertices.len(), min_spacing: f64::INFINITY, ..Default::default() };
    let mut ci = 0;
    for i in 0..vertices.len().saturating_sub(1) {
        let mut cut_here = false;
        while ci < cuts.len() && cuts[ci].after == i {
            cut_here = true;
            match cuts[ci].kind {
                CutKind::Infinity { .. } => s.chart_switches += 1,
                CutKind::V1 { .. } => s.v1_crossings += 1,
                CutKind::Boundary { .. } => s.boundary_cuts += 1,
                CutKind::Halt { .. } => s.halts += 1,
                CutKind::Unresolved { .. } => s.unresolved += 1,
            }
            ci += 1;
        }
        let (a, b) = (&vertices[i], &vertices[i + 1]);
        if cut_here || a.failed() || b.failed() {
            continue;
        }
        let d = pdist(a.disk, b.disk);
        s.length += d;
        s.min_spacing = s.min_spacing.min(d);
        s.max_spacing = s.max_spacing.max(d);
    }
    s
}

impl TracedCurve {
    pub fn eval(&self, u: Dd) -> Option<ChartPoint<Dd>> {
        eval_with(&self.map, &self.source, self.n, u)
    }

    /// Point of the curve `extra` iterates further along, from the source parameter.
    pub fn eval_shifted(&self, u: Dd, extra: i32) -> Option<ChartPoint<Dd>> {
        eval_with(&self.map, &self.source, self.n + extra, u)
    }

    /// Indices `i` such that the segment (i, i+1) is drawn, i.e. not across a cut.
    pub fn segments(&self) -> Vec<usize> {
        let mut cut = vec![false; self.vertices.len()];
        for c in &self.cuts {
            cut[c.after] = true;
        }
        (0..self.vertices.len().saturating_sub(1))
            .filter(|&i| !cut[i] && !self.vertices[i].failed() && !self.vertices[i + 1].failed())
            .collect()
    }

    /// Maximal runs of vertices between cuts, as inclusive index ranges.
    pub fn runs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut start = 0;
        for c in &self.cuts {
            out.push((start, c.after));
            start = c.after + 1;
        }
        if !self.vertices.is_empty() {
            out.push((start, self.vertices.len() - 1));
        }
        out
    }

    pub fn cut_before(&self, start: usize) -> Option<&Cut> {
        if start == 0 {
            return None;
        }
        self.cuts.iter().find(|c| c.after + 1 == start)
    }

    pub fn cut_after(&self, end: usize) -> Option<&Cut> {
        self.cuts.iter().find(|c| c.after == end)
    }

    pub fn length(&self) -> f64 {
        self.stats.length
    }
}
