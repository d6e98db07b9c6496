//! Arc typing: pieces of traced curves, the endpoint table and s/u counts.

use std::fmt;

use serde::Serialize;

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::map_core::{ChartPoint, FamilyMap, Params, VCurve};
use crate::measure_lab::tracer::{end_of, CutKind, Source, TraceConfig, TracedCurve, Tracer, VEnd};
use crate::picard::Side;
use crate::symbolic::{Mat4, F};

use super::intervals::{e_intervals, EIntervals, Flavor};
use super::regions::plus_cell;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ArcType {
    pub index: u8,
    pub flavor: Flavor,
}

impl fmt::Display for ArcType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.index, self.flavor)
    }
}

impl ArcType {
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParams(format!("arc type `{s}`"));
        let mut ch = s.chars();
        let index = ch.next().and_then(|c| c.to_digit(10)).ok_or_else(bad)? as u8;
        let flavor = match ch.next() {
            Some('s') => Flavor::S,
            Some('u') => Flavor::U,
            _ => return Err(bad()),
        };
        if !(1..=4).contains(&index) || ch.next().is_some() {
            return Err(bad());
        }
        Ok(ArcType { index, flavor })
    }
}

/// One row of the typing table for s-arcs: the region and the two sets of
/// V-curves whose E^u intervals may hold the endpoints.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypeRow {
    pub index: u8,
    pub first: Vec<VCurve>,
    pub second: Vec<VCurve>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TypeTable {
    pub rows: Vec<TypeRow>,
    #[serde(skip)]
    pub e: EIntervals,
    #[serde(skip)]
    a: f64,
    #[serde(skip)]
    b: f64,
}

/// Rows as read off the canonical arcs; the first end of the 1s row also
/// admits E4u.
pub fn default_rows() -> Vec<TypeRow> {
    use VCurve::*;
    vec![
        TypeRow { index: 1, first: vec![V1, V4], second: vec![V5] },
        TypeRow { index: 2, first: vec![V3], second: vec![V4] },
        TypeRow { index: 3, first: vec![V1], second: vec![V4] },
        TypeRow { index: 4, first: vec![V1], second: vec![V3] },
    ]
}

impl TypeTable {
    pub fn new(params: &Params, rows: Vec<TypeRow>) -> Self {
        TypeTable { rows, e: e_intervals(params), a: params.a_f64(), b: params.b_f64() }
    }

    fn in_eu(&self, end: &VEnd, curves: &[VCurve]) -> bool {
        curves.contains(&end.curve) && self.e.get(end.curve, Flavor::U).is_some_and(|i| i.contains(end.t))
    }

    /// s-type of a piece in R_index^+ with the given ends.
    pub fn s_type(&self, index: u8, a: &VEnd, b: &VEnd) -> bool {
        let Some(row) = self.rows.iter().find(|r| r.index == index) else { return false };
        (self.in_eu(a, &row.first) && self.in_eu(b, &row.second))
            || (self.in_eu(b, &row.first) && self.in_eu(a, &row.second))
    }

    /// u-type: the τ-image is an s-arc of the same index.
    pub fn u_type(&self, index: u8, a: &VEnd, b: &VEnd) -> bool {
        self.s_type(index, &tau_end(a, self.a, self.b), &tau_end(b, self.a, self.b))
    }
}

/// Action of τ on V-curve coordinates.
pub fn tau_end(e: &VEnd, a: f64, b: f64) -> VEnd {
    use VCurve::*;
    let (curve, t) = match e.curve {
        V0 => (V0, b - e.t),
        V1 => (V1, a + 1.0 - e.t),
        V2 => (V2, e.t),
        V3 => (V3, -e.t),
        V4 => (V5, a + 1.0 - e.t),
        V5 => (V4, a + 1.0 - e.t),
    };
    VEnd { curve, t }
}

/// A maximal piece of a traced curve between V-crossings and region changes
/// of one side.
#[derive(Clone, Debug, Serialize)]
pub struct Arc {
    pub side: Side,
    pub first: usize,
    pub last: usize,
    #[serde(skip)]
    pub u_range: (Dd, Dd),
    pub start: Option<VEnd>,
    pub end: Option<VEnd>,
    /// Region index on this side, when the interior stays in one open region.
    pub region: Option<u8>,
    /// Candidate regions of a piece lying on a dividing curve.
    pub adjacent: Vec<u8>,
    pub typed: Option<ArcType>,
}

fn end_from_cut(kind: &CutKind) -> Option<VEnd> {
    match kind {
        CutKind::Infinity { end, .. } => Some(*end),
        CutKind::V1 { t } => Some(VEnd { curve: VCurve::V1, t: *t }),
        _ => None,
    }
}

fn cut_applies(kind: &CutKind, side: Side) -> bool {
    match kind {
        CutKind::Boundary { plus, minus } => match side {
            Side::Plus => *plus,
            Side::Minus => *minus,
        },
        _ => true,
    }
}

/// Regions touching a point on a dividing curve.
fn adjacent_regions(map: &FamilyMap<Dd>, p: &ChartPoint<Dd>, side: Side) -> Vec<u8> {
    let ChartPoint::Affine { x, y } = *p else { return vec![] };
    let (x, y) = match side {
        Side::Plus => (x, y),
        Side::Minus => map.tau_raw(&x, &y),
    };
    let hx = 1e-9 * (1.0 + x.abs().to_f64());
    let hy = 1e-9 * (1.0 + y.abs().to_f64());
    let mut out = Vec::new();
    for (dx, dy) in [(hx, 0.0), (-hx, 0.0), (0.0, hy), (0.0, -hy)] {
        if let Ok(k) = plus_cell(&(x + dx), &(y + dy)) {
            if !out.contains(&k) {
                out.push(k);
            }
        }
    }
    out.sort();
    out
}

/// Pieces of `curve` for one side, each typed against `table`.
pub fn pieces(curve: &TracedCurve, side: Side, table: &TypeTable) -> Vec<Arc> {
    let verts = &curve.vertices;
    let mut out = Vec::new();
    if verts.is_empty() {
        return out;
    }
    // Cuts separated by at most one vertex form a single crossing.
    let mut groups: Vec<(usize, usize, Option<VEnd>)> = Vec::new();
    for c in &curve.cuts {
        if !cut_applies(&c.kind, side) {
            continue;
        }
        let e = end_from_cut(&c.kind);
        match groups.last_mut() {
            Some(g) if c.after <= g.1 + 1 => {
                g.1 = c.after;
                g.2 = g.2.or(e);
            }
            _ => groups.push((c.after, c.after, e)),
        }
    }
    let n = verts.len();
    let mut start = 0usize;
    let mut start_end = end_of(&verts[0], &curve.map);
    for (first, last, e) in groups {
        if first > start {
            out.push(make_arc(curve, side, table, start, first, start_end, e));
        }
        start = last + 1;
        start_end = e;
    }
    if n - 1 > start {
        out.push(make_arc(curve, side, table, start, n - 1, start_end, end_of(&verts[n - 1], &curve.map)));
    }
    out
}

fn make_arc(
    curve: &TracedCurve,
    side: Side,
    table: &TypeTable,
    first: usize,
    last: usize,
    start: Option<VEnd>,
    end: Option<VEnd>,
) -> Arc {
    let verts = &curve.vertices[first..=last];
    let mut region = None;
    let mut mixed = false;
    let mut on_curve = None;
    let mid = verts.len() / 2;
    for (i, v) in verts.iter().enumerate() {
        let lab = match side {
            Side::Plus => v.plus,
            Side::Minus => v.minus,
        };
        match lab {
            1..=7 => match region {
                None => region = Some(lab),
                Some(r) if r != lab => mixed = true,
                _ => {}
            },
            0 if on_curve.is_none() || i <= mid => on_curve = v.p,
            _ => {}
        }
    }
    if mixed {
        region = None;
    }
    let mut adjacent = Vec::new();
    if region.is_none() && !mixed {
        if let Some(p) = on_curve {
            adjacent = adjacent_regions(&curve.map, &p, side);
        }
    }
    let mut arc = Arc {
        side,
        first,
        last,
        u_range: (curve.vertices[first].u, curve.vertices[last].u),
        start,
        end,
        region,
        adjacent,
        typed: None,
    };
    arc.typed = type_arc(&arc, table);
    arc
}

fn type_arc(arc: &Arc, table: &TypeTable) -> Option<ArcType> {
    let (a, b) = (arc.start?, arc.end?);
    let flavor = if arc.side == Side::Plus { Flavor::S } else { Flavor::U };
    let check = |k: u8| match flavor {
        Flavor::S => table.s_type(k, &a, &b),
        Flavor::U => table.u_type(k, &a, &b),
    };
    if let Some(k) = arc.region {
        return ((1..=4).contains(&k) && check(k)).then_some(ArcType { index: k, flavor });
    }
    let matches: Vec<u8> = arc.adjacent.iter().copied().filter(|&k| (1..=4).contains(&k) && check(k)).collect();
    (matches.len() == 1).then(|| ArcType { index: matches[0], flavor })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ArcCounts {
    pub svec: [usize; 4],
    pub uvec: [usize; 4],
}

impl ArcCounts {
    pub fn dominates(v: &[usize; 4], w: &[i64; 4]) -> bool {
        (0..4).all(|i| v[i] as i64 >= w[i])
    }
}

/// Typed-piece counts of both flavors.
pub fn arc_counts(curve: &TracedCurve, table: &TypeTable) -> ArcCounts {
    let mut c = ArcCounts::default();
    for arc in pieces(curve, Side::Plus, table) {
        if let Some(t) = arc.typed {
            c.svec[(t.index - 1) as usize] += 1;
        }
    }
    for arc in pieces(curve, Side::Minus, table) {
        if let Some(t) = arc.typed {
            c.uvec[(t.index - 1) as usize] += 1;
        }
    }
    c
}

/// A canonical arc: its source and the endpoints it was tagged with.
#[derive(Clone, Debug)]
pub struct CanonicalArc {
    pub arc_type: ArcType,
    pub source: Source,
    pub start: VEnd,
    pub end: VEnd,
}

impl CanonicalArc {
    /// E-intervals holding the two ends, as V-curves.
    pub fn tag(&self) -> (VCurve, VCurve) {
        (self.start.curve, self.end.curve)
    }
}

/// The eight canonical arcs. The s-arcs 2, 3, 4 are pieces of C(f); the 1s
/// arc is the piece of f⁻¹(C0+) in R1; the u-arcs are their τ-images.
pub fn canonical_arcs(params: &Params) -> Result<Vec<CanonicalArc>> {
    if params.b_f64() == 0.0 {
        return Err(Error::InvalidParams("canonical arcs require b ≠ 0".into()));
    }
    let tracer = Tracer::new(params, TraceConfig::default());
    let table = TypeTable::new(params, default_rows());
    let zero = ChartPoint::affine(Dd::ZERO, Dd::ZERO);
    // u ↦ φ(u) = 1 maps C0+ param 0.618.. to x = 1; on C1+ w = −1 is (0, 0).
    let w_minus_one = (Dd::ONE - Dd::from(5.0).sqrt()) * 0.5;
    let s3 = Source::c0_plus()
        .with_range(Dd::ZERO, Dd::ONE)
        .with_ends(Some(zero), Some(ChartPoint::on(VCurve::V4, Dd::ZERO)));
    let s2 = Source::c1_plus()
        .with_range(Dd::ZERO, Dd::ONE)
        .with_ends(Some(ChartPoint::on(VCurve::V3, Dd::ONE)), Some(ChartPoint::on(VCurve::V4, Dd::ONE)));
    let s4 = Source::c1_plus()
        .with_range(w_minus_one, Dd::ZERO)
        .with_ends(Some(zero), Some(ChartPoint::on(VCurve::V3, Dd::ONE)));
    // 1s: the R1 piece of f⁻¹(C0+).
    let pre = tracer.iterate_curve(&Source::c0_plus(), -1)?;
    let one_s = pieces(&pre, Side::Plus, &table)
        .into_iter()
        .find(|a| a.typed == Some(ArcType { index: 1, flavor: Flavor::S }))
        .ok_or_else(|| Error::Calibration("no 1s piece in the preimage of C0+".into()))?;
    let s1 = Source::c0_plus().with_range(one_s.u_range.0, one_s.u_range.1).with_pre(-1);
    let mut out = Vec::new();
    let s_sources = [(1u8, s1, one_s.start.unwrap(), one_s.end.unwrap())];
    for (k, src, a, b) in s_sources {
        out.push(CanonicalArc { arc_type: ArcType { index: k, flavor: Flavor::S }, source: src, start: a, end: b });
    }
    let ends = |c: VCurve, t: f64| VEnd { curve: c, t };
    out.push(CanonicalArc {
        arc_type: ArcType { index: 2, flavor: Flavor::S },
        source: s2,
        start: ends(VCurve::V3, 1.0),
        end: ends(VCurve::V4, 1.0),
    });
    out.push(CanonicalArc {
        arc_type: ArcType { index: 3, flavor: Flavor::S },
        source: s3,
        start: ends(VCurve::V1, 0.0),
        end: ends(VCurve::V4, 0.0),
    });
    out.push(CanonicalArc {
        arc_type: ArcType { index: 4, flavor: Flavor::S },
        source: s4,
        start: ends(VCurve::V1, 0.0),
        end: ends(VCurve::V3, 1.0),
    });
    let (a, b) = (params.a_f64(), params.b_f64());
    let s_arcs = out.clone();
    for c in s_arcs {
        out.push(CanonicalArc {
            arc_type: ArcType { index: c.arc_type.index, flavor: Flavor::U },
            source: tau_source(&c.source, params),
            start: tau_end(&c.start, a, b),
            end: tau_end(&c.end, a, b),
        });
    }
    Ok(out)
}

/// τ of a source: the parametrizations of C0± and C1± correspond under τ,
/// and τ f^k = f^{-k} τ.
pub fn tau_source(s: &Source, params: &Params) -> Source {
    use crate::measure_lab::tracer::SourceKind;
    let map = FamilyMap::<Dd>::new(params);
    let kind = match &s.kind {
        SourceKind::Line { x0, y0, dx, dy } => {
            let (x1, y1) = map.tau_raw(x0, y0);
            // direction (dx, dy) ↦ (dx, b dx − dy)
            SourceKind::Line { x0: x1, y0: y1, dx: *dx, dy: map.b * *dx - *dy }
        }
        SourceKind::C1Plus => SourceKind::C1Minus,
        SourceKind::C1Minus => SourceKind::C1Plus,
        SourceKind::Segment { p, v } => {
            let (x1, y1) = map.tau_raw(&p[0], &p[1]);
            SourceKind::Segment { p: [x1, y1], v: [v[0], map.b * v[0] - v[1]] }
        }
    };
    let tau_pt = |p: &Option<ChartPoint<Dd>>| {
        p.map(|q| match q {
            ChartPoint::Affine { x, y } => {
                let (x, y) = map.tau_raw(&x, &y);
                ChartPoint::affine(x, y)
            }
            ChartPoint::On { curve, t } => {
                let e = tau_end(&VEnd { curve, t: t.to_f64() }, params.a_f64(), params.b_f64());
                let t = match curve {
                    VCurve::V0 => map.b - t,
                    VCurve::V2 => t,
                    VCurve::V3 => -t,
                    _ => map.a + Dd::ONE - t,
                };
                ChartPoint::on(e.curve, t)
            }
        })
    };
    let name = if s.name.ends_with('+') {
        s.name.replace('+', "-")
    } else {
        format!("tau({})", s.name)
    };
    Source {
        kind,
        name,
        range: s.range,
        pre: -s.pre,
        ends: (tau_pt(&s.ends.0), tau_pt(&s.ends.1)),
    }
}

/// Typing table read off the canonical arcs; the 1s row additionally
/// admits E4u at its first end.
pub fn derived_table(params: &Params, canon: &[CanonicalArc]) -> TypeTable {
    let mut rows = Vec::new();
    for c in canon.iter().filter(|c| c.arc_type.flavor == Flavor::S) {
        let (a, b) = c.tag();
        let mut first = vec![a];
        if c.arc_type.index == 1 && !first.contains(&VCurve::V4) {
            first.push(VCurve::V4);
        }
        rows.push(TypeRow { index: c.arc_type.index, first, second: vec![b] });
    }
    rows.sort_by_key(|r| r.index);
    TypeTable::new(params, rows)
}

#[derive(Clone, Debug, Serialize)]
pub struct DominationRow {
    pub arc_type: String,
    pub n: i32,
    pub counts: [usize; 4],
    pub required: [i64; 4],
    pub ok: bool,
    pub vertices: usize,
}

fn mat_pow(m: &Mat4, n: u32) -> Mat4 {
    let mut r: Mat4 = std::array::from_fn(|i| std::array::from_fn(|j| (i == j) as i64));
    for _ in 0..n {
        r = crate::picard::mat_mul(&r, m);
    }
    r
}

/// Pulls each canonical s-arc back n times (and pushes each u-arc forward)
/// and compares the typed counts with F^n applied to the unit vector.
pub fn verify_pullback_domination(params: &Params, n: u32, cfg: TraceConfig) -> Result<Vec<DominationRow>> {
    let canon = canonical_arcs(params)?;
    let table = TypeTable::new(params, default_rows());
    let tracer = Tracer::new(params, cfg);
    let fnm = mat_pow(&F, n);
    let mut rows = Vec::new();
    for c in &canon {
        let j = (c.arc_type.index - 1) as usize;
        let steps = match c.arc_type.flavor {
            Flavor::S => -(n as i32),
            Flavor::U => n as i32,
        };
        let curve = tracer.iterate_curve(&c.source, steps)?;
        let counts = arc_counts(&curve, &table);
        let got = if c.arc_type.flavor == Flavor::S { counts.svec } else { counts.uvec };
        let required: [i64; 4] = std::array::from_fn(|i| fnm[i][j]);
        rows.push(DominationRow {
            arc_type: c.arc_type.to_string(),
            n: steps,
            counts: got,
            required,
            ok: ArcCounts::dominates(&got, &required),
            vertices: curve.stats.vertices,
        });
    }
    Ok(rows)
}
