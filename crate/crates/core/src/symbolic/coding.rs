//! Itineraries of orbits through R_1^+ .. R_4^+ and realization of words by
//! pulling back s-arcs.

use std::fmt;

use serde::Serialize;

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::map_core::{ChartPoint, Direction, FamilyMap, Params};
use crate::measure_lab::tracer::{Source, TraceConfig, Tracer};
use crate::picard::Side;
use crate::real_dynamics::arcs::{canonical_arcs, default_rows, pieces, ArcType, TypeTable};
use crate::real_dynamics::intervals::Flavor;
use crate::real_dynamics::regions::plus_cell;

use super::{is_admissible_symbols, transition, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CodeFailureKind {
    /// The iterate lies in R_5^+, R_6^+ or R_7^+.
    LeftRegions(u8),
    /// The iterate lies on a dividing curve or on x = 0.
    OnBoundary,
    /// The iterate is at infinity.
    AtInfinity,
    /// The map is undefined at the previous iterate.
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CodeFailure {
    /// Iterate index where the orbit first failed to be coded.
    pub at: i64,
    pub kind: CodeFailureKind,
}

impl fmt::Display for CodeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "orbit not coded at j = {}: {:?}", self.at, self.kind)
    }
}

fn symbol_of(p: &ChartPoint<Dd>) -> std::result::Result<u8, CodeFailureKind> {
    match p {
        ChartPoint::On { .. } => Err(CodeFailureKind::AtInfinity),
        ChartPoint::Affine { x, y } => match plus_cell(x, y) {
            Ok(k) if k <= 4 => Ok(k),
            Ok(k) => Err(CodeFailureKind::LeftRegions(k)),
            Err(_) => Err(CodeFailureKind::OnBoundary),
        },
    }
}

/// Symbols of f^j(p) for j in `from..=to` (from ≤ 0 ≤ to).
pub fn code_window(p: &ChartPoint<Dd>, params: &Params, from: i64, to: i64) -> std::result::Result<Word, CodeFailure> {
    let map = FamilyMap::<Dd>::new(params).with_near_radius(0.0);
    let s0 = symbol_of(p).map_err(|kind| CodeFailure { at: 0, kind })?;
    let walk = |dir: Direction, steps: i64| -> std::result::Result<Vec<u8>, CodeFailure> {
        let sign = if dir.is_forward() { 1 } else { -1 };
        let mut q = *p;
        let mut out = Vec::new();
        for j in 1..=steps {
            q = map
                .apply(&q, dir)
                .map_err(|_| CodeFailure { at: sign * j, kind: CodeFailureKind::Indeterminate })?;
            out.push(symbol_of(&q).map_err(|kind| CodeFailure { at: sign * j, kind })?);
        }
        Ok(out)
    };
    let fwd = walk(Direction::Forward, to.max(0))?;
    let mut back = walk(Direction::Backward, (-from).max(0))?;
    back.reverse();
    let anchor = back.len();
    let mut symbols = back;
    symbols.push(s0);
    symbols.extend(fwd);
    Ok(Word::new(symbols, anchor).expect("symbols are in 1..=4"))
}

/// The word w_{-k} .. w_k of plus-region labels along the orbit of p.
pub fn code_orbit(p: &ChartPoint<Dd>, params: &Params, k: usize) -> std::result::Result<Word, CodeFailure> {
    code_window(p, params, -(k as i64), k as i64)
}

#[derive(Clone, Debug)]
pub struct RealizeConfig {
    /// Longest word accepted.
    pub cap: usize,
    pub trace: TraceConfig,
}

impl Default for RealizeConfig {
    fn default() -> Self {
        RealizeConfig { cap: 9, trace: TraceConfig { initial: 64, ..TraceConfig::default() } }
    }
}

/// A point whose forward itinerary is the word, with the s-arc it sits on.
#[derive(Clone, Debug)]
pub struct Realization {
    pub word: Word,
    pub witness: ChartPoint<Dd>,
    /// The arc as a restricted, pulled-back source.
    pub source: Source,
    /// Polyline of the final arc.
    pub arc: Vec<ChartPoint<Dd>>,
    /// Vertex count of the traced preimage at each pullback step.
    pub steps: Vec<usize>,
}

/// Finds a point p with f^j(p) ∈ R_{w_j}^+ for j = 0 .. len−1, starting from
/// the canonical s-arc of a successor of w_last and pulling back one symbol at a time.
pub fn realize_word(word: &Word, params: &Params, cfg: &RealizeConfig) -> Result<Realization> {
    let syms = word.symbols();
    if syms.is_empty() {
        return Err(Error::InvalidParams("empty word".into()));
    }
    if syms.len() > cfg.cap {
        return Err(Error::InvalidParams(format!("word length {} above cap {}", syms.len(), cfg.cap)));
    }
    if !is_admissible_symbols(syms)? {
        return Err(Error::InvalidParams(format!("word {word} is not admissible")));
    }
    let canon = canonical_arcs(params)?;
    let table = TypeTable::new(params, default_rows());
    let tracer = Tracer::new(params, cfg.trace.clone());
    // canonical arcs lie on C(f); start one symbol later so every coded iterate is interior
    let last = *syms.last().unwrap();
    let next = (1..=4).find(|&k| transition(last, k)).expect("every symbol has a successor");
    let start = canon
        .iter()
        .find(|c| c.arc_type == ArcType { index: next, flavor: Flavor::S })
        .expect("all four s-types are present");
    let mut source = start.source.clone();
    let mut steps = Vec::new();
    for (step, &w) in syms.iter().rev().enumerate() {
        let curve = tracer.iterate_curve(&source, -1)?;
        steps.push(curve.stats.vertices);
        let best = pieces(&curve, Side::Plus, &table)
            .into_iter()
            .filter(|a| a.typed == Some(ArcType { index: w, flavor: Flavor::S }))
            .max_by_key(|a| a.last - a.first)
            .ok_or_else(|| Error::Tracer { step, reason: format!("no {w}s piece in the preimage") })?;
        let (lo, hi) = best.u_range;
        let pre = source.pre - 1;
        source = Source { range: (lo, hi), pre, ends: (None, None), ..source };
    }
    let curve = tracer.iterate_curve(&source, 0)?;
    let arc: Vec<ChartPoint<Dd>> = curve.vertices.iter().filter_map(|v| v.p).collect();
    let (lo, hi) = source.range;
    let witness = tracer
        .eval(&source, 0, lo + (hi - lo) * Dd::from(0.5))
        .ok_or_else(|| Error::Tracer { step: syms.len(), reason: "witness undefined".into() })?;
    Ok(Realization { word: word.clone(), witness, source, arc, steps })
}
