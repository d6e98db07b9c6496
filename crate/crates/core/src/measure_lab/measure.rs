//! Normalized counting measures on f^{-n}H_s ∩ f^n τH_t averaged over a grid
//! of lines, and their cylinder statistics.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::map_core::Params;
use crate::symbolic::{parry_measure, Word};

use super::counting::count_traced;
use super::tracer::{Source, TraceConfig, Tracer};

/// Default window for s and t.
pub const WINDOW: (f64, f64) = (0.25, 0.75);

/// `k` equally spaced values from `lo` to `hi` (the midpoint when k = 1).
pub fn grid(k: usize, lo: f64, hi: f64) -> Vec<f64> {
    match k {
        0 => vec![],
        1 => vec![0.5 * (lo + hi)],
        _ => (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Atom {
    pub x: f64,
    pub y: f64,
    pub weight: f64,
    /// w_{-n} .. w_n.
    pub word: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairSummary {
    pub s: f64,
    pub t: f64,
    pub count: usize,
    pub uncoded: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct EmpiricalMeasure {
    pub n: usize,
    pub s_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    pub pairs: Vec<PairSummary>,
    pub atoms: Vec<Atom>,
    /// Points whose orbit left R_1^+ ∪ .. ∪ R_4^+ within the window; they carry no atom.
    pub uncoded: usize,
}

impl EmpiricalMeasure {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// Every point was coded, so all atoms sit in R_1^+ ∪ .. ∪ R_4^+.
    pub fn supported_in_regions(&self) -> bool {
        self.uncoded == 0
            && self.atoms.iter().all(|a| a.word.bytes().all(|c| (b'1'..=b'4').contains(&c)))
    }

    /// Mass of the central cylinders w_{-(d-1)} .. w_{d-1}.
    pub fn cylinder_frequencies(&self, depth: usize) -> BTreeMap<String, f64> {
        let mut out = BTreeMap::new();
        if depth == 0 || depth > self.n + 1 {
            return out;
        }
        let (lo, hi) = (self.n + 1 - depth, self.n + depth);
        for a in &self.atoms {
            *out.entry(a.word[lo..hi].to_string()).or_insert(0.0) += a.weight;
        }
        out
    }

    pub fn compare(&self, depth: usize) -> Comparison {
        let nu = parry_measure();
        let freq = self.cylinder_frequencies(depth);
        let mut rows = Vec::new();
        let len = 2 * depth - 1;
        let mut words: Vec<String> = freq.keys().cloned().collect();
        if depth == 1 {
            for s in ["1", "2", "3", "4"] {
                if !freq.contains_key(s) {
                    words.push(s.to_string());
                }
            }
            words.sort();
        }
        let mut sup: f64 = 0.0;
        for w in words {
            let e = freq.get(&w).copied().unwrap_or(0.0);
            let word = Word::parse(&w).expect("coded words use symbols 1..4");
            let v = nu.nu(&word);
            sup = sup.max((e - v).abs());
            rows.push(CylinderRow { word: w, empirical: e, nu: v });
        }
        Comparison { n: self.n, depth, window_length: len, rows, sup }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CylinderRow {
    pub word: String,
    pub empirical: f64,
    pub nu: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub n: usize,
    pub depth: usize,
    pub window_length: usize,
    pub rows: Vec<CylinderRow>,
    pub sup: f64,
}

/// Uniform atoms at all points of f^{-n}H_s ∩ f^n τH_t over the grid,
/// normalized to unit mass.
pub fn empirical_measure(
    n: usize,
    s_grid: &[f64],
    t_grid: &[f64],
    params: &Params,
    cfg: &TraceConfig,
) -> Result<EmpiricalMeasure> {
    let tracer = Tracer::new(params, cfg.clone());
    let mut pairs = Vec::new();
    let mut raw = Vec::new();
    let mut uncoded = 0;
    let backs = s_grid
        .iter()
        .map(|&s| tracer.iterate_curve(&Source::horizontal(s), -(n as i32)))
        .collect::<Result<Vec<_>>>()?;
    for &t in t_grid {
        let fwd = tracer.iterate_curve(&Source::tau_horizontal(t, params), n as i32)?;
        for (a, &s) in backs.iter().zip(s_grid) {
            let r = count_traced(a, &fwd, n, s, t);
            let mut miss = 0;
            for (p, w) in r.set.points.iter().zip(&r.words) {
                match w {
                    Some(w) => raw.push((p.x, p.y, w.clone())),
                    None => miss += 1,
                }
            }
            uncoded += miss;
            pairs.push(PairSummary { s, t, count: r.count, uncoded: miss });
        }
    }
    let weight = if raw.is_empty() { 0.0 } else { 1.0 / raw.len() as f64 };
    let atoms = raw.into_iter().map(|(x, y, word)| Atom { x, y, weight, word }).collect();
    Ok(EmpiricalMeasure { n, s_grid: s_grid.to_vec(), t_grid: t_grid.to_vec(), pairs, atoms, uncoded })
}
