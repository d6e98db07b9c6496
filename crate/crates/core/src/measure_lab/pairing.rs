//! Real crossings of the exceptional curves against the forced and complex
//! counts, for the entries where the two disagree.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Result;
use crate::map_core::Params;
use crate::real_dynamics::pairing::{pairing_table, PairingEntry};

use super::intersect::{intersect, IntersectConfig};
use super::tracer::{Source, TraceConfig, Tracer};

#[derive(Clone, Debug, Serialize)]
pub struct OracleRow {
    pub plus: &'static str,
    pub minus: &'static str,
    pub forced: i64,
    pub complex: i64,
    /// Real affine crossings found by the tracer.
    pub real: usize,
    pub transversal: bool,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingReport {
    pub params: String,
    pub table: Vec<PairingEntry>,
    pub undisputed_agree: bool,
    pub oracle: Vec<OracleRow>,
}

fn source(name: &str, params: &Params) -> Option<Source> {
    match name {
        "C0+" => Some(Source::c0_plus()),
        "C1+" => Some(Source::c1_plus()),
        "C0-" => Some(Source::c0_minus(params)),
        "C1-" => Some(Source::c1_minus()),
        _ => None,
    }
}

/// The pairing table with real crossing counts for every entry between
/// C0±, C1±.
pub fn pairing_report(params: &Params, cfg: &TraceConfig) -> Result<PairingReport> {
    let table = pairing_table();
    let tracer = Tracer::new(params, cfg.clone());
    let mut oracle = Vec::new();
    for e in table.iter() {
        let (Some(a), Some(b)) = (source(e.plus, params), source(e.minus, params)) else { continue };
        let ca = tracer.iterate_curve(&a, 0)?;
        let cb = tracer.iterate_curve(&b, 0)?;
        let set = intersect(&ca, &cb, &IntersectConfig::default());
        oracle.push(OracleRow {
            plus: e.plus,
            minus: e.minus,
            forced: e.forced,
            complex: e.complex,
            real: set.count,
            transversal: set.all_transversal(),
            points: set.points.iter().map(|p| (p.x, p.y)).collect(),
        });
    }
    let undisputed_agree = table.iter().filter(|e| !e.disputed).all(|e| e.agrees());
    Ok(PairingReport { params: params.label(), table, undisputed_agree, oracle })
}

impl PairingReport {
    /// Plain-text discrepancy report.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "pairing s^T Q u against the complex pairing at {}", self.params);
        for e in &self.table {
            let mark = match (e.disputed, e.agrees()) {
                (_, true) => "agree",
                (true, false) => "DISPUTED",
                (false, false) => "MISMATCH",
            };
            let _ = writeln!(s, "  {:>6} . {:<7} forced {:>2}  complex {:>2}  {mark}", e.plus, e.minus, e.forced, e.complex);
        }
        let _ = writeln!(s, "real affine crossings (points on the curves at infinity are not counted):");
        for r in &self.oracle {
            let verdict = if r.real as i64 > r.complex {
                "exceeds the complex count"
            } else if (r.real as i64) < r.forced {
                "below the forced count"
            } else {
                "consistent"
            };
            let _ = writeln!(
                s,
                "  {:>4} . {:<4} real {:>2}  forced {:>2}  complex {:>2}  transversal {}  {verdict}",
                r.plus, r.minus, r.real, r.forced, r.complex, r.transversal
            );
        }
        s
    }
}
