//! The intersection count f^{-n}H_s ∩ f^n τH_t against F^{2n}, with the
//! itinerary of every intersection point.

use serde::Serialize;

use crate::dd::Dd;
use crate::error::Result;
use crate::map_core::{ChartPoint, Params};
use crate::picard;
use crate::real_dynamics::regions::plus_cell;
use crate::symbolic::{admissible_words, Subshift};

use super::intersect::{intersect, IntersectConfig, IntersectionSet};
use super::tracer::{Source, TraceConfig, TracedCurve, Tracer};

/// Number of admissible words w_{-n} .. w_n with w_{-n} ∈ {3, 4} and w_n = 3.
pub fn formula(n: usize) -> u64 {
    let shift = Subshift::new(2 * n);
    let c = shift.count(2 * n + 1, Some(&[3, 4]), Some(&[3]));
    u64::try_from(c).unwrap_or(u64::MAX)
}

/// Complex intersection number f^{n*}C0+ · f^n_* C0- from the Picard data:
/// (A^n e1)ᵀ M (A^n e1).
pub fn complex_count(n: usize) -> i64 {
    let a = picard::restricted_action();
    let m = picard::s_pairing_matrix();
    let mut v = [1, 0, 0];
    for _ in 0..n {
        v = picard::mat_vec(&a, &v);
    }
    picard::pair(&m, &v, &v)
}

fn words(n: usize, first: &[u8]) -> Vec<String> {
    let mut v: Vec<String> =
        admissible_words(2 * n + 1, Some(first), Some(&[3])).iter().map(|w| w.to_string()).collect();
    v.sort();
    v
}

/// The admissible words counted by `formula`, as strings.
pub fn expected_words(n: usize) -> Vec<String> {
    words(n, &[3, 4])
}

/// Admissible words with w_n = 3 and w_{-n} a successor of 3 (2, 3 or 4).
pub fn successor_words(n: usize) -> Vec<String> {
    words(n, &[2, 3, 4])
}

#[derive(Clone, Debug, Serialize)]
pub struct CountReport {
    pub n: usize,
    pub s: f64,
    pub t: f64,
    pub formula: u64,
    pub complex: i64,
    pub count: usize,
    /// Itinerary w_{-n} .. w_n of each point, `None` when some iterate
    /// left R_1^+ ∪ .. ∪ R_4^+.
    pub words: Vec<Option<String>>,
    pub expected: Vec<String>,
    /// Sorted coded words equal the expected set, without repeats.
    pub words_match: bool,
    /// Sorted coded words equal `successor_words(n)`.
    pub successor_match: bool,
    pub min_angle: f64,
    pub max_residual: f64,
    pub all_transversal: bool,
    pub vertices: (usize, usize),
    #[serde(skip)]
    pub set: IntersectionSet,
}

impl CountReport {
    /// Count and words as pinned by F^{2n}_{33} + F^{2n}_{43}.
    pub fn ok(&self) -> bool {
        self.count as u64 == self.formula && self.words_match && self.all_transversal
    }

    /// Count equals the complex intersection number and the words are the
    /// successor-pinned set.
    pub fn consistent(&self) -> bool {
        self.count as i64 == self.complex && self.successor_match && self.all_transversal
    }
}

fn symbol(p: Option<ChartPoint<Dd>>) -> Option<u8> {
    match p? {
        ChartPoint::Affine { x, y } => plus_cell(&x, &y).ok().filter(|&k| k <= 4),
        _ => None,
    }
}

/// Itinerary of an intersection point of `a` = f^{-n}H and `b` = f^n H',
/// computed from the source parameters of both curves.
pub fn code_point(a: &TracedCurve, b: &TracedCurve, u: Dd, v: Dd, n: i32) -> Option<String> {
    let mut out = String::new();
    for j in -n..=n {
        let p = if j >= 0 { a.eval_shifted(u, j) } else { b.eval_shifted(v, j) };
        out.push(char::from(b'0' + symbol(p)?));
    }
    Some(out)
}

/// Traces both curves, intersects and codes.
pub fn count_vs_formula(n: usize, params: &Params, s: f64, t: f64, cfg: &TraceConfig) -> Result<CountReport> {
    let tracer = Tracer::new(params, cfg.clone());
    let a = tracer.iterate_curve(&Source::horizontal(s), -(n as i32))?;
    let b = tracer.iterate_curve(&Source::tau_horizontal(t, params), n as i32)?;
    Ok(count_traced(&a, &b, n, s, t))
}

pub fn count_traced(a: &TracedCurve, b: &TracedCurve, n: usize, s: f64, t: f64) -> CountReport {
    let set = intersect(a, b, &IntersectConfig::default());
    let words: Vec<Option<String>> = set.points.iter().map(|p| code_point(a, b, p.u, p.v, n as i32)).collect();
    let expected = expected_words(n);
    let mut got: Vec<String> = words.iter().flatten().cloned().collect();
    got.sort();
    let all_coded = words.iter().all(|w| w.is_some());
    let words_match = all_coded && got == expected;
    let successor_match = all_coded && got == successor_words(n);
    CountReport {
        n,
        s,
        t,
        formula: formula(n),
        complex: complex_count(n),
        count: set.count,
        min_angle: set.points.iter().map(|p| p.angle).fold(f64::INFINITY, f64::min),
        max_residual: set.points.iter().map(|p| p.residual).fold(0.0, f64::max),
        successor_match,
        all_transversal: set.all_transversal(),
        words,
        expected,
        words_match,
        vertices: (a.stats.vertices, b.stats.vertices),
        set,
    }
}
