//! The subshift of finite type on four symbols with transition matrix F.

mod coding;

pub use coding::{code_orbit, code_window, realize_word, CodeFailure, CodeFailureKind, Realization, RealizeConfig};

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::picard;

pub type Mat4 = [[i64; 4]; 4];

/// Admissible transitions: `F[j-1][k-1] == 1` iff f(R_j) meets R_k.
pub const F: Mat4 = [[0, 1, 1, 0], [1, 0, 0, 0], [0, 1, 1, 1], [0, 0, 1, 1]];

/// Forced crossings between is-arcs and ju-arcs.
pub const Q: Mat4 = [[1, 0, 0, 0], [0, 1, 0, 1], [0, 0, 1, 1], [0, 1, 1, 1]];

pub fn transition(j: u8, k: u8) -> bool {
    F[(j - 1) as usize][(k - 1) as usize] == 1
}

fn check_symbol(s: u8) -> Result<u8> {
    if (1..=4).contains(&s) {
        Ok(s)
    } else {
        Err(Error::BadSymbol(s))
    }
}

/// A finite window `w_{-anchor} .. w_{len-1-anchor}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Word {
    symbols: Vec<u8>,
    anchor: usize,
}

impl Word {
    pub fn new(symbols: Vec<u8>, anchor: usize) -> Result<Self> {
        for &s in &symbols {
            check_symbol(s)?;
        }
        Ok(Word { symbols, anchor })
    }

    /// Word anchored at its first symbol.
    pub fn from_symbols(symbols: &[u8]) -> Result<Self> {
        Self::new(symbols.to_vec(), 0)
    }

    /// Accepts "343", "3 4 3" or "3,4,3".
    pub fn parse(s: &str) -> Result<Self> {
        let mut out = Vec::new();
        for c in s.chars() {
            if c.is_whitespace() || c == ',' {
                continue;
            }
            let d = c.to_digit(10).ok_or(Error::BadSymbol(c as u32 as u8))? as u8;
            out.push(check_symbol(d)?);
        }
        Self::new(out, 0)
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn anchor(&self) -> usize {
        self.anchor
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Symbol at signed position `j` relative to the anchor.
    pub fn at(&self, j: i64) -> Option<u8> {
        let i = j + self.anchor as i64;
        (i >= 0).then(|| self.symbols.get(i as usize).copied()).flatten()
    }

    pub fn first(&self) -> Option<u8> {
        self.symbols.first().copied()
    }

    pub fn last(&self) -> Option<u8> {
        self.symbols.last().copied()
    }

    /// Same symbols, anchor moved one step to the left.
    pub fn shifted(&self) -> Word {
        Word { symbols: self.symbols.clone(), anchor: self.anchor + 1 }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

pub fn is_admissible(w: &Word) -> bool {
    w.symbols.windows(2).all(|p| transition(p[0], p[1]))
}

/// Admissibility of a raw symbol list; symbols outside 1..=4 are an error.
pub fn is_admissible_symbols(symbols: &[u8]) -> Result<bool> {
    Ok(is_admissible(&Word::from_symbols(symbols)?))
}

type BigMat = [[BigUint; 4]; 4];

fn big_identity() -> BigMat {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { BigUint::one() } else { BigUint::zero() }))
}

fn big_mul(a: &BigMat, b: &BigMat) -> BigMat {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut s = BigUint::zero();
            for k in 0..4 {
                if !a[i][k].is_zero() && !b[k][j].is_zero() {
                    s += &a[i][k] * &b[k][j];
                }
            }
            s
        })
    })
}

fn big_f() -> BigMat {
    std::array::from_fn(|i| std::array::from_fn(|j| BigUint::from(F[i][j] as u64)))
}

/// Cached powers F^0 ..= F^max.
#[derive(Clone, Debug)]
pub struct Subshift {
    powers: Vec<BigMat>,
}

impl Subshift {
    pub fn new(max_power: usize) -> Self {
        let f = big_f();
        let mut powers = vec![big_identity()];
        for k in 1..=max_power {
            let next = big_mul(&powers[k - 1], &f);
            powers.push(next);
        }
        Subshift { powers }
    }

    pub fn max_power(&self) -> usize {
        self.powers.len() - 1
    }

    pub fn power(&self, k: usize) -> &[[BigUint; 4]; 4] {
        &self.powers[k]
    }

    /// Number of admissible words of length `len`, first symbol in `first`
    /// and last symbol in `last` (all symbols when `None`).
    pub fn count(&self, len: usize, first: Option<&[u8]>, last: Option<&[u8]>) -> BigUint {
        if len == 0 {
            return BigUint::one();
        }
        let all = [1u8, 2, 3, 4];
        let first = first.unwrap_or(&all);
        let last = last.unwrap_or(&all);
        let m = &self.powers[len - 1];
        let mut s = BigUint::zero();
        for &i in first {
            for &j in last {
                s += &m[(i - 1) as usize][(j - 1) as usize];
            }
        }
        s
    }

    /// Points of period `n` of the shift: trace F^n.
    pub fn periodic_points(&self, n: usize) -> BigUint {
        (0..4).map(|i| self.powers[n][i][i].clone()).sum()
    }
}

pub fn count_admissible(len: usize, first: Option<&[u8]>, last: Option<&[u8]>) -> BigUint {
    Subshift::new(len.saturating_sub(1)).count(len, first, last)
}

/// Constant words of the shift.
pub fn fixed_points() -> Vec<Word> {
    (1..=4u8).filter(|&s| transition(s, s)).map(|s| Word { symbols: vec![s], anchor: 0 }).collect()
}

/// All admissible words of length `len` with optional end pins, in
/// lexicographic order.
pub fn admissible_words(len: usize, first: Option<&[u8]>, last: Option<&[u8]>) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(len: usize, last: Option<&[u8]>, cur: &mut Vec<u8>, out: &mut Vec<Word>) {
        if cur.len() == len {
            if last.is_none_or(|l| l.contains(cur.last().unwrap())) {
                out.push(Word { symbols: cur.clone(), anchor: 0 });
            }
            return;
        }
        for s in 1..=4u8 {
            if cur.last().is_none_or(|&p| transition(p, s)) {
                cur.push(s);
                rec(len, last, cur, out);
                cur.pop();
            }
        }
    }
    if len == 0 {
        return vec![Word { symbols: vec![], anchor: 0 }];
    }
    for s in 1..=4u8 {
        if first.is_none_or(|f| f.contains(&s)) {
            cur.push(s);
            rec(len, last, &mut cur, &mut out);
            cur.pop();
        }
    }
    out
}

/// Maximal-entropy Markov measure on the shift.
#[derive(Clone, Debug, Serialize)]
pub struct ParryMeasure {
    pub rho: f64,
    pub left: [f64; 4],
    pub right: [f64; 4],
}

fn perron_vector(m: &[[f64; 4]; 4]) -> ([f64; 4], f64) {
    let mut v = [1.0; 4];
    let mut lambda = 0.0;
    for _ in 0..500 {
        let w: [f64; 4] = std::array::from_fn(|i| (0..4).map(|k| m[i][k] * v[k]).sum());
        let norm: f64 = w.iter().sum();
        let next = w.map(|x| x / norm);
        let delta: f64 = (0..4).map(|i| (next[i] - v[i]).abs()).sum();
        v = next;
        lambda = norm;
        if delta < 1e-17 {
            break;
        }
    }
    (v, lambda)
}

impl ParryMeasure {
    pub fn new() -> Self {
        let fm: [[f64; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| F[i][j] as f64));
        let ft: [[f64; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| fm[j][i]));
        let (right, _) = perron_vector(&fm);
        let (left, _) = perron_vector(&ft);
        let rho = picard::dynamical_degree();
        let lr: f64 = (0..4).map(|i| left[i] * right[i]).sum();
        let left = left.map(|x| x / lr);
        ParryMeasure { rho, left, right }
    }

    pub fn stationary(&self) -> [f64; 4] {
        std::array::from_fn(|i| self.left[i] * self.right[i])
    }

    /// Transition probabilities P_jk = F_jk r_k / (ρ r_j).
    pub fn transition_matrix(&self) -> [[f64; 4]; 4] {
        std::array::from_fn(|j| {
            std::array::from_fn(|k| F[j][k] as f64 * self.right[k] / (self.rho * self.right[j]))
        })
    }

    /// Mass of the cylinder fixed by `w` (independent of its anchor).
    pub fn nu(&self, w: &Word) -> f64 {
        let (Some(a), Some(z)) = (w.first(), w.last()) else {
            return 1.0;
        };
        if !is_admissible(w) {
            return 0.0;
        }
        self.left[(a - 1) as usize] * self.right[(z - 1) as usize] / self.rho.powi(w.len() as i32 - 1)
    }

    /// Kolmogorov–Sinai entropy of the Markov measure.
    pub fn entropy(&self) -> f64 {
        let pi = self.stationary();
        let p = self.transition_matrix();
        let mut h = 0.0;
        for j in 0..4 {
            for k in 0..4 {
                if p[j][k] > 0.0 {
                    h -= pi[j] * p[j][k] * p[j][k].ln();
                }
            }
        }
        h
    }
}

impl Default for ParryMeasure {
    fn default() -> Self {
        Self::new()
    }
}

pub fn parry_measure() -> ParryMeasure {
    ParryMeasure::new()
}

pub fn entropy() -> f64 {
    picard::dynamical_degree().ln()
}

/// Ratio form of the cylinder mass: admissible words of length 2n+1 with `w`
/// placed at offset `offset` from the centre, divided by all such words,
/// with optional end pins.
pub fn cylinder_ratio(
    shift: &Subshift,
    w: &Word,
    n: usize,
    offset: i64,
    first: Option<&[u8]>,
    last: Option<&[u8]>,
) -> f64 {
    let total = shift.count(2 * n + 1, first, last);
    if !is_admissible(w) || w.is_empty() {
        return if w.is_empty() { 1.0 } else { 0.0 };
    }
    let all = [1u8, 2, 3, 4];
    let first = first.unwrap_or(&all);
    let last = last.unwrap_or(&all);
    // positions measured from the left end of the 2n+1 window
    let start = n as i64 + offset - w.anchor as i64;
    let end = start + w.len() as i64 - 1;
    assert!(start >= 0 && end <= 2 * n as i64, "cylinder does not fit in the window");
    let (a, z) = ((w.first().unwrap() - 1) as usize, (w.last().unwrap() - 1) as usize);
    let left_len = start as usize;
    let right_len = 2 * n - end as usize;
    let mut left_sum = BigUint::zero();
    for &i in first {
        left_sum += &shift.power(left_len)[(i - 1) as usize][a];
    }
    let mut right_sum = BigUint::zero();
    for &j in last {
        right_sum += &shift.power(right_len)[z][(j - 1) as usize];
    }
    ratio(&(left_sum * right_sum), &total)
}

fn ratio(a: &BigUint, b: &BigUint) -> f64 {
    let shift = b.bits().saturating_sub(60);
    let (a, b) = (a >> shift, b >> shift);
    a.to_f64().unwrap_or(f64::NAN) / b.to_f64().unwrap_or(f64::NAN)
}

/// Which half of the window is inspected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TailSide {
    /// Right tail: stable manifolds of the 2-cycles.
    S,
    /// Left tail: unstable manifolds.
    U,
}

/// Minimum tail length for `in_wsu2`.
pub const DEFAULT_TAIL: usize = 4;

fn alternates(tail: &[u8]) -> bool {
    let pair = |x: u8, y: u8| matches!((x, y), (1, 2) | (2, 1) | (3, 4) | (4, 3));
    tail.len() >= 2 && tail.windows(2).all(|p| pair(p[0], p[1]))
}

/// Tail inspection for membership in the stable/unstable sets of the
/// 2-cycles `12` and `34`; the window must end (side S) or start (side U)
/// with at least `min_tail` alternating symbols.
pub fn in_wsu2_with(w: &Word, side: TailSide, min_tail: usize) -> bool {
    let s = w.symbols();
    if s.len() < min_tail.max(2) {
        return false;
    }
    match side {
        TailSide::S => alternates(&s[s.len() - min_tail.max(2)..]),
        TailSide::U => alternates(&s[..min_tail.max(2)]),
    }
}

pub fn in_wsu2(w: &Word, side: TailSide) -> bool {
    in_wsu2_with(w, side, DEFAULT_TAIL)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility_examples() {
        assert!(is_admissible(&Word::parse("3 4 3").unwrap()));
        assert!(!is_admissible(&Word::parse("1 1").unwrap()));
        assert!(is_admissible(&Word::parse("").unwrap()));
        assert_eq!(Word::parse("35"), Err(Error::BadSymbol(5)));
        assert_eq!(is_admissible_symbols(&[0, 1]), Err(Error::BadSymbol(0)));
    }

    #[test]
    fn counts_from_powers() {
        assert_eq!(count_admissible(2, None, None), BigUint::from(8u32));
        assert_eq!(count_admissible(3, Some(&[3, 4]), Some(&[3])), BigUint::from(4u32));
        assert_eq!(count_admissible(5, Some(&[3, 4]), Some(&[3])), BigUint::from(19u32));
        let words = admissible_words(5, Some(&[3, 4]), Some(&[3]));
        assert_eq!(words.len(), 19);
        assert!(words.iter().all(is_admissible));
    }

    #[test]
    fn fixed_points_are_three_and_four() {
        let fp: Vec<String> = fixed_points().iter().map(|w| w.to_string()).collect();
        assert_eq!(fp, ["3", "4"]);
        assert_eq!(Subshift::new(2).periodic_points(1), BigUint::from(2u32));
    }

    #[test]
    fn parry_vectors_are_perron() {
        let m = parry_measure();
        for i in 0..4 {
            let fr: f64 = (0..4).map(|k| F[i][k] as f64 * m.right[k]).sum();
            let lf: f64 = (0..4).map(|k| m.left[k] * F[k][i] as f64).sum();
            assert!((fr - m.rho * m.right[i]).abs() < 1e-13);
            assert!((lf - m.rho * m.left[i]).abs() < 1e-13);
            assert!(m.left[i] > 0.0 && m.right[i] > 0.0);
        }
        let total: f64 = (1..=4).map(|s| m.nu(&Word::from_symbols(&[s]).unwrap())).sum();
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn entropy_matches_log_rho() {
        let m = parry_measure();
        assert!((m.entropy() - entropy()).abs() < 1e-10);
        assert!(entropy() > 2f64.ln());
    }

    #[test]
    fn tails() {
        let w = Word::parse("3121212").unwrap();
        assert!(in_wsu2(&w, TailSide::S));
        assert!(!in_wsu2(&w, TailSide::U));
        assert!(!in_wsu2(&Word::parse("3333").unwrap(), TailSide::S));
        assert!(in_wsu2(&Word::parse("21213").unwrap(), TailSide::U));
        assert!(in_wsu2(&Word::parse("33434").unwrap(), TailSide::S));
    }

    #[test]
    fn anchor_positions() {
        let w = Word::new(vec![3, 4, 3], 1).unwrap();
        assert_eq!(w.at(-1), Some(3));
        assert_eq!(w.at(0), Some(4));
        assert_eq!(w.at(2), None);
    }
}
