//! Forced crossings sᵀQu on the S-bases against the complex pairing matrix.

use serde::Serialize;

use crate::picard;
use crate::symbolic::Q;

/// s-vectors of C0+, C1+ and f*C0+; the minus basis has the same u-vectors.
pub const BASIS_VECTORS: [[i64; 4]; 3] = [[0, 0, 1, 0], [0, 1, 0, 1], [1, 0, 1, 1]];

pub const BASIS_NAMES: [(&str, &str); 3] = [("C0+", "C0-"), ("C1+", "C1-"), ("f*C0+", "f_*C0-")];

/// Entries where the printed Q and basis vectors disagree with the pairing.
pub const DISPUTED: [(usize, usize); 3] = [(0, 1), (1, 0), (1, 1)];

#[derive(Clone, Debug, Serialize)]
pub struct PairingEntry {
    pub plus: &'static str,
    pub minus: &'static str,
    pub forced: i64,
    pub complex: i64,
    pub disputed: bool,
}

impl PairingEntry {
    pub fn agrees(&self) -> bool {
        self.forced == self.complex
    }
}

pub fn q_form(s: &[i64; 4], u: &[i64; 4]) -> i64 {
    (0..4).map(|i| (0..4).map(|j| s[i] * Q[i][j] * u[j]).sum::<i64>()).sum()
}

/// All nine entries, row-major over (plus, minus).
pub fn pairing_table() -> Vec<PairingEntry> {
    let m = picard::s_pairing_matrix();
    let mut out = Vec::with_capacity(9);
    for i in 0..3 {
        for j in 0..3 {
            out.push(PairingEntry {
                plus: BASIS_NAMES[i].0,
                minus: BASIS_NAMES[j].1,
                forced: q_form(&BASIS_VECTORS[i], &BASIS_VECTORS[j]),
                complex: m[i][j],
                disputed: DISPUTED.contains(&(i, j)),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undisputed_entries_agree() {
        let t = pairing_table();
        assert_eq!(t.len(), 9);
        for e in t.iter().filter(|e| !e.disputed) {
            assert!(e.agrees(), "{} · {}: {} vs {}", e.plus, e.minus, e.forced, e.complex);
        }
    }

    #[test]
    fn c1_pair_forced_count() {
        let e = pairing_table().into_iter().find(|e| e.plus == "C1+" && e.minus == "C1-").unwrap();
        assert_eq!(e.forced, 4);
        assert_eq!(e.complex, 2);
    }
}
