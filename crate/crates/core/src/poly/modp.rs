//! Arithmetic modulo the Mersenne prime 2^61 − 1 and a coprimality
//! certificate for integer forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::HomPoly;

pub const P: u64 = (1 << 61) - 1;

#[inline]
pub fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

#[inline]
pub fn mul(a: u64, b: u64) -> u64 {
    let p = a as u128 * b as u128;
    let lo = (p as u64) & P;
    let hi = (p >> 61) as u64;
    add(lo, hi)
}

pub fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

pub fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

pub fn reduce(b: &BigInt) -> u64 {
    b.mod_floor(&BigInt::from(P)).to_u64().expect("residue fits")
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Monic gcd of univariate polynomials (ascending coefficients).
pub fn ugcd(a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let inv_lb = inv(*b.last().unwrap());
        while a.len() >= b.len() {
            let k = a.len() - b.len();
            let t = mul(*a.last().unwrap(), inv_lb);
            for (i, &c) in b.iter().enumerate() {
                a[i + k] = sub(a[i + k], mul(t, c));
            }
            a = trim(a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&l) = a.last() {
        let il = inv(l);
        a.iter_mut().for_each(|c| *c = mul(*c, il));
    }
    a
}

/// Reduces the dehomogenized form at x = x0 (`along_y`) or y = y0, giving a
/// univariate polynomial in the other variable.
fn specialize(p: &HomPoly, v0: u64, along_y: bool) -> Vec<u64> {
    let d = p.degree();
    let mut out = vec![0u64; d + 1];
    let mut pw = vec![1u64; d + 1];
    for k in 1..=d {
        pw[k] = mul(pw[k - 1], v0);
    }
    for (i, j, _, c) in p.terms() {
        let c = reduce(c);
        if along_y {
            out[j] = add(out[j], mul(c, pw[i]));
        } else {
            out[i] = add(out[i], mul(c, pw[j]));
        }
    }
    trim(out)
}

fn degree_in(p: &HomPoly, along_y: bool) -> usize {
    p.terms().map(|(i, j, _, _)| if along_y { j } else { i }).max().unwrap_or(0)
}

fn passes(polys: &[&HomPoly], along_y: bool, rng: &mut ChaCha8Rng) -> bool {
    if polys.iter().all(|p| degree_in(p, along_y) == 0) {
        return true;
    }
    for _ in 0..6 {
        let v0 = rng.gen_range(2..P);
        let specs: Vec<Vec<u64>> = polys.iter().map(|p| specialize(p, v0, along_y)).collect();
        let pivot = polys
            .iter()
            .zip(&specs)
            .any(|(p, s)| degree_in(p, along_y) > 0 && s.len() == degree_in(p, along_y) + 1);
        if !pivot {
            continue;
        }
        let g = specs.iter().skip(1).fold(specs[0].clone(), |g, s| ugcd(&g, s));
        if g.len() <= 1 {
            return true;
        }
    }
    false
}

/// `true` certifies that the forms share no common factor of positive degree
/// apart from powers of z, which callers strip as monomial content. `false`
/// means a common factor is likely and an exact gcd is needed.
pub fn certify_coprime(polys: &[&HomPoly]) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_9c0d);
    passes(polys, true, &mut rng) && passes(polys, false, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        assert_eq!(mul(inv(12345), 12345), 1);
        assert_eq!(reduce(&BigInt::from(-1)), P - 1);
        // (x-1)(x-2) and (x-1)(x+5) -> x - 1
        let m1 = P - 1;
        let a = [2, P - 3, 1];
        let b = [P - 5, 4, 1];
        assert_eq!(ugcd(&a, &b), vec![m1, 1]);
    }

    #[test]
    fn certificate() {
        let c = HomPoly::from_terms(2, &[(1, 1, 0, 1), (1, 0, 1, -1), (0, 1, 1, -1)]);
        let p = HomPoly::from_terms(2, &[(2, 0, 0, 3), (0, 1, 1, -5), (1, 0, 1, 7)]);
        let q = HomPoly::from_terms(3, &[(0, 3, 0, 1), (1, 1, 1, 2), (0, 0, 3, -4)]);
        assert!(certify_coprime(&[&p, &q]));
        assert!(!certify_coprime(&[&c.mul(&p), &c.mul(&q)]));
        // A factor in x alone is caught by the second pass.
        let l = HomPoly::from_terms(1, &[(1, 0, 0, 1), (0, 0, 1, -2)]);
        assert!(!certify_coprime(&[&l.mul(&p), &l.mul(&q)]));
    }
}
