//! Dense homogeneous ternary polynomials with integer coefficients.
//!
//! A degree-d form stores the coefficient of x^i y^j z^(d-i-j) at
//! `offset(i) + j`, rows ordered by the x-exponent.

mod gcd;
pub mod modp;

use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

pub use gcd::{hom_gcd, BPoly, UPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomPoly {
    deg: usize,
    c: Vec<BigInt>,
}

#[inline]
fn offset(d: usize, i: usize) -> usize {
    i * (d + 1) - i * i.saturating_sub(1) / 2
}

#[inline]
fn size(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

impl HomPoly {
    pub fn zero(deg: usize) -> Self {
        HomPoly { deg, c: vec![BigInt::zero(); size(deg)] }
    }

    /// Builds a form from `(i, j, k, coefficient)` terms; all terms must
    /// have the same total degree.
    pub fn from_terms(deg: usize, terms: &[(usize, usize, usize, i64)]) -> Self {
        let mut p = HomPoly::zero(deg);
        for &(i, j, k, c) in terms {
            assert_eq!(i + j + k, deg, "inhomogeneous term");
            *p.at_mut(i, j) += BigInt::from(c);
        }
        p
    }

    pub fn monomial(i: usize, j: usize, k: usize, c: BigInt) -> Self {
        let mut p = HomPoly::zero(i + j + k);
        *p.at_mut(i, j) = c;
        p
    }

    pub fn degree(&self) -> usize {
        self.deg
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.c[offset(self.deg, i) + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        let d = self.deg;
        &mut self.c[offset(d, i) + j]
    }

    /// Coefficients of one x-row, indexed by the y-exponent.
    pub fn row(&self, i: usize) -> &[BigInt] {
        let o = offset(self.deg, i);
        &self.c[o..o + self.deg - i + 1]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [BigInt] {
        let d = self.deg;
        let o = offset(d, i);
        &mut self.c[o..o + d - i + 1]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn num_terms(&self) -> usize {
        self.c.iter().filter(|c| !c.is_zero()).count()
    }

    /// Nonzero terms as `(i, j, k, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, usize, &BigInt)> + '_ {
        let d = self.deg;
        (0..=d).flat_map(move |i| {
            self.row(i).iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(j, c)| (i, j, d - i - j, c))
        })
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.c.iter().map(|c| c.bits()).max().unwrap_or(0)
    }

    pub fn scale(&self, k: &BigInt) -> HomPoly {
        HomPoly { deg: self.deg, c: self.c.iter().map(|c| c * k).collect() }
    }

    /// Multiplies by x^a y^b z^c.
    pub fn shift(&self, a: usize, b: usize, c: usize) -> HomPoly {
        let mut out = HomPoly::zero(self.deg + a + b + c);
        for i in 0..=self.deg {
            let src = self.row(i);
            let dst = out.row_mut(i + a);
            dst[b..b + src.len()].clone_from_slice(src);
        }
        out
    }

    pub fn mul(&self, other: &HomPoly) -> HomPoly {
        let d = self.deg + other.deg;
        let rows: Vec<Vec<BigInt>> = (0..=d)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![BigInt::zero(); d - i + 1];
                for i1 in i.saturating_sub(other.deg)..=i.min(self.deg) {
                    let i2 = i - i1;
                    let r1 = self.row(i1);
                    let r2 = other.row(i2);
                    for (j1, a) in r1.iter().enumerate() {
                        if a.is_zero() {
                            continue;
                        }
                        for (j2, b) in r2.iter().enumerate() {
                            if !b.is_zero() {
                                row[j1 + j2] += a * b;
                            }
                        }
                    }
                }
                row
            })
            .collect();
        HomPoly { deg: d, c: rows.into_iter().flatten().collect() }
    }

    pub fn pow(&self, n: usize) -> HomPoly {
        let mut r = HomPoly::monomial(0, 0, 0, BigInt::one());
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// Multiplies by xy − xz − yz.
    pub fn mul_c(&self) -> HomPoly {
        let mut out = HomPoly::zero(self.deg + 2);
        for i in 0..=self.deg {
            for (j, c) in self.row(i).iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                *out.at_mut(i + 1, j + 1) += c;
                *out.at_mut(i + 1, j) -= c;
                *out.at_mut(i, j + 1) -= c;
            }
        }
        out
    }

    /// Greatest common divisor of the coefficients (non-negative).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.c {
            if !c.is_zero() {
                g = g.gcd(c);
                if g.is_one() {
                    break;
                }
            }
        }
        g
    }

    pub fn div_scalar(&self, k: &BigInt) -> HomPoly {
        HomPoly { deg: self.deg, c: self.c.iter().map(|c| c / k).collect() }
    }

    /// Smallest exponents of x, y, z over the nonzero terms.
    pub fn monomial_content(&self) -> Option<(usize, usize, usize)> {
        let mut m: Option<(usize, usize, usize)> = None;
        for (i, j, k, _) in self.terms() {
            m = Some(match m {
                None => (i, j, k),
                Some((a, b, c)) => (a.min(i), b.min(j), c.min(k)),
            });
        }
        m
    }

    /// Divides by x^a y^b z^c, which must divide every term.
    pub fn unshift(&self, a: usize, b: usize, c: usize) -> HomPoly {
        let d = self.deg - a - b - c;
        let mut out = HomPoly::zero(d);
        for i in 0..=d {
            let src = self.row(i + a);
            let len = d - i + 1;
            out.row_mut(i).clone_from_slice(&src[b..b + len]);
        }
        out
    }

    /// Leading monomial in the order: higher x first, then higher y.
    fn leading(&self) -> Option<(usize, usize)> {
        (0..=self.deg).rev().find_map(|i| {
            let r = self.row(i);
            (0..r.len()).rev().find(|&j| !r[j].is_zero()).map(|j| (i, j))
        })
    }

    /// Exact quotient `self / d` over the integers, or `None` when `d` does
    /// not divide.
    pub fn div_exact(&self, d: &HomPoly) -> Option<HomPoly> {
        if d.deg > self.deg {
            return if self.is_zero() { Some(HomPoly::zero(0)) } else { None };
        }
        let (li, lj) = d.leading()?;
        let lc = d.at(li, lj).clone();
        let dterms: Vec<(usize, usize, BigInt)> = d.terms().map(|(i, j, _, c)| (i, j, c.clone())).collect();
        let qd = self.deg - d.deg;
        let mut rem = self.clone();
        let mut q = HomPoly::zero(qd);
        for i in (0..=self.deg).rev() {
            for j in (0..=self.deg - i).rev() {
                if rem.at(i, j).is_zero() {
                    continue;
                }
                if i < li || j < lj || (i - li) + (j - lj) > qd {
                    return None;
                }
                let (qi, qj) = (i - li, j - lj);
                let (t, r) = rem.at(i, j).div_rem(&lc);
                if !r.is_zero() {
                    return None;
                }
                for (di, dj, dc) in &dterms {
                    *rem.at_mut(qi + di, qj + dj) -= &t * dc;
                }
                *q.at_mut(qi, qj) = t;
            }
        }
        Some(q)
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational, z: &BigRational) -> BigRational {
        // Horner in y inside each row, then in x with powers of z.
        let d = self.deg;
        let mut zp = vec![BigRational::one(); d + 1];
        for k in 1..=d {
            zp[k] = &zp[k - 1] * z;
        }
        let mut acc = BigRational::zero();
        for i in (0..=d).rev() {
            let r = self.row(i);
            let mut s = BigRational::zero();
            for j in (0..r.len()).rev() {
                s = s * y + BigRational::from_integer(r[j].clone()) * &zp[d - i - j];
            }
            acc = acc * x + s;
        }
        acc
    }

    /// Substitutes (qx, βx + εy + γz, qz) for (x, y, z).
    pub fn substitute_linear_y(&self, q: &BigInt, beta: &BigInt, eps: &BigInt, gamma: &BigInt) -> HomPoly {
        let d = self.deg;
        // A_j(x, z) = Σ_i c_{i,j} q^{d-j} x^i z^{d-i-j}, indexed by i.
        let qpow: Vec<BigInt> = std::iter::successors(Some(BigInt::one()), |p| Some(p * q)).take(d + 1).collect();
        let a: Vec<Vec<BigInt>> = (0..=d).map(|j| (0..=d - j).map(|i| self.at(i, j) * &qpow[d - j]).collect()).collect();
        let binom = binomials(d);
        let epow: Vec<BigInt> = std::iter::successors(Some(BigInt::one()), |p| Some(p * eps)).take(d + 1).collect();
        let rows: Vec<(usize, Vec<BigInt>)> = (0..=d)
            .into_par_iter()
            .map(|r| {
                // H(x, z) = Σ_{j>=r} binom(j, r) A_j m^{j-r} with m = βx + γz.
                let mut h: Vec<BigInt> = a[d].iter().map(|c| c * &binom[d][r]).collect();
                for j in (r..d).rev() {
                    let mut nh = vec![BigInt::zero(); h.len() + 1];
                    for (i, c) in h.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        nh[i + 1] += c * beta;
                        nh[i] += c * gamma;
                    }
                    for (i, c) in a[j].iter().enumerate() {
                        if !c.is_zero() {
                            nh[i] += c * &binom[j][r];
                        }
                    }
                    h = nh;
                }
                let h = h.into_iter().map(|c| c * &epow[r]).collect();
                (r, h)
            })
            .collect();
        let mut out = HomPoly::zero(d);
        for (r, h) in rows {
            for (i, c) in h.into_iter().enumerate() {
                *out.at_mut(i, r) = c;
            }
        }
        out
    }

    /// General substitution F(G1, G2, G3) with G1, G2, G3 of equal degree.
    pub fn compose(&self, g: &[HomPoly; 3]) -> HomPoly {
        let e = g[0].deg;
        assert!(g.iter().all(|p| p.deg == e));
        let d = self.deg;
        let pw: Vec<Vec<HomPoly>> = g.iter().map(|p| powers(p, d)).collect();
        let terms: Vec<(usize, usize, usize, BigInt)> = self.terms().map(|(i, j, k, c)| (i, j, k, c.clone())).collect();
        terms
            .into_par_iter()
            .map(|(i, j, k, c)| pw[0][i].mul(&pw[1][j]).mul(&pw[2][k]).scale(&c))
            .reduce(|| HomPoly::zero(d * e), |a, b| a + b)
    }
}

fn powers(p: &HomPoly, n: usize) -> Vec<HomPoly> {
    let mut v = vec![HomPoly::monomial(0, 0, 0, BigInt::one())];
    for k in 1..=n {
        v.push(v[k - 1].mul(p));
    }
    v
}

fn binomials(n: usize) -> Vec<Vec<BigInt>> {
    let mut b = vec![vec![BigInt::zero(); n + 1]; n + 1];
    for i in 0..=n {
        b[i][0] = BigInt::one();
        for j in 1..=i {
            b[i][j] = &b[i - 1][j - 1] + &b[i - 1][j];
        }
    }
    b
}

impl Add for HomPoly {
    type Output = HomPoly;
    fn add(mut self, o: HomPoly) -> HomPoly {
        assert_eq!(self.deg, o.deg, "adding forms of different degree");
        for (a, b) in self.c.iter_mut().zip(o.c) {
            *a += b;
        }
        self
    }
}

impl Sub for HomPoly {
    type Output = HomPoly;
    fn sub(mut self, o: HomPoly) -> HomPoly {
        assert_eq!(self.deg, o.deg, "subtracting forms of different degree");
        for (a, b) in self.c.iter_mut().zip(o.c) {
            *a -= b;
        }
        self
    }
}

impl Neg for HomPoly {
    type Output = HomPoly;
    fn neg(mut self) -> HomPoly {
        for a in self.c.iter_mut() {
            *a = -std::mem::take(a);
        }
        self
    }
}

/// Makes the leading coefficient positive.
pub fn normalize_sign(p: &mut HomPoly) {
    if let Some((i, j)) = p.leading() {
        if p.at(i, j).is_negative() {
            *p = -std::mem::replace(p, HomPoly::zero(0));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn c_form() -> HomPoly {
        HomPoly::from_terms(2, &[(1, 1, 0, 1), (1, 0, 1, -1), (0, 1, 1, -1)])
    }

    #[test]
    fn layout_round_trip() {
        let p = HomPoly::from_terms(3, &[(3, 0, 0, 1), (0, 3, 0, 2), (0, 0, 3, 3), (1, 1, 1, 4)]);
        let t: Vec<_> = p.terms().map(|(i, j, k, c)| (i, j, k, c.clone())).collect();
        assert_eq!(t.len(), 4);
        assert!(t.contains(&(1, 1, 1, BigInt::from(4))));
        assert_eq!(p.monomial_content(), Some((0, 0, 0)));
    }

    #[test]
    fn mul_c_matches_generic_mul() {
        let p = HomPoly::from_terms(2, &[(2, 0, 0, 3), (0, 1, 1, -5), (1, 0, 1, 7)]);
        assert_eq!(p.mul_c(), p.mul(&c_form()));
    }

    #[test]
    fn exact_division() {
        let p = HomPoly::from_terms(2, &[(2, 0, 0, 3), (0, 1, 1, -5), (1, 0, 1, 7)]);
        let prod = p.mul(&c_form()).mul(&c_form());
        let q = prod.div_exact(&c_form()).unwrap();
        assert_eq!(q, p.mul(&c_form()));
        assert!(p.div_exact(&c_form()).is_none());
        let x = HomPoly::from_terms(1, &[(1, 0, 0, 1)]);
        assert!(p.div_exact(&x).is_none());
        assert_eq!(p.shift(1, 0, 0).div_exact(&x).unwrap(), p);
    }

    #[test]
    fn shift_and_unshift() {
        let p = HomPoly::from_terms(2, &[(2, 0, 0, 3), (0, 1, 1, -5)]);
        let s = p.shift(1, 2, 3);
        assert_eq!(s.monomial_content(), Some((1, 2, 3)));
        assert_eq!(s.unshift(1, 2, 3), p);
    }

    #[test]
    fn linear_substitution_matches_compose() {
        let p = HomPoly::from_terms(3, &[(3, 0, 0, 2), (1, 2, 0, -1), (0, 1, 2, 5), (1, 1, 1, 3), (0, 3, 0, 1)]);
        let (q, beta, eps, gamma) = (BigInt::from(2), BigInt::from(3), BigInt::from(-2), BigInt::from(-1));
        let fast = p.substitute_linear_y(&q, &beta, &eps, &gamma);
        let g = [
            HomPoly::from_terms(1, &[(1, 0, 0, 2)]),
            HomPoly::from_terms(1, &[(1, 0, 0, 3), (0, 1, 0, -2), (0, 0, 1, -1)]),
            HomPoly::from_terms(1, &[(0, 0, 1, 2)]),
        ];
        assert_eq!(fast, p.compose(&g));
    }

    #[test]
    fn eval_matches_terms() {
        let p = HomPoly::from_terms(3, &[(3, 0, 0, 2), (1, 2, 0, -1), (0, 1, 2, 5)]);
        let (x, y, z) = (rat(1, 2), rat(-3, 1), rat(2, 5));
        let want = rat(2, 1) * &x * &x * &x - &x * &y * &y + rat(5, 1) * &y * &z * &z;
        assert_eq!(p.eval(&x, &y, &z), want);
    }
}
