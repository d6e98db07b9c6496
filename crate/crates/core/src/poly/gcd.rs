//! Exact polynomial gcd by primitive pseudo-remainder sequences, in Z[x] and
//! in Z[x][y]. Used as the fallback when targeted trial division does not
//! certify coprimality; sizes there are small.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::HomPoly;

/// Dense polynomial in x, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UPoly(pub Vec<BigInt>);

impl UPoly {
    pub fn trim(mut self) -> Self {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn deg(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lc(&self) -> &BigInt {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn constant(c: BigInt) -> Self {
        UPoly(vec![c]).trim()
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    fn scale(&self, k: &BigInt) -> Self {
        UPoly(self.0.iter().map(|c| c * k).collect()).trim()
    }

    fn div_scalar(&self, k: &BigInt) -> Self {
        UPoly(self.0.iter().map(|c| c / k).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::default();
        }
        let mut r = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        UPoly(r).trim()
    }

    fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let z = BigInt::zero();
        UPoly((0..n).map(|i| self.0.get(i).unwrap_or(&z) - o.0.get(i).unwrap_or(&z)).collect()).trim()
    }

    fn shift(&self, k: usize) -> UPoly {
        if self.is_zero() {
            return UPoly::default();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.0.iter().cloned());
        UPoly(v)
    }

    fn prem(&self, b: &UPoly) -> UPoly {
        let mut r = self.clone();
        if r.is_zero() || r.deg() < b.deg() {
            return r;
        }
        let lb = b.lc().clone();
        while !r.is_zero() && r.deg() >= b.deg() {
            let k = r.deg() - b.deg();
            let lr = r.lc().clone();
            r = r.scale(&lb).sub(&b.scale(&lr).shift(k));
        }
        r
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::default();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        self.div_scalar(&c)
    }

    /// Exact quotient, or `None`.
    pub fn div_exact(&self, b: &UPoly) -> Option<UPoly> {
        if b.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(UPoly::default());
        }
        if self.deg() < b.deg() {
            return None;
        }
        let mut r = self.clone();
        let mut q = vec![BigInt::zero(); self.deg() - b.deg() + 1];
        while !r.is_zero() && r.deg() >= b.deg() {
            let k = r.deg() - b.deg();
            let (t, rem) = r.lc().div_rem(b.lc());
            if !rem.is_zero() {
                return None;
            }
            r = r.sub(&b.scale(&t).shift(k));
            q[k] = t;
        }
        r.is_zero().then(|| UPoly(q).trim())
    }

    pub fn gcd(&self, o: &UPoly) -> UPoly {
        if self.is_zero() {
            return o.primitive().scale(&o.content());
        }
        if o.is_zero() {
            return self.primitive().scale(&self.content());
        }
        let c = self.content().gcd(&o.content());
        let (mut a, mut b) = (self.primitive(), o.primitive());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b);
            a = b;
            b = r.primitive();
        }
        a.primitive().scale(&c)
    }
}

/// Polynomial in y with coefficients in Z[x], ascending in y.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BPoly(pub Vec<UPoly>);

impl BPoly {
    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(UPoly::is_zero) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn deg_y(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lc(&self) -> &UPoly {
        self.0.last().expect("nonzero polynomial")
    }

    /// Gcd of the coefficients in Z[x].
    pub fn content_x(&self) -> UPoly {
        self.0.iter().fold(UPoly::default(), |g, c| g.gcd(c))
    }

    fn mul_u(&self, k: &UPoly) -> BPoly {
        BPoly(self.0.iter().map(|c| c.mul(k)).collect()).trim()
    }

    fn div_u(&self, k: &UPoly) -> BPoly {
        BPoly(self.0.iter().map(|c| c.div_exact(k).expect("content divides")).collect())
    }

    fn sub(&self, o: &BPoly) -> BPoly {
        let n = self.0.len().max(o.0.len());
        let z = UPoly::default();
        BPoly((0..n).map(|i| self.0.get(i).unwrap_or(&z).sub(o.0.get(i).unwrap_or(&z))).collect()).trim()
    }

    fn shift(&self, k: usize) -> BPoly {
        let mut v = vec![UPoly::default(); k];
        v.extend(self.0.iter().cloned());
        BPoly(v)
    }

    fn prem(&self, b: &BPoly) -> BPoly {
        let mut r = self.clone();
        let lb = b.lc().clone();
        while !r.is_zero() && r.deg_y() >= b.deg_y() {
            let k = r.deg_y() - b.deg_y();
            let lr = r.lc().clone();
            r = r.mul_u(&lb).sub(&b.mul_u(&lr).shift(k));
        }
        r
    }

    fn primitive(&self) -> BPoly {
        let mut c = self.content_x();
        if c.is_zero() {
            return BPoly::default();
        }
        // Fix the sign by the leading coefficient's leading coefficient.
        if self.lc().lc().is_negative() != c.lc().is_negative() {
            c = c.scale(&BigInt::from(-1));
        }
        self.div_u(&c)
    }

    pub fn gcd(&self, o: &BPoly) -> BPoly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let c = self.content_x().gcd(&o.content_x());
        let (mut a, mut b) = (self.primitive(), o.primitive());
        if a.deg_y() < b.deg_y() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.deg_y() == 0 {
                return BPoly(vec![c]);
            }
            let r = a.prem(&b);
            a = b;
            b = r.primitive();
        }
        a.primitive().mul_u(&c)
    }

    pub fn from_hom(p: &HomPoly) -> BPoly {
        let d = p.degree();
        let v = (0..=d).map(|j| UPoly((0..=d - j).map(|i| p.at(i, j).clone()).collect()).trim()).collect();
        BPoly(v).trim()
    }

    pub fn total_degree(&self) -> usize {
        self.0.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| j + c.deg()).max().unwrap_or(0)
    }

    pub fn to_hom(&self, deg: usize) -> HomPoly {
        let mut h = HomPoly::zero(deg);
        for (j, c) in self.0.iter().enumerate() {
            for (i, v) in c.0.iter().enumerate() {
                *h.at_mut(i, j) = v.clone();
            }
        }
        h
    }
}

/// Primitive gcd of homogeneous forms, positive leading coefficient.
pub fn hom_gcd(polys: &[&HomPoly]) -> HomPoly {
    let zmin = polys.iter().filter_map(|p| p.monomial_content()).map(|m| m.2).min().unwrap_or(0);
    let mut g = BPoly::default();
    for p in polys {
        g = g.gcd(&BPoly::from_hom(p));
        if g.total_degree() == 0 && !g.is_zero() {
            break;
        }
    }
    let g = g.primitive();
    let mut h = g.to_hom(g.total_degree()).shift(0, 0, zmin);
    let c = h.content();
    if !c.is_zero() && !c.is_one() {
        h = h.div_scalar(&c);
    }
    super::normalize_sign(&mut h);
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(v: &[i64]) -> UPoly {
        UPoly(v.iter().map(|&c| BigInt::from(c)).collect()).trim()
    }

    #[test]
    fn univariate_gcd() {
        // (x-1)(x+2) and (x-1)(3x+1)
        let a = up(&[-2, 1, 1]);
        let b = up(&[-1, -2, 3]);
        assert_eq!(a.gcd(&b), up(&[-1, 1]));
        assert_eq!(up(&[4, 6]).gcd(&up(&[6, 9])), up(&[2, 3]));
    }

    #[test]
    fn bivariate_gcd_recovers_common_factor() {
        let c = HomPoly::from_terms(2, &[(1, 1, 0, 1), (1, 0, 1, -1), (0, 1, 1, -1)]);
        let p = HomPoly::from_terms(2, &[(2, 0, 0, 3), (0, 1, 1, -5), (1, 0, 1, 7)]);
        let q = HomPoly::from_terms(3, &[(0, 3, 0, 1), (1, 1, 1, 2), (0, 0, 3, -4)]);
        let z = HomPoly::from_terms(1, &[(0, 0, 1, 1)]);
        let a = c.mul(&p).mul(&z);
        let b = c.mul(&q).mul(&z).mul(&z);
        assert_eq!(hom_gcd(&[&a, &b]), c.mul(&z));
        assert_eq!(hom_gcd(&[&p, &q]).degree(), 0);
    }
}
