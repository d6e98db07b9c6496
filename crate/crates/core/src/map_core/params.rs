use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::dd::Dd;
use crate::error::Result;
use crate::scalar::{self, parse_rational};

/// Which exceptional orbit lands on an indeterminacy point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ExceptionalOrbit {
    /// f^n(C0+) meets I(f): (n+1)(2a+1) = 1.
    C0Plus,
    /// f^n(C1+) meets I(f): a+1+n(a-1) = 0.
    C1Plus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub n: u64,
    pub orbit: ExceptionalOrbit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub a: BigRational,
    pub b: BigRational,
    pub generic: bool,
    /// Smallest n witnessing non-genericity.
    pub witness: Option<Witness>,
    /// Every witness, one per condition that is satisfied.
    pub witnesses: Vec<Witness>,
}

impl Params {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        let witnesses = genericity_witnesses(&a, u64::MAX);
        let witness = witnesses.iter().copied().min_by_key(|w| w.n);
        Params { a, b, generic: witnesses.is_empty(), witness, witnesses }
    }

    pub fn parse(a: &str, b: &str) -> Result<Self> {
        Ok(Params::new(parse_rational(a)?, parse_rational(b)?))
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        Params::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
    }

    pub fn a_as<S: scalar::Scalar>(&self) -> S {
        S::from_rational(&self.a)
    }

    pub fn b_as<S: scalar::Scalar>(&self) -> S {
        S::from_rational(&self.b)
    }

    pub fn a_f64(&self) -> f64 {
        scalar::Scalar::to_f64(&self.a)
    }

    pub fn b_f64(&self) -> f64 {
        scalar::Scalar::to_f64(&self.b)
    }

    pub fn a_dd(&self) -> Dd {
        Dd::from_rational(&self.a)
    }

    pub fn b_dd(&self) -> Dd {
        Dd::from_rational(&self.b)
    }

    pub fn label(&self) -> String {
        format!("a={} b={}", self.a, self.b)
    }
}

/// Non-negative integer n solving `num / den = n`, if any.
fn nonneg_integer(q: &BigRational) -> Option<BigInt> {
    if q.is_integer() && !q.is_negative() {
        Some(q.to_integer())
    } else {
        None
    }
}

/// Solves both exceptional-orbit conditions in closed form and returns every
/// witness with n <= n_max.
pub fn genericity_witnesses(a: &BigRational, n_max: u64) -> Vec<Witness> {
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    let mut out = Vec::new();

    // (n+1)(2a+1) = 1  <=>  n = -2a/(2a+1)
    let d = &two * a + &one;
    if !d.is_zero() {
        if let Some(n) = nonneg_integer(&(-(&two * a) / &d)) {
            push_witness(&mut out, n, n_max, ExceptionalOrbit::C0Plus);
        }
    }
    // a+1+n(a-1) = 0  <=>  n = (1+a)/(1-a)
    let d = &one - a;
    if !d.is_zero() {
        if let Some(n) = nonneg_integer(&((&one + a) / &d)) {
            push_witness(&mut out, n, n_max, ExceptionalOrbit::C1Plus);
        }
    }
    out.sort_by_key(|w| (w.n, w.orbit as u8));
    out
}

fn push_witness(out: &mut Vec<Witness>, n: BigInt, n_max: u64, orbit: ExceptionalOrbit) {
    let (_, digits) = n.to_u64_digits();
    let n = match digits.len() {
        0 => 0,
        1 => digits[0],
        _ => return,
    };
    if n <= n_max {
        out.push(Witness { n, orbit });
    }
}

/// Returns (generic, smallest witness) with the search limited to n <= n_max.
pub fn is_generic(params: &Params, n_max: u64) -> (bool, Option<Witness>) {
    let w = genericity_witnesses(&params.a, n_max);
    (w.is_empty(), w.first().copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn reference_parameters_are_generic() {
        let p = Params::from_ints(-2, 1);
        assert!(p.generic);
        assert_eq!(p.witness, None);
    }

    #[test]
    fn quarter_is_exceptional_with_n_one() {
        let p = Params::new(rat(-1, 4), rat(1, 1));
        assert!(!p.generic);
        assert_eq!(p.witness, Some(Witness { n: 1, orbit: ExceptionalOrbit::C0Plus }));
    }

    #[test]
    fn zero_satisfies_both_conditions() {
        let p = Params::new(rat(0, 1), rat(1, 1));
        assert!(!p.generic);
        assert_eq!(
            p.witnesses,
            vec![
                Witness { n: 0, orbit: ExceptionalOrbit::C0Plus },
                Witness { n: 1, orbit: ExceptionalOrbit::C1Plus },
            ]
        );
    }

    #[test]
    fn n_max_bounds_the_search() {
        // a = -50/102 is hit at n = 50.
        let p = Params::new(rat(-50, 102), rat(1, 1));
        assert_eq!(is_generic(&p, 49), (true, None));
        assert_eq!(is_generic(&p, 50).1.map(|w| w.n), Some(50));
    }
}
