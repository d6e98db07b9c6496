//! Degrees of the iterates fⁿ as maps of the projective plane, by exact
//! composition of homogeneous triples.

use log::{debug, info};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::map_core::Params;
use crate::picard::{intersection_form, pullback_matrix, Mat5, L};
use crate::poly::{hom_gcd, modp, normalize_sign, HomPoly};

pub const DEFAULT_CEILING: usize = 8;

/// Three coprime forms of equal degree, up to a common scalar. Coefficients
/// are kept integral: a rational triple is scaled by its common denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomTriple {
    pub comps: [HomPoly; 3],
}

impl HomTriple {
    pub fn degree(&self) -> usize {
        self.comps[0].degree()
    }

    pub fn identity() -> Self {
        HomTriple {
            comps: [
                HomPoly::from_terms(1, &[(1, 0, 0, 1)]),
                HomPoly::from_terms(1, &[(0, 1, 0, 1)]),
                HomPoly::from_terms(1, &[(0, 0, 1, 1)]),
            ],
        }
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational, z: &BigRational) -> [BigRational; 3] {
        std::array::from_fn(|k| self.comps[k].eval(x, y, z))
    }

    /// Affine image of (x, y), or `None` if the third component vanishes
    /// or all three do.
    pub fn eval_affine(&self, x: &BigRational, y: &BigRational) -> Option<(BigRational, BigRational)> {
        let [u, v, w] = self.eval(x, y, &BigRational::one());
        (!w.is_zero()).then(|| (u / &w, v / &w))
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.comps.iter().map(HomPoly::max_coeff_bits).max().unwrap_or(0)
    }
}

/// Integer data of τ scaled by q = lcm of the parameter denominators:
/// qτ[x:y:z] = [qx : qb·x − q·y + q(a+1)·z : qz].
#[derive(Clone, Debug)]
struct TauInt {
    q: BigInt,
    beta: BigInt,
    eps: BigInt,
    gamma: BigInt,
}

impl TauInt {
    fn new(params: &Params) -> Self {
        let q = params.a.denom().lcm(params.b.denom());
        let qr = BigRational::from_integer(q.clone());
        let beta = (&params.b * &qr).to_integer();
        let gamma = ((&params.a + BigRational::one()) * &qr).to_integer();
        TauInt { eps: -q.clone(), q, beta, gamma }
    }

    fn linear_forms(&self) -> [HomPoly; 3] {
        let mut y = HomPoly::zero(1);
        *y.at_mut(1, 0) = self.beta.clone();
        *y.at_mut(0, 1) = self.eps.clone();
        *y.at_mut(0, 0) = self.gamma.clone();
        [HomPoly::monomial(1, 0, 0, self.q.clone()), y, HomPoly::monomial(0, 0, 1, self.q.clone())]
    }
}

fn c_form() -> HomPoly {
    HomPoly::from_terms(2, &[(1, 1, 0, 1), (1, 0, 1, -1), (0, 1, 1, -1)])
}

fn sigma_forms() -> [HomPoly; 3] {
    let c = c_form();
    [
        -c.shift(1, 0, 0),
        -c.shift(0, 1, 0),
        HomPoly::from_terms(3, &[(1, 1, 1, 1)]),
    ]
}

/// Degree-3 triple for f = τ∘σ.
pub fn f_homogeneous(params: &Params) -> HomTriple {
    let s = sigma_forms();
    let t = TauInt::new(params);
    let comps = std::array::from_fn(|k| t.linear_forms()[k].compose(&s));
    reduce(comps, &Reducer::for_params(params)).0
}

/// Trial divisors tried before the general gcd.
#[derive(Clone, Debug)]
pub struct Reducer {
    forms: Vec<HomPoly>,
}

impl Reducer {
    /// xy − xz − yz. Together with the monomial content (x and y) these are
    /// the curves σ contracts.
    pub fn standard() -> Self {
        Reducer { forms: vec![c_form()] }
    }

    /// The standard forms together with their τ-images.
    pub fn for_params(params: &Params) -> Self {
        let t = TauInt::new(params);
        let lin = t.linear_forms();
        let mut y_img = lin[1].clone();
        let c = y_img.content();
        y_img = y_img.div_scalar(&c);
        let mut c_img = c_form().compose(&lin);
        let c = c_img.content();
        c_img = c_img.div_scalar(&c);
        normalize_sign(&mut y_img);
        normalize_sign(&mut c_img);
        Reducer { forms: vec![c_form(), y_img, c_img] }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReduceStats {
    /// Total degree removed.
    pub removed: usize,
    pub trial_divisions: usize,
    pub used_full_gcd: bool,
}

fn strip_content(comps: &mut [HomPoly; 3]) {
    let g = comps.iter().fold(BigInt::zero(), |g, p| g.gcd(&p.content()));
    if !g.is_zero() && !g.is_one() {
        for p in comps.iter_mut() {
            *p = p.div_scalar(&g);
        }
    }
}

/// Divides out the common factor of three forms.
pub fn reduce(mut comps: [HomPoly; 3], reducer: &Reducer) -> (HomTriple, ReduceStats) {
    let d0 = comps[0].degree();
    let mut stats = ReduceStats::default();

    // Monomial content (powers of x, y and z).
    let m = comps
        .iter()
        .filter_map(HomPoly::monomial_content)
        .reduce(|a, b| (a.0.min(b.0), a.1.min(b.1), a.2.min(b.2)));
    if let Some((a, b, c)) = m {
        if a + b + c > 0 {
            comps = comps.map(|p| if p.is_zero() { HomPoly::zero(p.degree() - a - b - c) } else { p.unshift(a, b, c) });
        }
    }
    strip_content(&mut comps);

    for form in &reducer.forms {
        loop {
            let q: Vec<Option<HomPoly>> = comps.par_iter().map(|p| p.div_exact(form)).collect();
            if q.iter().any(Option::is_none) {
                break;
            }
            let q: Vec<HomPoly> = q.into_iter().flatten().collect();
            comps = q.try_into().expect("three components");
            stats.trial_divisions += 1;
        }
    }
    strip_content(&mut comps);

    if !modp::certify_coprime(&[&comps[0], &comps[1], &comps[2]]) {
        debug!("trial division left a common factor; running the exact gcd");
        stats.used_full_gcd = true;
        let g = hom_gcd(&[&comps[0], &comps[1], &comps[2]]);
        if g.degree() > 0 {
            comps = comps.map(|p| p.div_exact(&g).expect("gcd divides"));
        }
        strip_content(&mut comps);
    }
    stats.removed = d0 - comps[0].degree();
    (HomTriple { comps }, stats)
}

/// F∘G with common factors removed. The degree of the result is the degree
/// of F∘G as a rational map.
pub fn compose_reduce(f: &HomTriple, g: &HomTriple) -> HomTriple {
    compose_reduce_with(f, g, &Reducer::standard()).0
}

pub fn compose_reduce_with(f: &HomTriple, g: &HomTriple, reducer: &Reducer) -> (HomTriple, ReduceStats) {
    let comps: [HomPoly; 3] = f.comps.each_ref().map(|p| p.compose(&g.comps));
    reduce(comps, reducer)
}

/// F∘f computed through f = τ∘σ: a linear substitution followed by a
/// Horner scheme in C = xy − xz − yz, since
/// F'(−xC, −yC, xyz) = Σ_m (−1)^m C^m (xyz)^(d−m) Q_m(x, y).
pub fn compose_with_f(fpoly: &HomTriple, params: &Params) -> (HomTriple, ReduceStats) {
    let t = TauInt::new(params);
    let d = fpoly.degree();
    let comps: Vec<HomPoly> = fpoly
        .comps
        .par_iter()
        .map(|p| {
            let pt = p.substitute_linear_y(&t.q, &t.beta, &t.eps, &t.gamma);
            let q_m = |m: usize| {
                let mut q = HomPoly::zero(m);
                for i in 0..=m {
                    let c = pt.at(i, m - i);
                    *q.at_mut(i, m - i) = if m % 2 == 1 { -c.clone() } else { c.clone() };
                }
                q
            };
            let mut acc = q_m(d);
            for m in (0..d).rev() {
                let w = d - m;
                acc = acc.mul_c() + q_m(m).shift(w, w, w);
            }
            acc
        })
        .collect();
    reduce(comps.try_into().expect("three components"), &Reducer::standard())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeRecord {
    pub n: usize,
    pub degree: usize,
    pub predicted: i128,
    pub ratio: Option<f64>,
    pub removed: usize,
    pub coeff_bits: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeSequence {
    pub records: Vec<DegreeRecord>,
    /// The requested length exceeded the ceiling and was cut.
    pub truncated: bool,
    pub ceiling: usize,
    /// First n with degree below the prediction.
    pub first_drop: Option<usize>,
}

impl DegreeSequence {
    pub fn degrees(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.degree).collect()
    }
}

/// d_0, ..., d_N with fⁿ⁺¹ = fⁿ∘f. Composing on the inside means the only
/// factors that cancel are curves contracted by f, which makes the targeted
/// trial division complete.
pub fn degree_sequence(params: &Params, n: usize, ceiling: usize) -> DegreeSequence {
    let truncated = n > ceiling;
    let n = n.min(ceiling);
    let predicted = predicted_degrees(n);
    let mut records = vec![DegreeRecord { n: 0, degree: 1, predicted: predicted[0], ratio: None, removed: 0, coeff_bits: 1 }];
    let f = f_homogeneous(params);
    let mut cur = f.clone();
    for k in 1..=n {
        let removed = if k == 1 {
            0
        } else {
            let (next, stats) = compose_with_f(&cur, params);
            cur = next;
            stats.removed
        };
        let prev = records[k - 1].degree;
        let rec = DegreeRecord {
            n: k,
            degree: cur.degree(),
            predicted: predicted[k],
            ratio: Some(cur.degree() as f64 / prev as f64),
            removed,
            coeff_bits: cur.max_coeff_bits(),
        };
        info!("deg f^{k} = {} (predicted {}, {} coefficient bits)", rec.degree, rec.predicted, rec.coeff_bits);
        records.push(rec);
    }
    let first_drop = records.iter().find(|r| (r.degree as i128) < r.predicted).map(|r| r.n);
    DegreeSequence { records, truncated, ceiling, first_drop }
}

/// Lᵀ J (f*)ⁿ L for n = 0..=N.
pub fn predicted_degrees(n: usize) -> Vec<i128> {
    let j = intersection_form();
    let f = pullback_matrix();
    let to128 = |m: &Mat5| m.map(|r| r.map(|x| x as i128));
    let j = to128(&j);
    let f = to128(&f);
    let l = L.map(|x| x as i128);
    let mut v = l;
    let mut out = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        out.push((0..5).map(|i| l[i] * (0..5).map(|k| j[i][k] * v[k]).sum::<i128>()).sum());
        v = std::array::from_fn(|i| (0..5).map(|k| f[i][k] * v[k]).sum());
    }
    out
}

/// Residuals of the recurrence d_{n+5} − 3d_{n+4} + d_{n+3} + 2d_{n+2} − d_n,
/// whose characteristic polynomial is (x−1)²(x³−x²−2x−1).
pub fn recurrence_residuals(d: &[i128]) -> Vec<i128> {
    d.windows(6).map(|w| w[5] - 3 * w[4] + w[3] + 2 * w[2] - w[0]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map_core::{apply_f, ChartPoint, Direction};
    use crate::scalar::rat;

    #[test]
    fn f_triple_shape() {
        let p = Params::from_ints(-2, 1);
        let f = f_homogeneous(&p);
        assert_eq!(f.degree(), 3);
        assert_eq!(f.comps[2], HomPoly::from_terms(3, &[(1, 1, 1, 1)]));
        let (u, v) = f.eval_affine(&rat(2, 1), &rat(3, 1)).unwrap();
        let want = apply_f(&ChartPoint::affine(rat(2, 1), rat(3, 1)), &p, Direction::Forward).unwrap();
        assert_eq!(ChartPoint::affine(u, v), want);
    }

    #[test]
    fn rational_parameters_stay_integral() {
        let p = Params::new(rat(-7, 3), rat(5, 2));
        let f = f_homogeneous(&p);
        let (x, y) = (rat(-1, 2), rat(4, 3));
        let (u, v) = f.eval_affine(&x, &y).unwrap();
        let want = apply_f(&ChartPoint::affine(x, y), &p, Direction::Forward).unwrap();
        assert_eq!(ChartPoint::affine(u, v), want);
    }

    #[test]
    fn identity_composition() {
        let p = Params::from_ints(-2, 1);
        let f = f_homogeneous(&p);
        assert_eq!(compose_reduce(&f, &HomTriple::identity()), f);
    }

    #[test]
    fn predicted_prefix() {
        assert_eq!(predicted_degrees(9), vec![1, 3, 7, 16, 35, 76, 164, 353, 759, 1631]);
    }

    #[test]
    fn fast_step_matches_general_composition() {
        let p = Params::new(rat(-5, 2), rat(3, 1));
        let f = f_homogeneous(&p);
        let f2 = compose_reduce_with(&f, &f, &Reducer::for_params(&p)).0;
        let (f2_fast, _) = compose_with_f(&f, &p);
        assert_eq!(f2_fast.degree(), 7);
        assert_eq!(f2.degree(), 7);
        // Same projective map: components proportional.
        let (x, y) = (rat(3, 7), rat(-2, 5));
        assert_eq!(f2.eval_affine(&x, &y), f2_fast.eval_affine(&x, &y));
    }
}
