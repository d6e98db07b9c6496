//! Integer linear algebra on Pic(X) in the basis (V1, V2, V3, V4, V5).

use serde::Serialize;

pub type Vec5 = [i64; 5];
pub type Mat5 = [[i64; 5]; 5];
pub type Vec3 = [i64; 3];
pub type Mat3 = [[i64; 3]; 3];

pub const V1: Vec5 = [1, 0, 0, 0, 0];
pub const V2: Vec5 = [0, 1, 0, 0, 0];
pub const V3: Vec5 = [0, 0, 1, 0, 0];
pub const V4: Vec5 = [0, 0, 0, 1, 0];
pub const V5: Vec5 = [0, 0, 0, 0, 1];

/// Pullback of a generic line.
pub const L: Vec5 = [1, 1, 1, 0, 0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Plus,
    Minus,
}

/// A divisor class with integer coordinates in (V1, ..., V5).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DivisorClass(pub Vec5);

impl DivisorClass {
    pub fn dot(&self, other: &DivisorClass) -> i64 {
        pair(&intersection_form(), &self.0, &other.0)
    }
}

/// Coordinates in the basis (C0±, C1±, f^{±}-image of C0±).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SClass {
    pub side: Side,
    pub coords: Vec3,
}

fn add(u: &Vec5, v: &Vec5) -> Vec5 {
    std::array::from_fn(|i| u[i] + v[i])
}

fn scale(k: i64, v: &Vec5) -> Vec5 {
    v.map(|x| k * x)
}

/// V0 from L = V0 + V2 + V3 + V4 + V5.
pub fn v0_class() -> Vec5 {
    std::array::from_fn(|i| L[i] - V2[i] - V3[i] - V4[i] - V5[i])
}

/// C0+ from L = C0+ + V4.
pub fn c0_plus() -> Vec5 {
    std::array::from_fn(|i| L[i] - V4[i])
}

/// C1+ from 2L = C1+ + V2 + 2V3 + V4.
pub fn c1_plus() -> Vec5 {
    std::array::from_fn(|i| 2 * L[i] - V2[i] - 2 * V3[i] - V4[i])
}

/// f* assembled column by column: V1 ↦ V3 + C1+, V2 ↦ V2, V3 ↦ V1, V4 ↦ V5,
/// V5 ↦ V4 + C0+.
pub fn pullback_matrix() -> Mat5 {
    let cols = [add(&V3, &c1_plus()), V2, V1, V5, add(&V4, &c0_plus())];
    from_columns(&cols)
}

/// τ* fixes V1, V2, V3 and swaps V4 with V5.
pub fn tau_matrix() -> Mat5 {
    from_columns(&[V1, V2, V3, V5, V4])
}

/// f_* = (f⁻¹)* = τ* f* τ*.
pub fn pushforward_matrix() -> Mat5 {
    let t = tau_matrix();
    mat_mul(&mat_mul(&t, &pullback_matrix()), &t)
}

pub fn intersection_form() -> Mat5 {
    [
        [0, 1, 0, 0, 0],
        [1, -2, 1, 0, 0],
        [0, 1, -1, 0, 0],
        [0, 0, 0, -1, 0],
        [0, 0, 0, 0, -1],
    ]
}

/// The S-basis of one side as 5-vectors.
pub fn s_basis(side: Side) -> [Vec5; 3] {
    let c0 = c0_plus();
    let plus = [c0, c1_plus(), mat_vec(&pullback_matrix(), &c0)];
    match side {
        Side::Plus => plus,
        Side::Minus => {
            let t = tau_matrix();
            plus.map(|v| mat_vec(&t, &v))
        }
    }
}

impl SClass {
    pub fn to_divisor(&self) -> DivisorClass {
        let b = s_basis(self.side);
        let mut v = [0; 5];
        for (k, col) in b.iter().enumerate() {
            v = add(&v, &scale(self.coords[k], col));
        }
        DivisorClass(v)
    }
}

/// Matrix of f* on S (plus basis); by τ-conjugacy also f_* in the minus basis.
pub fn restricted_action() -> Mat3 {
    let b = s_basis(Side::Plus);
    let f = pullback_matrix();
    let cols: [Vec3; 3] = std::array::from_fn(|k| {
        solve_in_basis(&b, &mat_vec(&f, &b[k])).expect("S is invariant under f*")
    });
    std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i]))
}

/// Intersection matrix between the plus and minus S-bases.
pub fn s_pairing_matrix() -> Mat3 {
    let j = intersection_form();
    let p = s_basis(Side::Plus);
    let m = s_basis(Side::Minus);
    std::array::from_fn(|r| std::array::from_fn(|c| pair(&j, &p[r], &m[c])))
}

pub fn pairing(w: &SClass, w2: &SClass) -> i64 {
    assert_eq!((w.side, w2.side), (Side::Plus, Side::Minus), "pairing takes a plus class and a minus class");
    w.to_divisor().dot(&w2.to_divisor())
}

/// Largest real root of x³ − x² − 2x − 1.
pub fn dynamical_degree() -> f64 {
    let p = |x: f64| ((x - 1.0) * x - 2.0) * x - 1.0;
    let dp = |x: f64| (3.0 * x - 2.0) * x - 2.0;
    let (mut lo, mut hi) = (2.0, 3.0);
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if p(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..4 {
        x -= p(x) / dp(x);
    }
    x
}

/// Solves v = Σ c_k b_k over the integers; `None` if v is outside the span
/// or the coefficients are not integral.
pub fn solve_in_basis(b: &[Vec5; 3], v: &Vec5) -> Option<Vec3> {
    // Pick three rows where the basis is independent, solve by Cramer's rule.
    for rows in row_triples() {
        let m: Mat3 = std::array::from_fn(|i| std::array::from_fn(|k| b[k][rows[i]]));
        let d = det3(&m);
        if d == 0 {
            continue;
        }
        let rhs: Vec3 = std::array::from_fn(|i| v[rows[i]]);
        let mut c = [0i64; 3];
        for k in 0..3 {
            let mut mk = m;
            for i in 0..3 {
                mk[i][k] = rhs[i];
            }
            let n = det3(&mk);
            if n % d != 0 {
                return None;
            }
            c[k] = n / d;
        }
        let back: Vec5 = std::array::from_fn(|i| (0..3).map(|k| c[k] * b[k][i]).sum());
        return (back == *v).then_some(c);
    }
    None
}

fn row_triples() -> impl Iterator<Item = [usize; 3]> {
    (0..5).flat_map(|i| (i + 1..5).flat_map(move |j| (j + 1..5).map(move |k| [i, j, k])))
}

pub fn det3(m: &Mat3) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub fn from_columns<const N: usize>(cols: &[[i64; N]; N]) -> [[i64; N]; N] {
    std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i]))
}

pub fn mat_mul<const N: usize>(a: &[[i64; N]; N], b: &[[i64; N]; N]) -> [[i64; N]; N] {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..N).map(|k| a[i][k] * b[k][j]).sum()))
}

pub fn mat_vec<const N: usize>(a: &[[i64; N]; N], v: &[i64; N]) -> [i64; N] {
    std::array::from_fn(|i| (0..N).map(|k| a[i][k] * v[k]).sum())
}

pub fn transpose<const N: usize>(a: &[[i64; N]; N]) -> [[i64; N]; N] {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i]))
}

pub fn pair<const N: usize>(j: &[[i64; N]; N], u: &[i64; N], v: &[i64; N]) -> i64 {
    (0..N).map(|i| u[i] * mat_vec(j, v)[i]).sum()
}

/// Characteristic polynomial det(xI − A), coefficients in ascending order,
/// by Faddeev–LeVerrier over the integers.
pub fn charpoly<const N: usize>(a: &[[i64; N]; N]) -> Vec<i64> {
    let a: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut c = vec![0i128; N + 1];
    c[N] = 1;
    let mut m = vec![vec![0i128; N]; N];
    for k in 1..=N {
        // M_k = A M_{k-1} + c_{N-k+1} I
        let mut next = vec![vec![0i128; N]; N];
        for i in 0..N {
            for j in 0..N {
                next[i][j] = (0..N).map(|l| a[i][l] * m[l][j]).sum::<i128>();
            }
            next[i][i] += c[N - k + 1];
        }
        m = next;
        let tr: i128 = (0..N).map(|i| (0..N).map(|l| a[i][l] * m[l][i]).sum::<i128>()).sum();
        c[N - k] = -tr / k as i128;
    }
    c.into_iter().map(|x| x as i64).collect()
}

pub fn poly_mul(p: &[i64], q: &[i64]) -> Vec<i64> {
    let mut r = vec![0; p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            r[i + j] += a * b;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes_from_linear_equivalences() {
        assert_eq!(c0_plus(), [1, 1, 1, -1, 0]);
        assert_eq!(c1_plus(), [2, 1, 0, -1, 0]);
        assert_eq!(v0_class(), [1, 0, 0, -1, -1]);
    }

    #[test]
    fn pullback_columns() {
        let f = pullback_matrix();
        assert_eq!(mat_vec(&f, &V1), [2, 1, 1, -1, 0]);
        assert_eq!(mat_vec(&f, &L), [3, 2, 1, -1, 0]);
    }

    #[test]
    fn self_intersections() {
        let j = intersection_form();
        assert_eq!(j[1][1], -2);
        assert_eq!(pair(&j, &L, &L), 1);
        assert_eq!(pair(&j, &c0_plus(), &c0_plus()), 0);
        assert_eq!(j, transpose(&j));
    }

    #[test]
    fn restricted_action_basics() {
        let a = restricted_action();
        assert_eq!(mat_vec(&a, &[1, 0, 0]), [0, 0, 1]);
        assert_eq!(det3(&a), 1);
        assert_eq!(charpoly(&a), vec![-1, -2, -1, 1]);
    }

    #[test]
    fn degree_root() {
        let r = dynamical_degree();
        assert!((r - 2.1479).abs() < 1e-4);
        assert!((r.powi(3) - r * r - 2.0 * r - 1.0).abs() < 1e-10);
        assert!((r.ln() - 0.764490).abs() < 1e-6);
    }
}
