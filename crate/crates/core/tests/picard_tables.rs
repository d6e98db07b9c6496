use fab_core::picard::*;

const PULLBACK_PRINTED: Mat5 = [
    [2, 0, 1, 0, 1],
    [1, 1, 0, 0, 1],
    [1, 0, 0, 0, 1],
    [-1, 0, 0, 0, 0],
    [0, 0, 0, 1, 0],
];
const ACTION_PRINTED: Mat3 = [[0, 1, 1], [0, 0, 1], [1, 1, 1]];
const PAIRING_PRINTED: Mat3 = [[1, 2, 2], [2, 2, 3], [2, 3, 5]];

#[test]
fn assembled_pullback_equals_printed_matrix() {
    assert_eq!(pullback_matrix(), PULLBACK_PRINTED);
}

#[test]
fn restricted_action_equals_printed_matrix() {
    assert_eq!(restricted_action(), ACTION_PRINTED);
    // The same matrix describes f_* on the minus basis.
    let b = s_basis(Side::Minus);
    let g = pushforward_matrix();
    for k in 0..3 {
        let img = solve_in_basis(&b, &mat_vec(&g, &b[k])).unwrap();
        let col: Vec3 = std::array::from_fn(|i| ACTION_PRINTED[i][k]);
        assert_eq!(img, col);
    }
}

#[test]
fn pairing_matrix_equals_printed_matrix() {
    assert_eq!(s_pairing_matrix(), PAIRING_PRINTED);
    let w = |side, coords| SClass { side, coords };
    assert_eq!(pairing(&w(Side::Plus, [1, 0, 0]), &w(Side::Minus, [1, 0, 0])), 1);
    assert_eq!(pairing(&w(Side::Plus, [0, 0, 1]), &w(Side::Minus, [0, 0, 1])), 5);
    // (f*)² C0+ = A² e1
    let a2 = mat_mul(&ACTION_PRINTED, &ACTION_PRINTED);
    let c = mat_vec(&a2, &[1, 0, 0]);
    assert_eq!(pairing(&w(Side::Plus, c), &w(Side::Minus, [1, 0, 0])), 5);
}

#[test]
fn charpoly_factors() {
    let full = charpoly(&pullback_matrix());
    let small = charpoly(&restricted_action());
    assert_eq!(small, vec![-1, -2, -1, 1]);
    let sq = poly_mul(&[-1, 1], &[-1, 1]);
    assert_eq!(full, poly_mul(&sq, &small));
}

#[test]
fn adjunction_identity() {
    let a = restricted_action();
    let m = s_pairing_matrix();
    assert_eq!(mat_mul(&transpose(&a), &m), mat_mul(&m, &a));
}

#[test]
fn s_is_orthogonal_to_the_fixed_curves() {
    let j = intersection_form();
    for side in [Side::Plus, Side::Minus] {
        for c in s_basis(side) {
            assert_eq!(pair(&j, &c, &v0_class()), 0);
            assert_eq!(pair(&j, &c, &V2), 0);
        }
    }
    // V1 is not in the orthogonal complement.
    let p: Vec<i64> = s_basis(Side::Plus).iter().map(|c| pair(&j, c, &V1)).collect();
    assert_eq!(p, vec![1, 1, 2]);
    // V0 and V2 are fixed by f*.
    assert_eq!(mat_vec(&pullback_matrix(), &V2), V2);
    assert_eq!(mat_vec(&pullback_matrix(), &v0_class()), v0_class());
}

#[test]
fn signature_is_one_four() {
    // J is symmetric so its characteristic polynomial is real-rooted and
    // Descartes' rule counts positive and negative eigenvalues exactly.
    let c = charpoly(&intersection_form());
    assert_ne!(c[0], 0);
    let changes = |v: &[i64]| {
        let nz: Vec<i64> = v.iter().copied().filter(|&x| x != 0).collect();
        nz.windows(2).filter(|w| w[0].signum() != w[1].signum()).count()
    };
    let neg: Vec<i64> = c.iter().enumerate().map(|(k, &x)| if k % 2 == 1 { -x } else { x }).collect();
    assert_eq!(changes(&c), 1);
    assert_eq!(changes(&neg), 4);
}

#[test]
fn pullback_expansion_rate() {
    let a = restricted_action();
    let rho = dynamical_degree();
    let mut u: [f64; 3] = [1.0, 0.0, 0.0];
    let mut ratios = Vec::new();
    for n in 1..=40 {
        u = std::array::from_fn(|i| (0..3).map(|k| a[i][k] as f64 * u[k]).sum());
        let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        ratios.push(norm / rho.powi(n));
    }
    let (r39, r40) = (ratios[38], ratios[39]);
    assert!(((r40 - r39) / r40).abs() < 1e-6);
}
