//! Root finding, eigenvalues and least squares against independent oracles.

use nhse_core::model::{bloch_hamiltonian, model_i, q_polynomial};
use nhse_core::numerics::{
    complex_eigenvalues, eval_polynomial, linear_fit, polynomial_roots, DenseComplexMatrix,
};
use nhse_core::{Complex64, Error};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Largest distance from a member of `a` to its nearest partner in `b`, both ways.
fn set_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    nhse_core::numerics::hausdorff(a, b)
}

#[test]
fn roots_of_beta_squared_minus_one() {
    let roots = polynomial_roots(&[c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]).unwrap();
    assert!(set_distance(&roots, &[c(1.0, 0.0), c(-1.0, 0.0)]) < 1e-14);
}

#[test]
fn cube_roots_of_minus_one_lie_on_unit_circle() {
    let roots = polynomial_roots(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    let third = std::f64::consts::PI / 3.0;
    let expected = [c(-1.0, 0.0), Complex64::from_polar(1.0, third), Complex64::from_polar(1.0, -third)];
    assert!(set_distance(&roots, &expected) < 1e-13);
    for r in roots {
        assert!((r.norm() - 1.0).abs() < 1e-13);
    }
}

#[test]
fn random_sextic_residuals() {
    // Fixed pseudo-random coefficients (deterministic LCG) for reproducibility.
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    };
    for _ in 0..20 {
        let coeffs: Vec<Complex64> = (0..7).map(|_| c(next(), next())).collect();
        let roots = polynomial_roots(&coeffs).unwrap();
        assert_eq!(roots.len(), 6);
        for r in roots {
            assert!(eval_polynomial(&coeffs, r).norm() < 1e-9 * r.norm().max(1.0).powi(6));
        }
    }
}

#[test]
fn root_errors() {
    assert_eq!(polynomial_roots(&[c(3.0, 0.0)]), Err(Error::EmptyRoots));
    assert!(matches!(polynomial_roots(&[c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]), Err(Error::DegenerateInput(_))));
}

#[test]
fn eigenvalues_of_diagonal_matrix() {
    let m = DenseComplexMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 0) => c(2.0, 0.0),
        (1, 1) => c(-1.0, 3.0),
        _ => c(0.0, 0.0),
    });
    let eig = complex_eigenvalues(&m).unwrap();
    assert!(set_distance(&eig, &[c(2.0, 0.0), c(-1.0, 3.0)]) < 1e-15);
}

#[test]
fn eigenvalues_of_companion_matrix() {
    let m = DenseComplexMatrix::companion(&[c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]).unwrap();
    let eig = complex_eigenvalues(&m).unwrap();
    assert!(set_distance(&eig, &[c(1.0, 0.0), c(-1.0, 0.0)]) < 1e-14);
}

#[test]
fn bloch_matrix_eigenvalues_match_symbol() {
    let model = model_i(1.0, 1.5, 1.0);
    let k = std::f64::consts::FRAC_PI_2;
    let h = bloch_hamiltonian(&model, k);
    let m = DenseComplexMatrix::from_fn(2, |i, j| h[i][j]);
    let eig = complex_eigenvalues(&m).unwrap();
    let e = q_polynomial(&model).eval_k(k).sqrt();
    assert!(set_distance(&eig, &[e, -e]) < 1e-12);
}

#[test]
fn singular_and_empty_matrix_inputs() {
    assert!(DenseComplexMatrix::from_row_major(0, vec![]).is_err());
    assert!(DenseComplexMatrix::from_row_major(2, vec![c(1.0, 0.0); 3]).is_err());
    assert!(DenseComplexMatrix::from_row_major(1, vec![c(f64::NAN, 0.0)]).is_err());
}

#[test]
fn fit_two_points() {
    let f = linear_fit(&[(0.0, 1.0), (1.0, 3.0)]).unwrap();
    assert!((f.slope - 2.0).abs() < 1e-15 && (f.intercept - 1.0).abs() < 1e-15);
    assert!(f.residual_rms < 1e-15);
}

#[test]
fn fit_affine_data_is_exact() {
    let samples: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, -0.5 * i as f64 + 4.0)).collect();
    let f = linear_fit(&samples).unwrap();
    assert!((f.slope + 0.5).abs() < 1e-14);
    assert!((f.intercept - 4.0).abs() < 1e-13);
}

#[test]
fn fit_with_bounded_noise() {
    // Deterministic noise of amplitude 0.01.
    let samples: Vec<(f64, f64)> = (0..=200)
        .map(|i| {
            let t = i as f64 * 0.05;
            (t, 1.3 * t - 2.0 + 0.01 * (17.0 * t).sin())
        })
        .collect();
    let f = linear_fit(&samples).unwrap();
    assert!((f.slope - 1.3).abs() < 0.01);
}

#[test]
fn fit_degenerate_times() {
    assert_eq!(linear_fit(&[(1.0, 0.0), (1.0, 2.0), (1.0, 3.0)]), Err(Error::DegenerateFit));
}

fn complex_strategy() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| c(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vieta_relations(lead in complex_strategy(), rest in prop::collection::vec(complex_strategy(), 1..7)) {
        prop_assume!(lead.norm() > 0.1);
        let mut coeffs = vec![lead];
        coeffs.extend(rest);
        let n = coeffs.len() - 1;
        let roots = polynomial_roots(&coeffs).unwrap();
        prop_assert_eq!(roots.len(), n);
        let sum: Complex64 = roots.iter().sum();
        let prod: Complex64 = roots.iter().product();
        let want_sum = -coeffs[1] / coeffs[0];
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let want_prod = coeffs[n] / coeffs[0] * sign;
        let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
        prop_assert!((sum - want_sum).norm() <= 1e-8 * scale * n as f64);
        prop_assert!((prod - want_prod).norm() <= 1e-8 * scale.powi(n as i32));
    }

    #[test]
    fn trace_and_determinant(entries in prop::collection::vec(complex_strategy(), 1..=(12 * 12))) {
        let n = (entries.len() as f64).sqrt().floor() as usize;
        prop_assume!(n >= 1);
        let m = DenseComplexMatrix::from_row_major(n, entries[..n * n].to_vec()).unwrap();
        let eig = complex_eigenvalues(&m).unwrap();
        let sum: Complex64 = eig.iter().sum();
        let scale = m.max_abs().max(1.0) * n as f64;
        prop_assert!((sum - m.trace()).norm() <= 1e-8 * scale);
        // Determinant by Gaussian elimination with partial pivoting.
        let det = determinant(&m);
        let prod: Complex64 = eig.iter().product();
        prop_assert!((prod - det).norm() <= 1e-6 * det.norm().max(1e-3 * scale.powi(n as i32 - 1)));
    }

    #[test]
    fn hermitian_spectrum_is_real(entries in prop::collection::vec(complex_strategy(), 64)) {
        let n = 8;
        let a = DenseComplexMatrix::from_row_major(n, entries).unwrap();
        let h = DenseComplexMatrix::from_fn(n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
        for e in complex_eigenvalues(&h).unwrap() {
            prop_assert!(e.im.abs() <= 1e-10);
        }
    }

    #[test]
    fn companion_eigenvalues_equal_roots(rest in prop::collection::vec(complex_strategy(), 2..7)) {
        let mut coeffs = vec![c(1.0, 0.0)];
        coeffs.extend(rest);
        let roots = polynomial_roots(&coeffs).unwrap();
        let eig = complex_eigenvalues(&DenseComplexMatrix::companion(&coeffs).unwrap()).unwrap();
        // Clustered roots are ill-conditioned; compare through the residual scale.
        let gap = min_pair_gap(&roots);
        prop_assume!(gap > 1e-3);
        prop_assert!(set_distance(&roots, &eig) <= 1e-8 / gap.min(1.0));
    }

    #[test]
    fn similarity_preserves_spectrum(entries in prop::collection::vec(complex_strategy(), 36), d in prop::collection::vec(0.2f64..5.0, 6)) {
        let m = DenseComplexMatrix::from_row_major(6, entries).unwrap();
        let e1 = complex_eigenvalues(&m).unwrap();
        let e2 = complex_eigenvalues(&m.diagonal_similarity(&d)).unwrap();
        let gap = min_pair_gap(&e1);
        prop_assume!(gap > 1e-3);
        prop_assert!(set_distance(&e1, &e2) <= 1e-8 / gap.min(1.0) * m.max_abs().max(1.0));
    }

    #[test]
    fn fit_recovers_affine_lines(slope in -5.0f64..5.0, icpt in -5.0f64..5.0, n in 2usize..50) {
        let samples: Vec<(f64, f64)> = (0..n).map(|i| { let t = 0.3 * i as f64 + 1.0; (t, slope * t + icpt) }).collect();
        let f = linear_fit(&samples).unwrap();
        prop_assert!((f.slope - slope).abs() < 1e-10);
        prop_assert!((f.intercept - icpt).abs() < 1e-9);
    }
}

fn min_pair_gap(z: &[Complex64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            gap = gap.min((z[i] - z[j]).norm());
        }
    }
    gap
}

fn determinant(m: &DenseComplexMatrix) -> Complex64 {
    let n = m.order();
    let mut a: Vec<Complex64> = m.as_slice().to_vec();
    let mut det = c(1.0, 0.0);
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i * n + k].norm().total_cmp(&a[j * n + k].norm())).unwrap();
        if a[p * n + k].norm() == 0.0 {
            return c(0.0, 0.0);
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        det *= a[k * n + k];
        for i in k + 1..n {
            let f = a[i * n + k] / a[k * n + k];
            for j in k..n {
                let v = a[k * n + j];
                a[i * n + j] -= f * v;
            }
        }
    }
    det
}
