use nalgebra::DMatrix;
use proptest::prelude::*;
use ueb_core::special_basis::{build_sv1bk, diagonal_partition, fourier_phases, tensor_hadamard_phases};
use ueb_core::{complement_basis, hs_inner, matrix_from_state, schmidt_profile, state_from_matrix, Complex64, ComplexMatrix};

fn complex_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), r * c).prop_map(move |v| {
            ComplexMatrix::new(r, c, v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap()
        })
    })
}

fn pair(max: usize) -> impl Strategy<Value = (ComplexMatrix, ComplexMatrix)> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        let one = prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), r * c).prop_map(move |v| {
            ComplexMatrix::new(r, c, v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap()
        });
        (one.clone(), one)
    })
}

proptest! {
    /// Singular values agree with square roots of the eigenvalues of `A^† A`.
    #[test]
    fn singular_values_match_gram_eigenvalues(a in complex_matrix(6, 6)) {
        let n = DMatrix::from_fn(a.rows(), a.cols(), |r, c| a[(r, c)]);
        let gram = n.adjoint() * n;
        let mut eig: Vec<f64> = gram.symmetric_eigen().eigenvalues.iter().map(|x| x.max(0.0).sqrt()).collect();
        eig.sort_by(|x, y| y.total_cmp(x));
        let profile = schmidt_profile(&a, 1e-9).unwrap();
        for (i, s) in profile.singular_values.iter().enumerate() {
            prop_assert!((s - eig[i]).abs() < 1e-10 * eig[0].max(1.0), "{s} vs {}", eig[i]);
        }
    }

    #[test]
    fn state_matrix_round_trip(a in complex_matrix(5, 5)) {
        prop_assert_eq!(matrix_from_state(&state_from_matrix(&a)), a);
    }

    #[test]
    fn hs_inner_equals_state_inner((a, b) in pair(5)) {
        let hs = hs_inner(&a, &b).unwrap();
        let st = state_from_matrix(&a).inner(&state_from_matrix(&b));
        prop_assert!((hs - st).norm() < 1e-12);
    }

    #[test]
    fn complement_is_orthonormal_and_orthogonal((a, b) in pair(4)) {
        let (r, c) = a.shape();
        let Ok(comp) = complement_basis(&[a.clone(), b.clone()], r, c, 1e-9) else { return Ok(()) };
        prop_assert_eq!(comp.len(), r * c - 2);
        for (i, x) in comp.iter().enumerate() {
            prop_assert!(hs_inner(x, &a).unwrap().norm() < 1e-9);
            prop_assert!(hs_inner(x, &b).unwrap().norm() < 1e-9);
            for (j, y) in comp.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                prop_assert!((hs_inner(x, y).unwrap() - Complex64::new(target, 0.0)).norm() < 1e-9);
            }
        }
    }
}

/// Fourier and tensor-Hadamard phases on one diagonal span the same space.
#[test]
fn phase_systems_span_the_same_space() {
    for (rows, cols, k) in [(4, 4, 4), (4, 6, 4), (8, 8, 8), (6, 6, 4)] {
        let part = diagonal_partition(rows, cols, k).unwrap();
        let f = build_sv1bk(&part, &fourier_phases(k).unwrap()).unwrap();
        let h = build_sv1bk(&part, &tensor_hadamard_phases(k).unwrap()).unwrap();
        for m in f.matrices() {
            let support = m.support(1e-12);
            let weight: f64 = h
                .matrices()
                .iter()
                .filter(|x| x.support(1e-12) == support)
                .map(|x| hs_inner(x, m).unwrap().norm_sqr() / k as f64)
                .sum();
            assert!((weight - k as f64).abs() < 1e-9, "{rows}x{cols} k={k}");
        }
    }
}
