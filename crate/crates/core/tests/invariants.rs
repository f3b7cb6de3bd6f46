use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use wradius_core::bounds::{full_report, sum_diff_parts, DEFAULT_R_LIST};
use wradius_core::linalg::{cartesian_parts, operator_norm, positive_sqrt, EIGEN_TOL};
use wradius_core::range::crawford_number;
use wradius_core::{numerical_radius, ComplexMatrix, HermitianMatrix, SweepPolicy};

fn policy() -> SweepPolicy {
    SweepPolicy {
        grid_n: 256,
        ..SweepPolicy::default()
    }
}

fn entry() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn square(max_n: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_n).prop_flat_map(|n| prop::collection::vec(entry(), n * n).prop_map(move |d| ComplexMatrix::new(n, d).unwrap()))
}

fn pair(max_n: usize) -> impl Strategy<Value = (ComplexMatrix, ComplexMatrix)> {
    (1..=max_n).prop_flat_map(|n| {
        let m = move |d| ComplexMatrix::new(n, d).unwrap();
        (
            prop::collection::vec(entry(), n * n).prop_map(m),
            prop::collection::vec(entry(), n * n).prop_map(m),
        )
    })
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn radius_is_absolutely_homogeneous(a in square(5), re in -2.0..2.0f64, im in -2.0..2.0f64) {
        let s = Complex64::new(re, im);
        let w = numerical_radius(&a, &policy()).unwrap();
        let ws = numerical_radius(&a.scale(s), &policy()).unwrap();
        prop_assert!(rel_close(ws, s.norm() * w, 1e-9));
    }

    #[test]
    fn radius_is_rotation_invariant(a in square(5), phi in 0.0..(2.0 * PI)) {
        let w = numerical_radius(&a, &policy()).unwrap();
        let wr = numerical_radius(&a.scale(Complex64::from_polar(1.0, phi)), &policy()).unwrap();
        prop_assert!(rel_close(w, wr, 1e-9));
    }

    #[test]
    fn radius_sits_between_half_norm_and_norm(a in square(6)) {
        let w = numerical_radius(&a, &policy()).unwrap();
        let norm = operator_norm(&a).unwrap();
        let eps = 1e-8 * (1.0 + norm);
        prop_assert!(0.5 * norm - eps <= w && w <= norm + eps);
    }

    #[test]
    fn hermitian_radius_is_spectral_radius(a in square(5)) {
        let h = HermitianMatrix::real_part_of(&a);
        let w = numerical_radius(h.as_matrix(), &policy()).unwrap();
        prop_assert!(rel_close(w, h.norm().unwrap(), 1e-10));
        let c = crawford_number(h.as_matrix(), &policy()).unwrap();
        prop_assert!((c - h.crawford().unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn finer_grid_never_lowers_the_coarse_maximum(a in square(4)) {
        let coarse = SweepPolicy { grid_n: 32, refine_iters: 1, tol: 1.0 };
        let fine = SweepPolicy::default();
        let w_c = numerical_radius(&a, &coarse).unwrap();
        let w_f = numerical_radius(&a, &fine).unwrap();
        prop_assert!(w_c <= w_f + 1e-12 * (1.0 + w_f));
    }

    #[test]
    fn eigen_reconstructs_matrix(a in square(6)) {
        let h = HermitianMatrix::real_part_of(&a);
        let s = h.eigen(EIGEN_TOL, true).unwrap();
        let v = s.vectors.as_ref().unwrap();
        let d = ComplexMatrix::from_diagonal(&s.values.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>()).unwrap();
        let rebuilt = v.multiply(&d).unwrap().multiply(&v.adjoint()).unwrap();
        let err = rebuilt.max_abs_diff(h.as_matrix()).unwrap();
        prop_assert!(err <= 1e-11 * (1.0 + h.as_matrix().frobenius_norm()));
        prop_assert!(s.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn norm_is_submultiplicative((a, b) in pair(5)) {
        let ab = operator_norm(&a.multiply(&b).unwrap()).unwrap();
        let bound = operator_norm(&a).unwrap() * operator_norm(&b).unwrap();
        prop_assert!(ab <= bound * (1.0 + 1e-10) + 1e-12);
    }

    #[test]
    fn adjoint_preserves_norm_and_reverses_products((a, b) in pair(5)) {
        prop_assert!(rel_close(operator_norm(&a).unwrap(), operator_norm(&a.adjoint()).unwrap(), 1e-11));
        let lhs = a.multiply(&b).unwrap().adjoint();
        let rhs = b.adjoint().multiply(&a.adjoint()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12 * (1.0 + lhs.max_abs()));
    }

    #[test]
    fn psd_sqrt_squares_back(a in square(5)) {
        let g = HermitianMatrix::gram(&a);
        let r = positive_sqrt(&g).unwrap();
        let back = r.square();
        let err = back.as_matrix().max_abs_diff(g.as_matrix()).unwrap();
        prop_assert!(err <= 1e-9 * (1.0 + g.as_matrix().max_abs()));
    }

    #[test]
    fn cartesian_parts_reconstruct(a in square(6)) {
        let (re, im) = cartesian_parts(&a);
        let rebuilt = re.as_matrix().add(&im.as_matrix().scale(Complex64::new(0.0, 1.0))).unwrap();
        prop_assert!(rebuilt.max_abs_diff(&a).unwrap() <= 1e-14 * (1.0 + a.max_abs()));
    }

    #[test]
    fn sum_difference_identity(a in square(6)) {
        prop_assert!(sum_diff_parts(&a).unwrap().identity_residual <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_bound_chain_holds(a in square(5)) {
        let r = full_report(&a, &policy(), &DEFAULT_R_LIST).unwrap();
        let failed: Vec<_> = r.verdicts.iter().filter(|v| v.failed()).collect();
        prop_assert!(failed.is_empty(), "{:?}", failed);
        prop_assert!(r.errors.is_empty());
    }
}
