//! Support-function sweeps of the numerical range.
//!
//! Everything here is driven by the support function of the numerical range,
//!
//! ```text
//! h(θ) = λ_max(Re(e^{iθ}A)) = max { Re(e^{iθ}z) : z ∈ W(A) },
//! ```
//!
//! sampled on a uniform grid over one full period and refined with
//! golden-section search around the extreme samples. Since `W(A)` is convex
//! and compact, `w(A) = max_θ h(θ)` and `c(A) = max(0, −min_θ h(θ))`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::golden;
use crate::linalg::{ComplexMatrix, HermitianMatrix, EIGEN_TOL};
use crate::par;

/// Local extrema of the sampled profile that get a golden-section refinement.
const MAX_REFINE_CANDIDATES: usize = 4;

/// Controls the angular sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPolicy {
    /// Number of coarse angles over `[0, 2π)`; at least 16.
    pub grid_n: usize,
    /// Golden-section iterations per refined extremum; at least 1.
    pub refine_iters: usize,
    /// Refinement stops once the bracket is narrower than `tol` radians.
    pub tol: f64,
}

impl Default for SweepPolicy {
    fn default() -> Self {
        Self {
            grid_n: 1024,
            refine_iters: 80,
            tol: 1e-10,
        }
    }
}

impl SweepPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.grid_n < 16 {
            return Err(Error::InvalidArgument(format!("grid_n must be at least 16, got {}", self.grid_n)));
        }
        if self.refine_iters < 1 {
            return Err(Error::InvalidArgument("refine_iters must be at least 1".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidArgument(format!("tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

/// Sampled support function with refined extrema.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepProfile {
    pub angles: Vec<f64>,
    pub values: Vec<f64>,
    pub max_value: f64,
    pub argmax_angle: f64,
    pub min_value: f64,
    pub argmin_angle: f64,
}

/// Inner approximation of the boundary of `W(A)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RangePolygon {
    /// Points `⟨Ax,x⟩` for unit top eigenvectors `x`, ordered by support direction.
    pub points: Vec<Complex64>,
}

/// `Re(e^{iθ}A) = (e^{iθ}A + e^{−iθ}A*)/2`.
pub fn rotated_real_part(a: &ComplexMatrix, theta: f64) -> HermitianMatrix {
    HermitianMatrix::real_part_of(&a.scale(Complex64::from_polar(1.0, theta)))
}

/// `h(θ) = λ_max(Re(e^{iθ}A))`.
pub fn support_value(a: &ComplexMatrix, theta: f64) -> Result<f64> {
    rotated_real_part(a, theta).lambda_max()
}

fn grid_angles(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
}

/// `h` at every grid angle.
///
/// `Re(e^{i(θ+π)}A) = −Re(e^{iθ}A)`, so for an even grid one eigen-solve at
/// `θ` yields both `h(θ) = λ_max` and `h(θ+π) = −λ_min`.
fn sample_grid(a: &ComplexMatrix, angles: &[f64]) -> Result<Vec<f64>> {
    let n = angles.len();
    if !n.is_multiple_of(2) {
        return par::try_map_indexed(n, |k| support_value(a, angles[k]));
    }
    let half = n / 2;
    let pairs = par::try_map_indexed(half, |k| rotated_real_part(a, angles[k]).extreme_eigenvalues())?;
    let mut values = vec![0.0; n];
    for (k, (lo, hi)) in pairs.into_iter().enumerate() {
        values[k] = hi;
        values[k + half] = -lo;
    }
    Ok(values)
}

/// Samples `h` on the policy grid and refines its global maximum and minimum.
pub fn sweep(a: &ComplexMatrix, policy: &SweepPolicy) -> Result<SweepProfile> {
    policy.validate()?;
    let angles = grid_angles(policy.grid_n);
    let values = sample_grid(a, &angles)?;
    let eval = |theta: f64| support_value(a, theta);
    let (max_value, argmax_angle) = refine(&angles, &values, &eval, policy, Extremum::Max)?;
    let (min_value, argmin_angle) = refine(&angles, &values, &eval, policy, Extremum::Min)?;
    Ok(SweepProfile {
        angles,
        values,
        max_value,
        argmax_angle,
        min_value,
        argmin_angle,
    })
}

/// `w(A)`, the largest modulus over the numerical range.
///
/// The coarse grid alone satisfies `w·cos(π/grid_n) ≤ result ≤ w`; the
/// golden-section step then closes the remaining gap to roughly `policy.tol`.
/// Only the maximum is refined, so this is cheaper than a full [`sweep`].
pub fn numerical_radius(a: &ComplexMatrix, policy: &SweepPolicy) -> Result<f64> {
    policy.validate()?;
    let angles = grid_angles(policy.grid_n);
    let values = sample_grid(a, &angles)?;
    let (max_value, _) = refine(&angles, &values, &|t| support_value(a, t), policy, Extremum::Max)?;
    Ok(max_value.max(0.0))
}

/// `c(A)`, the distance from the origin to the numerical range.
pub fn crawford_number(a: &ComplexMatrix, policy: &SweepPolicy) -> Result<f64> {
    Ok(crawford_from_profile(&sweep(a, policy)?))
}

pub fn crawford_from_profile(profile: &SweepProfile) -> f64 {
    (-profile.min_value).max(0.0)
}

/// `w(A + λI)` reusing the sampled profile of `A`.
///
/// Translating the numerical range shifts the support function by a sinusoid,
/// `h_{A+λI}(θ) = h_A(θ) + Re(e^{iθ}λ)`, so the coarse grid carries over and
/// only the refinement needs fresh eigen-solves.
pub fn shifted_radius(
    a: &ComplexMatrix,
    profile: &SweepProfile,
    shift: Complex64,
    policy: &SweepPolicy,
) -> Result<f64> {
    policy.validate()?;
    let offset = |theta: f64| (Complex64::from_polar(1.0, theta) * shift).re;
    let values: Vec<f64> = profile
        .angles
        .iter()
        .zip(&profile.values)
        .map(|(&t, &v)| v + offset(t))
        .collect();
    let eval = |theta: f64| Ok(support_value(a, theta)? + offset(theta));
    let (max_value, _) = refine(&profile.angles, &values, &eval, policy, Extremum::Max)?;
    Ok(max_value.max(0.0))
}

#[derive(Clone, Copy, PartialEq)]
enum Extremum {
    Max,
    Min,
}

/// Refines the global extremum of a cyclic sampled profile.
///
/// Every discrete local extremum that could still hide the true extremum is a
/// candidate; up to [`MAX_REFINE_CANDIDATES`] of the best are refined on their
/// two bracketing grid cells. For the maximum, a peak of height `p` is seen
/// by its nearest sample at no less than `p·cos(π/N)`; for the minimum, `h` is
/// Lipschitz with constant `w(A)`, so the nearest sample sits within `w·π/N`.
fn refine(
    angles: &[f64],
    values: &[f64],
    eval: &(dyn Fn(f64) -> Result<f64> + Sync),
    policy: &SweepPolicy,
    kind: Extremum,
) -> Result<(f64, f64)> {
    let n = values.len();
    let sign = if kind == Extremum::Max { 1.0 } else { -1.0 };
    // work with g = sign·h so both cases are maximizations
    let g = |k: usize| sign * values[k];
    let best_k = (0..n).fold(0, |b, k| if g(k) > g(b) { k } else { b });
    let coarse = g(best_k);

    let half_step = PI / n as f64;
    let w_est = values.iter().fold(0.0_f64, |m, v| m.max(v.abs())) / half_step.cos();
    let floor = 1e-15 * (1.0 + w_est);
    let threshold = match kind {
        Extremum::Max => coarse - coarse.abs() * (1.0 - half_step.cos()) - floor,
        Extremum::Min => coarse - 1.01 * w_est * half_step - floor,
    };

    let mut candidates: Vec<usize> = (0..n)
        .filter(|&k| {
            let prev = g((k + n - 1) % n);
            let next = g((k + 1) % n);
            g(k) >= prev && g(k) >= next && g(k) >= threshold
        })
        .collect();
    candidates.sort_by(|&i, &j| g(j).total_cmp(&g(i)).then(i.cmp(&j)));
    candidates.truncate(MAX_REFINE_CANDIDATES);
    if candidates.is_empty() {
        candidates.push(best_k);
    }

    let step = 2.0 * PI / n as f64;
    let mut best = (coarse, angles[best_k]);
    for k in candidates {
        let center = angles[k];
        let opt = golden::maximize(
            |t| eval(t).map(|v| sign * v),
            center - step,
            center + step,
            policy.refine_iters,
            policy.tol,
        )?;
        if opt.value > best.0 {
            best = (opt.value, opt.x.rem_euclid(2.0 * PI));
        }
    }
    Ok((sign * best.0, best.1))
}

/// Boundary points of `W(A)` in `m` uniformly spaced support directions.
///
/// For direction `e^{iθ}`, a top eigenvector `x` of `Re(e^{−iθ}A)` maximizes
/// `Re(e^{−iθ}⟨Ax,x⟩)`, so `⟨Ax,x⟩` is a support point of `W(A)`.
pub fn range_boundary(a: &ComplexMatrix, m: usize) -> Result<RangePolygon> {
    if m < 8 {
        return Err(Error::InvalidArgument(format!("boundary needs at least 8 points, got {m}")));
    }
    let angles = grid_angles(m);
    let points = par::try_map_indexed(m, |k| {
        let spectrum = rotated_real_part(a, -angles[k]).eigen(EIGEN_TOL, true)?;
        let x = spectrum.vector(a.dim() - 1).expect("vectors requested");
        Ok::<_, Error>(a.rayleigh(&x))
    })?;
    Ok(RangePolygon { points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Eigenvalues of a 2x2 Hermitian matrix from the quadratic formula.
    fn eig2(h: &HermitianMatrix) -> (f64, f64) {
        let m = h.as_matrix();
        let (a, d, b) = (m.get(0, 0).re, m.get(1, 1).re, m.get(0, 1));
        let mid = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        (mid - rad, mid + rad)
    }

    #[test]
    fn rotated_real_part_at_zero_and_pi() {
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 2.0), c(3.0, -1.0)], vec![c(0.5, 0.25), c(-4.0, 4.0)]]).unwrap();
        let re = HermitianMatrix::real_part_of(&a);
        assert!(rotated_real_part(&a, 0.0).as_matrix().max_abs_diff(re.as_matrix()).unwrap() < 1e-15);
        let neg = re.scale(-1.0);
        assert!(rotated_real_part(&a, PI).as_matrix().max_abs_diff(neg.as_matrix()).unwrap() < 1e-15);
    }

    #[test]
    fn rotated_real_part_of_nilpotent_has_constant_spectrum() {
        let a = ComplexMatrix::upper_shift(2);
        for k in 0..37 {
            let theta = 0.3 + k as f64 * 0.17;
            let h = rotated_real_part(&a, theta);
            let (lo, hi) = eig2(&h);
            assert!((lo + 0.5).abs() < 1e-15 && (hi - 0.5).abs() < 1e-15);
            let values = h.eigenvalues().unwrap();
            assert!((values[0] - lo).abs() < 1e-14 && (values[1] - hi).abs() < 1e-14);
        }
    }

    #[test]
    fn sweep_of_identity_is_cosine() {
        let p = sweep(&ComplexMatrix::identity(2), &SweepPolicy::default()).unwrap();
        for (t, v) in p.angles.iter().zip(&p.values) {
            assert!((v - t.cos()).abs() < 1e-14);
        }
        assert!((p.max_value - 1.0).abs() < 1e-15);
        assert!(p.argmax_angle.abs() < 1e-6 || (p.argmax_angle - 2.0 * PI).abs() < 1e-6);
        assert!((p.min_value + 1.0).abs() < 1e-15);
    }

    #[test]
    fn sweep_of_nilpotent_is_flat() {
        let p = sweep(&ComplexMatrix::upper_shift(2), &SweepPolicy::default()).unwrap();
        for v in &p.values {
            assert!((v - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn sweep_of_zero_is_zero() {
        let p = sweep(&ComplexMatrix::zeros(3), &SweepPolicy::default()).unwrap();
        assert!(p.values.iter().all(|&v| v == 0.0));
        assert_eq!(p.max_value, 0.0);
        assert_eq!(p.min_value, 0.0);
    }

    #[test]
    fn sweep_profile_invariants() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 2.0), c(3.0, -1.0), c(0.0, 0.3)],
            vec![c(0.5, 0.25), c(-4.0, 4.0), c(1.0, 0.0)],
            vec![c(0.0, -2.0), c(0.7, 0.7), c(2.0, -1.0)],
        ])
        .unwrap();
        let policy = SweepPolicy { grid_n: 64, ..SweepPolicy::default() };
        let p = sweep(&a, &policy).unwrap();
        assert!(p.angles.windows(2).all(|w| w[1] > w[0]));
        assert!(p.values.iter().all(|&v| v <= p.max_value && v >= p.min_value));
        let half = p.values.len() / 2;
        for k in 0..half {
            assert!(p.values[k] + p.values[k + half] >= -1e-12);
        }
    }

    #[test]
    fn radius_examples() {
        let policy = SweepPolicy::default();
        let shift3 = ComplexMatrix::upper_shift(3);
        assert!((numerical_radius(&shift3, &policy).unwrap() - FRAC_1_SQRT_2).abs() < 1e-12);
        let d = ComplexMatrix::from_diagonal(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!((numerical_radius(&d, &policy).unwrap() - 1.0).abs() < 1e-12);
        let e12 = ComplexMatrix::upper_shift(2);
        assert!((numerical_radius(&e12, &policy).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn one_by_one_degenerates_to_modulus() {
        let a = ComplexMatrix::new(1, vec![c(-3.0, 4.0)]).unwrap();
        let policy = SweepPolicy::default();
        assert!((numerical_radius(&a, &policy).unwrap() - 5.0).abs() < 1e-12);
        assert!((crawford_number(&a, &policy).unwrap() - 5.0).abs() < 1e-12);
        let poly = range_boundary(&a, 16).unwrap();
        assert!(poly.points.iter().all(|p| (p - c(-3.0, 4.0)).norm() < 1e-12));
    }

    /// Distance from the origin to the segment [p, q].
    fn dist_to_segment(p: Complex64, q: Complex64) -> f64 {
        let d = q - p;
        let t = (-(p.re * d.re + p.im * d.im) / d.norm_sqr()).clamp(0.0, 1.0);
        (p + d * t).norm()
    }

    #[test]
    fn crawford_examples() {
        let policy = SweepPolicy::default();
        assert!((crawford_number(&ComplexMatrix::identity(2), &policy).unwrap() - 1.0).abs() < 1e-12);
        let d = ComplexMatrix::from_diagonal(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let expected = dist_to_segment(c(1.0, 0.0), c(0.0, 1.0));
        assert!((expected - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((crawford_number(&d, &policy).unwrap() - expected).abs() < 1e-10);
        assert_eq!(crawford_number(&ComplexMatrix::upper_shift(2), &policy).unwrap(), 0.0);
    }

    #[test]
    fn shifted_radius_matches_direct_sweep() {
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 2.0), c(3.0, -1.0)], vec![c(0.5, 0.25), c(-4.0, 4.0)]]).unwrap();
        let policy = SweepPolicy::default();
        let profile = sweep(&a, &policy).unwrap();
        for shift in [c(1.0, 0.0), c(-2.0, 1.5), c(0.0, -7.0)] {
            let direct = numerical_radius(&a.shifted(shift), &policy).unwrap();
            let reused = shifted_radius(&a, &profile, shift, &policy).unwrap();
            assert!((direct - reused).abs() < 1e-10 * (1.0 + direct));
        }
    }

    #[test]
    fn boundary_of_hermitian_is_real() {
        let h = ComplexMatrix::from_diagonal(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let poly = range_boundary(&h, 32).unwrap();
        assert!(poly.points.iter().all(|p| p.im.abs() < 1e-12 && p.re > -1e-12 && p.re < 1.0 + 1e-12));
    }

    #[test]
    fn boundary_of_normal_reaches_eigenvalues() {
        let d = ComplexMatrix::from_diagonal(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let poly = range_boundary(&d, 64).unwrap();
        let near = |z: Complex64| poly.points.iter().map(|p| (p - z).norm()).fold(f64::INFINITY, f64::min);
        assert!(near(c(1.0, 0.0)) < 1e-12);
        assert!(near(c(0.0, 1.0)) < 1e-12);
    }

    #[test]
    fn boundary_of_nilpotent_is_half_circle() {
        let poly = range_boundary(&ComplexMatrix::upper_shift(2), 360).unwrap();
        assert_eq!(poly.points.len(), 360);
        assert!(poly.points.iter().all(|p| (p.norm() - 0.5).abs() < 1e-8));
    }

    #[test]
    fn boundary_rejects_too_few_points() {
        assert!(range_boundary(&ComplexMatrix::identity(2), 7).is_err());
    }

    #[test]
    fn policy_validation() {
        assert!(SweepPolicy { grid_n: 15, ..Default::default() }.validate().is_err());
        assert!(SweepPolicy { refine_iters: 0, ..Default::default() }.validate().is_err());
        assert!(SweepPolicy { tol: 0.0, ..Default::default() }.validate().is_err());
        assert!(SweepPolicy::default().validate().is_ok());
    }
}
