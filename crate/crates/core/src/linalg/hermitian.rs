use num_complex::Complex64;
use serde::Serialize;

use super::eigen::{hermitian_eigen, Spectrum, EIGEN_TOL};
use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Relative tolerance for accepting a matrix as Hermitian.
const HERMITIAN_TOL: f64 = 1e-12;

/// Negative eigenvalues above `-PSD_CLIP_TOL·(1+‖H‖)` are treated as roundoff and clipped to zero.
pub const PSD_CLIP_TOL: f64 = 1e-10;

/// A complex matrix that equals its adjoint bit-for-bit.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    /// Accepts `m` if `max|m − m*| ≤ 1e-12·(1 + max|m|)` and stores `(m + m*)/2`.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let n = m.dim();
        let mut deviation: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                deviation = deviation.max((m.get(i, j) - m.get(j, i).conj()).norm());
            }
        }
        let allowed = HERMITIAN_TOL * (1.0 + m.max_abs());
        if deviation > allowed {
            return Err(Error::NotHermitian { deviation, allowed });
        }
        Ok(Self::real_part_of(&m))
    }

    /// `(A + A*)/2`.
    pub fn real_part_of(a: &ComplexMatrix) -> Self {
        let n = a.dim();
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            data[i * n + i] = Complex64::new(a.get(i, i).re, 0.0);
            for j in i + 1..n {
                let z = (a.get(i, j) + a.get(j, i).conj()) * 0.5;
                data[i * n + j] = z;
                data[j * n + i] = z.conj();
            }
        }
        Self(ComplexMatrix::from_raw(n, data))
    }

    /// `(A − A*)/(2i)`, computed as the real part of `−i·A`.
    pub fn imag_part_of(a: &ComplexMatrix) -> Self {
        let rotated = ComplexMatrix::from_raw(
            a.dim(),
            a.entries().iter().map(|z| Complex64::new(z.im, -z.re)).collect(),
        );
        Self::real_part_of(&rotated)
    }

    /// `A*A`.
    pub fn gram(a: &ComplexMatrix) -> Self {
        Self::mirror_upper(&a.adjoint().multiply(a).expect("same dimension"))
    }

    /// `AA*`.
    pub fn co_gram(a: &ComplexMatrix) -> Self {
        Self::mirror_upper(&a.multiply(&a.adjoint()).expect("same dimension"))
    }

    /// Keeps the upper triangle of a product that is Hermitian up to roundoff.
    fn mirror_upper(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            data[i * n + i] = Complex64::new(m.get(i, i).re, 0.0);
            for j in i + 1..n {
                let z = m.get(i, j);
                data[i * n + j] = z;
                data[j * n + i] = z.conj();
            }
        }
        Self(ComplexMatrix::from_raw(n, data))
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let d: Vec<Complex64> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Ok(Self(ComplexMatrix::from_diagonal(&d)?))
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.add(&other.0)?))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.sub(&other.0)?))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(Complex64::new(s, 0.0)))
    }

    /// `t·self + (1−t)·other`.
    pub fn lerp(&self, other: &Self, t: f64) -> Result<Self> {
        self.scale(t).add(&other.scale(1.0 - t))
    }

    /// Square of a Hermitian matrix, kept exactly Hermitian.
    pub fn square(&self) -> Self {
        Self::mirror_upper(&self.0.multiply(&self.0).expect("same dimension"))
    }

    pub fn eigen(&self, tol: f64, with_vectors: bool) -> Result<Spectrum> {
        hermitian_eigen(self, tol, with_vectors)
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.eigen(EIGEN_TOL, false)?.values)
    }

    pub fn lambda_max(&self) -> Result<f64> {
        Ok(*self.eigenvalues()?.last().expect("n >= 1"))
    }

    /// `(λ_min, λ_max)`.
    pub fn extreme_eigenvalues(&self) -> Result<(f64, f64)> {
        let values = self.eigenvalues()?;
        Ok((values[0], values[values.len() - 1]))
    }

    /// Operator norm, `max(|λ_min|, |λ_max|)`.
    pub fn norm(&self) -> Result<f64> {
        let (lo, hi) = self.extreme_eigenvalues()?;
        Ok(lo.abs().max(hi.abs()))
    }

    /// Crawford number; see [`crawford_hermitian`].
    pub fn crawford(&self) -> Result<f64> {
        let (lo, hi) = self.extreme_eigenvalues()?;
        Ok(crawford_from_interval(lo, hi))
    }

    /// Whether the spectrum is nonnegative up to the clipping tolerance.
    pub fn is_psd(&self) -> Result<bool> {
        let (lo, hi) = self.extreme_eigenvalues()?;
        Ok(lo >= -PSD_CLIP_TOL * (1.0 + lo.abs().max(hi.abs())))
    }

    /// Positive square root; see [`positive_sqrt`].
    pub fn sqrt(&self) -> Result<Self> {
        positive_sqrt(self)
    }
}

/// `c(H)` for Hermitian `H`: zero when the spectral interval contains 0, otherwise the
/// endpoint closest to 0. Exact because `⟨Hx,x⟩` fills `[λ_min, λ_max]`.
pub fn crawford_hermitian(h: &HermitianMatrix) -> Result<f64> {
    h.crawford()
}

fn crawford_from_interval(lo: f64, hi: f64) -> f64 {
    if lo <= 0.0 && hi >= 0.0 {
        0.0
    } else {
        lo.abs().min(hi.abs())
    }
}

/// The positive semidefinite square root `V·diag(√λ)·V*`.
///
/// Eigenvalues down to `-1e-10·(1+‖H‖)` are clipped to zero; anything more
/// negative is rejected as genuinely indefinite.
pub fn positive_sqrt(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    let spectrum = h.eigen(EIGEN_TOL, true)?;
    let norm = spectrum.values[0].abs().max(spectrum.values[spectrum.values.len() - 1].abs());
    let lo = spectrum.values[0];
    if lo < -PSD_CLIP_TOL * (1.0 + norm) {
        return Err(Error::NotPositive { min_eigenvalue: lo });
    }
    let roots: Vec<f64> = spectrum.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let v = spectrum.vectors.as_ref().expect("vectors requested");
    let n = h.dim();
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in i..n {
            let z: Complex64 = (0..n).map(|k| v.get(i, k) * roots[k] * v.get(j, k).conj()).sum();
            data[i * n + j] = z;
        }
    }
    Ok(HermitianMatrix::mirror_upper(&ComplexMatrix::from_raw(n, data)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn new_symmetrizes_small_deviation_exactly() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(1.0, 1e-14), c(2.0, 1.0)],
            vec![c(2.0 + 1e-13, -1.0), c(3.0, 0.0)],
        ])
        .unwrap();
        let h = HermitianMatrix::new(m).unwrap();
        assert_eq!(h.as_matrix().adjoint(), *h.as_matrix());
        assert_eq!(h.as_matrix().get(0, 0).im, 0.0);
    }

    #[test]
    fn new_rejects_non_hermitian() {
        let m = ComplexMatrix::upper_shift(2);
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn crawford_examples() {
        assert_eq!(crawford_hermitian(&HermitianMatrix::identity(3)).unwrap(), 1.0);
        let h = HermitianMatrix::from_real_diagonal(&[1.0, -1.0]).unwrap();
        assert_eq!(crawford_hermitian(&h).unwrap(), 0.0);
        let h = HermitianMatrix::from_real_diagonal(&[2.0, 5.0]).unwrap();
        assert!((crawford_hermitian(&h).unwrap() - 2.0).abs() < 1e-15);
        let h = HermitianMatrix::from_real_diagonal(&[-2.0, -5.0]).unwrap();
        assert!((crawford_hermitian(&h).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn sqrt_of_diagonal() {
        let h = HermitianMatrix::from_real_diagonal(&[4.0, 9.0]).unwrap();
        let r = positive_sqrt(&h).unwrap();
        let expected = ComplexMatrix::from_diagonal(&[c(2.0, 0.0), c(3.0, 0.0)]).unwrap();
        assert!(r.as_matrix().max_abs_diff(&expected).unwrap() < 1e-14);
    }

    #[test]
    fn modulus_of_nilpotent() {
        // |A| = (A*A)^{1/2} = diag(0, 1) for A = E12
        let a = ComplexMatrix::upper_shift(2);
        let modulus = positive_sqrt(&HermitianMatrix::gram(&a)).unwrap();
        let expected = ComplexMatrix::from_diagonal(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(modulus.as_matrix().max_abs_diff(&expected).unwrap() < 1e-14);
    }

    #[test]
    fn sqrt_clips_roundoff_and_rejects_indefinite() {
        let h = HermitianMatrix::from_real_diagonal(&[-1e-13, 1.0]).unwrap();
        let r = positive_sqrt(&h).unwrap();
        assert_eq!(r.as_matrix().get(0, 0), c(0.0, 0.0));

        let h = HermitianMatrix::from_real_diagonal(&[-1e-3, 1.0]).unwrap();
        assert!(matches!(positive_sqrt(&h), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn imag_part_reconstructs() {
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 2.0), c(3.0, -1.0)], vec![c(0.5, 0.25), c(-4.0, 4.0)]]).unwrap();
        let re = HermitianMatrix::real_part_of(&a);
        let im = HermitianMatrix::imag_part_of(&a);
        let rebuilt = re.as_matrix().add(&im.as_matrix().scale(c(0.0, 1.0))).unwrap();
        assert!(rebuilt.max_abs_diff(&a).unwrap() <= 1e-14 * (1.0 + a.max_abs()));
    }
}
