//! Dense complex matrices and Hermitian spectral routines.

mod eigen;
mod hermitian;

pub use eigen::{hermitian_eigen, Spectrum, EIGEN_TOL, MAX_SWEEPS};
pub use hermitian::{crawford_hermitian, positive_sqrt, HermitianMatrix};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense square complex matrix stored row-major.
///
/// Every entry is finite and the dimension is at least one; both are
/// checked on construction and preserved by every operation below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds an `n`x`n` matrix from row-major entries.
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != n * n {
            return Err(Error::EntryCount {
                n,
                expected: n * n,
                actual: data.len(),
            });
        }
        if let Some(idx) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: idx / n,
                col: idx % n,
            });
        }
        Ok(Self { n, data })
    }

    /// Builds a matrix from a list of rows; every row must have as many entries as there are rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::EntryCount {
                    n,
                    expected: n * n,
                    actual: rows.iter().map(Vec::len).sum(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(n, data)
    }

    /// Builds a matrix with real entries.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "matrix dimension must be at least 1");
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Diagonal matrix with the given diagonal.
    pub fn from_diagonal(diag: &[Complex64]) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for (i, &d) in diag.iter().enumerate() {
            data[i * n + i] = d;
        }
        Self::new(n, data)
    }

    /// Upper shift: ones on the superdiagonal, zeros elsewhere.
    pub fn upper_shift(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n.saturating_sub(1) {
            m.data[i * n + i + 1] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Unchecked constructor for results of arithmetic on already valid matrices.
    pub(crate) fn from_raw(n: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.n + col]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(self.data[j * n + i].conj());
            }
        }
        Self::from_raw(n, data)
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.n;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            let out = &mut data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for (o, &b) in out.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(Self::from_raw(n, data))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_raw(self.n, self.data.iter().map(|&z| z * s).collect())
    }

    /// `self + shift·I`.
    pub fn shifted(&self, shift: Complex64) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m.data[i * self.n + i] += shift;
        }
        m
    }

    /// Integer power by repeated multiplication; `pow(0)` is the identity.
    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.n);
        for _ in 0..k {
            out = out.multiply(self).expect("same dimension");
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n, "vector length must match matrix dimension");
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// `⟨Ax, x⟩ = x*Ax`; for unit `x` this is a point of the numerical range.
    pub fn rayleigh(&self, x: &[Complex64]) -> Complex64 {
        inner(&self.apply(x), x)
    }

    /// Largest entry-wise deviation between two matrices of equal size.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self::from_raw(
            self.n,
            self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        ))
    }
}

/// `⟨x, y⟩ = Σ xᵢ·conj(yᵢ)`, linear in the first argument.
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

pub fn vector_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Returns `x / ‖x‖`, or `None` for the zero vector.
pub fn normalized(x: &[Complex64]) -> Option<Vec<Complex64>> {
    let norm = vector_norm(x);
    (norm > 0.0).then(|| x.iter().map(|z| z / norm).collect())
}

pub fn adjoint(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint()
}

pub fn multiply(m: &ComplexMatrix, n: &ComplexMatrix) -> Result<ComplexMatrix> {
    m.multiply(n)
}

/// Splits `A` into Hermitian parts with `A = Re + i·Im`.
pub fn cartesian_parts(a: &ComplexMatrix) -> (HermitianMatrix, HermitianMatrix) {
    (HermitianMatrix::real_part_of(a), HermitianMatrix::imag_part_of(a))
}

/// Largest singular value, `sqrt(λ_max(A*A))`.
pub fn operator_norm(a: &ComplexMatrix) -> Result<f64> {
    let gram = HermitianMatrix::gram(a);
    Ok(gram.lambda_max()?.max(0.0).sqrt())
}

/// `A*A + AA*`, the Hermitian matrix behind the Kittaneh bounds.
pub fn gram_sum(a: &ComplexMatrix) -> HermitianMatrix {
    HermitianMatrix::gram(a)
        .add(&HermitianMatrix::co_gram(a))
        .expect("same dimension")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn adjoint_conjugates_and_transposes() {
        let m = ComplexMatrix::new(1, vec![c(0.0, 1.0)]).unwrap();
        assert_eq!(m.adjoint().get(0, 0), c(0.0, -1.0));

        let e12 = ComplexMatrix::upper_shift(2);
        let expected = ComplexMatrix::from_real_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(e12.adjoint(), expected);
    }

    #[test]
    fn adjoint_is_an_involution_bitwise() {
        let m = ComplexMatrix::new(2, vec![c(0.1, -3.7), c(1e-300, 2.0), c(-0.0, 5.5), c(7.25, 1e17)]).unwrap();
        assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn hermitian_matrix_is_a_fixed_point_of_adjoint() {
        let h = ComplexMatrix::from_rows(&[vec![c(2.0, 0.0), c(1.0, -1.0)], vec![c(1.0, 1.0), c(-3.0, 0.0)]]).unwrap();
        assert_eq!(h.adjoint(), h);
    }

    #[test]
    fn multiply_identity_and_nilpotent() {
        let m = ComplexMatrix::from_rows(&[vec![c(1.0, 2.0), c(3.0, 0.0)], vec![c(0.0, -1.0), c(4.0, 4.0)]]).unwrap();
        assert_eq!(m.multiply(&ComplexMatrix::identity(2)).unwrap(), m);
        let e12 = ComplexMatrix::upper_shift(2);
        assert_eq!(e12.multiply(&e12).unwrap(), ComplexMatrix::zeros(2));
    }

    #[test]
    fn multiply_rejects_mismatched_dimensions() {
        let err = ComplexMatrix::identity(2).multiply(&ComplexMatrix::identity(3)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { left: 2, right: 3 });
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert_eq!(ComplexMatrix::new(0, vec![]).unwrap_err(), Error::EmptyMatrix);
        assert!(matches!(ComplexMatrix::new(2, vec![c(0.0, 0.0); 3]), Err(Error::EntryCount { .. })));
        let err = ComplexMatrix::new(2, vec![c(0.0, 0.0), c(0.0, 0.0), c(f64::NAN, 0.0), c(0.0, 0.0)]).unwrap_err();
        assert_eq!(err, Error::NonFinite { row: 1, col: 0 });
        assert!(ComplexMatrix::from_rows(&[vec![c(1.0, 0.0)], vec![c(1.0, 0.0), c(2.0, 0.0)]]).is_err());
    }

    #[test]
    fn cartesian_parts_of_fixture_examples() {
        let a = ComplexMatrix::from_diagonal(&[c(2.0, 2.0), c(0.0, 0.0)]).unwrap();
        let (re, im) = cartesian_parts(&a);
        let expected = ComplexMatrix::from_real_rows(&[vec![2.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(re.as_matrix(), &expected);
        assert_eq!(im.as_matrix(), &expected);

        let a = ComplexMatrix::from_diagonal(&[c(3.0, 2.0), c(0.0, 4.0)]).unwrap();
        let (re, im) = cartesian_parts(&a);
        assert_eq!(re.as_matrix(), &ComplexMatrix::from_diagonal(&[c(3.0, 0.0), c(0.0, 0.0)]).unwrap());
        assert_eq!(im.as_matrix(), &ComplexMatrix::from_diagonal(&[c(2.0, 0.0), c(4.0, 0.0)]).unwrap());
    }

    #[test]
    fn cartesian_parts_of_hermitian_input() {
        let h = ComplexMatrix::from_rows(&[vec![c(2.0, 0.0), c(1.0, -1.0)], vec![c(1.0, 1.0), c(-3.0, 0.0)]]).unwrap();
        let (re, im) = cartesian_parts(&h);
        assert_eq!(re.as_matrix(), &h);
        assert_eq!(im.as_matrix().max_abs(), 0.0);
    }

    #[test]
    fn operator_norm_examples() {
        assert!((operator_norm(&ComplexMatrix::identity(3)).unwrap() - 1.0).abs() < 1e-15);
        // ‖Re(A)+Im(A)‖ = 4 for diag(2+2i, 0)
        let s = ComplexMatrix::from_real_rows(&[vec![4.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!((operator_norm(&s).unwrap() - 4.0).abs() < 1e-14);
        // ‖Re(A)−Im(A)‖ = ‖diag(1, −4)‖ = 4 for diag(3+2i, 4i)
        let s = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -4.0]]).unwrap();
        assert!((operator_norm(&s).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn rayleigh_quotient_of_basis_vector_is_diagonal_entry() {
        let m = ComplexMatrix::from_rows(&[vec![c(1.0, 2.0), c(3.0, 0.0)], vec![c(0.0, -1.0), c(4.0, 4.0)]]).unwrap();
        let e2 = [c(0.0, 0.0), c(1.0, 0.0)];
        assert_eq!(m.rayleigh(&e2), c(4.0, 4.0));
    }

    #[test]
    fn pow_of_shift() {
        let s = ComplexMatrix::upper_shift(3);
        let s2 = s.pow(2);
        assert_eq!(s2.get(0, 2), c(1.0, 0.0));
        assert_eq!(s2.frobenius_norm(), 1.0);
        assert_eq!(s.pow(3), ComplexMatrix::zeros(3));
    }
}
