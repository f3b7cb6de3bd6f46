//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the real symmetric Jacobi rotation that zeroes it:
//!
//! ```text
//! G = diag(1, e^{-iφ}) · [[c, s], [-s, c]],    A ← G* A G
//! ```
//!
//! Only the pivot columns are updated explicitly; the pivot rows are their
//! conjugates and the 2x2 pivot block has a closed form, so the working
//! matrix stays exactly Hermitian throughout.

use num_complex::Complex64;
use serde::Serialize;

use super::{ComplexMatrix, HermitianMatrix};
use crate::error::{Error, Result};

/// Default convergence tolerance: stop once the off-diagonal Frobenius mass
/// drops below `EIGEN_TOL·‖H‖_F`.
pub const EIGEN_TOL: f64 = 1e-13;

/// Full sweeps before giving up.
pub const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, matching `values`.
    pub vectors: Option<ComplexMatrix>,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Eigenvector for `values[k]`, if vectors were computed.
    pub fn vector(&self, k: usize) -> Option<Vec<Complex64>> {
        let v = self.vectors.as_ref()?;
        Some((0..v.dim()).map(|i| v.get(i, k)).collect())
    }
}

/// Eigenvalues (ascending) and optionally eigenvectors of `h`.
///
/// Fails with [`Error::NoConvergence`] if the off-diagonal mass is still above
/// `tol·‖H‖_F` after [`MAX_SWEEPS`] sweeps.
pub fn hermitian_eigen(h: &HermitianMatrix, tol: f64, with_vectors: bool) -> Result<Spectrum> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("eigen tolerance must be positive, got {tol}")));
    }
    let n = h.dim();
    let mut a: Vec<Complex64> = h.as_matrix().entries().to_vec();
    let mut v = with_vectors.then(|| ComplexMatrix::identity(n).entries().to_vec());
    let threshold = tol * h.as_matrix().frobenius_norm();

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_mass(&a, n);
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps: MAX_SWEEPS,
                off_diagonal: off,
            });
        }
        // a pivot below threshold/n cannot keep the total above threshold on its own
        let skip_below = threshold / n as f64;
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, v.as_deref_mut(), n, p, q, skip_below);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let vectors = v.map(|v| {
        let mut sorted = Vec::with_capacity(n * n);
        for row in 0..n {
            for &col in &order {
                sorted.push(v[row * n + col]);
            }
        }
        ComplexMatrix::from_raw(n, sorted)
    });
    Ok(Spectrum { values, vectors })
}

fn off_diagonal_mass(a: &[Complex64], n: usize) -> f64 {
    let mut sum = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            sum += a[p * n + q].norm_sqr();
        }
    }
    (2.0 * sum).sqrt()
}

fn rotate(a: &mut [Complex64], v: Option<&mut [Complex64]>, n: usize, p: usize, q: usize, skip_below: f64) {
    let apq = a[p * n + q];
    // sqrt of the squared modulus is much cheaper than hypot; fall back on overflow
    let mut r = apq.norm_sqr().sqrt();
    if !r.is_finite() {
        r = apq.norm();
    }
    if r == 0.0 || r < skip_below {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let phase = (apq / r).conj();

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[k * n + p];
        let u = a[k * n + q] * phase;
        let new_kp = akp * c - u * s;
        let new_kq = akp * s + u * c;
        a[k * n + p] = new_kp;
        a[k * n + q] = new_kq;
        a[p * n + k] = new_kp.conj();
        a[q * n + k] = new_kq.conj();
    }
    a[p * n + p] = Complex64::new(app - t * r, 0.0);
    a[q * n + q] = Complex64::new(aqq + t * r, 0.0);
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);

    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[k * n + p];
            let u = v[k * n + q] * phase;
            v[k * n + p] = vkp * c - u * s;
            v[k * n + q] = vkp * s + u * c;
        }
    }
}
