//! Dense complex-matrix primitives.
//!
//! Everything in this crate runs on small matrices (dimension a few dozen at
//! most), so the representation is a plain row-major `Vec<Complex64>` and the
//! eigensolver is a cyclic Jacobi iteration. No sparsity, no BLAS.

mod eig;
mod proj;

pub use eig::hermitian_eig;
pub use proj::{project_density, project_l1_ball, project_simplex};

use crate::error::{Error, Result};
use num_complex::Complex64;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, ONE);
        }
        m
    }

    /// Build from row-major entries, validating shape and finiteness.
    pub fn from_entries(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
                context: "entry count",
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// Convenience constructor from real entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::from_entries(
            rows,
            cols,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Matrix product self * other.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        assert_eq!(self.rows, self.cols, "trace of non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// How far the matrix is from its own conjugate transpose, entrywise.
    pub fn hermitian_defect(&self) -> f64 {
        let mut defect: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                defect = defect.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        defect
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }
}

/// Frobenius norm of a complex matrix.
pub fn frobenius_norm(a: &ComplexMatrix) -> f64 {
    a.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Kronecker product a (x) b.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let aij = a.get(i, j);
            if aij == ZERO {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    out.set(i * b.rows() + k, j * b.cols() + l, aij * b.get(k, l));
                }
            }
        }
    }
    out
}

/// Square complex matrix that equals its own conjugate transpose within
/// `1e-12 * max_abs`. Carrier for effects, observables and states.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    mat: ComplexMatrix,
}

pub(crate) const HERMITICITY_RTOL: f64 = 1e-12;

impl HermitianMatrix {
    /// Validate and wrap. The defect tolerance is relative to the largest
    /// entry, so the zero matrix passes with defect 0.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if mat.rows() != mat.cols() {
            return Err(Error::DimensionMismatch {
                expected: mat.rows(),
                got: mat.cols(),
                context: "Hermitian matrix must be square",
            });
        }
        if mat
            .entries()
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let scale = mat.max_abs();
        let defect = mat.hermitian_defect();
        let tol = HERMITICITY_RTOL * scale.max(1e-300);
        if defect > tol {
            return Err(Error::NotHermitian { defect, tol });
        }
        Ok(Self { mat })
    }

    /// Wrap a matrix that is Hermitian up to rounding, averaging A and its
    /// conjugate transpose. Still rejects genuinely asymmetric input.
    pub fn symmetrized(mat: ComplexMatrix) -> Result<Self> {
        let checked = Self::new(mat)?;
        let sym = checked.mat.add(&checked.mat.dagger()).scale_real(0.5);
        Ok(Self { mat: sym })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(dim),
        }
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut mat = ComplexMatrix::zeros(diag.len(), diag.len());
        for (i, &v) in diag.iter().enumerate() {
            mat.set(i, i, Complex64::new(v, 0.0));
        }
        Self { mat }
    }

    /// Rank-one projector |v><v| (times an optional real weight).
    pub fn outer(v: &[Complex64], weight: f64) -> Self {
        let d = v.len();
        let mut mat = ComplexMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                mat.set(i, j, v[i] * v[j].conj() * weight);
            }
        }
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.mat.get(r, c)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            mat: self.mat.add(&other.mat),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            mat: self.mat.sub(&other.mat),
        }
    }

    /// Real scaling keeps Hermiticity exactly.
    pub fn scale(&self, factor: f64) -> Self {
        Self {
            mat: self.mat.scale_real(factor),
        }
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// Real Frobenius inner product tr(A B) of two Hermitian matrices.
    pub fn inner(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        let mut acc = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                // tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij)
                let a = self.get(i, j);
                let b = other.get(i, j);
                acc += a.re * b.re + a.im * b.im;
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius_norm(&self.mat)
    }

    /// <v|A|v>, real for Hermitian A.
    pub fn expectation(&self, v: &[Complex64]) -> f64 {
        assert_eq!(self.dim(), v.len());
        let av = self.mat.apply(v);
        v.iter()
            .zip(&av)
            .map(|(x, y)| (x.conj() * y).re)
            .sum::<f64>()
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self {
            mat: kron(&self.mat, &other.mat),
        }
    }
}

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
/// a unitary matrix whose columns are the matching eigenvectors.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    /// Column `k` of the eigenvector matrix.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        (0..self.eigenvectors.rows())
            .map(|i| self.eigenvectors.get(i, k))
            .collect()
    }

    /// Rebuild V diag(vals) V^dagger for the supplied eigenvalues.
    #[allow(clippy::needless_range_loop)]
    pub fn reconstruct_with(&self, vals: &[f64]) -> HermitianMatrix {
        let d = self.eigenvectors.rows();
        assert_eq!(vals.len(), d);
        let mut mat = ComplexMatrix::zeros(d, d);
        for k in 0..d {
            if vals[k] == 0.0 {
                continue;
            }
            for i in 0..d {
                let vik = self.eigenvectors.get(i, k);
                if vik == ZERO {
                    continue;
                }
                for j in 0..d {
                    let v = mat.get(i, j) + vik * self.eigenvectors.get(j, k).conj() * vals[k];
                    mat.set(i, j, v);
                }
            }
        }
        // exact Hermiticity can be off by rounding; fold the halves together
        let sym = mat.add(&mat.dagger()).scale_real(0.5);
        HermitianMatrix { mat: sym }
    }
}

/// Spectral norm (largest eigenvalue magnitude) of a Hermitian matrix.
pub fn spectral_norm(a: &HermitianMatrix) -> Result<f64> {
    let vals = eig::hermitian_eigenvalues(a)?;
    Ok(vals.iter().fold(0.0f64, |acc, &v| acc.max(v.abs())))
}
