//! Dense linear algebra sized for frame dimensions (n up to a few dozen).
//!
//! [`Matrix`] is a general square matrix; [`SymMatrix`] is the symmetric
//! newtype used for frame operators. Eigendecompositions use the cyclic
//! Jacobi rotation method, which is unconditionally stable for symmetric
//! input.

use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};

/// Maximum number of Jacobi sweeps before giving up.
pub const MAX_JACOBI_SWEEPS: usize = 100;

/// Asymmetry accepted by [`SymMatrix::new`] before symmetrizing.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Default clamp window for [`SymMatrix::psd_sqrt`].
pub const DEFAULT_PSD_TOL: f64 = 1e-9;

/// Default singularity threshold for [`SymMatrix::inverse`].
pub const DEFAULT_INVERSE_TOL: f64 = 1e-10;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Square matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    /// Builds a matrix from rows; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(FrameError::InvalidMap("empty matrix".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(FrameError::DimMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(FrameError::InvalidMap("non-finite matrix entry".into()));
        }
        Ok(Matrix {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(diag: &[f64]) -> Self {
        let mut m = Matrix::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data
            .chunks(self.n.max(1))
            .map(|r| r.to_vec())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n, "matrix dimension mismatch");
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.n, v.len(), "matrix/vector dimension mismatch");
        self.data.chunks(self.n).map(|row| dot(row, v)).collect()
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n, "matrix dimension mismatch");
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// `‖M − Mᵗ‖_max`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// `‖UᵗU − Id‖_max`.
    pub fn orthogonality_defect(&self) -> f64 {
        self.transpose()
            .mul(self)
            .sub(&Matrix::identity(self.n))
            .max_abs()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl TryFrom<Vec<Vec<f64>>> for Matrix {
    type Error = FrameError;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Matrix::from_rows(&rows)
    }
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        m.rows()
    }
}

/// Symmetric square matrix. Stored exactly symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(Matrix);

/// Spectral decomposition `M = Q·diag(λ)·Qᵗ` with ascending eigenvalues and
/// orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenDecomp {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

impl EigenDecomp {
    pub fn reconstruct(&self) -> SymMatrix {
        self.map_spectrum(|l| l)
    }

    /// `Q·diag(f(λᵢ))·Qᵗ`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let n = self.eigenvalues.len();
        let q = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v: f64 = (0..n).map(|k| q[(i, k)] * fl[k] * q[(j, k)]).sum();
                out[(i, j)] = v;
                out[(j, i)] = v;
            }
        }
        SymMatrix(out)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }
}

impl SymMatrix {
    /// Accepts `m` if `|mᵢⱼ − mⱼᵢ| ≤ 1e-12` and stores `(M + Mᵗ)/2`.
    pub fn new(m: Matrix) -> Result<Self> {
        let defect = m.asymmetry();
        if defect > SYMMETRY_TOL {
            return Err(FrameError::NotSymmetric { defect });
        }
        Ok(Self::symmetrize(m))
    }

    pub fn symmetrize(m: Matrix) -> Self {
        let n = m.dim();
        let mut out = m;
        for i in 0..n {
            for j in (i + 1)..n {
                let v = 0.5 * (out[(i, j)] + out[(j, i)]);
                out[(i, j)] = v;
                out[(j, i)] = v;
            }
        }
        SymMatrix(out)
    }

    pub fn identity(n: usize) -> Self {
        SymMatrix(Matrix::identity(n))
    }

    pub fn scaled_identity(n: usize, s: f64) -> Self {
        SymMatrix(Matrix::identity(n).scale(s))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        self.0.mul_vec(v)
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.max_abs()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.0.rows()
    }

    /// Linear combination `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &SymMatrix, b: f64) -> SymMatrix {
        let data = self
            .0
            .data
            .iter()
            .zip(&other.0.data)
            .map(|(x, y)| a * x + b * y)
            .collect();
        SymMatrix(Matrix {
            n: self.dim(),
            data,
        })
    }

    /// Quadratic form `xᵗMx`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        dot(x, &self.mul_vec(x))
    }

    /// Cyclic Jacobi eigendecomposition, eigenvalues ascending.
    pub fn eigen(&self) -> Result<EigenDecomp> {
        let n = self.dim();
        let mut a = self.0.clone();
        let mut v = Matrix::identity(n);
        let frob = a.as_slice().iter().map(|x| x * x).sum::<f64>().sqrt();

        let off_norm = |a: &Matrix| -> f64 {
            let mut s = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    s += 2.0 * a[(i, j)] * a[(i, j)];
                }
            }
            s.sqrt()
        };

        let mut converged = false;
        for _ in 0..MAX_JACOBI_SWEEPS {
            let off = off_norm(&a);
            if off == 0.0 || off <= 1e-15 * frob {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    if apq == 0.0 {
                        continue;
                    }
                    let app = a[(p, p)];
                    let aqq = a[(q, q)];
                    // negligible relative to both diagonal entries
                    if apq.abs() < 1e-18 * app.abs().min(aqq.abs()) {
                        a[(p, q)] = 0.0;
                        a[(q, p)] = 0.0;
                        continue;
                    }
                    let theta = (aqq - app) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;

                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;

                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
        if !converged {
            let off = off_norm(&a);
            if !(off == 0.0 || off <= 1e-15 * frob) {
                return Err(FrameError::NonConvergence {
                    sweeps: MAX_JACOBI_SWEEPS,
                });
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
        let eigenvalues = order.iter().map(|&i| a[(i, i)]).collect();
        let eigenvectors = Matrix::from_fn(n, |r, c| v[(r, order[c])]);
        Ok(EigenDecomp {
            eigenvalues,
            eigenvectors,
        })
    }

    /// PSD square root; eigenvalues in `[-tol, 0)` are clamped to zero.
    pub fn psd_sqrt(&self, tol: f64) -> Result<SymMatrix> {
        let eig = self.eigen()?;
        if eig.min() < -tol {
            return Err(FrameError::NotPsd {
                min_eigenvalue: eig.min(),
            });
        }
        Ok(eig.map_spectrum(|l| l.max(0.0).sqrt()))
    }

    /// Inverse of a positive definite matrix; fails if any eigenvalue is `<= tol`.
    pub fn inverse(&self, tol: f64) -> Result<SymMatrix> {
        let eig = self.eigen()?;
        if eig.min() <= tol {
            return Err(FrameError::Singular {
                min_eigenvalue: eig.min(),
            });
        }
        Ok(eig.map_spectrum(|l| 1.0 / l))
    }

    /// `M^{-1/2}` of a positive definite matrix.
    pub fn inverse_sqrt(&self, tol: f64) -> Result<SymMatrix> {
        let eig = self.eigen()?;
        if eig.min() <= tol {
            return Err(FrameError::Singular {
                min_eigenvalue: eig.min(),
            });
        }
        Ok(eig.map_spectrum(|l| 1.0 / l.sqrt()))
    }
}
