//! Dense complex-matrix arithmetic and small-scale spectral routines.
//!
//! Everything downstream works with operators of dimension at most 64
//! (a pair of qudits at desk scale), so the matrix type is a plain
//! row-major `Vec<Complex64>` and the eigensolver is a cyclic Jacobi
//! iteration: deterministic output matters more than asymptotic speed.

use num_complex::Complex64;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::error::{Error, Result};

/// Relative off-diagonal mass at which the Jacobi sweep stops.
const JACOBI_CONVERGENCE: f64 = 1e-14;
/// Hard cap on sweeps; never reached for the dimensions this crate handles.
const JACOBI_MAX_SWEEPS: usize = 128;
/// Relative asymmetry tolerated before an input is rejected as non-Hermitian.
/// Inputs arrive from file parsing and may carry rounding.
const HERMITICITY_TOL: f64 = 1e-8;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Identity matrix of dimension `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from a row-major entry vector. Panics if the length is wrong.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(
            rows * cols,
            data.len(),
            "entry count {} does not match {}x{}",
            data.len(),
            rows,
            cols
        );
        Self { rows, cols, data }
    }

    /// Build from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        Self::from_vec(
            rows,
            cols,
            data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// Diagonal matrix from real entries.
    pub fn diag_real(d: &[f64]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = Complex64::new(x, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conjugate(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise asymmetry residual `max |A_ij - conj(A_ji)|`.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let r = (self[(i, j)] - self[(j, i)].conj()).norm();
                worst = worst.max(r);
            }
        }
        worst
    }

    /// `(A + A^dagger) / 2`.
    pub fn symmetrize(&self) -> Self {
        let adj = self.adjoint();
        let mut out = Self::zeros(self.rows, self.cols);
        for (k, e) in out.data.iter_mut().enumerate() {
            *e = (self.data[k] + adj.data[k]) * 0.5;
        }
        out
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// `<u| A |v>`.
    pub fn sandwich(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        let av = self.matvec(v);
        u.iter().zip(av.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

/// Sorted spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues are nondecreasing; eigenvectors sit in the columns of a
/// unitary matrix. The phase of each eigenvector is fixed so that its
/// largest-modulus component is real and nonnegative, which makes the
/// output reproducible run to run.
#[derive(Debug, Clone)]
pub struct HermitianEigenResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigenResult {
    /// k-th eigenvector as an owned column.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        (0..self.eigenvectors.rows())
            .map(|i| self.eigenvectors[(i, k)])
            .collect()
    }
}

/// Spectral decomposition of a complex Hermitian matrix by cyclic Jacobi
/// rotations.
///
/// Rejects non-square input and input whose asymmetry exceeds
/// `1e-8 * max(1, ||H||)`; the matrix is symmetrized before iterating so
/// the reconstruction `U diag(lambda) U^dagger` matches `(H + H^dagger)/2`.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEigenResult> {
    if !h.is_square() {
        return Err(Error::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let hnorm = h.frobenius_norm();
    let residual = h.hermiticity_residual();
    if residual > HERMITICITY_TOL * hnorm.max(1.0) {
        return Err(Error::NotHermitian { residual });
    }

    let n = h.rows();
    let mut a = h.symmetrize();
    let mut v = ComplexMatrix::identity(n);

    if n > 1 && hnorm > 0.0 {
        let tol = JACOBI_CONVERGENCE * hnorm;
        // Skipping a pivot below this bound cannot keep the sweep from
        // reaching the convergence threshold.
        let skip = tol / (2.0 * n as f64);
        for _sweep in 0..JACOBI_MAX_SWEEPS {
            if off_diagonal_norm(&a) <= tol {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let hpq = a[(p, q)];
                    let habs = hpq.norm();
                    if habs <= skip {
                        continue;
                    }
                    // Phase that makes the pivot real, then a classic
                    // two-sided Jacobi rotation on the real 2x2 block.
                    let phase = hpq / habs;
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    // Smaller root of t^2 - 2 zeta t - 1 = 0 keeps the
                    // rotation angle below pi/4.
                    let zeta = (aqq - app) / (2.0 * habs);
                    let t = if zeta >= 0.0 {
                        -1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                    } else {
                        1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;

                    rotate_columns(&mut a, p, q, c, s, phase);
                    rotate_rows(&mut a, p, q, c, s, phase);
                    rotate_columns(&mut v, p, q, c, s, phase);
                    // Pin the pivot pair to exact symmetry.
                    a[(p, q)] = Complex64::new(0.0, 0.0);
                    a[(q, p)] = Complex64::new(0.0, 0.0);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap().then(i.cmp(&j)));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[(i, dst)] = v[(i, src)];
        }
    }
    fix_column_phases(&mut eigenvectors);

    Ok(HermitianEigenResult {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            sum += a[(p, q)].norm_sqr() + a[(q, p)].norm_sqr();
        }
    }
    sum.sqrt()
}

/// Right-multiply by the rotation `G` acting on columns p, q:
/// `G = [[c*phase, -s*phase], [s, c]]`.
fn rotate_columns(m: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    for i in 0..m.rows() {
        let mp = m[(i, p)];
        let mq = m[(i, q)];
        m[(i, p)] = mp * phase * c + mq * s;
        m[(i, q)] = -(mp * phase) * s + mq * c;
    }
}

/// Left-multiply by `G^dagger`.
fn rotate_rows(m: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let pc = phase.conj();
    for j in 0..m.cols() {
        let mp = m[(p, j)];
        let mq = m[(q, j)];
        m[(p, j)] = mp * pc * c + mq * s;
        m[(q, j)] = -(mp * pc) * s + mq * c;
    }
}

/// Make the largest-modulus component of each column real nonnegative
/// (ties broken by lowest index).
fn fix_column_phases(m: &mut ComplexMatrix) {
    for k in 0..m.cols() {
        let mut best = 0usize;
        let mut best_mod = 0.0f64;
        for i in 0..m.rows() {
            let a = m[(i, k)].norm();
            if a > best_mod {
                best_mod = a;
                best = i;
            }
        }
        if best_mod > 0.0 {
            let phase = m[(best, k)] / best_mod;
            let correction = phase.conj();
            for i in 0..m.rows() {
                let x = m[(i, k)] * correction;
                m[(i, k)] = x;
            }
            // Force the pinned component exactly real.
            let re = m[(best, k)].re;
            m[(best, k)] = Complex64::new(re, 0.0);
        }
    }
}

/// Hermitian square root of a positive semidefinite matrix.
///
/// Eigenvalues in `[-1e-10 * ||A||, 0)` are treated as rounding noise and
/// clamped to zero; anything below that bound is an error.
pub fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(a)?;
    let scale = a.frobenius_norm();
    let floor = -1e-10 * scale.max(f64::MIN_POSITIVE);
    let n = a.rows();
    let mut roots = Vec::with_capacity(n);
    for &lambda in &eig.eigenvalues {
        if lambda < floor {
            return Err(Error::NotPsd { eigenvalue: lambda });
        }
        roots.push(lambda.max(0.0).sqrt());
    }
    // U diag(sqrt(lambda)) U^dagger
    let u = &eig.eigenvectors;
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &r) in roots.iter().enumerate() {
                acc += u[(i, k)] * r * u[(j, k)].conj();
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Kronecker product with composite index `(i, j) -> i * d_B + j`, matching
/// the `|ij>` basis ordering used throughout the crate.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for ia in 0..a.rows() {
        for ja in 0..a.cols() {
            let f = a[(ia, ja)];
            if f.norm_sqr() == 0.0 {
                continue;
            }
            for ib in 0..b.rows() {
                for jb in 0..b.cols() {
                    out[(ia * b.rows() + ib, ja * b.cols() + jb)] = f * b[(ib, jb)];
                }
            }
        }
    }
    out
}

/// Pauli y in the computational basis.
pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_vec(
        2,
        2,
        vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ],
    )
}
