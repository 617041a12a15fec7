//! Small dense matrix kernel over real and complex scalars.
//!
//! Everything in this crate runs on matrices of order at most 16 (4n with
//! n ≤ 4), so the kernel is deliberately simple: row-major storage, partial
//! pivoting for LU, cyclic Jacobi for symmetric eigenvalues, recursive
//! first-row expansion for Pfaffians. All comparisons carry an explicit
//! [`ToleranceConfig`]; there is no hidden global epsilon.

use num_complex::Complex64;
use std::fmt;
use thiserror::Error;

/// Errors produced by the matrix kernel.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum MatrixError {
    #[error("matrix must be square (got {rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("matrix is singular or nearly singular (pivot {pivot:.3e})")]
    Singular { pivot: f64 },
    #[error("matrix must be symmetric within tolerance (max deviation {max_deviation:.3e})")]
    AsymmetricInput { max_deviation: f64 },
    #[error("matrix must be antisymmetric within tolerance (max deviation {max_deviation:.3e})")]
    NotAntisymmetric { max_deviation: f64 },
    #[error("Pfaffian requires even order (got {0})")]
    OddOrder(usize),
    #[error("order {0} exceeds the supported maximum {1}")]
    OrderTooLarge(usize, usize),
    #[error("phase of a near-zero complex number is indeterminate (|z| = {magnitude:.3e})")]
    IndeterminatePhase { magnitude: f64 },
    #[error("tolerances must be strictly positive")]
    InvalidTolerance,
    #[error("eigenvalue iteration did not converge")]
    EigenNoConvergence,
}

/// Absolute, relative and phase tolerances used by every comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Radians; used for phase-constancy checks.
    pub phase_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            phase_tol: 1e-9,
        }
    }
}

impl ToleranceConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, phase_tol: f64) -> Result<Self, MatrixError> {
        if abs_tol <= 0.0 || rel_tol <= 0.0 || phase_tol <= 0.0 {
            return Err(MatrixError::InvalidTolerance);
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            phase_tol,
        })
    }

    /// True when |a - b| is small absolutely or relative to the magnitudes.
    pub fn close(&self, a: f64, b: f64) -> bool {
        let d = (a - b).abs();
        d <= self.abs_tol || d <= self.rel_tol * a.abs().max(b.abs())
    }

    pub fn close_complex(&self, a: Complex64, b: Complex64) -> bool {
        let d = (a - b).norm();
        d <= self.abs_tol || d <= self.rel_tol * a.norm().max(b.norm())
    }
}

/// Scalar types the kernel works over.
pub trait Scalar:
    Copy
    + PartialEq
    + fmt::Debug
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    /// Modulus, used for pivoting and tolerance comparisons.
    fn modulus(self) -> f64;
    fn is_finite_scalar(self) -> bool;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn is_finite_scalar(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn is_finite_scalar(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RealMatrix = Matrix<f64>;
pub type ComplexMatrix = Matrix<Complex64>;

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, MatrixError> {
        let nr = rows.len();
        let nc = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != nc) {
            return Err(MatrixError::ShapeMismatch("ragged row lengths".into()));
        }
        let data: Vec<T> = rows.into_iter().flatten().collect();
        if data.iter().any(|v| !v.is_finite_scalar()) {
            return Err(MatrixError::NonFinite);
        }
        Ok(Self {
            rows: nr,
            cols: nc,
            data,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.set(i, j, out.get(i, j) + a * other.get(k, j));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j) + other.get(i, j)
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j) - other.get(i, j)
        })
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| -self.get(i, j))
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * s)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for j in 0..self.cols {
                    acc = acc + self.get(i, j) * v[j];
                }
                acc
            })
            .collect()
    }

    /// Copies `src` into place with its top-left corner at (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, src: &Self) {
        assert!(r0 + src.rows <= self.rows && c0 + src.cols <= self.cols);
        for i in 0..src.rows {
            for j in 0..src.cols {
                self.set(r0 + i, c0 + j, src.get(i, j));
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        assert!(r0 + nr <= self.rows && c0 + nc <= self.cols);
        Self::from_fn(nr, nc, |i, j| self.get(r0 + i, c0 + j))
    }

    /// Assembles a matrix from a grid of equally sized blocks.
    pub fn from_blocks(blocks: &[Vec<&Self>]) -> Self {
        let bn = blocks[0][0].rows;
        let bm = blocks[0][0].cols;
        let mut out = Self::zeros(bn * blocks.len(), bm * blocks[0].len());
        for (bi, row) in blocks.iter().enumerate() {
            for (bj, blk) in row.iter().enumerate() {
                assert_eq!((blk.rows, blk.cols), (bn, bm), "uneven block sizes");
                out.set_block(bi * bn, bj * bm, blk);
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.modulus()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).modulus())
            .fold(0.0, f64::max)
    }

    /// Max entry modulus of M - Mᵗ.
    pub fn asymmetry(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).modulus());
            }
        }
        worst
    }

    /// Max entry modulus of M + Mᵗ (diagonal included).
    pub fn antisymmetry_defect(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self.get(i, j) + self.get(j, i)).modulus());
            }
        }
        worst
    }

    /// Gauss-Jordan inverse with partial pivoting on scalar modulus.
    pub fn inverse(&self, tol: &ToleranceConfig) -> Result<Self, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let (piv_row, piv_mag) = (col..n)
                .map(|r| (r, a.get(r, col).modulus()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if piv_mag <= tol.abs_tol {
                return Err(MatrixError::Singular { pivot: piv_mag });
            }
            if piv_row != col {
                for j in 0..n {
                    let (u, v) = (a.get(col, j), a.get(piv_row, j));
                    a.set(col, j, v);
                    a.set(piv_row, j, u);
                    let (u, v) = (inv.get(col, j), inv.get(piv_row, j));
                    inv.set(col, j, v);
                    inv.set(piv_row, j, u);
                }
            }
            let piv = a.get(col, col);
            for j in 0..n {
                a.set(col, j, a.get(col, j) / piv);
                inv.set(col, j, inv.get(col, j) / piv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col);
                if factor == T::zero() {
                    continue;
                }
                for j in 0..n {
                    a.set(r, j, a.get(r, j) - factor * a.get(col, j));
                    inv.set(r, j, inv.get(r, j) - factor * inv.get(col, j));
                }
            }
        }
        Ok(inv)
    }

    /// Determinant by LU with partial pivoting.
    pub fn determinant(&self) -> T {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for col in 0..n {
            let (piv_row, piv_mag) = (col..n)
                .map(|r| (r, a.get(r, col).modulus()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if piv_mag == 0.0 {
                return T::zero();
            }
            if piv_row != col {
                for j in 0..n {
                    let (u, v) = (a.get(col, j), a.get(piv_row, j));
                    a.set(col, j, v);
                    a.set(piv_row, j, u);
                }
                det = -det;
            }
            let piv = a.get(col, col);
            det = det * piv;
            for r in (col + 1)..n {
                let factor = a.get(r, col) / piv;
                if factor == T::zero() {
                    continue;
                }
                for j in col..n {
                    a.set(r, j, a.get(r, j) - factor * a.get(col, j));
                }
            }
        }
        det
    }
}

impl RealMatrix {
    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| {
            Complex64::new(self.get(i, j), 0.0)
        })
    }

    /// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations,
    /// ascending. The input must be symmetric within `tol.abs_tol`.
    pub fn symmetric_eigenvalues(&self, tol: &ToleranceConfig) -> Result<Vec<f64>, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let dev = self.asymmetry();
        if dev > tol.abs_tol {
            return Err(MatrixError::AsymmetricInput { max_deviation: dev });
        }
        let n = self.rows;
        // Work on the symmetrized copy so tiny input asymmetry cannot bias
        // the rotations.
        let mut a = Self::from_fn(n, n, |i, j| 0.5 * (self.get(i, j) + self.get(j, i)));
        if n == 1 {
            return Ok(vec![a.get(0, 0)]);
        }
        let scale = a.max_abs().max(1.0);
        for _sweep in 0..64 {
            let mut off = 0.0f64;
            for i in 0..n {
                for j in (i + 1)..n {
                    off = off.max(a.get(i, j).abs());
                }
            }
            if off <= 1e-14 * scale {
                let mut eig: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
                eig.sort_by(f64::total_cmp);
                return Ok(eig);
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.get(p, q);
                    if apq.abs() <= 1e-300 {
                        continue;
                    }
                    let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a.get(k, p);
                        let akq = a.get(k, q);
                        a.set(k, p, c * akp - s * akq);
                        a.set(k, q, s * akp + c * akq);
                    }
                    for k in 0..n {
                        let apk = a.get(p, k);
                        let aqk = a.get(q, k);
                        a.set(p, k, c * apk - s * aqk);
                        a.set(q, k, s * apk + c * aqk);
                    }
                }
            }
        }
        Err(MatrixError::EigenNoConvergence)
    }
}

impl ComplexMatrix {
    pub fn real_part(&self) -> RealMatrix {
        RealMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).re)
    }

    pub fn imag_part(&self) -> RealMatrix {
        RealMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).im)
    }

    pub fn from_real_imag(re: &RealMatrix, im: &RealMatrix) -> Self {
        assert_eq!((re.rows(), re.cols()), (im.rows(), im.cols()));
        Self::from_fn(re.rows(), re.cols(), |i, j| {
            Complex64::new(re.get(i, j), im.get(i, j))
        })
    }
}

/// Square integer matrix (windings, twists).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(MatrixError::ShapeMismatch(
                "integer matrix must be square".into(),
            ));
        }
        Ok(Self {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(j, i, self.get(i, j));
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn neg(&self) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|v| -v).collect(),
        }
    }

    pub fn to_real(&self) -> RealMatrix {
        RealMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j) as f64)
    }

    pub fn rows_vec(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

/// True iff max |M - Mᵗ| entry is at most `tol.abs_tol`.
pub fn is_symmetric<T: Scalar>(m: &Matrix<T>, tol: &ToleranceConfig) -> Result<bool, MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(m.asymmetry() <= tol.abs_tol)
}

/// True iff all eigenvalues of the symmetric input exceed `tol.abs_tol`.
///
/// Eigenvalues rather than Cholesky, so near-singular boundary cases report
/// the magnitude of the smallest eigenvalue through
/// [`smallest_eigenvalue`].
pub fn is_positive_definite(m: &RealMatrix, tol: &ToleranceConfig) -> Result<bool, MatrixError> {
    let eig = m.symmetric_eigenvalues(tol)?;
    Ok(eig.iter().all(|&l| l > tol.abs_tol))
}

/// Smallest eigenvalue of a symmetric matrix; the witness for boundary
/// positive-definiteness cases.
pub fn smallest_eigenvalue(m: &RealMatrix, tol: &ToleranceConfig) -> Result<f64, MatrixError> {
    Ok(m.symmetric_eigenvalues(tol)?[0])
}

const PFAFFIAN_MAX_ORDER: usize = 8;

/// Pfaffian of an antisymmetric complex matrix of even order at most 8, by
/// recursive first-row expansion. Recursive expansion rather than ±√det
/// avoids the branch-cut sign ambiguity.
pub fn pfaffian(m: &ComplexMatrix, tol: &ToleranceConfig) -> Result<Complex64, MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n % 2 != 0 {
        return Err(MatrixError::OddOrder(n));
    }
    if n > PFAFFIAN_MAX_ORDER {
        return Err(MatrixError::OrderTooLarge(n, PFAFFIAN_MAX_ORDER));
    }
    let dev = m.antisymmetry_defect();
    if dev > tol.abs_tol {
        return Err(MatrixError::NotAntisymmetric { max_deviation: dev });
    }
    let idx: Vec<usize> = (0..n).collect();
    Ok(pfaffian_rec(m, &idx))
}

fn pfaffian_rec(m: &ComplexMatrix, idx: &[usize]) -> Complex64 {
    if idx.is_empty() {
        return Complex64::new(1.0, 0.0);
    }
    let first = idx[0];
    let mut acc = Complex64::new(0.0, 0.0);
    let mut sign = 1.0;
    for pos in 1..idx.len() {
        let j = idx[pos];
        let entry = m.get(first, j);
        if entry != Complex64::new(0.0, 0.0) {
            let rest: Vec<usize> = idx[1..].iter().copied().filter(|&k| k != j).collect();
            acc += entry * sign * pfaffian_rec(m, &rest);
        }
        sign = -sign;
    }
    acc
}

/// The unique θ in [0, π) with Im(e^{iθ} z) = 0, i.e. (-arg z) mod π.
pub fn phase_mod_pi(z: Complex64, tol: &ToleranceConfig) -> Result<f64, MatrixError> {
    let magnitude = z.norm();
    if magnitude <= tol.abs_tol {
        return Err(MatrixError::IndeterminatePhase { magnitude });
    }
    let mut theta = (-z.arg()).rem_euclid(std::f64::consts::PI);
    if theta >= std::f64::consts::PI {
        theta = 0.0;
    }
    Ok(theta)
}

/// Circular distance between two phases taken mod π.
pub fn phase_distance_mod_pi(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::PI);
    d.min(std::f64::consts::PI - d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn symmetry_of_identity() {
        let id = RealMatrix::identity(3);
        assert!(is_symmetric(&id, &tol()).unwrap());
    }

    #[test]
    fn symmetry_rejects_nilpotent() {
        let m = RealMatrix::from_rows(vec![vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(!is_symmetric(&m, &tol()).unwrap());
    }

    #[test]
    fn symmetry_of_winding_times_period_product() {
        // a = [[0,1],[0,0]], T = [[i,1/2],[1/2,i]]: aT has rows (1/2, i), (0, 0).
        let a = ComplexMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let t = ComplexMatrix::from_rows(vec![
            vec![c(0.0, 1.0), c(0.5, 0.0)],
            vec![c(0.5, 0.0), c(0.0, 1.0)],
        ])
        .unwrap();
        let at = a.mul(&t);
        assert_eq!(at.get(0, 0), c(0.5, 0.0));
        assert_eq!(at.get(0, 1), c(0.0, 1.0));
        assert!(!is_symmetric(&at, &tol()).unwrap());
    }

    #[test]
    fn symmetry_rejects_non_square() {
        let m = RealMatrix::zeros(2, 3);
        assert!(matches!(
            is_symmetric(&m, &tol()),
            Err(MatrixError::NonSquare { .. })
        ));
    }

    #[test]
    fn positive_definite_identity_and_indefinite_diag() {
        assert!(is_positive_definite(&RealMatrix::identity(4), &tol()).unwrap());
        let d = RealMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        assert!(!is_positive_definite(&d, &tol()).unwrap());
    }

    #[test]
    fn positive_definite_two_by_two() {
        // Eigenvalues of [[2,1],[1,2]] are 1 and 3.
        let m = RealMatrix::from_rows(vec![vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let eig = m.symmetric_eigenvalues(&tol()).unwrap();
        assert!((eig[0] - 1.0).abs() < 1e-12);
        assert!((eig[1] - 3.0).abs() < 1e-12);
        assert!(is_positive_definite(&m, &tol()).unwrap());
    }

    #[test]
    fn positive_definite_rejects_asymmetric() {
        let m = RealMatrix::from_rows(vec![vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(
            is_positive_definite(&m, &tol()),
            Err(MatrixError::AsymmetricInput { .. })
        ));
    }

    /// Brute-force eigenvalue signs for 2x2 and 3x3 rational symmetric
    /// matrices via characteristic-polynomial sign analysis.
    fn pd_by_principal_minors(m: &RealMatrix) -> bool {
        // Sylvester: all leading principal minors positive.
        (1..=m.rows()).all(|k| m.block(0, 0, k, k).determinant() > 0.0)
    }

    #[test]
    fn positive_definite_agrees_with_minor_bruteforce() {
        let cases2: Vec<Vec<Vec<f64>>> = vec![
            vec![vec![2.0, 1.0], vec![1.0, 2.0]],
            vec![vec![1.0, 2.0], vec![2.0, 1.0]],
            vec![vec![0.5, 0.25], vec![0.25, 0.5]],
            vec![vec![-1.0, 0.0], vec![0.0, 3.0]],
            vec![vec![4.0, -2.0], vec![-2.0, 1.5]],
        ];
        for rows in cases2 {
            let m = RealMatrix::from_rows(rows).unwrap();
            assert_eq!(
                is_positive_definite(&m, &tol()).unwrap(),
                pd_by_principal_minors(&m),
            );
        }
        let cases3: Vec<Vec<Vec<f64>>> = vec![
            vec![
                vec![2.0, 0.5, 0.0],
                vec![0.5, 2.0, 0.5],
                vec![0.0, 0.5, 2.0],
            ],
            vec![
                vec![1.0, 1.0, 1.0],
                vec![1.0, 1.0, 1.0],
                vec![1.0, 1.0, 1.0],
            ],
            vec![
                vec![3.0, -1.0, 0.5],
                vec![-1.0, 2.0, 0.25],
                vec![0.5, 0.25, 1.0],
            ],
        ];
        for rows in cases3 {
            let m = RealMatrix::from_rows(rows).unwrap();
            assert_eq!(
                is_positive_definite(&m, &tol()).unwrap(),
                pd_by_principal_minors(&m),
            );
        }
    }

    #[test]
    fn pfaffian_two_by_two() {
        let a = c(3.5, -1.25);
        let m =
            ComplexMatrix::from_rows(vec![vec![c(0.0, 0.0), a], vec![-a, c(0.0, 0.0)]]).unwrap();
        assert_eq!(pfaffian(&m, &tol()).unwrap(), a);
    }

    #[test]
    fn pfaffian_block_diagonal() {
        let mut m = ComplexMatrix::zeros(4, 4);
        m.set(0, 1, c(1.0, 0.0));
        m.set(1, 0, c(-1.0, 0.0));
        m.set(2, 3, c(1.0, 0.0));
        m.set(3, 2, c(-1.0, 0.0));
        assert_eq!(pfaffian(&m, &tol()).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn pfaffian_rejects_odd_and_nonantisymmetric() {
        let odd = ComplexMatrix::zeros(3, 3);
        assert!(matches!(
            pfaffian(&odd, &tol()),
            Err(MatrixError::OddOrder(3))
        ));
        let bad = ComplexMatrix::identity(2);
        assert!(matches!(
            pfaffian(&bad, &tol()),
            Err(MatrixError::NotAntisymmetric { .. })
        ));
        let too_big = ComplexMatrix::zeros(10, 10);
        assert!(matches!(
            pfaffian(&too_big, &tol()),
            Err(MatrixError::OrderTooLarge(10, 8))
        ));
    }

    fn random_antisymmetric(n: usize, seed: u64) -> ComplexMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                let v = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m.set(i, j, v);
                m.set(j, i, -v);
            }
        }
        m
    }

    #[test]
    fn pfaffian_squares_to_determinant() {
        for n in [2usize, 4, 6, 8] {
            for seed in 0..6u64 {
                let m = random_antisymmetric(n, seed * 31 + n as u64);
                let pf = pfaffian(&m, &tol()).unwrap();
                let det = m.determinant();
                let err = (pf * pf - det).norm();
                assert!(
                    err <= 1e-9 * det.norm().max(1.0),
                    "order {n} seed {seed}: Pf² = {:?}, det = {:?}",
                    pf * pf,
                    det
                );
            }
        }
    }

    #[test]
    fn phase_basic_values() {
        assert_eq!(phase_mod_pi(c(1.0, 0.0), &tol()).unwrap(), 0.0);
        assert!((phase_mod_pi(c(0.0, 1.0), &tol()).unwrap() - PI / 2.0).abs() < 1e-15);
        // arg(-1-i) = -3π/4; negated and reduced mod π gives 3π/4.
        assert!((phase_mod_pi(c(-1.0, -1.0), &tol()).unwrap() - 3.0 * PI / 4.0).abs() < 1e-15);
        // Defining property: Im(e^{iθ} z) = 0.
        for z in [c(-1.0, -1.0), c(2.0, 3.0), c(-0.5, 4.0)] {
            let theta = phase_mod_pi(z, &tol()).unwrap();
            assert!((Complex64::from_polar(1.0, theta) * z).im.abs() < 1e-12);
        }
    }

    #[test]
    fn phase_rejects_near_zero() {
        assert!(matches!(
            phase_mod_pi(c(1e-12, 0.0), &tol()),
            Err(MatrixError::IndeterminatePhase { .. })
        ));
    }

    #[test]
    fn inverse_round_trip() {
        let m = RealMatrix::from_rows(vec![
            vec![2.0, 1.0, 0.5],
            vec![-1.0, 3.0, 0.0],
            vec![0.25, 0.0, 1.5],
        ])
        .unwrap();
        let inv = m.inverse(&tol()).unwrap();
        let err = m.mul(&inv).max_abs_diff(&RealMatrix::identity(3));
        assert!(err < 1e-12);
    }

    #[test]
    fn singular_inverse_rejected() {
        let m = RealMatrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(
            m.inverse(&tol()),
            Err(MatrixError::Singular { .. })
        ));
    }

    #[test]
    fn complex_determinant_matches_closed_form() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 1.0), c(2.0, 0.0)],
            vec![c(0.0, -1.0), c(1.0, 2.0)],
        ])
        .unwrap();
        // (1+i)(1+2i) - 2(-i) = -1 + 3i + 2i = -1 + 5i
        let det = m.determinant();
        assert!((det - c(-1.0, 5.0)).norm() < 1e-14);
    }

    proptest! {
        #[test]
        fn phase_scaling_invariance(re in -10.0f64..10.0, im in -10.0f64..10.0,
                                    lambda in prop::sample::select(vec![-3.0f64, -1.0, -0.25, 0.5, 2.0, 7.5])) {
            let z = c(re, im);
            prop_assume!(z.norm() > 1e-6);
            let a = phase_mod_pi(z, &tol()).unwrap();
            let b = phase_mod_pi(z * lambda, &tol()).unwrap();
            prop_assert!(phase_distance_mod_pi(a, b) < 1e-12);
        }

        #[test]
        fn pfaffian_square_property(seed in 0u64..200, half in 1usize..5) {
            let m = random_antisymmetric(2 * half, seed);
            let pf = pfaffian(&m, &tol()).unwrap();
            let det = m.determinant();
            prop_assert!((pf * pf - det).norm() <= 1e-9 * det.norm().max(1.0));
        }
    }
}
