//! Brute-force exterior algebra over the cotangent space at a point.
//!
//! Forms are stored on the canonical sorted basis: a degree-k form is a map
//! from strictly increasing index subsets (bitmasks) to complex
//! coefficients. The interleaved volume convention dx₁∧dy₁∧⋯∧dxₙ∧dyₙ is
//! handled by a single sign computed from permutation parity, never assumed.
//!
//! Dimension is capped at 8 (n ≤ 4): beyond that the subset lattice explodes
//! and nothing downstream needs it.

use crate::matrix::{ComplexMatrix, MatrixError, ToleranceConfig};
use num_complex::Complex64;
use std::collections::BTreeMap;
use thiserror::Error;

pub const MAX_DIMENSION: usize = 8;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ExteriorError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dimension {0} exceeds the supported maximum {MAX_DIMENSION}")]
    DimensionTooLarge(usize),
    #[error("expected a top-degree form (degree {degree}, dimension {dimension})")]
    NotTopDegree { degree: usize, dimension: usize },
    #[error("top coefficient needs an even dimension (got {0})")]
    OddDimension(usize),
    #[error("matrix error: {0}")]
    Matrix(#[from] MatrixError),
}

/// Complex-coefficient alternating form of a single degree.
#[derive(Debug, Clone, PartialEq)]
pub struct ExteriorForm {
    dimension: usize,
    degree: usize,
    /// Keys are bitmasks with `degree` bits set; exact-zero coefficients are
    /// pruned.
    coeffs: BTreeMap<u16, Complex64>,
}

fn zero_c() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl ExteriorForm {
    pub fn zero(dimension: usize, degree: usize) -> Result<Self, ExteriorError> {
        if dimension > MAX_DIMENSION {
            return Err(ExteriorError::DimensionTooLarge(dimension));
        }
        assert!(degree <= dimension, "degree exceeds dimension");
        Ok(Self {
            dimension,
            degree,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn scalar(dimension: usize, value: Complex64) -> Result<Self, ExteriorError> {
        let mut f = Self::zero(dimension, 0)?;
        f.insert(0, value);
        Ok(f)
    }

    /// The basis covector e^i as a 1-form.
    pub fn basis_one_form(dimension: usize, index: usize) -> Result<Self, ExteriorError> {
        assert!(index < dimension);
        let mut f = Self::zero(dimension, 1)?;
        f.insert(1u16 << index, Complex64::new(1.0, 0.0));
        Ok(f)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn insert(&mut self, mask: u16, value: Complex64) {
        debug_assert_eq!(mask.count_ones() as usize, self.degree);
        if value != zero_c() {
            self.coeffs.insert(mask, value);
        }
    }

    fn accumulate(&mut self, mask: u16, value: Complex64) {
        let entry = self.coeffs.entry(mask).or_insert_with(zero_c);
        *entry += value;
        if *entry == zero_c() {
            self.coeffs.remove(&mask);
        }
    }

    /// Coefficient on the sorted blade given by `mask`.
    pub fn coefficient(&self, mask: u16) -> Complex64 {
        self.coeffs.get(&mask).copied().unwrap_or_else(zero_c)
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExteriorError> {
        if self.dimension != other.dimension {
            return Err(ExteriorError::DimensionMismatch(
                self.dimension,
                other.dimension,
            ));
        }
        assert_eq!(self.degree, other.degree, "degree mismatch in add");
        let mut out = self.clone();
        for (&mask, &v) in &other.coeffs {
            out.accumulate(mask, v);
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self {
            dimension: self.dimension,
            degree: self.degree,
            coeffs: BTreeMap::new(),
        };
        for (&mask, &v) in &self.coeffs {
            out.insert(mask, v * s);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Graded-commutative product with permutation signs.
    pub fn wedge(&self, other: &Self) -> Result<Self, ExteriorError> {
        if self.dimension != other.dimension {
            return Err(ExteriorError::DimensionMismatch(
                self.dimension,
                other.dimension,
            ));
        }
        let degree = self.degree + other.degree;
        if degree > self.dimension {
            // Identically zero; store it at top degree.
            return Self::zero(self.dimension, self.dimension);
        }
        let mut out = Self::zero(self.dimension, degree)?;
        for (&a, &va) in &self.coeffs {
            for (&b, &vb) in &other.coeffs {
                if a & b != 0 {
                    continue;
                }
                let sign = blade_merge_sign(a, b);
                out.accumulate(a | b, va * vb * sign);
            }
        }
        Ok(out)
    }

    /// k-fold wedge power; k = 0 is the scalar 1.
    pub fn power(&self, k: usize) -> Result<Self, ExteriorError> {
        let mut acc = Self::scalar(self.dimension, Complex64::new(1.0, 0.0))?;
        for _ in 0..k {
            acc = acc.wedge(self)?;
        }
        Ok(acc)
    }

    /// Pullback along the linear map with matrix `m` (the map v ↦ Mv); for
    /// 2-forms this equals the coefficient congruence Mᵗ Ω M.
    pub fn pullback(&self, m: &ComplexMatrix) -> Result<Self, ExteriorError> {
        if m.rows() != self.dimension || m.cols() != self.dimension {
            return Err(ExteriorError::DimensionMismatch(self.dimension, m.rows()));
        }
        // φ*(e^i) = Σ_j M_{ij} e^j.
        let pulled_basis: Vec<ExteriorForm> = (0..self.dimension)
            .map(|i| {
                let mut f = Self::zero(self.dimension, 1).unwrap();
                for j in 0..self.dimension {
                    let v = m.get(i, j);
                    if v != zero_c() {
                        f.insert(1u16 << j, v);
                    }
                }
                f
            })
            .collect();
        let mut out = Self::zero(self.dimension, self.degree)?;
        for (&mask, &v) in &self.coeffs {
            let mut blade = Self::scalar(self.dimension, Complex64::new(1.0, 0.0))?;
            for i in 0..self.dimension {
                if mask & (1u16 << i) != 0 {
                    blade = blade.wedge(&pulled_basis[i])?;
                }
            }
            for (&bm, &bv) in &blade.coeffs {
                out.accumulate(bm, v * bv);
            }
        }
        Ok(out)
    }
}

/// Sign of merging two disjoint sorted blades a∧b into the sorted blade a|b:
/// (-1)^(number of transpositions moving b's indices past a's larger ones).
fn blade_merge_sign(a: u16, b: u16) -> Complex64 {
    let mut swaps = 0u32;
    let mut bb = b;
    while bb != 0 {
        let i = bb.trailing_zeros();
        // Indices of a strictly greater than i.
        swaps += (a >> (i + 1)).count_ones();
        bb &= bb - 1;
    }
    if swaps % 2 == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(-1.0, 0.0)
    }
}

/// Parity sign of a permutation given as the image sequence.
pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in (i + 1)..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sign relating the sorted top blade e^0∧…∧e^{2n-1} (basis order
/// dx₁..dxₙ, dy₁..dyₙ) to the interleaved volume dx₁∧dy₁∧⋯∧dxₙ∧dyₙ.
pub fn interleave_sign(n: usize) -> i32 {
    let mut perm = Vec::with_capacity(2 * n);
    for i in 0..n {
        perm.push(i);
        perm.push(n + i);
    }
    permutation_sign(&perm)
}

/// Builds Σ_{i<j} Ω_ij e^i∧e^j from an antisymmetric coefficient matrix.
pub fn two_form_from_matrix(
    omega: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<ExteriorForm, ExteriorError> {
    if !omega.is_square() {
        return Err(ExteriorError::Matrix(MatrixError::NonSquare {
            rows: omega.rows(),
            cols: omega.cols(),
        }));
    }
    let dev = omega.antisymmetry_defect();
    if dev > tol.abs_tol {
        return Err(ExteriorError::Matrix(MatrixError::NotAntisymmetric {
            max_deviation: dev,
        }));
    }
    let dim = omega.rows();
    let mut f = ExteriorForm::zero(dim, 2)?;
    for i in 0..dim {
        for j in (i + 1)..dim {
            let v = omega.get(i, j);
            if v != zero_c() {
                f.insert((1u16 << i) | (1u16 << j), v);
            }
        }
    }
    Ok(f)
}

/// Reads the antisymmetric coefficient matrix back out of a 2-form.
pub fn matrix_from_two_form(f: &ExteriorForm) -> ComplexMatrix {
    assert_eq!(f.degree(), 2);
    let dim = f.dimension();
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (&mask, &v) in &f.coeffs {
        let i = mask.trailing_zeros() as usize;
        let j = (15 - mask.leading_zeros()) as usize;
        m.set(i, j, v);
        m.set(j, i, -v);
    }
    m
}

/// Coefficient of a top-degree form with respect to the interleaved volume
/// dx₁∧dy₁∧⋯∧dxₙ∧dyₙ.
pub fn top_coefficient(f: &ExteriorForm) -> Result<Complex64, ExteriorError> {
    if f.degree() != f.dimension() {
        return Err(ExteriorError::NotTopDegree {
            degree: f.degree(),
            dimension: f.dimension(),
        });
    }
    if f.dimension() % 2 != 0 {
        return Err(ExteriorError::OddDimension(f.dimension()));
    }
    let n = f.dimension() / 2;
    let full = if f.dimension() == 0 {
        0u16
    } else {
        (1u16 << f.dimension()) - 1
    };
    let sign = Complex64::new(interleave_sign(n) as f64, 0.0);
    Ok(f.coefficient(full) * sign)
}
