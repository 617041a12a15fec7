//! Complex tori, generalized complex structures as explicit 4n×4n matrices,
//! B-field transforms, the mirror transform, and extraction of mirror data.
//!
//! Matrix convention, fixed project-wide: endomorphisms of the doubled
//! bundle are stored on the ordered block basis (∂/∂x, ∂/∂y, dx, dy), and
//! the image of the i-th basis vector is the linear combination whose
//! coefficients sit in column i. Round-trip tests assert this convention.

use crate::matrix::{
    is_positive_definite, ComplexMatrix, IntMatrix, MatrixError, RealMatrix, ToleranceConfig,
};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum GcsError {
    #[error("invalid torus: {0}")]
    InvalidTorus(String),
    #[error("matrix of order {got} does not match dimension n = {n} (expected {expected})")]
    WrongOrder {
        got: usize,
        n: usize,
        expected: usize,
    },
    #[error("structure fails the involution/pairing invariants (square defect {square:.3e}, pairing defect {pairing:.3e})")]
    NotAStructure { square: f64, pairing: f64 },
    #[error("structure is not of B-transformed symplectic type: {0}")]
    NotSymplecticType(String),
    #[error("structure is not of complex type: {0}")]
    NotComplexType(String),
    #[error("matrix error: {0}")]
    Matrix(#[from] MatrixError),
}

/// Complex torus ℂⁿ/(ℤⁿ ⊕ Tℤⁿ) given by its period matrix T = X + iY.
///
/// Y must be positive definite as a quadratic form (its symmetric part has
/// positive eigenvalues; Y itself need not be symmetric) and det T ≠ 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexTorus {
    n: usize,
    x: RealMatrix,
    y: RealMatrix,
}

impl ComplexTorus {
    pub fn new(x: RealMatrix, y: RealMatrix, tol: &ToleranceConfig) -> Result<Self, GcsError> {
        if !x.is_square() || !y.is_square() || x.rows() != y.rows() || x.rows() == 0 {
            return Err(GcsError::InvalidTorus(
                "Re T and Im T must be square of equal nonzero order".into(),
            ));
        }
        let n = x.rows();
        let y_sym = y.add(&y.transpose()).scale(0.5);
        match is_positive_definite(&y_sym, tol) {
            Ok(true) => {}
            Ok(false) => {
                return Err(GcsError::InvalidTorus(
                    "Im T is not positive definite".into(),
                ))
            }
            Err(e) => return Err(GcsError::Matrix(e)),
        }
        let det_t = ComplexMatrix::from_real_imag(&x, &y).determinant();
        if det_t.norm() <= tol.abs_tol {
            return Err(GcsError::InvalidTorus(format!(
                "det T vanishes (|det T| = {:.3e})",
                det_t.norm()
            )));
        }
        Ok(Self { n, x, y })
    }

    /// Torus with period matrix iIₙ.
    pub fn square(n: usize) -> Self {
        Self {
            n,
            x: RealMatrix::zeros(n, n),
            y: RealMatrix::identity(n),
        }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn re(&self) -> &RealMatrix {
        &self.x
    }

    pub fn im(&self) -> &RealMatrix {
        &self.y
    }

    pub fn period_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_imag(&self.x, &self.y)
    }

    /// -(T⁻¹)ᵗ, whose imaginary and real parts are the mirror symplectic
    /// matrix ω_mat and the mirror B-field matrix B_mat.
    pub fn mirror_symplectic_matrix(
        &self,
        tol: &ToleranceConfig,
    ) -> Result<ComplexMatrix, GcsError> {
        let t = self.period_matrix();
        Ok(t.inverse(tol)?.transpose().scale(Complex64::new(-1.0, 0.0)))
    }
}

/// Generalized complex structure on the doubled bundle of a 2n-torus, as a
/// real 4n×4n matrix with M² = -Id and MᵗQM = Q for the natural pairing Q.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedComplexStructure {
    n: usize,
    mat: RealMatrix,
}

impl GeneralizedComplexStructure {
    /// Validates both invariants before accepting the matrix.
    pub fn from_matrix(n: usize, mat: RealMatrix, tol: &ToleranceConfig) -> Result<Self, GcsError> {
        if mat.rows() != 4 * n || mat.cols() != 4 * n {
            return Err(GcsError::WrongOrder {
                got: mat.rows(),
                n,
                expected: 4 * n,
            });
        }
        let candidate = Self { n, mat };
        let square = candidate.square_defect();
        let pairing = candidate.pairing_defect();
        if square > tol.abs_tol || pairing > tol.abs_tol {
            return Err(GcsError::NotAStructure { square, pairing });
        }
        Ok(candidate)
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.mat
    }

    /// Natural pairing matrix Q: ∂/∂x_i pairs with dx_i, ∂/∂y_i with dy_i.
    pub fn pairing_matrix(n: usize) -> RealMatrix {
        let id = RealMatrix::identity(2 * n);
        let zero = RealMatrix::zeros(2 * n, 2 * n);
        RealMatrix::from_blocks(&[vec![&zero, &id], vec![&id, &zero]])
    }

    /// Max entry of |M² + Id|.
    pub fn square_defect(&self) -> f64 {
        let sq = self.mat.mul(&self.mat);
        sq.max_abs_diff(&RealMatrix::identity(4 * self.n).neg())
    }

    /// Max entry of |MᵗQM - Q|.
    pub fn pairing_defect(&self) -> f64 {
        let q = Self::pairing_matrix(self.n);
        self.mat.transpose().mul(&q).mul(&self.mat).max_abs_diff(&q)
    }
}

fn block4(n: usize, blocks: [&RealMatrix; 16]) -> RealMatrix {
    for b in &blocks {
        assert_eq!((b.rows(), b.cols()), (n, n));
    }
    RealMatrix::from_blocks(&[
        vec![blocks[0], blocks[1], blocks[2], blocks[3]],
        vec![blocks[4], blocks[5], blocks[6], blocks[7]],
        vec![blocks[8], blocks[9], blocks[10], blocks[11]],
        vec![blocks[12], blocks[13], blocks[14], blocks[15]],
    ])
}

/// The generalized complex structure induced by the complex structure of
/// the torus: block-diagonal action on vectors and covectors built from
/// X = Re T and Y = Im T.
pub fn gcs_from_complex(
    torus: &ComplexTorus,
    tol: &ToleranceConfig,
) -> Result<GeneralizedComplexStructure, GcsError> {
    let n = torus.dimension();
    let x = torus.re();
    let y = torus.im();
    let y_inv = y.inverse(tol)?;
    let y_inv_t = y_inv.transpose();
    let xt = x.transpose();
    let zero = RealMatrix::zeros(n, n);

    let a11 = x.mul(&y_inv).neg(); // -XY⁻¹
    let a12 = y.add(&x.mul(&y_inv).mul(x)).neg(); // -Y - XY⁻¹X
    let a21 = y_inv.clone(); // Y⁻¹
    let a22 = y_inv.mul(x); // Y⁻¹X
    let d11 = y_inv_t.mul(&xt); // (Y⁻¹)ᵗXᵗ
    let d12 = y_inv_t.neg(); // -(Y⁻¹)ᵗ
    let d21 = y.transpose().add(&xt.mul(&y_inv_t).mul(&xt)); // Yᵗ + Xᵗ(Y⁻¹)ᵗXᵗ
    let d22 = xt.mul(&y_inv_t).neg(); // -Xᵗ(Y⁻¹)ᵗ

    let mat = block4(
        n,
        [
            &a11, &a12, &zero, &zero, //
            &a21, &a22, &zero, &zero, //
            &zero, &zero, &d11, &d12, //
            &zero, &zero, &d21, &d22,
        ],
    );
    GeneralizedComplexStructure::from_matrix(n, mat, tol)
}

/// The generalized complex structure associated to the Kähler symplectic
/// form ω = 2π dxᵗY dy + 2π dyᵗXᵗY dy of the torus.
pub fn gcs_from_kahler(
    torus: &ComplexTorus,
    tol: &ToleranceConfig,
) -> Result<GeneralizedComplexStructure, GcsError> {
    let n = torus.dimension();
    let x = torus.re();
    let y = torus.im();
    let y_inv = y.inverse(tol)?;
    let y_inv_t = y_inv.transpose();
    let xt = x.transpose();
    let yt = y.transpose();
    let zero = RealMatrix::zeros(n, n);

    let c13 = y_inv_t.mul(&xt).sub(&x.mul(&y_inv)); // (Y⁻¹)ᵗXᵗ - XY⁻¹
    let c14 = y_inv_t.neg(); // -(Y⁻¹)ᵗ
    let c23 = y_inv.clone(); // Y⁻¹
    let c32 = y.neg(); // -Y
    let c41 = yt.clone(); // Yᵗ
    let c42 = yt.mul(x).sub(&xt.mul(y)); // YᵗX - XᵗY

    let mat = block4(
        n,
        [
            &zero, &zero, &c13, &c14, //
            &zero, &zero, &c23, &zero, //
            &zero, &c32, &zero, &zero, //
            &c41, &c42, &zero, &zero,
        ],
    );
    GeneralizedComplexStructure::from_matrix(n, mat, tol)
}

/// The mirror swap S exchanging the ∂/∂y block with the dy block.
pub fn mirror_swap_matrix(n: usize) -> RealMatrix {
    let id = RealMatrix::identity(n);
    let zero = RealMatrix::zeros(n, n);
    block4(
        n,
        [
            &id, &zero, &zero, &zero, //
            &zero, &zero, &zero, &id, //
            &zero, &zero, &id, &zero, //
            &zero, &id, &zero, &zero,
        ],
    )
}

/// Mirror dual structure S·M·S; an involution since S² = Id.
pub fn mirror(g: &GeneralizedComplexStructure) -> GeneralizedComplexStructure {
    let s = mirror_swap_matrix(g.dimension());
    GeneralizedComplexStructure {
        n: g.dimension(),
        mat: s.mul(g.matrix()).mul(&s),
    }
}

/// Shear matrix of the B-field 2π dxᵗ τᵗ dy.
pub fn b_shear_matrix(tau: &IntMatrix) -> RealMatrix {
    let n = tau.order();
    let id = RealMatrix::identity(n);
    let zero = RealMatrix::zeros(n, n);
    let tau_r = tau.to_real();
    let neg_tau_t = tau_r.transpose().neg();
    block4(
        n,
        [
            &id, &zero, &zero, &zero, //
            &zero, &id, &zero, &zero, //
            &zero, &neg_tau_t, &id, &zero, //
            &tau_r, &zero, &zero, &id,
        ],
    )
}

/// B-field transform: conjugation by the shear of 2π dxᵗ τᵗ dy. Preserves
/// both structure invariants.
pub fn b_transform(
    g: &GeneralizedComplexStructure,
    tau: &IntMatrix,
) -> GeneralizedComplexStructure {
    let n = g.dimension();
    assert_eq!(tau.order(), n, "twist order must match dimension");
    let shear = b_shear_matrix(tau);
    let shear_inv = b_shear_matrix(&tau.neg());
    GeneralizedComplexStructure {
        n,
        mat: shear.mul(g.matrix()).mul(&shear_inv),
    }
}

/// Whether the B-field transform by τ fixes the structure, which happens
/// exactly when τT is symmetric.
pub fn b_transform_is_trivial(
    torus: &ComplexTorus,
    tau: &IntMatrix,
    tol: &ToleranceConfig,
) -> bool {
    let tau_t = tau.to_real().to_complex().mul(&torus.period_matrix());
    tau_t.asymmetry() <= tol.abs_tol
}

/// Mirror symplectic data extracted from a B-transformed symplectic-type
/// structure: the dx̌∧dy̌ matrices of the symplectic form and B-field (both
/// divided by 2π) and the antisymmetrized dx̌∧dx̌ blocks contributed by a
/// twist.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexifiedSymplecticData {
    pub omega_mat: RealMatrix,
    pub b_mat: RealMatrix,
    /// Antisymmetrized coefficient block of the dx̌∧dx̌ part of the
    /// symplectic form; equals τᵗω_matᵗ - ω_mat τ for a twist τ.
    pub omega_xx: RealMatrix,
    /// Same for the B-field part.
    pub b_xx: RealMatrix,
    /// `Some(0)` when the dx̌∧dx̌ blocks vanish. A nonzero twist is not a
    /// function of the structure matrix (any τ with (T⁻¹)ᵗτ symmetric acts
    /// trivially), so candidates must be checked with [`Self::twist_matches`].
    pub twist: Option<IntMatrix>,
}

impl ComplexifiedSymplecticData {
    /// Whether a candidate twist reproduces the extracted dx̌∧dx̌ blocks.
    pub fn twist_matches(&self, tau: &IntMatrix, tol: &ToleranceConfig) -> bool {
        let tr = tau.to_real();
        let omega_rebuilt = tr
            .transpose()
            .mul(&self.omega_mat.transpose())
            .sub(&self.omega_mat.mul(&tr));
        let b_rebuilt = tr
            .transpose()
            .mul(&self.b_mat.transpose())
            .sub(&self.b_mat.mul(&tr));
        omega_rebuilt.max_abs_diff(&self.omega_xx) <= tol.abs_tol
            && b_rebuilt.max_abs_diff(&self.b_xx) <= tol.abs_tol
    }
}

fn shear_2n(n: usize, lower_left: &RealMatrix) -> RealMatrix {
    let mut m = RealMatrix::identity(4 * n);
    m.set_block(2 * n, 0, lower_left);
    m
}

/// Reads the symplectic form and B-field out of a structure of
/// B-transformed symplectic type and validates by reconstruction.
pub fn extract_complexified_symplectic(
    g: &GeneralizedComplexStructure,
    tol: &ToleranceConfig,
) -> Result<ComplexifiedSymplecticData, GcsError> {
    let n = g.dimension();
    let m = g.matrix();
    let top_left = m.block(0, 0, 2 * n, 2 * n);
    let top_right = m.block(0, 2 * n, 2 * n, 2 * n);
    let omega_block = top_right
        .inverse(tol)
        .map_err(|_| GcsError::NotSymplecticType("top-right block is singular".into()))?
        .neg();
    let b_block = omega_block.mul(&top_left);

    // Reconstruction: shear(B)·[[0, -ω⁻¹],[ω, 0]]·shear(-B) must reproduce
    // the input, otherwise the shape assumption was wrong.
    let zero = RealMatrix::zeros(2 * n, 2 * n);
    let omega_inv_neg = omega_block
        .inverse(tol)
        .map_err(|_| GcsError::NotSymplecticType("symplectic block is singular".into()))?
        .neg();
    let middle = RealMatrix::from_blocks(&[vec![&zero, &omega_inv_neg], vec![&omega_block, &zero]]);
    let rebuilt = shear_2n(n, &b_block)
        .mul(&middle)
        .mul(&shear_2n(n, &b_block.neg()));
    let defect = rebuilt.max_abs_diff(m);
    if defect > tol.abs_tol {
        return Err(GcsError::NotSymplecticType(format!(
            "reconstruction defect {defect:.3e}"
        )));
    }

    // ω_block = [[ωτ - τᵗωᵗ, -ω],[ωᵗ, 0]] and likewise for B.
    let omega_mat = omega_block.block(0, n, n, n).neg();
    let b_mat = b_block.block(0, n, n, n).neg();
    let omega_xx = omega_block.block(0, 0, n, n).neg();
    let b_xx = b_block.block(0, 0, n, n).neg();
    let twist = (omega_xx.max_abs() <= tol.abs_tol && b_xx.max_abs() <= tol.abs_tol)
        .then(|| IntMatrix::zeros(n));
    Ok(ComplexifiedSymplecticData {
        omega_mat,
        b_mat,
        omega_xx,
        b_xx,
        twist,
    })
}

/// Reads the period matrix of a (possibly β-transformed) complex-type
/// structure from its upper-left 2n×2n block, which must have the shape of
/// the complex-structure block for some X', Y'. Returns X' + iY'.
pub fn extract_period_matrix(
    g: &GeneralizedComplexStructure,
    tol: &ToleranceConfig,
) -> Result<ComplexMatrix, GcsError> {
    let n = g.dimension();
    let m = g.matrix();
    let a21 = m.block(n, 0, n, n);
    let a22 = m.block(n, n, n, n);
    let y = a21
        .inverse(tol)
        .map_err(|_| GcsError::NotComplexType("vector block is singular".into()))?;
    let x = y.mul(&a22);

    // Rebuild the complex-structure block from (X', Y') and compare.
    let y_inv = a21.clone();
    let rebuilt = RealMatrix::from_blocks(&[
        vec![&x.mul(&y_inv).neg(), &y.add(&x.mul(&y_inv).mul(&x)).neg()],
        vec![&y_inv, &y_inv.mul(&x)],
    ]);
    let defect = rebuilt.max_abs_diff(&m.block(0, 0, 2 * n, 2 * n));
    if defect > tol.abs_tol {
        return Err(GcsError::NotComplexType(format!(
            "upper-left block does not have complex-structure shape (defect {defect:.3e})"
        )));
    }
    Ok(ComplexMatrix::from_real_imag(&x, &y))
}

/// Antisymmetric 2n×2n coefficient matrix of the complexified symplectic
/// form 2πi dx̌ᵗ(T⁻¹)ᵗdy̌ on the basis (dx̌, dy̌), divided by 2πi.
pub fn mirror_form_coefficient(
    torus: &ComplexTorus,
    tol: &ToleranceConfig,
) -> Result<ComplexMatrix, GcsError> {
    let n = torus.dimension();
    let tinv_t = torus.period_matrix().inverse(tol)?.transpose();
    let zero = ComplexMatrix::zeros(n, n);
    Ok(ComplexMatrix::from_blocks(&[
        vec![&zero, &tinv_t],
        vec![&tinv_t.transpose().neg(), &zero],
    ]))
}

/// Same for the twisted form 2πi dx̌ᵗ(T⁻¹)ᵗdy̌ + 2πi dx̌ᵗ(-(T⁻¹)ᵗτ)dx̌.
pub fn mirror_form_coefficient_twisted(
    torus: &ComplexTorus,
    tau: &IntMatrix,
    tol: &ToleranceConfig,
) -> Result<ComplexMatrix, GcsError> {
    let n = torus.dimension();
    let tinv_t = torus.period_matrix().inverse(tol)?.transpose();
    let tau_c = tau.to_real().to_complex();
    // dx̌ᵗ S dx̌ antisymmetrizes to S - Sᵗ with S = -(T⁻¹)ᵗτ.
    let s = tinv_t.mul(&tau_c).neg();
    let xx = s.sub(&s.transpose());
    let zero = ComplexMatrix::zeros(n, n);
    Ok(ComplexMatrix::from_blocks(&[
        vec![&xx, &tinv_t],
        vec![&tinv_t.transpose().neg(), &zero],
    ]))
}

/// The shear g_τ = [[I, 0],[τ, I]] acting on (x̌, y̌) coordinates.
pub fn graph_shear(tau: &IntMatrix) -> RealMatrix {
    let n = tau.order();
    let id = RealMatrix::identity(n);
    let zero = RealMatrix::zeros(n, n);
    RealMatrix::from_blocks(&[vec![&id, &zero], vec![&tau.to_real(), &id]])
}

/// Report of the symplectomorphism identity g_τᵗ Ω̃_τ g_τ = Ω̃.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplectomorphismCheck {
    pub defect: f64,
    pub pass: bool,
}

/// Verifies that pulling the twisted complexified symplectic form back
/// along the graph shear recovers the untwisted one.
pub fn symplectomorphism_check(
    torus: &ComplexTorus,
    tau: &IntMatrix,
    tol: &ToleranceConfig,
) -> Result<SymplectomorphismCheck, GcsError> {
    let base = mirror_form_coefficient(torus, tol)?;
    let twisted = mirror_form_coefficient_twisted(torus, tau, tol)?;
    let g = graph_shear(tau).to_complex();
    let pulled = g.transpose().mul(&twisted).mul(&g);
    let defect = pulled.max_abs_diff(&base);
    Ok(SymplectomorphismCheck {
        defect,
        pass: defect <= 1e-12 * base.max_abs().max(1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{matrix_from_two_form, two_form_from_matrix};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn torus_2d() -> ComplexTorus {
        // T = [[i, 1/2], [1/2, i]]
        ComplexTorus::new(
            RealMatrix::from_rows(vec![vec![0.0, 0.5], vec![0.5, 0.0]]).unwrap(),
            RealMatrix::identity(2),
            &tol(),
        )
        .unwrap()
    }

    fn torus_skew() -> ComplexTorus {
        // Nonsymmetric X and Y to exercise transpose placement.
        ComplexTorus::new(
            RealMatrix::from_rows(vec![vec![0.3, -0.7], vec![0.2, 0.1]]).unwrap(),
            RealMatrix::from_rows(vec![vec![1.5, 0.4], vec![-0.2, 1.1]]).unwrap(),
            &tol(),
        )
        .unwrap()
    }

    #[test]
    fn torus_rejects_indefinite_imaginary_part() {
        let bad = ComplexTorus::new(
            RealMatrix::zeros(2, 2),
            RealMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap(),
            &tol(),
        );
        assert!(matches!(bad, Err(GcsError::InvalidTorus(_))));
    }

    #[test]
    fn complex_structure_for_square_torus() {
        let g = gcs_from_complex(&ComplexTorus::square(2), &tol()).unwrap();
        let m = g.matrix();
        // X = 0: blocks reduce to [[0,-I],[I,0]] ⊕ [[0,-I],[I,0]].
        let id = RealMatrix::identity(2);
        assert_eq!(m.block(0, 2, 2, 2), id.neg());
        assert_eq!(m.block(2, 0, 2, 2), id);
        assert_eq!(m.block(4, 6, 2, 2), id.neg());
        assert_eq!(m.block(6, 4, 2, 2), id);
        assert!(m.block(0, 4, 4, 4).max_abs() == 0.0);
        assert!(m.block(4, 0, 4, 4).max_abs() == 0.0);
    }

    #[test]
    fn complex_structure_blocks_by_hand() {
        // T = [[i,1/2],[1/2,i]]: X = [[0,1/2],[1/2,0]], Y = I, so
        // -XY⁻¹ = -X, -Y - XY⁻¹X = -(I + X²), Y⁻¹ = I, Y⁻¹X = X, and the
        // covector blocks are the transposes.
        let g = gcs_from_complex(&torus_2d(), &tol()).unwrap();
        let m = g.matrix();
        let x = RealMatrix::from_rows(vec![vec![0.0, 0.5], vec![0.5, 0.0]]).unwrap();
        let xx = x.mul(&x);
        assert!(m.block(0, 0, 2, 2).max_abs_diff(&x.neg()) < 1e-15);
        assert!(
            m.block(0, 2, 2, 2)
                .max_abs_diff(&RealMatrix::identity(2).add(&xx).neg())
                < 1e-15
        );
        assert!(m.block(2, 0, 2, 2).max_abs_diff(&RealMatrix::identity(2)) < 1e-15);
        assert!(m.block(2, 2, 2, 2).max_abs_diff(&x) < 1e-15);
        assert!(m.block(4, 4, 2, 2).max_abs_diff(&x.transpose()) < 1e-15);
        assert!(
            m.block(4, 6, 2, 2)
                .max_abs_diff(&RealMatrix::identity(2).neg())
                < 1e-15
        );
        assert!(
            m.block(6, 4, 2, 2)
                .max_abs_diff(&RealMatrix::identity(2).add(&xx.transpose()))
                < 1e-15
        );
        assert!(m.block(6, 6, 2, 2).max_abs_diff(&x.transpose().neg()) < 1e-15);
    }

    #[test]
    fn structures_satisfy_invariants() {
        for torus in [ComplexTorus::square(3), torus_2d(), torus_skew()] {
            for g in [
                gcs_from_complex(&torus, &tol()).unwrap(),
                gcs_from_kahler(&torus, &tol()).unwrap(),
            ] {
                assert!(g.square_defect() < 1e-10);
                assert!(g.pairing_defect() < 1e-10);
            }
        }
    }

    #[test]
    fn mirror_of_complex_structure_matches_block_formula() {
        // The mirrored structure swaps the vector/covector roles of the y
        // directions; written out in blocks it must equal
        // [[-XY⁻¹, 0, 0, -Y-XY⁻¹X], [0, -Xᵗ(Y⁻¹)ᵗ, Yᵗ+Xᵗ(Y⁻¹)ᵗXᵗ, 0],
        //  [0, -(Y⁻¹)ᵗ, (Y⁻¹)ᵗXᵗ, 0], [Y⁻¹, 0, 0, Y⁻¹X]].
        let torus = torus_skew();
        let (x, y) = (torus.re().clone(), torus.im().clone());
        let y_inv = y.inverse(&tol()).unwrap();
        let y_inv_t = y_inv.transpose();
        let xt = x.transpose();
        let zero = RealMatrix::zeros(2, 2);
        let expected = RealMatrix::from_blocks(&[
            vec![
                &x.mul(&y_inv).neg(),
                &zero,
                &zero,
                &y.add(&x.mul(&y_inv).mul(&x)).neg(),
            ],
            vec![
                &zero,
                &xt.mul(&y_inv_t).neg(),
                &y.transpose().add(&xt.mul(&y_inv_t).mul(&xt)),
                &zero,
            ],
            vec![&zero, &y_inv_t.neg(), &y_inv_t.mul(&xt), &zero],
            vec![&y_inv, &zero, &zero, &y_inv.mul(&x)],
        ]);
        let mirrored = mirror(&gcs_from_complex(&torus, &tol()).unwrap());
        assert!(mirrored.matrix().max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn mirror_of_kahler_structure_matches_block_formula() {
        // [[0, -(Y⁻¹)ᵗ, (Y⁻¹)ᵗXᵗ-XY⁻¹, 0], [Yᵗ, 0, 0, YᵗX-XᵗY],
        //  [0, 0, 0, -Y], [0, 0, Y⁻¹, 0]].
        let torus = torus_skew();
        let (x, y) = (torus.re().clone(), torus.im().clone());
        let y_inv = y.inverse(&tol()).unwrap();
        let y_inv_t = y_inv.transpose();
        let xt = x.transpose();
        let yt = y.transpose();
        let zero = RealMatrix::zeros(2, 2);
        let expected = RealMatrix::from_blocks(&[
            vec![
                &zero,
                &y_inv_t.neg(),
                &y_inv_t.mul(&xt).sub(&x.mul(&y_inv)),
                &zero,
            ],
            vec![&yt, &zero, &zero, &yt.mul(&x).sub(&xt.mul(&y))],
            vec![&zero, &zero, &zero, &y.neg()],
            vec![&zero, &zero, &y_inv, &zero],
        ]);
        let mirrored = mirror(&gcs_from_kahler(&torus, &tol()).unwrap());
        assert!(mirrored.matrix().max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn mirror_is_involution() {
        let g = gcs_from_complex(&torus_skew(), &tol()).unwrap();
        let back = mirror(&mirror(&g));
        assert!(back.matrix().max_abs_diff(g.matrix()) == 0.0);
    }

    #[test]
    fn b_transform_zero_twist_is_identity() {
        let g = gcs_from_kahler(&torus_2d(), &tol()).unwrap();
        let same = b_transform(&g, &IntMatrix::zeros(2));
        assert!(same.matrix().max_abs_diff(g.matrix()) < 1e-15);
    }

    #[test]
    fn b_transform_round_trip_and_additivity() {
        let g = gcs_from_complex(&torus_skew(), &tol()).unwrap();
        let tau1 = IntMatrix::from_rows(vec![vec![0, 1], vec![2, -1]]).unwrap();
        let tau2 = IntMatrix::from_rows(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let round = b_transform(&b_transform(&g, &tau1), &tau1.neg());
        assert!(round.matrix().max_abs_diff(g.matrix()) < 1e-12);
        let mut sum = IntMatrix::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                sum.set(i, j, tau1.get(i, j) + tau2.get(i, j));
            }
        }
        let composed = b_transform(&b_transform(&g, &tau1), &tau2);
        let direct = b_transform(&g, &sum);
        assert!(composed.matrix().max_abs_diff(direct.matrix()) < 1e-12);
    }

    #[test]
    fn b_transform_fixes_structure_iff_twist_period_symmetric() {
        // Symmetric τT: τ = I with symmetric T.
        let torus = torus_2d();
        let g = gcs_from_complex(&torus, &tol()).unwrap();
        let tau_id = IntMatrix::identity(2);
        assert!(b_transform_is_trivial(&torus, &tau_id, &tol()));
        assert!(b_transform(&g, &tau_id).matrix().max_abs_diff(g.matrix()) < 1e-12);
        // Asymmetric τT: τ = [[0,1],[0,0]] against the same T.
        let tau_bad = IntMatrix::from_rows(vec![vec![0, 1], vec![0, 0]]).unwrap();
        assert!(!b_transform_is_trivial(&torus, &tau_bad, &tol()));
        assert!(b_transform(&g, &tau_bad).matrix().max_abs_diff(g.matrix()) > 1e-3);
    }

    #[test]
    fn mirror_of_complex_structure_gives_mirror_symplectic_data() {
        for torus in [torus_2d(), torus_skew()] {
            let g = gcs_from_complex(&torus, &tol()).unwrap();
            let data = extract_complexified_symplectic(&mirror(&g), &tol()).unwrap();
            let target = torus.mirror_symplectic_matrix(&tol()).unwrap();
            assert!(data.omega_mat.max_abs_diff(&target.imag_part()) < 1e-10);
            assert!(data.b_mat.max_abs_diff(&target.real_part()) < 1e-10);
            assert!(data.omega_xx.max_abs() < 1e-12);
            assert!(data.b_xx.max_abs() < 1e-12);
            assert_eq!(data.twist, Some(IntMatrix::zeros(2)));
        }
    }

    #[test]
    fn square_torus_mirror_data_is_identity_and_zero() {
        let g = gcs_from_complex(&ComplexTorus::square(3), &tol()).unwrap();
        let data = extract_complexified_symplectic(&mirror(&g), &tol()).unwrap();
        assert!(data.omega_mat.max_abs_diff(&RealMatrix::identity(3)) < 1e-12);
        assert!(data.b_mat.max_abs() < 1e-12);
    }

    #[test]
    fn twisted_mirror_data_carries_xx_blocks() {
        let torus = torus_skew();
        let tau = IntMatrix::from_rows(vec![vec![0, 2], vec![-1, 1]]).unwrap();
        let g = b_transform(&gcs_from_complex(&torus, &tol()).unwrap(), &tau);
        let data = extract_complexified_symplectic(&mirror(&g), &tol()).unwrap();
        let target = torus.mirror_symplectic_matrix(&tol()).unwrap();
        let (w, b) = (target.imag_part(), target.real_part());
        assert!(data.omega_mat.max_abs_diff(&w) < 1e-10);
        assert!(data.b_mat.max_abs_diff(&b) < 1e-10);
        // dx̌∧dx̌ blocks antisymmetrize -ω τ and -B τ.
        let tr = tau.to_real();
        let expect_xx = |m: &RealMatrix| {
            let s = m.mul(&tr).neg();
            s.sub(&s.transpose())
        };
        assert!(data.omega_xx.max_abs_diff(&expect_xx(&w)) < 1e-10);
        assert!(data.b_xx.max_abs_diff(&expect_xx(&b)) < 1e-10);
        // A nonzero twist is not identifiable from the structure alone, but
        // the one that built it must be consistent with the blocks.
        assert_eq!(data.twist, None);
        assert!(data.twist_matches(&tau, &tol()));
        assert!(!data.twist_matches(&IntMatrix::zeros(2), &tol()));
    }

    #[test]
    fn extraction_rejects_complex_type() {
        let g = gcs_from_complex(&torus_2d(), &tol()).unwrap();
        assert!(matches!(
            extract_complexified_symplectic(&g, &tol()),
            Err(GcsError::NotSymplecticType(_))
        ));
    }

    #[test]
    fn period_extraction_round_trip() {
        for torus in [torus_2d(), torus_skew()] {
            let g = gcs_from_complex(&torus, &tol()).unwrap();
            let t = extract_period_matrix(&g, &tol()).unwrap();
            assert!(t.max_abs_diff(&torus.period_matrix()) < 1e-12);
        }
    }

    #[test]
    fn mirror_of_kahler_structure_has_inverse_transpose_period() {
        let torus = torus_skew();
        let g = mirror(&gcs_from_kahler(&torus, &tol()).unwrap());
        let t = extract_period_matrix(&g, &tol()).unwrap();
        let expected = ComplexMatrix::from_real_imag(
            &RealMatrix::zeros(2, 2),
            &torus.im().inverse(&tol()).unwrap().transpose(),
        );
        assert!(t.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn twisted_kahler_mirror_period_is_shear_resolvent() {
        let torus = torus_skew();
        let tau = IntMatrix::from_rows(vec![vec![1, -2], vec![0, 1]]).unwrap();
        let g = mirror(&b_transform(
            &gcs_from_kahler(&torus, &tol()).unwrap(),
            &tau,
        ));
        let t = extract_period_matrix(&g, &tol()).unwrap();
        // (-τ - iYᵗ)⁻¹
        let m = ComplexMatrix::from_real_imag(&tau.to_real().neg(), &torus.im().transpose().neg());
        let expected = m.inverse(&tol()).unwrap();
        assert!(t.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn period_extraction_rejects_symplectic_type() {
        let g = mirror(&gcs_from_complex(&torus_skew(), &tol()).unwrap());
        assert!(matches!(
            extract_period_matrix(&g, &tol()),
            Err(GcsError::NotComplexType(_))
        ));
    }

    #[test]
    fn symplectomorphism_identity_holds() {
        let torus = torus_skew();
        for tau_rows in [vec![vec![0, 0], vec![0, 0]], vec![vec![2, 1], vec![-3, 0]]] {
            let tau = IntMatrix::from_rows(tau_rows).unwrap();
            let check = symplectomorphism_check(&torus, &tau, &tol()).unwrap();
            assert!(check.pass, "defect {}", check.defect);
        }
    }

    #[test]
    fn symplectomorphism_detects_corruption() {
        let torus = torus_skew();
        let tau = IntMatrix::from_rows(vec![vec![1, 1], vec![0, 2]]).unwrap();
        let base = mirror_form_coefficient(&torus, &tol()).unwrap();
        let mut twisted = mirror_form_coefficient_twisted(&torus, &tau, &tol()).unwrap();
        // Perturb one entry (and its mirror image to stay antisymmetric).
        let bump = Complex64::new(1e-3, 0.0);
        twisted.set(0, 1, twisted.get(0, 1) + bump);
        twisted.set(1, 0, twisted.get(1, 0) - bump);
        let g = graph_shear(&tau).to_complex();
        let pulled = g.transpose().mul(&twisted).mul(&g);
        assert!(pulled.max_abs_diff(&base) > 1e-4);
    }

    #[test]
    fn symplectomorphism_via_pullback_route() {
        let torus = torus_skew();
        let tau = IntMatrix::from_rows(vec![vec![0, 1], vec![2, -1]]).unwrap();
        let base = mirror_form_coefficient(&torus, &tol()).unwrap();
        let twisted = mirror_form_coefficient_twisted(&torus, &tau, &tol()).unwrap();
        let base_form = two_form_from_matrix(&base, &tol()).unwrap();
        let twisted_form = two_form_from_matrix(&twisted, &tol()).unwrap();
        let pulled = twisted_form
            .pullback(&graph_shear(&tau).to_complex())
            .unwrap();
        let diff = matrix_from_two_form(&pulled).max_abs_diff(&matrix_from_two_form(&base_form));
        assert!(diff < 1e-12);
    }
}
