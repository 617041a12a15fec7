//! The symplectic-geometry side: graph Lagrangians of quasi-periodic
//! sections inside the (possibly twisted) mirror torus, tangent frames, the
//! Fukaya-object criterion, the graph shear action, and the mirror
//! correspondence check.
//!
//! The Fukaya verdict is deliberately computed through the restriction
//! route — evaluating the twisted symplectic form and B-field on the actual
//! tangent frame of the graph — rather than the symmetry shortcut, so that
//! the correspondence with the holomorphicity check on the bundle side is a
//! genuine two-path comparison.

use crate::bundle::{BundleObject, Witness};
use crate::gcs::ComplexTorus;
use crate::matrix::{IntMatrix, RealMatrix, ToleranceConfig};
use crate::section::SectionData;
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum LagrangianError {
    #[error("torus, twist and section dimensions disagree")]
    DimensionMismatch,
    #[error("the graph shear applies to untwisted Lagrangians only (twist already {0:?})")]
    AlreadyTwisted(Vec<Vec<i64>>),
    #[error("torus error: {0}")]
    Gcs(#[from] crate::gcs::GcsError),
}

/// Graph Lagrangian { (x̌, s(x̌) + τx̌) } of a section, carrying the
/// holonomy data of its unitary local system inside the section.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphLagrangian {
    torus: ComplexTorus,
    tau: IntMatrix,
    section: SectionData,
}

/// Outcome of the Fukaya-object check. `holds` is decided by the
/// restriction route; the symmetry route is carried alongside so callers
/// can assert the two-path agreement.
#[derive(Debug, Clone, PartialEq)]
pub struct FukayaVerdict {
    pub holds: bool,
    /// Worst restriction value (symplectic and B-field routes combined).
    pub witness: Witness,
    /// Worst asymmetry of ∂s/∂x̌·T over the grid (the shortcut route).
    pub symmetry_defect: f64,
    pub routes_agree: bool,
    pub samples: usize,
}

/// Verdicts of both mirror-dual checks for the same data.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceReport {
    pub holomorphic: bool,
    pub fukaya: bool,
    pub agree: bool,
}

impl GraphLagrangian {
    pub fn new(
        torus: ComplexTorus,
        tau: IntMatrix,
        section: SectionData,
    ) -> Result<Self, LagrangianError> {
        if torus.dimension() != tau.order() || torus.dimension() != section.dimension() {
            return Err(LagrangianError::DimensionMismatch);
        }
        Ok(Self {
            torus,
            tau,
            section,
        })
    }

    pub fn torus(&self) -> &ComplexTorus {
        &self.torus
    }

    pub fn twist(&self) -> &IntMatrix {
        &self.tau
    }

    pub fn section(&self) -> &SectionData {
        &self.section
    }

    pub fn dimension(&self) -> usize {
        self.torus.dimension()
    }

    /// Graph point (x̌, s(x̌) + τx̌).
    pub fn graph_point(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = self.dimension();
        let mut fiber = self.section.eval(x);
        for i in 0..n {
            for j in 0..n {
                fiber[i] += self.tau.get(i, j) as f64 * x[j];
            }
        }
        (x.to_vec(), fiber)
    }

    /// Tangent frame: the 2n×n matrix whose j-th column is
    /// e_j ⊕ ((∂s/∂x̌)_colⱼ + τ_colⱼ).
    pub fn tangent_frame(&self, x: &[f64]) -> RealMatrix {
        let n = self.dimension();
        let jac = self.section.jacobian(x);
        let mut frame = RealMatrix::zeros(2 * n, n);
        for j in 0..n {
            frame.set(j, j, 1.0);
            for i in 0..n {
                frame.set(n + i, j, jac.get(i, j) + self.tau.get(i, j) as f64);
            }
        }
        frame
    }

    fn mirror_parts(
        &self,
        tol: &ToleranceConfig,
    ) -> Result<(RealMatrix, RealMatrix), LagrangianError> {
        let m = self.torus.mirror_symplectic_matrix(tol)?;
        Ok((m.imag_part(), m.real_part()))
    }

    /// Antisymmetric 2n×2n coefficient matrix of the twisted symplectic
    /// form ω_τ = 2π dx̌ᵗ W dy̌ - 2π dx̌ᵗ Wτ dx̌, divided by 2π.
    fn twisted_coefficient(&self, part: &RealMatrix) -> RealMatrix {
        let n = self.dimension();
        let tau_r = self.tau.to_real();
        let s = part.mul(&tau_r).neg();
        let xx = s.sub(&s.transpose());
        RealMatrix::from_blocks(&[
            vec![&xx, part],
            vec![&part.transpose().neg(), &RealMatrix::zeros(n, n)],
        ])
    }

    /// ω_τ(ξ_j, ξ_k) on the tangent frame, divided by 2π; equals
    /// W·A - (W·A)ᵗ where A = ∂s/∂x̌ (the twist contributions cancel).
    pub fn omega_restriction(
        &self,
        x: &[f64],
        tol: &ToleranceConfig,
    ) -> Result<RealMatrix, LagrangianError> {
        let (omega_mat, _) = self.mirror_parts(tol)?;
        let frame = self.tangent_frame(x);
        let coeff = self.twisted_coefficient(&omega_mat);
        Ok(frame.transpose().mul(&coeff).mul(&frame))
    }

    /// Same for the B-field part: must vanish for a Fukaya object since the
    /// local system is flat.
    pub fn b_restriction(
        &self,
        x: &[f64],
        tol: &ToleranceConfig,
    ) -> Result<RealMatrix, LagrangianError> {
        let (_, b_mat) = self.mirror_parts(tol)?;
        let frame = self.tangent_frame(x);
        let coeff = self.twisted_coefficient(&b_mat);
        Ok(frame.transpose().mul(&coeff).mul(&frame))
    }

    /// Closed-form route for the restrictions: W·A - (W·A)ᵗ.
    pub fn restriction_closed_form(&self, part: &RealMatrix, x: &[f64]) -> RealMatrix {
        let wa = part.mul(&self.section.jacobian(x));
        wa.sub(&wa.transpose())
    }

    /// Fukaya-object criterion: both restrictions vanish at every grid
    /// point. The symmetry of ∂s/∂x̌·T is evaluated alongside as the
    /// cross-check route.
    pub fn is_fukaya_object(
        &self,
        grid: &[Vec<f64>],
        tol: &ToleranceConfig,
    ) -> Result<FukayaVerdict, LagrangianError> {
        assert!(!grid.is_empty());
        let (omega_mat, b_mat) = self.mirror_parts(tol)?;
        let omega_coeff = self.twisted_coefficient(&omega_mat);
        let b_coeff = self.twisted_coefficient(&b_mat);
        let t = self.torus.period_matrix();
        let mut witness = Witness {
            point: grid[0].clone(),
            defect: 0.0,
        };
        let mut symmetry_defect = 0.0f64;
        for x in grid {
            let frame = self.tangent_frame(x);
            let restricted_omega = frame.transpose().mul(&omega_coeff).mul(&frame);
            let restricted_b = frame.transpose().mul(&b_coeff).mul(&frame);
            let defect = restricted_omega.max_abs().max(restricted_b.max_abs());
            if defect > witness.defect {
                witness = Witness {
                    point: x.clone(),
                    defect,
                };
            }
            let at = self.section.jacobian(x).to_complex().mul(&t);
            symmetry_defect = symmetry_defect.max(at.asymmetry());
        }
        let holds = witness.defect <= tol.abs_tol;
        let symmetry_holds = symmetry_defect <= tol.abs_tol;
        Ok(FukayaVerdict {
            holds,
            witness,
            symmetry_defect,
            routes_agree: holds == symmetry_holds,
            samples: grid.len(),
        })
    }

    /// The graph shear: installs the twist τ on an untwisted Lagrangian,
    /// moving its graph pointwise by (x̌, y̌) ↦ (x̌, y̌ + τx̌). The local
    /// system pulls back to itself because x̌ is fixed.
    pub fn apply_symplectomorphism(&self, tau: IntMatrix) -> Result<Self, LagrangianError> {
        if !self.tau.is_zero() {
            return Err(LagrangianError::AlreadyTwisted(self.tau.rows_vec()));
        }
        if tau.order() != self.dimension() {
            return Err(LagrangianError::DimensionMismatch);
        }
        Ok(Self {
            torus: self.torus.clone(),
            tau,
            section: self.section.clone(),
        })
    }
}

/// Runs both mirror-dual checks — holomorphicity of the bundle object and
/// the Fukaya criterion of the graph Lagrangian — for the same
/// (section, torus, twist) and reports whether they agree.
pub fn mirror_correspondence_check(
    section: &SectionData,
    torus: &ComplexTorus,
    tau: &IntMatrix,
    grid: &[Vec<f64>],
    tol: &ToleranceConfig,
) -> Result<CorrespondenceReport, LagrangianError> {
    let bundle = BundleObject::new(torus.clone(), tau.clone(), section.clone())
        .map_err(|_| LagrangianError::DimensionMismatch)?;
    let lagrangian = GraphLagrangian::new(torus.clone(), tau.clone(), section.clone())?;
    let holomorphic = bundle.is_holomorphic(grid, tol).holds;
    let fukaya = lagrangian.is_fukaya_object(grid, tol)?.holds;
    Ok(CorrespondenceReport {
        holomorphic,
        fukaya,
        agree: holomorphic == fukaya,
    })
}

/// 2π-scaled local-system connection coefficient: d - 2πi qᵗdx̌ has
/// dx̌-coefficient row -2π q.
pub fn local_system_coefficient(section: &SectionData) -> Vec<f64> {
    section.holonomy().iter().map(|&q| -TAU * q).collect()
}
