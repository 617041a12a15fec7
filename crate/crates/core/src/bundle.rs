//! The complex-geometry side: line bundles E on the (possibly gerby
//! deformed) torus given by quasi-periodic section data, their twisted
//! connections, curvature, (0,2)-curvature part, and the holomorphicity
//! criterion.
//!
//! The connection 1-form is -2πi(s(x)ᵗ + qᵗT + xᵗτᵗ)dy; its curvature
//! relative to the gerbe 1-connection is -2πi dxᵗ(∂s/∂x)ᵗdy, independent
//! of the twist. Holomorphicity (vanishing (0,2)-part) is equivalent to
//! symmetry of ∂s/∂x(x)·T at every point, checked on the deterministic
//! sample grid.

use crate::gcs::ComplexTorus;
use crate::matrix::{ComplexMatrix, IntMatrix, ToleranceConfig};
use crate::section::SectionData;
use num_complex::Complex64;
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ObjectError {
    #[error("torus, twist and section dimensions disagree ({torus}, {twist}, {section})")]
    DimensionMismatch {
        torus: usize,
        twist: usize,
        section: usize,
    },
}

/// Line bundle with (twisted) connection, determined by a complex torus, an
/// integer twist τ (zero for the undeformed case) and section data.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleObject {
    torus: ComplexTorus,
    tau: IntMatrix,
    section: SectionData,
}

/// Worst grid point of a "for all x" check.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub point: Vec<f64>,
    pub defect: f64,
}

/// Outcome of the holomorphicity check.
#[derive(Debug, Clone, PartialEq)]
pub struct HolomorphyVerdict {
    pub holds: bool,
    pub witness: Witness,
    pub samples: usize,
}

/// Outcome of the transition-compatibility check.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionCompatReport {
    pub axes_checked: usize,
    pub samples_per_axis: usize,
    pub max_defect: f64,
    pub pass: bool,
}

impl BundleObject {
    pub fn new(
        torus: ComplexTorus,
        tau: IntMatrix,
        section: SectionData,
    ) -> Result<Self, ObjectError> {
        if torus.dimension() != tau.order() || torus.dimension() != section.dimension() {
            return Err(ObjectError::DimensionMismatch {
                torus: torus.dimension(),
                twist: tau.order(),
                section: section.dimension(),
            });
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

    /// dy-coefficient row of the connection form:
    /// -2πi(s(x)ᵗ + qᵗT + xᵗτᵗ).
    pub fn connection_form(&self, x: &[f64]) -> Vec<Complex64> {
        let n = self.dimension();
        let s = self.section.eval(x);
        let t = self.torus.period_matrix();
        let q = self.section.holonomy();
        (0..n)
            .map(|col| {
                // (qᵗT)_col = Σ_r q_r T_{r,col}
                let mut qt = Complex64::new(0.0, 0.0);
                for r in 0..n {
                    qt += q[r] * t.get(r, col);
                }
                // (xᵗτᵗ)_col = Σ_r x_r τ_{col,r}
                let mut xtau = 0.0;
                for r in 0..n {
                    xtau += x[r] * self.tau.get(col, r) as f64;
                }
                Complex64::new(0.0, -TAU) * (s[col] + qt + xtau)
            })
            .collect()
    }

    /// Transition factor e^{2πi a_jᵗ y} across the x_j wraparound.
    pub fn transition_factor(&self, axis: usize, y: &[f64]) -> Complex64 {
        assert!(axis < self.dimension());
        let a_col = self.section.winding().column(axis);
        let dot: f64 = a_col.iter().zip(y).map(|(&ai, &yi)| ai as f64 * yi).sum();
        Complex64::from_polar(1.0, TAU * dot)
    }

    /// Antisymmetric 2n×2n coefficient matrix (basis dx, dy) of the
    /// curvature -2πi dxᵗ(∂s/∂x)ᵗdy relative to the gerbe 1-connection.
    pub fn curvature(&self, x: &[f64]) -> ComplexMatrix {
        let n = self.dimension();
        let jac = self.section.jacobian(x);
        let mut omega = ComplexMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let coeff = Complex64::new(0.0, -TAU) * jac.get(j, i);
                omega.set(i, n + j, coeff);
                omega.set(n + j, i, -coeff);
            }
        }
        omega
    }

    /// Coefficient matrix of the dz̄∧dz̄ part of the curvature:
    /// the antisymmetrization M - Mᵗ of
    /// M = 2πi((T - T̄)⁻¹)ᵗ(∂s/∂x·T)ᵗ(T - T̄)⁻¹; vanishes iff ∂s/∂x·T is
    /// symmetric.
    pub fn zero_two_part(&self, x: &[f64], tol: &ToleranceConfig) -> ComplexMatrix {
        let n = self.dimension();
        let t = self.torus.period_matrix();
        // T - T̄ = 2iY is invertible because Y is.
        let w = ComplexMatrix::from_fn(n, n, |i, j| {
            Complex64::new(0.0, 2.0 * self.torus.im().get(i, j))
        })
        .inverse(tol)
        .expect("2iY invertible for a valid torus");
        let at = self.section.jacobian(x).to_complex().mul(&t);
        let m = w
            .transpose()
            .mul(&at.transpose())
            .mul(&w)
            .scale(Complex64::new(0.0, TAU));
        m.sub(&m.transpose())
    }

    /// Asymmetry of ∂s/∂x(x)·T at one point.
    pub fn integrability_defect(&self, x: &[f64]) -> f64 {
        self.section
            .jacobian(x)
            .to_complex()
            .mul(&self.torus.period_matrix())
            .asymmetry()
    }

    /// Holomorphicity: ∂s/∂x(x)·T symmetric at every grid point. The
    /// witness is the worst point in grid order.
    pub fn is_holomorphic(&self, grid: &[Vec<f64>], tol: &ToleranceConfig) -> HolomorphyVerdict {
        assert!(!grid.is_empty());
        let mut witness = Witness {
            point: grid[0].clone(),
            defect: 0.0,
        };
        for x in grid {
            let defect = self.integrability_defect(x);
            if defect > witness.defect {
                witness = Witness {
                    point: x.clone(),
                    defect,
                };
            }
        }
        HolomorphyVerdict {
            holds: witness.defect <= tol.abs_tol,
            witness,
            samples: grid.len(),
        }
    }

    /// Checks the twisted connection against the bundle transition factors
    /// and the gerbe transition forms on every x_j wraparound overlap:
    /// conn(x + e_j) - conn(x) + 2πi a_jᵗ + 2πi τ_colⱼᵗ = 0, sampled across
    /// the overlap strip.
    pub fn transition_compat_report(
        &self,
        gerbe_twist: &IntMatrix,
        tol: &ToleranceConfig,
    ) -> TransitionCompatReport {
        let n = self.dimension();
        let strip = [-1.0 / 48.0, 0.0, 1.0 / 48.0];
        let transverse = [0.0, 1.0 / 3.0, 2.0 / 3.0];
        let mut max_defect = 0.0f64;
        let mut samples = 0usize;
        for axis in 0..n {
            let a_col = self.section.winding().column(axis);
            let tau_col = gerbe_twist.column(axis);
            // Sample the strip around x_axis ≡ 0 with the other coordinates
            // swept over the torus.
            let sweep = transverse_points(n, axis, &transverse);
            for base in &sweep {
                for &offset in &strip {
                    let mut x = base.clone();
                    x[axis] = offset;
                    let here = self.connection_form(&x);
                    let mut shifted = x.clone();
                    shifted[axis] += 1.0;
                    let there = self.connection_form(&shifted);
                    let mut defect = 0.0f64;
                    for col in 0..n {
                        let expected_jump =
                            Complex64::new(0.0, -TAU) * (a_col[col] as f64 + tau_col[col] as f64);
                        defect = defect.max((there[col] - here[col] - expected_jump).norm());
                    }
                    max_defect = max_defect.max(defect);
                    samples += 1;
                }
            }
        }
        TransitionCompatReport {
            axes_checked: n,
            samples_per_axis: samples / n.max(1),
            max_defect,
            pass: max_defect <= tol.abs_tol,
        }
    }

    /// Transition compatibility against the object's own twist.
    pub fn verify_transition_compat(&self, tol: &ToleranceConfig) -> TransitionCompatReport {
        self.transition_compat_report(&self.tau, tol)
    }
}

fn transverse_points(n: usize, axis: usize, values: &[f64]) -> Vec<Vec<f64>> {
    if n == 1 {
        return vec![vec![0.0]];
    }
    let others: Vec<usize> = (0..n).filter(|&i| i != axis).collect();
    let total = values.len().pow(others.len() as u32);
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut point = vec![0.0; n];
        let mut rest = code;
        for &slot in others.iter().rev() {
            point[slot] = values[rest % values.len()];
            rest /= values.len();
        }
        out.push(point);
    }
    out
}
