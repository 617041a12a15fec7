//! Kähler data on the torus, the dHYM phase of a bundle object, the
//! special-Lagrangian phase of a graph Lagrangian, and the equivalence
//! check relating them.
//!
//! Both defining equations are invariant under θ ↦ θ + π, so all phases are
//! taken mod π. The dHYM check runs against the real Kähler form ω — the
//! twist enters through the curvature convention, not through ω.
//!
//! The two sides are built around a two-route discipline: the dHYM
//! top-degree coefficient is computed both by brute-force wedge powers and
//! by the closed-form determinant, and the sLag holomorphic-volume value is
//! computed by two determinant routes; route disagreement is an internal
//! consistency failure, never silently ignored.

use crate::bundle::BundleObject;
use crate::exterior::{top_coefficient, two_form_from_matrix, ExteriorError};
use crate::gcs::ComplexTorus;
use crate::lagrangian::GraphLagrangian;
use crate::matrix::{
    is_positive_definite, phase_distance_mod_pi, phase_mod_pi, ComplexMatrix, IntMatrix,
    MatrixError, RealMatrix, ToleranceConfig,
};
use num_complex::Complex64;
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum PhaseError {
    #[error("object is not holomorphic (worst integrability defect {defect:.3e})")]
    NotHolomorphic { defect: f64 },
    #[error("graph is not a Fukaya object (worst restriction defect {defect:.3e})")]
    NotLagrangian { defect: f64 },
    #[error("mirror complex structure undefined: det(-τ - iYᵗ) ≈ 0 (|det| = {det_norm:.3e})")]
    MirrorUndefined { det_norm: f64 },
    #[error("route disagreement: wedge/direct {a:?} vs closed form {b:?}")]
    RouteDisagreement { a: Complex64, b: Complex64 },
    #[error("phase indeterminate: {0}")]
    Matrix(#[from] MatrixError),
    #[error("exterior algebra error: {0}")]
    Exterior(#[from] ExteriorError),
    #[error("lagrangian error: {0}")]
    Lagrangian(String),
}

/// Kähler structure matrices of the torus on the basis (∂/∂x, ∂/∂y):
/// the symplectic form, the metric, and the complex structure.
#[derive(Debug, Clone, PartialEq)]
pub struct KahlerData {
    pub omega: RealMatrix,
    pub metric: RealMatrix,
    pub complex_structure: RealMatrix,
}

/// ω = 2π(dxᵗY dy + dyᵗXᵗY dy), g = 2π(dxᵗdx + dxᵗX dy + dyᵗXᵗdx +
/// dyᵗ(XᵗX + YᵗY)dy), J the vector-field block of the complex structure.
pub fn kahler_data(torus: &ComplexTorus, tol: &ToleranceConfig) -> Result<KahlerData, PhaseError> {
    let n = torus.dimension();
    let x = torus.re();
    let y = torus.im();
    let xt = x.transpose();
    let yt = y.transpose();
    let zero = RealMatrix::zeros(n, n);

    let omega =
        RealMatrix::from_blocks(&[vec![&zero, y], vec![&yt.neg(), &xt.mul(y).sub(&yt.mul(x))]])
            .scale(TAU);
    let metric = RealMatrix::from_blocks(&[
        vec![&RealMatrix::identity(n), x],
        vec![&xt, &xt.mul(x).add(&yt.mul(y))],
    ])
    .scale(TAU);
    let y_inv = y.inverse(tol).map_err(PhaseError::Matrix)?;
    let complex_structure = RealMatrix::from_blocks(&[
        vec![&x.mul(&y_inv).neg(), &y.add(&x.mul(&y_inv).mul(x)).neg()],
        vec![&y_inv, &y_inv.mul(x)],
    ]);
    Ok(KahlerData {
        omega,
        metric,
        complex_structure,
    })
}

/// Outcome of the Kähler-structure verification.
#[derive(Debug, Clone, PartialEq)]
pub struct KahlerReport {
    /// Defect of Ω = 2π L·[[0,Y],[-Yᵗ,0]]·U with unipotent L, U.
    pub omega_factorization_defect: f64,
    pub omega_invertible: bool,
    /// Defect of G = 2π L·[[I,0],[0,YᵗY]]·Lᵗ.
    pub metric_factorization_defect: f64,
    pub metric_positive_definite: bool,
    /// Max entry of |JᵗG - Ω|, the coordinate form of ω(V,W) = g(JV,W).
    pub compatibility_defect: f64,
    pub pass: bool,
}

pub fn kahler_verify(
    torus: &ComplexTorus,
    tol: &ToleranceConfig,
) -> Result<KahlerReport, PhaseError> {
    let n = torus.dimension();
    let x = torus.re();
    let y = torus.im();
    let data = kahler_data(torus, tol)?;
    let zero = RealMatrix::zeros(n, n);
    let id = RealMatrix::identity(n);

    let lower = RealMatrix::from_blocks(&[vec![&id, &zero], vec![&x.transpose(), &id]]);
    let upper = RealMatrix::from_blocks(&[vec![&id, x], vec![&zero, &id]]);
    let pivot = RealMatrix::from_blocks(&[vec![&zero, y], vec![&y.transpose().neg(), &zero]]);
    let omega_factorization_defect = lower
        .mul(&pivot)
        .mul(&upper)
        .scale(TAU)
        .max_abs_diff(&data.omega);
    let omega_invertible = y.determinant().abs() > tol.abs_tol;

    let yty = y.transpose().mul(y);
    let core = RealMatrix::from_blocks(&[vec![&id, &zero], vec![&zero, &yty]]);
    let metric_factorization_defect = lower
        .mul(&core)
        .mul(&lower.transpose())
        .scale(TAU)
        .max_abs_diff(&data.metric);
    let metric_sym = data.metric.add(&data.metric.transpose()).scale(0.5);
    let metric_positive_definite =
        is_positive_definite(&metric_sym, tol).map_err(PhaseError::Matrix)?;

    let compatibility_defect = data
        .complex_structure
        .transpose()
        .mul(&data.metric)
        .max_abs_diff(&data.omega);

    let pass = omega_factorization_defect <= 1e-12 * data.omega.max_abs().max(1.0)
        && omega_invertible
        && metric_factorization_defect <= 1e-12 * data.metric.max_abs().max(1.0)
        && metric_positive_definite
        && compatibility_defect <= 1e-12 * data.omega.max_abs().max(1.0);
    Ok(KahlerReport {
        omega_factorization_defect,
        omega_invertible,
        metric_factorization_defect,
        metric_positive_definite,
        compatibility_defect,
        pass,
    })
}

/// Top-degree data of (ω - F)ⁿ at one point, by both routes.
#[derive(Debug, Clone, PartialEq)]
pub struct DhymTop {
    pub via_wedge: Complex64,
    pub via_closed_form: Complex64,
}

/// Computes the top coefficient of (ω - F)ⁿ with respect to
/// dx₁∧dy₁∧⋯∧dxₙ∧dyₙ by brute-force wedge powers, and compares it against
/// the closed form (2πi)ⁿ n! det(-iY + Aᵗ) with A = ∂s/∂x.
pub fn dhym_top(
    obj: &BundleObject,
    x: &[f64],
    tol: &ToleranceConfig,
) -> Result<DhymTop, PhaseError> {
    dhym_top_parts(obj.torus(), &obj.section().jacobian(x), tol)
}

/// The same two-route computation with the slope matrix A supplied
/// directly, so the identity can be exercised on arbitrary real slopes.
pub fn dhym_top_parts(
    torus: &ComplexTorus,
    slope: &RealMatrix,
    tol: &ToleranceConfig,
) -> Result<DhymTop, PhaseError> {
    let n = torus.dimension();
    let kahler = kahler_data(torus, tol)?;
    let omega_c = kahler.omega.to_complex();
    // Curvature coefficient: entry (dx_i, dy_j) = -2πi A_{ji}.
    let mut curvature = ComplexMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let coeff = Complex64::new(0.0, -TAU) * slope.get(j, i);
            curvature.set(i, n + j, coeff);
            curvature.set(n + j, i, -coeff);
        }
    }
    let difference = omega_c.sub(&curvature);
    let form = two_form_from_matrix(&difference, tol)?;
    let via_wedge = top_coefficient(&form.power(n)?)?;

    let jac_t = slope.transpose().to_complex();
    let miy = ComplexMatrix::from_fn(n, n, |i, j| Complex64::new(0.0, -torus.im().get(i, j)));
    let factorial: f64 = (1..=n).map(|k| k as f64).product();
    let prefactor = Complex64::new(0.0, TAU).powu(n as u32) * factorial;
    let via_closed_form = prefactor * miy.add(&jac_t).determinant();

    let gap = (via_wedge - via_closed_form).norm();
    if gap > tol.rel_tol * via_closed_form.norm().max(1.0) {
        return Err(PhaseError::RouteDisagreement {
            a: via_wedge,
            b: via_closed_form,
        });
    }
    Ok(DhymTop {
        via_wedge,
        via_closed_form,
    })
}

/// Phase-constancy result over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseResult {
    pub exists: bool,
    /// Representative phase in [0, π) when it exists.
    pub theta: Option<f64>,
    /// Largest circular mod-π distance from the first grid point's phase.
    pub max_phase_spread: f64,
    pub samples: usize,
}

fn phase_result_from_values(
    values: &[Complex64],
    tol: &ToleranceConfig,
) -> Result<PhaseResult, PhaseError> {
    let thetas: Vec<f64> = values
        .iter()
        .map(|&v| phase_mod_pi(v, tol))
        .collect::<Result<_, _>>()?;
    let reference = thetas[0];
    let max_phase_spread = thetas
        .iter()
        .map(|&t| phase_distance_mod_pi(t, reference))
        .fold(0.0, f64::max);
    let exists = max_phase_spread <= tol.phase_tol;
    Ok(PhaseResult {
        exists,
        theta: exists.then_some(reference),
        max_phase_spread,
        samples: values.len(),
    })
}

/// dHYM phase of a holomorphic object: the phase of the top coefficient
/// must be constant over the grid.
pub fn dhym_phase(
    obj: &BundleObject,
    grid: &[Vec<f64>],
    tol: &ToleranceConfig,
) -> Result<PhaseResult, PhaseError> {
    let verdict = obj.is_holomorphic(grid, tol);
    if !verdict.holds {
        return Err(PhaseError::NotHolomorphic {
            defect: verdict.witness.defect,
        });
    }
    let values: Vec<Complex64> = grid
        .iter()
        .map(|x| dhym_top(obj, x, tol).map(|t| t.via_closed_form))
        .collect::<Result<_, _>>()?;
    phase_result_from_values(&values, tol)
}

/// Holomorphic-volume value Ω̌(ξ¹,…,ξⁿ) at one point, by both determinant
/// routes.
#[derive(Debug, Clone, PartialEq)]
pub struct SlagValue {
    pub via_closed_form: Complex64,
    pub via_direct_determinant: Complex64,
}

/// The mirror period denominator -τ - iYᵗ.
pub fn mirror_denominator(torus: &ComplexTorus, tau: &IntMatrix) -> ComplexMatrix {
    ComplexMatrix::from_real_imag(&tau.to_real().neg(), &torus.im().transpose().neg())
}

pub fn slag_value(
    lag: &GraphLagrangian,
    x: &[f64],
    tol: &ToleranceConfig,
) -> Result<SlagValue, PhaseError> {
    slag_value_parts(lag.torus(), lag.twist(), &lag.section().jacobian(x), tol)
}

/// The same two-route computation with the slope matrix supplied directly.
pub fn slag_value_parts(
    torus: &ComplexTorus,
    tau: &IntMatrix,
    slope: &RealMatrix,
    tol: &ToleranceConfig,
) -> Result<SlagValue, PhaseError> {
    let n = torus.dimension();
    let denom = mirror_denominator(torus, tau);
    let det_denom = denom.determinant();
    if det_denom.norm() <= tol.abs_tol {
        return Err(PhaseError::MirrorUndefined {
            det_norm: det_denom.norm(),
        });
    }
    let jac = slope.to_complex();
    let miy_t = ComplexMatrix::from_fn(n, n, |i, j| Complex64::new(0.0, -torus.im().get(j, i)));
    let via_closed_form = miy_t.add(&jac).determinant() / det_denom;

    let denom_inv = denom.inverse(tol).map_err(PhaseError::Matrix)?;
    let shifted = jac.add(&tau.to_real().to_complex());
    let via_direct_determinant = ComplexMatrix::identity(n)
        .add(&denom_inv.mul(&shifted))
        .determinant();

    let gap = (via_closed_form - via_direct_determinant).norm();
    if gap > tol.rel_tol * via_closed_form.norm().max(1.0) {
        return Err(PhaseError::RouteDisagreement {
            a: via_direct_determinant,
            b: via_closed_form,
        });
    }
    Ok(SlagValue {
        via_closed_form,
        via_direct_determinant,
    })
}

/// Special-Lagrangian phase of a Fukaya object: phase constancy of the
/// holomorphic-volume values over the grid.
pub fn slag_phase(
    lag: &GraphLagrangian,
    grid: &[Vec<f64>],
    tol: &ToleranceConfig,
) -> Result<PhaseResult, PhaseError> {
    let verdict = lag
        .is_fukaya_object(grid, tol)
        .map_err(|e| PhaseError::Lagrangian(e.to_string()))?;
    if !verdict.holds {
        return Err(PhaseError::NotLagrangian {
            defect: verdict.witness.defect,
        });
    }
    let values: Vec<Complex64> = grid
        .iter()
        .map(|x| slag_value(lag, x, tol).map(|v| v.via_closed_form))
        .collect::<Result<_, _>>()?;
    phase_result_from_values(&values, tol)
}

/// Outcome of the phase-equivalence check for one mirror pair of objects.
#[derive(Debug, Clone, PartialEq)]
pub enum EquivalenceOutcome {
    /// det(-τ - iYᵗ) ≈ 0: the sLag side has no mirror complex structure.
    MirrorUndefined {
        det_norm: f64,
    },
    /// Both checkers reject at their preconditions; the equivalence holds
    /// vacuously.
    BothRejected {
        holomorphy_defect: f64,
        lagrangian_defect: f64,
    },
    /// Exactly one side rejected its precondition: a correspondence
    /// violation (must not happen for shared section data).
    PreconditionMismatch {
        detail: String,
    },
    Checked(EquivalenceReport),
}

/// Phase comparison when both sides pass their preconditions.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub dhym: PhaseResult,
    pub slag: PhaseResult,
    pub existence_agree: bool,
    /// θ_dHYM - θ_sLag mod π, when both phases exist.
    pub delta: Option<f64>,
    /// The x-independent constant arg(det(-τ-iYᵗ)⁻¹) - arg((2πi)ⁿ) mod π.
    pub delta_expected: f64,
    pub delta_matches: Option<bool>,
    /// Whether the two phases literally coincide (Δ = 0 mod π).
    pub delta_is_zero: Option<bool>,
    /// Spread of the pointwise offset across the grid.
    pub delta_spread: Option<f64>,
}

/// The constant offset between the two phases: both sides share the factor
/// det(-iY + Aᵗ), so their phases differ by the fixed arguments of (2πi)ⁿ
/// and det(-τ - iYᵗ)⁻¹.
pub fn expected_phase_offset(
    torus: &ComplexTorus,
    tau: &IntMatrix,
    tol: &ToleranceConfig,
) -> Result<f64, PhaseError> {
    let n = torus.dimension();
    let denom = mirror_denominator(torus, tau);
    let det = denom.determinant();
    if det.norm() <= tol.abs_tol {
        return Err(PhaseError::MirrorUndefined {
            det_norm: det.norm(),
        });
    }
    let det_inv_arg = (Complex64::new(1.0, 0.0) / det).arg();
    let two_pi_i_n_arg = Complex64::new(0.0, TAU).powu(n as u32).arg();
    Ok((det_inv_arg - two_pi_i_n_arg).rem_euclid(std::f64::consts::PI))
}

/// Runs both phase checkers on the mirror pair built from shared
/// (section, torus, twist) data and compares their verdicts and phases.
pub fn equivalence_check(
    section: &crate::section::SectionData,
    torus: &ComplexTorus,
    tau: &IntMatrix,
    grid: &[Vec<f64>],
    tol: &ToleranceConfig,
) -> Result<EquivalenceOutcome, PhaseError> {
    let denom_det = mirror_denominator(torus, tau).determinant();
    if denom_det.norm() <= tol.abs_tol {
        return Ok(EquivalenceOutcome::MirrorUndefined {
            det_norm: denom_det.norm(),
        });
    }
    let bundle = BundleObject::new(torus.clone(), tau.clone(), section.clone())
        .map_err(|e| PhaseError::Lagrangian(e.to_string()))?;
    let lagrangian = GraphLagrangian::new(torus.clone(), tau.clone(), section.clone())
        .map_err(|e| PhaseError::Lagrangian(e.to_string()))?;

    let dhym = dhym_phase(&bundle, grid, tol);
    let slag = slag_phase(&lagrangian, grid, tol);
    match (dhym, slag) {
        (
            Err(PhaseError::NotHolomorphic { defect: hd }),
            Err(PhaseError::NotLagrangian { defect: ld }),
        ) => Ok(EquivalenceOutcome::BothRejected {
            holomorphy_defect: hd,
            lagrangian_defect: ld,
        }),
        (Err(PhaseError::NotHolomorphic { defect }), Ok(_)) => {
            Ok(EquivalenceOutcome::PreconditionMismatch {
                detail: format!("bundle rejected (defect {defect:.3e}) but graph accepted"),
            })
        }
        (Ok(_), Err(PhaseError::NotLagrangian { defect })) => {
            Ok(EquivalenceOutcome::PreconditionMismatch {
                detail: format!("graph rejected (defect {defect:.3e}) but bundle accepted"),
            })
        }
        (Err(e), _) => Err(e),
        (_, Err(e)) => Err(e),
        (Ok(dhym), Ok(slag)) => {
            let delta_expected = expected_phase_offset(torus, tau, tol)?;
            let (delta, delta_matches, delta_is_zero, delta_spread) = if dhym.exists && slag.exists
            {
                let mut offsets = Vec::with_capacity(grid.len());
                for x in grid {
                    let top = dhym_top(&bundle, x, tol)?.via_closed_form;
                    let vol = slag_value(&lagrangian, x, tol)?.via_closed_form;
                    let td = phase_mod_pi(top, tol)?;
                    let ts = phase_mod_pi(vol, tol)?;
                    offsets.push((td - ts).rem_euclid(std::f64::consts::PI));
                }
                let delta = offsets[0];
                let spread = offsets
                    .iter()
                    .map(|&d| phase_distance_mod_pi(d, delta))
                    .fold(0.0, f64::max);
                let matches = phase_distance_mod_pi(delta, delta_expected) <= 1e-9;
                let is_zero = phase_distance_mod_pi(delta, 0.0) <= tol.phase_tol;
                (Some(delta), Some(matches), Some(is_zero), Some(spread))
            } else {
                (None, None, None, None)
            };
            Ok(EquivalenceOutcome::Checked(EquivalenceReport {
                existence_agree: dhym.exists == slag.exists,
                dhym,
                slag,
                delta,
                delta_expected,
                delta_matches,
                delta_is_zero,
                delta_spread,
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::sample_grid;
    use crate::section::{FourierMode, SectionData};
    use std::f64::consts::PI;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn torus_2d() -> ComplexTorus {
        ComplexTorus::new(
            RealMatrix::from_rows(vec![vec![0.0, 0.5], vec![0.5, 0.0]]).unwrap(),
            RealMatrix::identity(2),
            &tol(),
        )
        .unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kahler_data_square_torus() {
        let data = kahler_data(&ComplexTorus::square(2), &tol()).unwrap();
        // X = 0: Ω = 2π[[0,I],[-I,0]], G = 2π·Id, J = [[0,-I],[I,0]].
        let id2 = RealMatrix::identity(2);
        assert!(data.omega.block(0, 2, 2, 2).max_abs_diff(&id2.scale(TAU)) < 1e-15);
        assert!(
            data.metric
                .max_abs_diff(&RealMatrix::identity(4).scale(TAU))
                < 1e-15
        );
        assert!(
            data.complex_structure
                .block(0, 2, 2, 2)
                .max_abs_diff(&id2.neg())
                < 1e-15
        );
        let report = kahler_verify(&ComplexTorus::square(2), &tol()).unwrap();
        assert!(report.pass);
    }

    #[test]
    fn kahler_verify_on_skew_torus() {
        let torus = ComplexTorus::new(
            RealMatrix::from_rows(vec![vec![0.4, -0.3], vec![0.9, 0.2]]).unwrap(),
            RealMatrix::from_rows(vec![vec![1.2, 0.3], vec![-0.1, 0.9]]).unwrap(),
            &tol(),
        )
        .unwrap();
        let report = kahler_verify(&torus, &tol()).unwrap();
        assert!(report.pass, "{report:?}");
        assert!(report.compatibility_defect < 1e-12);
    }

    #[test]
    fn kahler_compatibility_detects_perturbation() {
        let torus = torus_2d();
        let data = kahler_data(&torus, &tol()).unwrap();
        let mut j = data.complex_structure.clone();
        j.set(0, 1, j.get(0, 1) + 1e-3);
        let defect = j.transpose().mul(&data.metric).max_abs_diff(&data.omega);
        assert!(defect > 1e-4);
    }

    #[test]
    fn dhym_top_scalar_case() {
        // n = 1, T = i, s = 0: closed form (2πi)·det(-i) = 2π.
        let obj = BundleObject::new(
            ComplexTorus::square(1),
            IntMatrix::zeros(1),
            SectionData::zero(1),
        )
        .unwrap();
        let top = dhym_top(&obj, &[0.0], &tol()).unwrap();
        assert!((top.via_closed_form - c(TAU, 0.0)).norm() < 1e-12);
        assert!((top.via_wedge - c(TAU, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn dhym_top_with_unit_slope() {
        // n = 1, T = i, a = 1: (2πi)(1 - i); phase is 3π/4.
        let obj = BundleObject::new(
            ComplexTorus::square(1),
            IntMatrix::zeros(1),
            SectionData::affine(IntMatrix::identity(1), vec![0.0], vec![0.0]).unwrap(),
        )
        .unwrap();
        let top = dhym_top(&obj, &[0.3], &tol()).unwrap();
        let expected = c(0.0, TAU) * c(1.0, -1.0);
        assert!((top.via_closed_form - expected).norm() < 1e-12);
        let theta = phase_mod_pi(top.via_closed_form, &tol()).unwrap();
        assert!((theta - 3.0 * PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn dhym_phase_affine_has_zero_spread() {
        let obj = BundleObject::new(
            torus_2d(),
            IntMatrix::zeros(2),
            SectionData::affine(IntMatrix::identity(2), vec![0.1, 0.2], vec![0.0; 2]).unwrap(),
        )
        .unwrap();
        let grid = sample_grid(obj.section(), 9);
        let result = dhym_phase(&obj, &grid, &tol()).unwrap();
        assert!(result.exists);
        assert!(result.max_phase_spread < 1e-14);
    }

    #[test]
    fn dhym_phase_zero_section_square_torus() {
        let obj = BundleObject::new(
            ComplexTorus::square(1),
            IntMatrix::zeros(1),
            SectionData::zero(1),
        )
        .unwrap();
        let grid = sample_grid(obj.section(), 9);
        let result = dhym_phase(&obj, &grid, &tol()).unwrap();
        assert!(result.exists);
        assert!((result.theta.unwrap() - 0.0).abs() < 1e-12);
    }

    #[test]
    fn dhym_phase_rejects_nonholomorphic() {
        let obj = BundleObject::new(
            torus_2d(),
            IntMatrix::zeros(2),
            SectionData::affine(
                IntMatrix::from_rows(vec![vec![0, 1], vec![0, 0]]).unwrap(),
                vec![0.0; 2],
                vec![0.0; 2],
            )
            .unwrap(),
        )
        .unwrap();
        let grid = sample_grid(obj.section(), 9);
        assert!(matches!(
            dhym_phase(&obj, &grid, &tol()),
            Err(PhaseError::NotHolomorphic { .. })
        ));
    }

    /// Non-affine but holomorphic: mode amplitudes parallel to k with k an
    /// eigenvector of the symmetric winding keep A(x)·T symmetric while the
    /// determinant's phase wanders.
    fn wandering_phase_object() -> BundleObject {
        BundleObject::new(
            ComplexTorus::square(1),
            IntMatrix::zeros(1),
            SectionData::new(
                IntMatrix::identity(1),
                vec![0.0],
                vec![FourierMode::new(vec![1], vec![0.05], vec![0.0]).unwrap()],
                vec![0.0],
            )
            .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn dhym_phase_nonaffine_holomorphic_rejected_for_spread() {
        let obj = wandering_phase_object();
        let grid = sample_grid(obj.section(), 9);
        assert!(obj.is_holomorphic(&grid, &tol()).holds);
        let result = dhym_phase(&obj, &grid, &tol()).unwrap();
        assert!(!result.exists);
        assert!(result.max_phase_spread > 1e-3);
    }

    #[test]
    fn slag_value_trivial_case() {
        // τ = 0, T = iI, s = 0: det(-iI)⁻¹·det(-iI) = 1.
        let lag = GraphLagrangian::new(
            ComplexTorus::square(2),
            IntMatrix::zeros(2),
            SectionData::zero(2),
        )
        .unwrap();
        let v = slag_value(&lag, &[0.0, 0.0], &tol()).unwrap();
        assert!((v.via_closed_form - c(1.0, 0.0)).norm() < 1e-14);
        assert!((v.via_direct_determinant - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn slag_value_rejects_singular_denominator() {
        // τ = [[0,1],[-1,0]] with Y = I makes -τ - iYᵗ singular.
        let lag = GraphLagrangian::new(
            ComplexTorus::square(2),
            IntMatrix::from_rows(vec![vec![0, 1], vec![-1, 0]]).unwrap(),
            SectionData::zero(2),
        )
        .unwrap();
        assert!(matches!(
            slag_value(&lag, &[0.0, 0.0], &tol()),
            Err(PhaseError::MirrorUndefined { .. })
        ));
    }

    #[test]
    fn transpose_determinant_identity() {
        // det(-iY + Aᵗ) = det(-iYᵗ + A) for skew Y and arbitrary A.
        let y = RealMatrix::from_rows(vec![vec![1.3, 0.4], vec![-0.2, 0.8]]).unwrap();
        let a = RealMatrix::from_rows(vec![vec![2.0, -1.0], vec![3.0, 0.5]]).unwrap();
        let lhs = ComplexMatrix::from_fn(2, 2, |i, j| c(a.get(j, i), -y.get(i, j))).determinant();
        let rhs = ComplexMatrix::from_fn(2, 2, |i, j| c(a.get(i, j), -y.get(j, i))).determinant();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn equivalence_scalar_case_has_zero_offset() {
        // n = 1, τ = 0, T = i, s = 0: θ_dHYM = θ_sLag = 0 and Δ = 0.
        let torus = ComplexTorus::square(1);
        let section = SectionData::zero(1);
        let grid = sample_grid(&section, 9);
        let outcome =
            equivalence_check(&section, &torus, &IntMatrix::zeros(1), &grid, &tol()).unwrap();
        match outcome {
            EquivalenceOutcome::Checked(report) => {
                assert!(report.existence_agree);
                assert!(report.dhym.exists && report.slag.exists);
                assert!((report.dhym.theta.unwrap() - 0.0).abs() < 1e-12);
                assert!((report.slag.theta.unwrap() - 0.0).abs() < 1e-12);
                assert_eq!(report.delta_matches, Some(true));
                assert_eq!(report.delta_is_zero, Some(true));
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn equivalence_rejects_on_both_sides() {
        let torus = torus_2d();
        let section = SectionData::affine(
            IntMatrix::from_rows(vec![vec![0, 1], vec![0, 0]]).unwrap(),
            vec![0.0; 2],
            vec![0.0; 2],
        )
        .unwrap();
        let grid = sample_grid(&section, 9);
        let outcome =
            equivalence_check(&section, &torus, &IntMatrix::zeros(2), &grid, &tol()).unwrap();
        assert!(matches!(outcome, EquivalenceOutcome::BothRejected { .. }));
    }

    #[test]
    fn equivalence_surfaces_mirror_undefined() {
        let torus = ComplexTorus::square(2);
        let tau = IntMatrix::from_rows(vec![vec![0, 1], vec![-1, 0]]).unwrap();
        let section = SectionData::zero(2);
        let grid = sample_grid(&section, 9);
        let outcome = equivalence_check(&section, &torus, &tau, &grid, &tol()).unwrap();
        assert!(matches!(
            outcome,
            EquivalenceOutcome::MirrorUndefined { .. }
        ));
    }

    #[test]
    fn nonaffine_wandering_object_rejected_by_both_phase_checkers() {
        let obj = wandering_phase_object();
        let lag = GraphLagrangian::new(
            obj.torus().clone(),
            obj.twist().clone(),
            obj.section().clone(),
        )
        .unwrap();
        let grid = sample_grid(obj.section(), 9);
        let d = dhym_phase(&obj, &grid, &tol()).unwrap();
        let s = slag_phase(&lag, &grid, &tol()).unwrap();
        assert!(!d.exists && !s.exists);
    }
}
