//! Quasi-periodic sections ℝⁿ → ℝⁿ.
//!
//! A section is stored as an integer-affine map plus a finite Fourier
//! series: s(x) = a·x + c + Σ_k (u_k cos(2π k·x) + v_k sin(2π k·x)). This
//! is the only closed-form family satisfying s(x + e_j) = s(x) + a_j
//! exactly, so quasi-periodicity is enforced by the representation itself.
//!
//! Mode keys k are nonzero integer vectors restricted to a canonical
//! half-space (first nonzero component positive) to avoid sin/cos aliasing
//! between k and -k, with entries bounded by [`MAX_MODE_ORDER`] so the
//! deterministic sample grid stays above the Nyquist rate.

use crate::matrix::{IntMatrix, RealMatrix};
use std::f64::consts::TAU;
use thiserror::Error;

/// Largest allowed |k_i| of a Fourier mode key.
pub const MAX_MODE_ORDER: i64 = 4;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum SectionError {
    #[error("winding matrix, offset and holonomy must share the dimension")]
    DimensionMismatch,
    #[error("mode key must be a nonzero integer vector")]
    ZeroModeKey,
    #[error(
        "mode key {0:?} is outside the canonical half-space (first nonzero component positive)"
    )]
    NonCanonicalModeKey(Vec<i64>),
    #[error("mode key {0:?} exceeds the maximum order {MAX_MODE_ORDER}")]
    ModeOrderTooLarge(Vec<i64>),
    #[error("duplicate mode key {0:?}")]
    DuplicateModeKey(Vec<i64>),
    #[error("mode amplitude length does not match the dimension")]
    BadAmplitude,
}

/// One Fourier mode: contributes u·cos(2π k·x) + v·sin(2π k·x).
#[derive(Debug, Clone, PartialEq)]
pub struct FourierMode {
    pub k: Vec<i64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl FourierMode {
    pub fn new(k: Vec<i64>, u: Vec<f64>, v: Vec<f64>) -> Result<Self, SectionError> {
        if k.iter().all(|&e| e == 0) {
            return Err(SectionError::ZeroModeKey);
        }
        match k.iter().find(|&&e| e != 0) {
            Some(&first) if first > 0 => {}
            _ => return Err(SectionError::NonCanonicalModeKey(k)),
        }
        if k.iter().any(|&e| e.abs() > MAX_MODE_ORDER) {
            return Err(SectionError::ModeOrderTooLarge(k));
        }
        if u.len() != k.len() || v.len() != k.len() {
            return Err(SectionError::BadAmplitude);
        }
        Ok(Self { k, u, v })
    }

    fn phase(&self, x: &[f64]) -> f64 {
        TAU * self
            .k
            .iter()
            .zip(x)
            .map(|(&ki, &xi)| ki as f64 * xi)
            .sum::<f64>()
    }
}

/// Quasi-periodic section data together with the holonomy vector q of the
/// unitary local system carried along it. The flat connection d - 2πi qᵗdx̌
/// is fully determined by q, so only q is stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionData {
    n: usize,
    winding: IntMatrix,
    offset: Vec<f64>,
    modes: Vec<FourierMode>,
    holonomy: Vec<f64>,
}

impl SectionData {
    pub fn new(
        winding: IntMatrix,
        offset: Vec<f64>,
        modes: Vec<FourierMode>,
        holonomy: Vec<f64>,
    ) -> Result<Self, SectionError> {
        let n = winding.order();
        if offset.len() != n || holonomy.len() != n {
            return Err(SectionError::DimensionMismatch);
        }
        for mode in &modes {
            if mode.k.len() != n {
                return Err(SectionError::DimensionMismatch);
            }
        }
        for (i, mode) in modes.iter().enumerate() {
            if modes[..i].iter().any(|m| m.k == mode.k) {
                return Err(SectionError::DuplicateModeKey(mode.k.clone()));
            }
        }
        Ok(Self {
            n,
            winding,
            offset,
            modes,
            holonomy,
        })
    }

    /// Purely affine section a·x + c.
    pub fn affine(
        winding: IntMatrix,
        offset: Vec<f64>,
        holonomy: Vec<f64>,
    ) -> Result<Self, SectionError> {
        Self::new(winding, offset, Vec::new(), holonomy)
    }

    /// The zero section with trivial local system.
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            winding: IntMatrix::zeros(n),
            offset: vec![0.0; n],
            modes: Vec::new(),
            holonomy: vec![0.0; n],
        }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn winding(&self) -> &IntMatrix {
        &self.winding
    }

    pub fn offset(&self) -> &[f64] {
        &self.offset
    }

    pub fn modes(&self) -> &[FourierMode] {
        &self.modes
    }

    pub fn holonomy(&self) -> &[f64] {
        &self.holonomy
    }

    pub fn is_affine(&self) -> bool {
        self.modes.is_empty()
    }

    /// s(x) = a·x + c + Σ_k (u_k cos(2π k·x) + v_k sin(2π k·x)).
    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut out = self.offset.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                out[i] += self.winding.get(i, j) as f64 * x[j];
            }
        }
        for mode in &self.modes {
            let phase = mode.phase(x);
            let (sin, cos) = phase.sin_cos();
            for i in 0..self.n {
                out[i] += mode.u[i] * cos + mode.v[i] * sin;
            }
        }
        out
    }

    /// Analytic Jacobian ∂s/∂x = a + Σ_k 2π(-u_k sin + v_k cos)(2π k·x) kᵗ.
    pub fn jacobian(&self, x: &[f64]) -> RealMatrix {
        assert_eq!(x.len(), self.n);
        let mut jac = self.winding.to_real();
        for mode in &self.modes {
            let phase = mode.phase(x);
            let (sin, cos) = phase.sin_cos();
            for i in 0..self.n {
                let radial = TAU * (-mode.u[i] * sin + mode.v[i] * cos);
                for j in 0..self.n {
                    jac.set(i, j, jac.get(i, j) + radial * mode.k[j] as f64);
                }
            }
        }
        jac
    }
}
