//! Generalized complex geometry of complex tori, flat gerby deformations,
//! and both mirror-dual object classes, with numerical certification of the
//! structural identities relating them.
//!
//! The library is organized around a small dense matrix kernel and a
//! brute-force exterior algebra; everything else is built on top of those:
//!
//! - [`matrix`] — small dense real/complex matrices, tolerance-aware
//!   predicates, determinants, Pfaffians, phases mod π.
//! - [`exterior`] — alternating forms on the 2n-dimensional cotangent space
//!   at a point; the independent oracle for wedge-power identities.
//! - [`gcs`] — complex tori, generalized complex structures as explicit
//!   4n×4n matrices, B-field transforms, the mirror transform, and
//!   extraction of mirror data.
//! - [`gerbe`] — the open cover {O_m^l} of the torus, the trivial gerbe
//!   with its flat 0- and 1-connections, and exact Čech cocycle checks.
//! - [`section`] — quasi-periodic sections ℝⁿ → ℝⁿ as integer-affine maps
//!   plus finite Fourier series.
//! - [`grid`] — the deterministic sample grid used for "for all x" checks.
//! - [`bundle`] — the complex-geometry side: twisted connections,
//!   curvature, (0,2)-parts, and the holomorphicity criterion.
//! - [`lagrangian`] — the symplectic-geometry side: graph Lagrangians,
//!   tangent frames, the Fukaya-object criterion, and the mirror
//!   correspondence check.
//! - [`dhym`] — Kähler data, dHYM phases, special-Lagrangian phases, and
//!   the phase-equivalence check.
//! - [`config`] / [`suite`] — configuration ingestion and the verification
//!   suites behind the CLI.
//! - [`synth`] — seeded generators for randomized verification batches.

pub mod bundle;
pub mod config;
pub mod dhym;
pub mod exterior;
pub mod gcs;
pub mod gerbe;
pub mod grid;
pub mod lagrangian;
pub mod matrix;
pub mod section;
pub mod suite;
pub mod synth;

pub use config::{ConfigError, RunConfig};
pub use gcs::ComplexTorus;
pub use matrix::{ComplexMatrix, IntMatrix, RealMatrix, ToleranceConfig};
pub use suite::{run_suite, SuiteName, VerificationReport};
