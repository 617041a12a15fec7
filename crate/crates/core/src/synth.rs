//! Seeded generators for randomized verification batches.
//!
//! Reproducibility contract: every batch draws from a ChaCha8 stream
//! derived from the run seed and a label via `rng_for(seed, label)` — the
//! label is FNV-1a hashed into the stream index, so suites can be run in
//! any order (or dropped) without shifting each other's draws.

use crate::gcs::ComplexTorus;
use crate::matrix::{IntMatrix, RealMatrix, ToleranceConfig};
use crate::section::{FourierMode, SectionData};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fnv1a(label: &str) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for byte in label.as_bytes() {
        hash ^= *byte as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Deterministic stream for one labelled batch of a seeded run.
pub fn rng_for(seed: u64, label: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a(label));
    rng
}

/// Random torus with generic entries: X uniform, Y = AᵗA + I plus a random
/// antisymmetric part (which leaves the quadratic form positive definite),
/// so transpose-placement mistakes cannot hide.
pub fn random_torus(rng: &mut ChaCha8Rng, n: usize, tol: &ToleranceConfig) -> ComplexTorus {
    loop {
        let x = RealMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let a = RealMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let mut y = a
            .transpose()
            .mul(&a)
            .scale(1.0 / n as f64)
            .add(&RealMatrix::identity(n));
        for i in 0..n {
            for j in (i + 1)..n {
                let skew = rng.gen_range(-0.3..0.3);
                y.set(i, j, y.get(i, j) + skew);
                y.set(j, i, y.get(j, i) - skew);
            }
        }
        if let Ok(torus) = ComplexTorus::new(x, y, tol) {
            return torus;
        }
    }
}

/// Random integer twist with entries in [-max_abs, max_abs].
pub fn random_twist(rng: &mut ChaCha8Rng, n: usize, max_abs: i64) -> IntMatrix {
    let mut tau = IntMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            tau.set(i, j, rng.gen_range(-max_abs..=max_abs));
        }
    }
    tau
}

/// Random twist keeping det(-τ - iYᵗ) away from zero.
pub fn random_regular_twist(rng: &mut ChaCha8Rng, torus: &ComplexTorus, max_abs: i64) -> IntMatrix {
    let n = torus.dimension();
    loop {
        let tau = random_twist(rng, n, max_abs);
        let det = crate::dhym::mirror_denominator(torus, &tau).determinant();
        if det.norm() > 1e-6 {
            return tau;
        }
    }
}

/// A torus and winding with the product winding·T exactly symmetric, built
/// from a commuting family: a = c·kkᵗ + d·I for an integer vector k, and
/// T = (x₀ + iy₀)I + μ·a. Every member keeps A(x)·T symmetric even after
/// adding Fourier modes with amplitudes parallel to k, because k is an
/// eigenvector of a.
#[derive(Debug, Clone)]
pub struct HolomorphicFamily {
    pub torus: ComplexTorus,
    pub winding: IntMatrix,
    pub mode_key: Vec<i64>,
}

pub fn holomorphic_family(
    rng: &mut ChaCha8Rng,
    n: usize,
    tol: &ToleranceConfig,
) -> HolomorphicFamily {
    loop {
        // Canonical mode key: first nonzero component positive.
        let mut k: Vec<i64> = (0..n).map(|_| rng.gen_range(-2i64..=2)).collect();
        if k.iter().all(|&e| e == 0) {
            k[0] = 1;
        }
        if let Some(first) = k.iter().position(|&e| e != 0) {
            if k[first] < 0 {
                for e in k.iter_mut() {
                    *e = -*e;
                }
            }
        }
        let c = rng.gen_range(-2i64..=2);
        let d = rng.gen_range(-2i64..=2);
        let mut winding = IntMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                winding.set(i, j, c * k[i] * k[j] + if i == j { d } else { 0 });
            }
        }
        let x0 = rng.gen_range(-0.9..0.9);
        let y0 = rng.gen_range(0.6..1.8);
        let mu = rng.gen_range(-0.7..0.7);
        let a_real = winding.to_real();
        let x = RealMatrix::from_fn(n, n, |i, j| {
            mu * a_real.get(i, j) + if i == j { x0 } else { 0.0 }
        });
        let y = RealMatrix::identity(n).scale(y0);
        if let Ok(torus) = ComplexTorus::new(x, y, tol) {
            return HolomorphicFamily {
                torus,
                winding,
                mode_key: k,
            };
        }
    }
}

/// Section data for a holomorphic object out of a family: affine, or with
/// one Fourier mode whose amplitudes are parallel to the family's key.
pub fn holomorphic_section(
    rng: &mut ChaCha8Rng,
    family: &HolomorphicFamily,
    affine: bool,
) -> SectionData {
    let n = family.winding.order();
    let offset: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let holonomy: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let modes = if affine {
        Vec::new()
    } else {
        let alpha = rng.gen_range(0.02..0.08);
        let beta = rng.gen_range(-0.05..0.05);
        let u: Vec<f64> = family.mode_key.iter().map(|&e| alpha * e as f64).collect();
        let v: Vec<f64> = family.mode_key.iter().map(|&e| beta * e as f64).collect();
        vec![FourierMode::new(family.mode_key.clone(), u, v).expect("valid family mode")]
    };
    SectionData::new(family.winding.clone(), offset, modes, holonomy)
        .expect("family section is well formed")
}

/// Random winding whose product with the torus period matrix is NOT
/// symmetric (regenerates until the asymmetry is macroscopic).
pub fn asymmetric_winding(rng: &mut ChaCha8Rng, torus: &ComplexTorus) -> IntMatrix {
    let n = torus.dimension();
    assert!(n >= 2, "1x1 products are always symmetric");
    loop {
        let a = random_twist(rng, n, 3);
        let at = a.to_real().to_complex().mul(&torus.period_matrix());
        if at.asymmetry() > 0.1 {
            return a;
        }
    }
}

/// Random section with arbitrary modes (no symmetry guarantees).
pub fn random_section(rng: &mut ChaCha8Rng, winding: IntMatrix, modes: usize) -> SectionData {
    let n = winding.order();
    let offset: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let holonomy: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let mut mode_list: Vec<FourierMode> = Vec::new();
    let mut guard = 0;
    while mode_list.len() < modes && guard < 100 {
        guard += 1;
        let mut k: Vec<i64> = (0..n).map(|_| rng.gen_range(-2i64..=2)).collect();
        if k.iter().all(|&e| e == 0) {
            continue;
        }
        if let Some(first) = k.iter().position(|&e| e != 0) {
            if k[first] < 0 {
                for e in k.iter_mut() {
                    *e = -*e;
                }
            }
        }
        if mode_list.iter().any(|m| m.k == k) {
            continue;
        }
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.2..0.2)).collect();
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.2..0.2)).collect();
        mode_list.push(FourierMode::new(k, u, v).expect("canonical key"));
    }
    SectionData::new(winding, offset, mode_list, holonomy).expect("well formed")
}

/// Random real matrix with entries in (-1, 1), used as a slope sample.
pub fn random_real_matrix(rng: &mut ChaCha8Rng, n: usize) -> RealMatrix {
    RealMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0))
}
