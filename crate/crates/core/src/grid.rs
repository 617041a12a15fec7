//! Deterministic sample grid for "for all x" conditions.
//!
//! Trigonometric polynomials of bounded degree are determined by enough
//! samples: the default lattice puts 9 points per axis, which exceeds twice
//! the maximum mode order (4) enforced at section construction. On top of
//! the lattice, for every Fourier mode k the four points x = m·k/(4 kᵗk),
//! m = 0..4, are appended; there the mode's phase 2π k·x passes through
//! 0, π/2, π, 3π/2, so its extremes are always sampled. Points are listed
//! in lexicographic lattice order followed by mode points in mode order,
//! which fixes the witness selection order everywhere downstream.

use crate::section::SectionData;

pub const DEFAULT_GRID_DENSITY: usize = 9;

/// Full deterministic grid for a section in dimension n.
pub fn sample_grid(section: &SectionData, density: usize) -> Vec<Vec<f64>> {
    let n = section.dimension();
    let mut points = lattice(n, density);
    for mode in section.modes() {
        let ksq: i64 = mode.k.iter().map(|&e| e * e).sum();
        for m in 0..4i64 {
            let point: Vec<f64> = mode
                .k
                .iter()
                .map(|&e| (m as f64) * (e as f64) / (4.0 * ksq as f64))
                .map(|v| v.rem_euclid(1.0))
                .collect();
            points.push(point);
        }
    }
    points
}

/// The bare lattice {0, 1/d, ..., (d-1)/d}ⁿ in lexicographic order.
pub fn lattice(n: usize, density: usize) -> Vec<Vec<f64>> {
    assert!(density > 0);
    let total = density.pow(n as u32);
    let mut points = Vec::with_capacity(total);
    for code in 0..total {
        let mut point = vec![0.0f64; n];
        let mut rest = code;
        for slot in (0..n).rev() {
            point[slot] = (rest % density) as f64 / density as f64;
            rest /= density;
        }
        points.push(point);
    }
    points
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::IntMatrix;
    use crate::section::FourierMode;

    #[test]
    fn lattice_size_and_order() {
        let pts = lattice(2, 3);
        assert_eq!(pts.len(), 9);
        assert_eq!(pts[0], vec![0.0, 0.0]);
        assert_eq!(pts[1], vec![0.0, 1.0 / 3.0]);
        assert_eq!(pts[3], vec![1.0 / 3.0, 0.0]);
    }

    #[test]
    fn mode_points_hit_phase_quarters() {
        let s = SectionData::new(
            IntMatrix::zeros(2),
            vec![0.0; 2],
            vec![FourierMode::new(vec![2, 1], vec![0.1, 0.0], vec![0.0, 0.0]).unwrap()],
            vec![0.0; 2],
        )
        .unwrap();
        let pts = sample_grid(&s, 3);
        assert_eq!(pts.len(), 9 + 4);
        for (m, p) in pts[9..].iter().enumerate() {
            let dot: f64 = p.iter().zip(&[2.0f64, 1.0]).map(|(a, b)| a * b).sum();
            // Phases m/4 up to integer aliasing from the wrap to [0, 1).
            let frac = (dot - m as f64 / 4.0).rem_euclid(1.0);
            assert!(frac < 1e-12 || (1.0 - frac) < 1e-12);
        }
    }

    #[test]
    fn grid_is_deterministic() {
        let s = SectionData::zero(3);
        assert_eq!(sample_grid(&s, 4), sample_grid(&s, 4));
        assert_eq!(sample_grid(&s, 4).len(), 64);
    }
}
