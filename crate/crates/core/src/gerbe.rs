//! The open cover {O_m^l} of the torus, the trivial gerbe carrying the flat
//! 0-connection defined by an integer twist τ, and exact Čech cocycle
//! verification.
//!
//! Per axis the cover uses the three circular intervals
//! ((l-1)/3 - ε, l/3 + ε) with l = 1, 2, 3; for ε < 1/12 every interval is
//! shorter than 1/2, so circular intersections have at most one component
//! and all interval arithmetic below is unambiguous. Everything is computed
//! in exact rational arithmetic scaled by 2π; no tolerances are involved.
//!
//! The transition 1-form of the 0-connection on an overlap is
//! 2π Σ_j d_j τ_colⱼᵗ dy, where d_j ∈ {-1, 0, +1} is the lift difference of
//! the two charts along axis j: +1 when the pair wraps as (l_j, l_j') =
//! (1, 3), -1 for (3, 1), 0 otherwise. The (1,3) case is the defining one;
//! the (3,1) case is its antisymmetric completion (the overlap line bundles
//! satisfy L_ji ≅ L_ij*), and summing over axes extends the definition to
//! overlaps that wrap in several axes at once, which is exactly what the
//! triple cocycle identity requires.

use crate::matrix::IntMatrix;
use num_rational::Ratio;
use thiserror::Error;

pub type Rat = Ratio<i64>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum GerbeError {
    #[error("epsilon must satisfy 0 < ε < 1/12 (got {0})")]
    EpsilonOutOfRange(Rat),
    #[error("cover index entries must lie in 1..=3")]
    BadIndex,
    #[error("dimension mismatch between index and twist")]
    DimensionMismatch,
    #[error("the two boxes do not overlap")]
    EmptyOverlap,
}

/// Index (l; m) of a cover box: l governs the x-axes, m the y-axes, each
/// entry in {1, 2, 3}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoverIndex {
    pub l: Vec<u8>,
    pub m: Vec<u8>,
}

impl CoverIndex {
    pub fn new(l: Vec<u8>, m: Vec<u8>) -> Result<Self, GerbeError> {
        if l.len() != m.len()
            || l.iter().any(|&v| !(1..=3).contains(&v))
            || m.iter().any(|&v| !(1..=3).contains(&v))
        {
            return Err(GerbeError::BadIndex);
        }
        Ok(Self { l, m })
    }

    pub fn dimension(&self) -> usize {
        self.l.len()
    }
}

/// Open circular interval on ℝ/ℤ kept as a lifted representative with
/// hi - lo < 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl CircInterval {
    pub fn length(&self) -> Rat {
        self.hi - self.lo
    }

    /// Circular membership test.
    pub fn contains(&self, point: Rat) -> bool {
        let one = Rat::new(1, 1);
        for shift in [-1i64, 0, 1] {
            let p = point + Rat::new(shift, 1) * one;
            if self.lo < p && p < self.hi {
                return true;
            }
        }
        false
    }
}

/// Intersection of two circular open intervals, each shorter than 1/2, as
/// at most one interval.
pub fn circ_intersect(a: &CircInterval, b: &CircInterval) -> Option<CircInterval> {
    for shift in [-1i64, 0, 1] {
        let s = Rat::new(shift, 1);
        let lo = if a.lo > b.lo + s { a.lo } else { b.lo + s };
        let hi = if a.hi < b.hi + s { a.hi } else { b.hi + s };
        if lo < hi {
            return Some(CircInterval { lo, hi });
        }
    }
    None
}

/// Per-axis interval for a cover digit: ((l-1)/3 - ε, l/3 + ε).
pub fn axis_interval(digit: u8, epsilon: Rat) -> CircInterval {
    let l = digit as i64;
    CircInterval {
        lo: Rat::new(l - 1, 3) - epsilon,
        hi: Rat::new(l, 3) + epsilon,
    }
}

/// Product box of per-axis intervals in x and y.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusBox {
    pub x: Vec<CircInterval>,
    pub y: Vec<CircInterval>,
}

impl TorusBox {
    pub fn contains(&self, x: &[Rat], y: &[Rat]) -> bool {
        self.x.iter().zip(x).all(|(iv, &p)| iv.contains(p))
            && self.y.iter().zip(y).all(|(iv, &p)| iv.contains(p))
    }
}

fn check_epsilon(epsilon: Rat) -> Result<(), GerbeError> {
    if epsilon <= Rat::new(0, 1) || epsilon >= Rat::new(1, 12) {
        return Err(GerbeError::EpsilonOutOfRange(epsilon));
    }
    Ok(())
}

/// Enumerates all 3^(2n) indices in lexicographic order.
pub fn all_indices(n: usize) -> Vec<CoverIndex> {
    let count = 3usize.pow(2 * n as u32);
    (0..count)
        .map(|mut code| {
            let mut digits = vec![1u8; 2 * n];
            for d in digits.iter_mut().rev() {
                *d = (code % 3) as u8 + 1;
                code /= 3;
            }
            CoverIndex {
                l: digits[..n].to_vec(),
                m: digits[n..].to_vec(),
            }
        })
        .collect()
}

/// Builds the full cover; 3^(2n) boxes whose union is the torus.
pub fn build_cover(n: usize, epsilon: Rat) -> Result<Vec<(CoverIndex, TorusBox)>, GerbeError> {
    check_epsilon(epsilon)?;
    Ok(all_indices(n)
        .into_iter()
        .map(|idx| {
            let bx = TorusBox {
                x: idx.l.iter().map(|&d| axis_interval(d, epsilon)).collect(),
                y: idx.m.iter().map(|&d| axis_interval(d, epsilon)).collect(),
            };
            (idx, bx)
        })
        .collect())
}

/// Per-axis intersection of two boxes; `None` when any axis is empty.
pub fn overlap(
    i: &CoverIndex,
    j: &CoverIndex,
    epsilon: Rat,
) -> Result<Option<TorusBox>, GerbeError> {
    check_epsilon(epsilon)?;
    if i.dimension() != j.dimension() {
        return Err(GerbeError::DimensionMismatch);
    }
    let mut x = Vec::with_capacity(i.dimension());
    for (&a, &b) in i.l.iter().zip(&j.l) {
        match circ_intersect(&axis_interval(a, epsilon), &axis_interval(b, epsilon)) {
            Some(iv) => x.push(iv),
            None => return Ok(None),
        }
    }
    let mut y = Vec::with_capacity(i.dimension());
    for (&a, &b) in i.m.iter().zip(&j.m) {
        match circ_intersect(&axis_interval(a, epsilon), &axis_interval(b, epsilon)) {
            Some(iv) => y.push(iv),
            None => return Ok(None),
        }
    }
    Ok(Some(TorusBox { x, y }))
}

/// Lift difference of the pair (from, to) along one axis: +1 for the
/// wraparound pattern (1, 3), -1 for (3, 1), 0 otherwise.
pub fn wrap_direction(from: u8, to: u8) -> i64 {
    match (from, to) {
        (1, 3) => 1,
        (3, 1) => -1,
        _ => 0,
    }
}

/// Which branches of the transition-form rule are active; `ForwardOnly`
/// drops the antisymmetric completion and is used as a negative control.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransitionCompletion {
    Antisymmetric,
    ForwardOnly,
}

fn direction_with_rule(from: u8, to: u8, rule: TransitionCompletion) -> i64 {
    let d = wrap_direction(from, to);
    match rule {
        TransitionCompletion::Antisymmetric => d,
        TransitionCompletion::ForwardOnly => d.max(0),
    }
}

/// Transition 1-form of the 0-connection on the overlap of two boxes, as
/// the integer coefficient vector of Σ_k c_k dy_k; the actual form is 2π
/// times this.
pub fn transition_form(
    i: &CoverIndex,
    j: &CoverIndex,
    tau: &IntMatrix,
    epsilon: Rat,
) -> Result<Vec<i64>, GerbeError> {
    if overlap(i, j, epsilon)?.is_none() {
        return Err(GerbeError::EmptyOverlap);
    }
    Ok(transition_coefficients(
        &i.l,
        &j.l,
        tau,
        TransitionCompletion::Antisymmetric,
    ))
}

fn transition_coefficients(
    l_from: &[u8],
    l_to: &[u8],
    tau: &IntMatrix,
    rule: TransitionCompletion,
) -> Vec<i64> {
    let n = l_from.len();
    let mut coeff = vec![0i64; n];
    for axis in 0..n {
        let d = direction_with_rule(l_from[axis], l_to[axis], rule);
        if d != 0 {
            for (row, c) in coeff.iter_mut().enumerate() {
                *c += d * tau.get(row, axis);
            }
        }
    }
    coeff
}

/// One violated triple, reported by its three indices and the offending
/// coefficient sum.
#[derive(Debug, Clone, PartialEq)]
pub struct CocycleViolation {
    pub triple: (CoverIndex, CoverIndex, CoverIndex),
    pub coefficient_sum: Vec<i64>,
}

/// Outcome of the exhaustive triple-overlap cocycle verification.
#[derive(Debug, Clone, PartialEq)]
pub struct CocycleReport {
    pub triples_checked: u64,
    pub violations: Vec<CocycleViolation>,
    pub violation_count: u64,
    pub pass: bool,
}

const MAX_RECORDED_VIOLATIONS: usize = 8;

/// Verifies ω_ij + ω_jk + ω_ki = 0 exactly on every ordered index triple
/// whose triple overlap is nonempty.
pub fn verify_zero_connection(
    n: usize,
    tau: &IntMatrix,
    epsilon: Rat,
) -> Result<CocycleReport, GerbeError> {
    zero_connection_report(n, tau, epsilon, TransitionCompletion::Antisymmetric)
}

/// Same as [`verify_zero_connection`] with an explicit completion rule, so
/// the broken `ForwardOnly` variant can serve as a negative control.
pub fn zero_connection_report(
    n: usize,
    tau: &IntMatrix,
    epsilon: Rat,
    rule: TransitionCompletion,
) -> Result<CocycleReport, GerbeError> {
    check_epsilon(epsilon)?;
    if tau.order() != n {
        return Err(GerbeError::DimensionMismatch);
    }
    // Per-axis triple compatibility table, computed once from exact
    // interval arithmetic: digit triples (a, b, c) index whether the three
    // axis intervals intersect.
    let mut triple_ok = [[[false; 3]; 3]; 3];
    for a in 1u8..=3 {
        for b in 1u8..=3 {
            for c in 1u8..=3 {
                let ab = circ_intersect(&axis_interval(a, epsilon), &axis_interval(b, epsilon));
                let ok = match ab {
                    None => false,
                    Some(iv) => circ_intersect(&iv, &axis_interval(c, epsilon)).is_some(),
                };
                triple_ok[(a - 1) as usize][(b - 1) as usize][(c - 1) as usize] = ok;
            }
        }
    }

    let indices = all_indices(n);
    let digits: Vec<Vec<u8>> = indices
        .iter()
        .map(|idx| {
            let mut d = idx.l.clone();
            d.extend_from_slice(&idx.m);
            d
        })
        .collect();

    let mut report = CocycleReport {
        triples_checked: 0,
        violations: Vec::new(),
        violation_count: 0,
        pass: true,
    };
    let count = indices.len();
    let mut sum = vec![0i64; n];
    for ii in 0..count {
        for jj in 0..count {
            for kk in 0..count {
                let (di, dj, dk) = (&digits[ii], &digits[jj], &digits[kk]);
                let compatible = (0..2 * n).all(|axis| {
                    triple_ok[(di[axis] - 1) as usize][(dj[axis] - 1) as usize]
                        [(dk[axis] - 1) as usize]
                });
                if !compatible {
                    continue;
                }
                report.triples_checked += 1;
                sum.iter_mut().for_each(|v| *v = 0);
                accumulate_transition(&mut sum, &di[..n], &dj[..n], tau, rule);
                accumulate_transition(&mut sum, &dj[..n], &dk[..n], tau, rule);
                accumulate_transition(&mut sum, &dk[..n], &di[..n], tau, rule);
                if sum.iter().any(|&v| v != 0) {
                    report.violation_count += 1;
                    report.pass = false;
                    if report.violations.len() < MAX_RECORDED_VIOLATIONS {
                        report.violations.push(CocycleViolation {
                            triple: (
                                indices[ii].clone(),
                                indices[jj].clone(),
                                indices[kk].clone(),
                            ),
                            coefficient_sum: sum.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Cocycle verification factored over the index structure, for n ≥ 3 where
/// the full 3^(6n) triple enumeration is out of reach: the coefficient
/// sum of a triple depends only on its l-digits, and the m-digits only
/// gate nonemptiness (every l-triple with compatible axes is realized by
/// taking equal m's), so it suffices to enumerate l-triples with
/// axis-compatible digits. The reported count is the number of l-triples
/// checked.
pub fn zero_connection_report_factored(
    n: usize,
    tau: &IntMatrix,
    epsilon: Rat,
    rule: TransitionCompletion,
) -> Result<CocycleReport, GerbeError> {
    check_epsilon(epsilon)?;
    if tau.order() != n {
        return Err(GerbeError::DimensionMismatch);
    }
    let mut triple_ok = [[[false; 3]; 3]; 3];
    for a in 1u8..=3 {
        for b in 1u8..=3 {
            for c in 1u8..=3 {
                let ab = circ_intersect(&axis_interval(a, epsilon), &axis_interval(b, epsilon));
                let ok = match ab {
                    None => false,
                    Some(iv) => circ_intersect(&iv, &axis_interval(c, epsilon)).is_some(),
                };
                triple_ok[(a - 1) as usize][(b - 1) as usize][(c - 1) as usize] = ok;
            }
        }
    }
    let count = 3usize.pow(n as u32);
    let l_digits: Vec<Vec<u8>> = (0..count)
        .map(|mut code| {
            let mut d = vec![1u8; n];
            for slot in d.iter_mut().rev() {
                *slot = (code % 3) as u8 + 1;
                code /= 3;
            }
            d
        })
        .collect();
    let mut report = CocycleReport {
        triples_checked: 0,
        violations: Vec::new(),
        violation_count: 0,
        pass: true,
    };
    let mut sum = vec![0i64; n];
    for di in &l_digits {
        for dj in &l_digits {
            for dk in &l_digits {
                let compatible = (0..n).all(|axis| {
                    triple_ok[(di[axis] - 1) as usize][(dj[axis] - 1) as usize]
                        [(dk[axis] - 1) as usize]
                });
                if !compatible {
                    continue;
                }
                report.triples_checked += 1;
                sum.iter_mut().for_each(|v| *v = 0);
                accumulate_transition(&mut sum, di, dj, tau, rule);
                accumulate_transition(&mut sum, dj, dk, tau, rule);
                accumulate_transition(&mut sum, dk, di, tau, rule);
                if sum.iter().any(|&v| v != 0) {
                    report.violation_count += 1;
                    report.pass = false;
                    if report.violations.len() < MAX_RECORDED_VIOLATIONS {
                        let as_index = |l: &Vec<u8>| CoverIndex {
                            l: l.clone(),
                            m: vec![1; n],
                        };
                        report.violations.push(CocycleViolation {
                            triple: (as_index(di), as_index(dj), as_index(dk)),
                            coefficient_sum: sum.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

fn accumulate_transition(
    sum: &mut [i64],
    l_from: &[u8],
    l_to: &[u8],
    tau: &IntMatrix,
    rule: TransitionCompletion,
) {
    let n = l_from.len();
    for axis in 0..n {
        let d = direction_with_rule(l_from[axis], l_to[axis], rule);
        if d != 0 {
            for (row, s) in sum.iter_mut().enumerate() {
                *s += d * tau.get(row, axis);
            }
        }
    }
}

/// A local 2-form β_i with constant dx∧dy coefficient block plus an
/// optional coefficient linear in x (used only by negative controls).
#[derive(Debug, Clone, PartialEq)]
pub struct LocalTwoForm {
    /// Constant n×n block: β = 2π dxᵗ Cᵗ dy with C integer (τ for the
    /// canonical 1-connection).
    pub constant: IntMatrix,
    /// Extra term x_1 · 2π dxᵗ Pᵗ dy when present.
    pub linear_in_x1: Option<IntMatrix>,
}

/// Outcome of the 1-connection verification.
#[derive(Debug, Clone, PartialEq)]
pub struct OneConnectionReport {
    pub pairs_checked: u64,
    /// Curvatures of the 0-connection forms all vanish identically
    /// (constant-coefficient dy-forms are closed).
    pub flat_zero_connection: bool,
    /// Pairs where (δβ)_ij failed to match Ω_ij = 0.
    pub delta_beta_violations: u64,
    pub pass: bool,
}

/// Verifies the 1-connection: each ∇_ij is flat, and since every local
/// 2-form equals the same global 2π dxᵗτᵗdy, the Čech difference (δβ)_ij
/// vanishes against Ω_ij = 0 on every overlap.
pub fn verify_one_connection(n: usize, tau: &IntMatrix) -> Result<OneConnectionReport, GerbeError> {
    one_connection_report(n, tau, None)
}

/// Same with one chart's local 2-form replaced (negative control: an
/// x-dependent perturbation on a single chart breaks the δβ identity).
pub fn one_connection_report(
    n: usize,
    tau: &IntMatrix,
    perturbed_chart: Option<(&CoverIndex, &LocalTwoForm)>,
) -> Result<OneConnectionReport, GerbeError> {
    if tau.order() != n {
        return Err(GerbeError::DimensionMismatch);
    }
    let epsilon = Rat::new(1, 24);
    let indices = all_indices(n);
    let beta_for = |idx: &CoverIndex| -> LocalTwoForm {
        if let Some((chart, form)) = perturbed_chart {
            if chart == idx {
                return form.clone();
            }
        }
        LocalTwoForm {
            constant: tau.clone(),
            linear_in_x1: None,
        }
    };
    let mut report = OneConnectionReport {
        pairs_checked: 0,
        flat_zero_connection: true,
        delta_beta_violations: 0,
        pass: true,
    };
    for i in &indices {
        for j in &indices {
            if overlap(i, j, epsilon)?.is_none() {
                continue;
            }
            report.pairs_checked += 1;
            // Curvature of ∇_ij = d - i·2π(c·dy): exterior derivative of a
            // constant-coefficient 1-form, identically zero.
            let bi = beta_for(i);
            let bj = beta_for(j);
            let constant_match = bi.constant == bj.constant;
            let linear_match = bi.linear_in_x1 == bj.linear_in_x1;
            if !(constant_match && linear_match) {
                report.delta_beta_violations += 1;
                report.pass = false;
            }
        }
    }
    Ok(report)
}
