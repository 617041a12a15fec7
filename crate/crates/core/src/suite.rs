//! Verification suites and machine/human readable reports.
//!
//! Reports are deterministic for a given (config, seed): randomized batches
//! draw from labelled ChaCha streams (see [`crate::synth::rng_for`]) and
//! every loop runs in a fixed order, so two runs with the same inputs
//! produce byte-identical output. Wall-clock timing is deliberately kept
//! out of the report body; the CLI prints it to stderr.

use crate::bundle::BundleObject;
use crate::config::{canonical_json, RunConfig};
use crate::dhym::{
    dhym_top_parts, equivalence_check, kahler_verify, mirror_denominator, slag_value_parts,
    EquivalenceOutcome,
};
use crate::exterior::{matrix_from_two_form, two_form_from_matrix};
use crate::gcs::{
    b_transform, b_transform_is_trivial, extract_complexified_symplectic, extract_period_matrix,
    gcs_from_complex, gcs_from_kahler, graph_shear, mirror, mirror_form_coefficient,
    mirror_form_coefficient_twisted, symplectomorphism_check, GeneralizedComplexStructure,
};
use crate::gerbe::{
    build_cover, one_connection_report, verify_one_connection, verify_zero_connection,
    zero_connection_report, zero_connection_report_factored, CoverIndex, LocalTwoForm, Rat,
    TransitionCompletion,
};
use crate::grid::{lattice, sample_grid};
use crate::lagrangian::GraphLagrangian;
use crate::matrix::{ComplexMatrix, IntMatrix, RealMatrix};
use crate::section::SectionData;
use crate::synth;
use rand::Rng;
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Error, Debug)]
pub enum SuiteError {
    #[error("unknown suite `{0}` (expected gcs, gerbe, objects, dhym or all)")]
    UnknownSuite(String),
    #[error("internal error while running checks: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteName {
    Gcs,
    Gerbe,
    Objects,
    Dhym,
    All,
}

impl std::str::FromStr for SuiteName {
    type Err = SuiteError;
    fn from_str(s: &str) -> Result<Self, SuiteError> {
        match s {
            "gcs" => Ok(Self::Gcs),
            "gerbe" => Ok(Self::Gerbe),
            "objects" => Ok(Self::Objects),
            "dhym" => Ok(Self::Dhym),
            "all" => Ok(Self::All),
            other => Err(SuiteError::UnknownSuite(other.to_string())),
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Gcs => "gcs",
            Self::Gerbe => "gerbe",
            Self::Objects => "objects",
            Self::Dhym => "dhym",
            Self::All => "all",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub verdict: Verdict,
    /// Worst numerical defect observed by the check (0 for structural
    /// checks).
    pub max_error: f64,
    /// Worst sample point or offending object, when meaningful.
    pub witness: Option<String>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub overall_pass: bool,
    /// Canonical echo of the configuration the run used.
    pub config: String,
}

impl VerificationReport {
    pub fn exit_code(&self) -> i32 {
        if self.overall_pass {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Plain-text table; deterministic for identical inputs.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("suite: {}    seed: {}\n", self.suite, self.seed));
        out.push_str(&format!(
            "{:<44} {:<7} {:<12} {}\n",
            "check", "verdict", "max-error", "note"
        ));
        out.push_str(&format!("{}\n", "-".repeat(92)));
        for check in &self.checks {
            let verdict = match check.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Skip => "SKIP",
            };
            let mut note = check.note.clone().unwrap_or_default();
            if let Some(w) = &check.witness {
                if !note.is_empty() {
                    note.push_str("; ");
                }
                note.push_str("witness ");
                note.push_str(w);
            }
            out.push_str(&format!(
                "{:<44} {:<7} {:<12} {}\n",
                check.name,
                verdict,
                format!("{:.3e}", check.max_error),
                note
            ));
        }
        out.push_str(&format!(
            "overall: {} ({} passed, {} failed, {} skipped)\n",
            if self.overall_pass { "PASS" } else { "FAIL" },
            self.passed,
            self.failed,
            self.skipped
        ));
        out
    }
}

struct Checks {
    list: Vec<CheckResult>,
}

impl Checks {
    fn new() -> Self {
        Self { list: Vec::new() }
    }

    fn defect(&mut self, name: &str, defect: f64, threshold: f64, witness: Option<String>) {
        self.list.push(CheckResult {
            name: name.to_string(),
            verdict: if defect <= threshold {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            max_error: defect,
            witness,
            note: Some(format!("threshold {threshold:.1e}")),
        });
    }

    fn boolean(&mut self, name: &str, pass: bool, note: Option<String>) {
        self.list.push(CheckResult {
            name: name.to_string(),
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            max_error: 0.0,
            witness: None,
            note,
        });
    }

    fn skip(&mut self, name: &str, reason: String) {
        self.list.push(CheckResult {
            name: name.to_string(),
            verdict: Verdict::Skip,
            max_error: 0.0,
            witness: None,
            note: Some(reason),
        });
    }

    fn fail(&mut self, name: &str, note: String) {
        self.list.push(CheckResult {
            name: name.to_string(),
            verdict: Verdict::Fail,
            max_error: f64::NAN,
            witness: None,
            note: Some(note),
        });
    }
}

/// Runs one suite (or all of them) against a validated configuration.
pub fn run_suite(config: &RunConfig, suite: SuiteName) -> VerificationReport {
    let mut checks = Checks::new();
    match suite {
        SuiteName::Gcs => gcs_suite(config, &mut checks),
        SuiteName::Gerbe => gerbe_suite(config, &mut checks),
        SuiteName::Objects => objects_suite(config, &mut checks),
        SuiteName::Dhym => dhym_suite(config, &mut checks),
        SuiteName::All => {
            gcs_suite(config, &mut checks);
            gerbe_suite(config, &mut checks);
            objects_suite(config, &mut checks);
            dhym_suite(config, &mut checks);
        }
    }
    let passed = checks
        .list
        .iter()
        .filter(|c| c.verdict == Verdict::Pass)
        .count();
    let failed = checks
        .list
        .iter()
        .filter(|c| c.verdict == Verdict::Fail)
        .count();
    let skipped = checks
        .list
        .iter()
        .filter(|c| c.verdict == Verdict::Skip)
        .count();
    VerificationReport {
        suite: suite.to_string(),
        seed: config.seed,
        checks: checks.list,
        passed,
        failed,
        skipped,
        overall_pass: failed == 0,
        config: canonical_json(config),
    }
}

fn structure_defect(g: &GeneralizedComplexStructure) -> f64 {
    g.square_defect().max(g.pairing_defect())
}

fn gcs_suite(config: &RunConfig, checks: &mut Checks) {
    let tol = &config.tolerances;

    // A twist with τT symmetric deforms nothing; worth a warning, never an
    // error.
    if b_transform_is_trivial(&config.torus, &config.tau, tol) {
        checks.skip(
            "gcs.config.twist_deformation",
            "τT is symmetric: the configured twist acts trivially on the structure".to_string(),
        );
    } else {
        checks.boolean(
            "gcs.config.twist_deformation",
            true,
            Some("τT asymmetric: genuine deformation".to_string()),
        );
    }

    // Structure invariants on the configured torus and twist.
    match (
        gcs_from_complex(&config.torus, tol),
        gcs_from_kahler(&config.torus, tol),
    ) {
        (Ok(ij), Ok(iw)) => {
            let mut worst = 0.0f64;
            for g in [&ij, &iw] {
                worst = worst.max(structure_defect(g));
                worst = worst.max(structure_defect(&mirror(g)));
                let twisted = b_transform(g, &config.tau);
                worst = worst.max(structure_defect(&twisted));
                worst = worst.max(structure_defect(&mirror(&twisted)));
            }
            checks.defect("gcs.config.invariants", worst, 1e-10, None);

            // Mirror symplectic data against the closed-form matrices.
            match extract_complexified_symplectic(&mirror(&ij), tol) {
                Ok(data) => {
                    let target = config
                        .torus
                        .mirror_symplectic_matrix(tol)
                        .expect("valid torus");
                    let defect = data
                        .omega_mat
                        .max_abs_diff(&target.imag_part())
                        .max(data.b_mat.max_abs_diff(&target.real_part()));
                    checks.defect("gcs.config.mirror_data", defect, 1e-10, None);
                }
                Err(e) => checks.fail("gcs.config.mirror_data", e.to_string()),
            }

            // Period matrix of the mirrored Kähler structure.
            match extract_period_matrix(&mirror(&iw), tol) {
                Ok(period) => {
                    let expected = ComplexMatrix::from_real_imag(
                        &RealMatrix::zeros(config.n, config.n),
                        &config
                            .torus
                            .im()
                            .inverse(tol)
                            .expect("Y invertible")
                            .transpose(),
                    );
                    checks.defect(
                        "gcs.config.mirror_period",
                        period.max_abs_diff(&expected),
                        1e-10,
                        None,
                    );
                }
                Err(e) => checks.fail("gcs.config.mirror_period", e.to_string()),
            }

            // Twisted period matrix (-τ - iYᵗ)⁻¹ when defined.
            let denom = mirror_denominator(&config.torus, &config.tau);
            if denom.determinant().norm() <= tol.abs_tol {
                checks.skip(
                    "gcs.config.twisted_period",
                    "det(-τ - iYᵗ) = 0: mirror period undefined".to_string(),
                );
            } else {
                match extract_period_matrix(&mirror(&b_transform(&iw, &config.tau)), tol) {
                    Ok(period) => {
                        let expected = denom.inverse(tol).expect("checked nonsingular");
                        checks.defect(
                            "gcs.config.twisted_period",
                            period.max_abs_diff(&expected),
                            1e-10,
                            None,
                        );
                    }
                    Err(e) => checks.fail("gcs.config.twisted_period", e.to_string()),
                }
            }
        }
        (Err(e), _) | (_, Err(e)) => checks.fail("gcs.config.invariants", e.to_string()),
    }

    // Seeded random batch across dimensions.
    let mut worst_invariant = 0.0f64;
    let mut worst_mirror = 0.0f64;
    let mut worst_round_trip = 0.0f64;
    let mut rng = synth::rng_for(config.seed, "gcs.random");
    for n in 1..=4usize {
        for _ in 0..10 {
            let torus = synth::random_torus(&mut rng, n, tol);
            let tau = synth::random_twist(&mut rng, n, 2);
            let ij = gcs_from_complex(&torus, tol).expect("valid torus");
            let iw = gcs_from_kahler(&torus, tol).expect("valid torus");
            for g in [&ij, &iw] {
                worst_invariant = worst_invariant.max(structure_defect(g));
                let twisted = b_transform(g, &tau);
                worst_invariant = worst_invariant.max(structure_defect(&twisted));
                worst_invariant = worst_invariant.max(structure_defect(&mirror(&twisted)));
            }
            let data = extract_complexified_symplectic(&mirror(&ij), tol).expect("symplectic type");
            let target = torus.mirror_symplectic_matrix(tol).expect("valid torus");
            worst_mirror = worst_mirror
                .max(data.omega_mat.max_abs_diff(&target.imag_part()))
                .max(data.b_mat.max_abs_diff(&target.real_part()));
            let period = extract_period_matrix(&ij, tol).expect("complex type");
            worst_round_trip = worst_round_trip.max(period.max_abs_diff(&torus.period_matrix()));
        }
    }
    checks.defect("gcs.random.invariants", worst_invariant, 1e-10, None);
    checks.defect("gcs.random.mirror_data", worst_mirror, 1e-10, None);
    checks.defect(
        "gcs.random.period_round_trip",
        worst_round_trip,
        1e-10,
        None,
    );

    // Symplectomorphism identity, congruence and pullback routes.
    let mut worst_congruence = 0.0f64;
    let mut worst_pullback = 0.0f64;
    let mut rng = synth::rng_for(config.seed, "gcs.symplectomorphism");
    for n in 1..=4usize {
        for _ in 0..8 {
            let torus = synth::random_torus(&mut rng, n, tol);
            let tau = synth::random_twist(&mut rng, n, 2);
            let check = symplectomorphism_check(&torus, &tau, tol).expect("valid torus");
            worst_congruence = worst_congruence.max(check.defect);
            let base = mirror_form_coefficient(&torus, tol).expect("valid torus");
            let twisted = mirror_form_coefficient_twisted(&torus, &tau, tol).expect("valid torus");
            let pulled = two_form_from_matrix(&twisted, tol)
                .expect("antisymmetric")
                .pullback(&graph_shear(&tau).to_complex())
                .expect("dimensions match");
            worst_pullback = worst_pullback.max(matrix_from_two_form(&pulled).max_abs_diff(
                &matrix_from_two_form(&two_form_from_matrix(&base, tol).expect("antisymmetric")),
            ));
        }
    }
    checks.defect(
        "gcs.symplectomorphism.congruence",
        worst_congruence,
        1e-12,
        None,
    );
    checks.defect(
        "gcs.symplectomorphism.pullback",
        worst_pullback,
        1e-12,
        None,
    );
}

fn gerbe_suite(config: &RunConfig, checks: &mut Checks) {
    let n = config.n;

    match build_cover(n, config.epsilon) {
        Ok(cover) => {
            let expected = 3usize.pow(2 * n as u32);
            checks.boolean(
                "gerbe.cover.count",
                cover.len() == expected,
                Some(format!("{} boxes", cover.len())),
            );
            // Membership sampling on a coarse rational grid.
            let samples = 7usize;
            let grid_points: Vec<Rat> = (0..samples)
                .map(|k| Rat::new(k as i64, samples as i64))
                .collect();
            let mut all_covered = true;
            let dims = 2 * n;
            let total = samples.pow(dims as u32);
            for code in 0..total {
                let mut point = vec![Rat::new(0, 1); dims];
                let mut rest = code;
                for slot in point.iter_mut() {
                    *slot = grid_points[rest % samples];
                    rest /= samples;
                }
                if !cover
                    .iter()
                    .any(|(_, bx)| bx.contains(&point[..n], &point[n..]))
                {
                    all_covered = false;
                    break;
                }
            }
            checks.boolean(
                "gerbe.cover.membership",
                all_covered,
                Some(format!("{total} sampled points")),
            );
        }
        Err(e) => checks.fail("gerbe.cover.count", e.to_string()),
    }

    for epsilon in [config.epsilon, Rat::new(1, 30)] {
        let name = format!(
            "gerbe.zero_connection[eps={}/{}]",
            epsilon.numer(),
            epsilon.denom()
        );
        let result = if n <= 2 {
            verify_zero_connection(n, &config.tau, epsilon)
        } else {
            zero_connection_report_factored(
                n,
                &config.tau,
                epsilon,
                TransitionCompletion::Antisymmetric,
            )
        };
        match result {
            Ok(report) => checks.boolean(
                &name,
                report.pass,
                Some(format!(
                    "{} triples, {} violations",
                    report.triples_checked, report.violation_count
                )),
            ),
            Err(e) => checks.fail(&name, e.to_string()),
        }
    }

    // Negative control: dropping the antisymmetric completion must break
    // the cocycle whenever the twist is nonzero.
    if config.tau.is_zero() {
        checks.skip(
            "gerbe.zero_connection.negative",
            "twist is zero: the broken rule is vacuously consistent".to_string(),
        );
    } else {
        let result = if n <= 2 {
            zero_connection_report(
                n,
                &config.tau,
                config.epsilon,
                TransitionCompletion::ForwardOnly,
            )
        } else {
            zero_connection_report_factored(
                n,
                &config.tau,
                config.epsilon,
                TransitionCompletion::ForwardOnly,
            )
        };
        match result {
            Ok(report) => checks.boolean(
                "gerbe.zero_connection.negative",
                !report.pass,
                Some(format!("{} violations detected", report.violation_count)),
            ),
            Err(e) => checks.fail("gerbe.zero_connection.negative", e.to_string()),
        }
    }

    let one_conn_n = n.min(2);
    match verify_one_connection(one_conn_n, &shrink_twist(&config.tau, one_conn_n)) {
        Ok(report) => checks.boolean(
            "gerbe.one_connection",
            report.pass && report.flat_zero_connection,
            Some(format!("{} overlaps", report.pairs_checked)),
        ),
        Err(e) => checks.fail("gerbe.one_connection", e.to_string()),
    }
    let perturbed = LocalTwoForm {
        constant: shrink_twist(&config.tau, one_conn_n),
        linear_in_x1: Some(IntMatrix::identity(one_conn_n)),
    };
    let chart = CoverIndex::new(vec![1; one_conn_n], vec![1; one_conn_n]).expect("valid index");
    match one_connection_report(
        one_conn_n,
        &shrink_twist(&config.tau, one_conn_n),
        Some((&chart, &perturbed)),
    ) {
        Ok(report) => checks.boolean(
            "gerbe.one_connection.negative",
            !report.pass,
            Some(format!(
                "{} overlap mismatches",
                report.delta_beta_violations
            )),
        ),
        Err(e) => checks.fail("gerbe.one_connection.negative", e.to_string()),
    }
}

fn shrink_twist(tau: &IntMatrix, n: usize) -> IntMatrix {
    let mut out = IntMatrix::zeros(n);
    for i in 0..n.min(tau.order()) {
        for j in 0..n.min(tau.order()) {
            out.set(i, j, tau.get(i, j));
        }
    }
    out
}

fn objects_suite(config: &RunConfig, checks: &mut Checks) {
    let tol = &config.tolerances;

    // Configured objects.
    for (index, section) in config.objects.iter().enumerate() {
        let label = format!("objects.config[{index}]");
        let bundle =
            match BundleObject::new(config.torus.clone(), config.tau.clone(), section.clone()) {
                Ok(b) => b,
                Err(e) => {
                    checks.fail(&label, e.to_string());
                    continue;
                }
            };
        // Quasi-periodicity at seeded sample pairs.
        let mut rng = synth::rng_for(config.seed, &format!("objects.qp[{index}]"));
        let mut worst_qp = 0.0f64;
        for _ in 0..100 {
            let x: Vec<f64> = (0..config.n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let axis = rng.gen_range(0..config.n);
            let mut shifted = x.clone();
            shifted[axis] += 1.0;
            let a = section.eval(&shifted);
            let b = section.eval(&x);
            for i in 0..config.n {
                let jump = a[i] - b[i] - section.winding().get(i, axis) as f64;
                worst_qp = worst_qp.max(jump.abs());
            }
        }
        checks.defect(&format!("{label}.quasi_periodicity"), worst_qp, 1e-9, None);

        let compat = bundle.verify_transition_compat(tol);
        checks.defect(
            &format!("{label}.transition_compat"),
            compat.max_defect,
            tol.abs_tol,
            None,
        );

        let grid = sample_grid(section, config.grid_density);
        let holo = bundle.is_holomorphic(&grid, tol);
        let worst_02 = grid
            .iter()
            .map(|x| bundle.zero_two_part(x, tol).max_abs())
            .fold(0.0f64, f64::max);
        let zero_two_agrees = holo.holds == (worst_02 <= 1e-9);
        match GraphLagrangian::new(config.torus.clone(), config.tau.clone(), section.clone()) {
            Ok(lagrangian) => match lagrangian.is_fukaya_object(&grid, tol) {
                Ok(fukaya) => {
                    let agree =
                        holo.holds == fukaya.holds && fukaya.routes_agree && zero_two_agrees;
                    checks.boolean(
                        &format!("{label}.correspondence"),
                        agree,
                        Some(format!(
                            "holomorphic={} fukaya={} zero_two_vanishes={}",
                            holo.holds,
                            fukaya.holds,
                            worst_02 <= 1e-9
                        )),
                    );
                }
                Err(e) => checks.fail(&format!("{label}.correspondence"), e.to_string()),
            },
            Err(e) => checks.fail(&format!("{label}.correspondence"), e.to_string()),
        }
    }
    if config.objects.is_empty() {
        checks.skip(
            "objects.config",
            "no objects configured; randomized batch still runs".to_string(),
        );
    }

    // Randomized batch: three-route agreement with zero disagreements.
    let mut rng = synth::rng_for(config.seed, "objects.random");
    let mut disagreements = 0usize;
    let mut total = 0usize;
    let mut worst_route_gap = 0.0f64;
    for n in 1..=2usize {
        for case in 0..15 {
            let make_symmetric = case % 2 == 0;
            let (torus, section) = if make_symmetric {
                let family = synth::holomorphic_family(&mut rng, n, tol);
                let affine = case % 4 == 0;
                let section = synth::holomorphic_section(&mut rng, &family, affine);
                (family.torus, section)
            } else {
                let torus = synth::random_torus(&mut rng, n, tol);
                let winding = if n == 1 {
                    IntMatrix::identity(1)
                } else {
                    synth::asymmetric_winding(&mut rng, &torus)
                };
                let section = synth::random_section(&mut rng, winding, case % 3);
                (torus, section)
            };
            if n == 1 && !make_symmetric {
                // 1x1 products are always symmetric; skip the asymmetric leg.
                continue;
            }
            let tau = synth::random_twist(&mut rng, n, 2);
            let grid = sample_grid(&section, config.grid_density);
            let bundle = BundleObject::new(torus.clone(), tau.clone(), section.clone())
                .expect("dimensions agree");
            let lagrangian = GraphLagrangian::new(torus.clone(), tau.clone(), section.clone())
                .expect("dimensions agree");
            let holo = bundle.is_holomorphic(&grid, tol);
            let worst_02 = grid
                .iter()
                .map(|x| bundle.zero_two_part(x, tol).max_abs())
                .fold(0.0f64, f64::max);
            let fukaya = lagrangian
                .is_fukaya_object(&grid, tol)
                .expect("valid torus");
            total += 1;
            if holo.holds != fukaya.holds
                || !fukaya.routes_agree
                || holo.holds != (worst_02 <= 1e-9)
            {
                disagreements += 1;
            }
            // Restriction two-route agreement on one grid point.
            let m = torus.mirror_symplectic_matrix(tol).expect("valid torus");
            let x = &grid[grid.len() / 2];
            let gap = lagrangian
                .omega_restriction(x, tol)
                .expect("valid torus")
                .max_abs_diff(&lagrangian.restriction_closed_form(&m.imag_part(), x));
            worst_route_gap = worst_route_gap.max(gap);
        }
    }
    checks.boolean(
        "objects.random.correspondence",
        disagreements == 0,
        Some(format!("{total} objects, {disagreements} disagreements")),
    );
    checks.defect(
        "objects.random.restriction_routes",
        worst_route_gap,
        1e-12,
        None,
    );
}

fn dhym_suite(config: &RunConfig, checks: &mut Checks) {
    let tol = &config.tolerances;

    match kahler_verify(&config.torus, tol) {
        Ok(report) if report.metric_positive_definite && report.omega_invertible => {
            let combined = report
                .compatibility_defect
                .max(report.omega_factorization_defect)
                .max(report.metric_factorization_defect);
            checks.defect("dhym.kahler.config", combined, 1e-12, None);
        }
        Ok(report) => checks.fail(
            "dhym.kahler.config",
            format!(
                "metric positive definite: {}, form invertible: {}",
                report.metric_positive_definite, report.omega_invertible
            ),
        ),
        Err(e) => checks.fail("dhym.kahler.config", e.to_string()),
    }

    let mut rng = synth::rng_for(config.seed, "dhym.kahler.random");
    let mut worst_compat = 0.0f64;
    let mut all_structural = true;
    for n in 1..=4usize {
        for _ in 0..10 {
            let torus = synth::random_torus(&mut rng, n, tol);
            match kahler_verify(&torus, tol) {
                Ok(report) => {
                    worst_compat = worst_compat
                        .max(report.compatibility_defect)
                        .max(report.omega_factorization_defect)
                        .max(report.metric_factorization_defect);
                    all_structural &= report.metric_positive_definite && report.omega_invertible;
                }
                Err(_) => all_structural = false,
            }
        }
    }
    if all_structural {
        checks.defect("dhym.kahler.random", worst_compat, 1e-12, None);
    } else {
        checks.fail(
            "dhym.kahler.random",
            "a random torus failed positive-definiteness or invertibility".to_string(),
        );
    }

    // Route agreements on random (torus, slope) pairs.
    let mut rng = synth::rng_for(config.seed, "dhym.routes");
    let mut worst_top_gap = 0.0f64;
    let mut worst_slag_gap = 0.0f64;
    for n in 1..=3usize {
        for _ in 0..12 {
            let torus = synth::random_torus(&mut rng, n, tol);
            let slope = synth::random_real_matrix(&mut rng, n);
            match dhym_top_parts(&torus, &slope, tol) {
                Ok(top) => {
                    let rel = (top.via_wedge - top.via_closed_form).norm()
                        / top.via_closed_form.norm().max(1.0);
                    worst_top_gap = worst_top_gap.max(rel);
                }
                Err(e) => {
                    checks.fail("dhym.top.routes", e.to_string());
                    return;
                }
            }
            let tau = synth::random_regular_twist(&mut rng, &torus, 2);
            match slag_value_parts(&torus, &tau, &slope, tol) {
                Ok(v) => {
                    let rel = (v.via_closed_form - v.via_direct_determinant).norm()
                        / v.via_closed_form.norm().max(1.0);
                    worst_slag_gap = worst_slag_gap.max(rel);
                }
                Err(e) => {
                    checks.fail("dhym.slag.routes", e.to_string());
                    return;
                }
            }
        }
    }
    checks.defect("dhym.top.routes", worst_top_gap, 1e-9, None);
    checks.defect("dhym.slag.routes", worst_slag_gap, 1e-9, None);

    // Phase equivalence on configured objects.
    for (index, section) in config.objects.iter().enumerate() {
        let name = format!("dhym.config[{index}].equivalence");
        let grid = sample_grid(section, config.grid_density);
        match equivalence_check(section, &config.torus, &config.tau, &grid, tol) {
            Ok(EquivalenceOutcome::Checked(report)) => {
                let phase_ok = report.existence_agree
                    && report.delta_matches.unwrap_or(true)
                    && report.delta_spread.map_or(true, |s| s <= 1e-12);
                checks.boolean(
                    &name,
                    phase_ok,
                    Some(match (report.dhym.exists, report.delta) {
                        (true, Some(delta)) => format!(
                            "theta_dhym={:.6} theta_slag={:.6} delta={:.6} (expected {:.6}, zero={})",
                            report.dhym.theta.unwrap_or(f64::NAN),
                            report.slag.theta.unwrap_or(f64::NAN),
                            delta,
                            report.delta_expected,
                            report.delta_is_zero.unwrap_or(false)
                        ),
                        _ => format!(
                            "phase spread dhym={:.3e} slag={:.3e}: no constant phase on either side",
                            report.dhym.max_phase_spread, report.slag.max_phase_spread
                        ),
                    }),
                );
            }
            Ok(EquivalenceOutcome::BothRejected {
                holomorphy_defect,
                lagrangian_defect,
            }) => checks.boolean(
                &name,
                true,
                Some(format!(
                    "both checkers reject (defects {holomorphy_defect:.3e} / {lagrangian_defect:.3e}); equivalence vacuous"
                )),
            ),
            Ok(EquivalenceOutcome::PreconditionMismatch { detail }) => {
                checks.fail(&name, detail)
            }
            Ok(EquivalenceOutcome::MirrorUndefined { det_norm }) => checks.skip(
                &name,
                format!("mirror undefined: |det(-τ - iYᵗ)| = {det_norm:.3e}"),
            ),
            Err(e) => checks.fail(&name, e.to_string()),
        }
    }

    // Randomized equivalence batch on affine holomorphic objects.
    let mut rng = synth::rng_for(config.seed, "dhym.equivalence");
    let mut worst_delta_gap = 0.0f64;
    let mut existence_failures = 0usize;
    let mut batch = 0usize;
    for n in 1..=3usize {
        for _ in 0..10 {
            let family = synth::holomorphic_family(&mut rng, n, tol);
            let section = synth::holomorphic_section(&mut rng, &family, true);
            let tau = synth::random_regular_twist(&mut rng, &family.torus, 2);
            let grid = lattice(n, 3);
            match equivalence_check(&section, &family.torus, &tau, &grid, tol) {
                Ok(EquivalenceOutcome::Checked(report)) => {
                    batch += 1;
                    if !report.existence_agree || !report.dhym.exists {
                        existence_failures += 1;
                    }
                    if let (Some(delta), expected) = (report.delta, report.delta_expected) {
                        worst_delta_gap = worst_delta_gap
                            .max(crate::matrix::phase_distance_mod_pi(delta, expected));
                    }
                }
                Ok(other) => {
                    existence_failures += 1;
                    batch += 1;
                    let _ = other;
                }
                Err(e) => {
                    checks.fail("dhym.equivalence.random", e.to_string());
                    return;
                }
            }
        }
    }
    checks.boolean(
        "dhym.equivalence.random",
        existence_failures == 0,
        Some(format!(
            "{batch} affine objects, {existence_failures} failures"
        )),
    );
    checks.defect("dhym.equivalence.delta", worst_delta_gap, 1e-9, None);

    // The singular-mirror case must surface as a skip, not a crash.
    let singular_torus = crate::gcs::ComplexTorus::square(2);
    let singular_tau = IntMatrix::from_rows(vec![vec![0, 1], vec![-1, 0]]).expect("square");
    let section = SectionData::zero(2);
    let grid = lattice(2, 3);
    match equivalence_check(&section, &singular_torus, &singular_tau, &grid, tol) {
        Ok(EquivalenceOutcome::MirrorUndefined { det_norm }) => checks.boolean(
            "dhym.mirror_undefined.surfaced",
            true,
            Some(format!("skipped with |det| = {det_norm:.3e}")),
        ),
        Ok(_) => checks.fail(
            "dhym.mirror_undefined.surfaced",
            "singular mirror denominator was not detected".to_string(),
        ),
        Err(e) => checks.fail("dhym.mirror_undefined.surfaced", e.to_string()),
    }

    // A non-affine holomorphic object with wandering phase must be rejected
    // by BOTH phase checkers.
    let mut rng = synth::rng_for(config.seed, "dhym.nonaffine");
    let family = synth::holomorphic_family(&mut rng, 2, tol);
    let section = synth::holomorphic_section(&mut rng, &family, false);
    let grid = sample_grid(&section, config.grid_density);
    match equivalence_check(&section, &family.torus, &IntMatrix::zeros(2), &grid, tol) {
        Ok(EquivalenceOutcome::Checked(report)) => checks.boolean(
            "dhym.nonaffine.no_constant_phase",
            report.existence_agree && !report.dhym.exists && !report.slag.exists,
            Some(format!(
                "spreads {:.3e} / {:.3e}",
                report.dhym.max_phase_spread, report.slag.max_phase_spread
            )),
        ),
        Ok(other) => checks.fail(
            "dhym.nonaffine.no_constant_phase",
            format!("unexpected outcome: {other:?}"),
        ),
        Err(e) => checks.fail("dhym.nonaffine.no_constant_phase", e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn test_config() -> RunConfig {
        parse_config(
            r#"{
                "n": 2,
                "T": {"re": [["0", "0.5"], ["0.5", "0"]], "im": [["1", "0"], ["0", "1"]]},
                "tau": [[0, 1], [0, 0]],
                "seed": 7,
                "objects": [
                    {"a": [[1, 0], [0, 1]], "c": ["0.25", "0"], "q": ["0", "0.5"], "modes": []},
                    {"a": [[0, 1], [0, 0]], "c": ["0", "0"], "q": ["0", "0"], "modes": []}
                ]
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn suite_names_parse() {
        assert_eq!("gcs".parse::<SuiteName>().unwrap(), SuiteName::Gcs);
        assert_eq!("all".parse::<SuiteName>().unwrap(), SuiteName::All);
        assert!("nope".parse::<SuiteName>().is_err());
    }

    #[test]
    fn gcs_suite_passes_on_test_config() {
        let report = run_suite(&test_config(), SuiteName::Gcs);
        assert!(report.overall_pass, "{}", report.render_table());
    }

    #[test]
    fn gerbe_suite_passes_on_test_config() {
        let report = run_suite(&test_config(), SuiteName::Gerbe);
        assert!(report.overall_pass, "{}", report.render_table());
    }

    #[test]
    fn objects_suite_passes_on_test_config() {
        let report = run_suite(&test_config(), SuiteName::Objects);
        assert!(report.overall_pass, "{}", report.render_table());
    }

    #[test]
    fn dhym_suite_passes_on_test_config() {
        let report = run_suite(&test_config(), SuiteName::Dhym);
        assert!(report.overall_pass, "{}", report.render_table());
    }

    #[test]
    fn reports_are_deterministic() {
        let config = test_config();
        let a = run_suite(&config, SuiteName::All);
        let b = run_suite(&config, SuiteName::All);
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.render_table(), b.render_table());
    }

    #[test]
    fn exit_code_contract() {
        let report = run_suite(&test_config(), SuiteName::Gcs);
        assert_eq!(report.exit_code(), 0);
    }
}
