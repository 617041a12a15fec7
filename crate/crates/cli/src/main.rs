//! Command-line front end: verification suites and mirror-data reports.
//!
//! Exit codes: 0 all checks pass, 1 at least one check failed, 2 config or
//! usage error. Reports go to stdout and are byte-identical for identical
//! (config, seed); timing goes to stderr.

use clap::{Parser, Subcommand};
use gerbytorus::config::{canonical_json, load_config, RunConfig};
use gerbytorus::dhym::mirror_denominator;
use gerbytorus::gcs::{
    b_transform, extract_complexified_symplectic, extract_period_matrix, gcs_from_complex,
    gcs_from_kahler, mirror,
};
use gerbytorus::matrix::{ComplexMatrix, RealMatrix, ToleranceConfig};
use gerbytorus::suite::{run_suite, SuiteName};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "gerbytorus",
    about = "Construct mirror data of complex tori and their flat gerby deformations, and verify the structural identities numerically",
    version
)]
struct Cli {
    /// Path to the run configuration (JSON); "-" reads stdin.
    #[arg(long, global = true, default_value = "-")]
    config: String,

    /// Override the config seed for randomized batches.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Emit machine-readable JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,

    /// Override the absolute tolerance.
    #[arg(long, global = true)]
    tol_abs: Option<f64>,

    /// Override the phase tolerance (radians).
    #[arg(long, global = true)]
    tol_phase: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one verification suite: gcs, gerbe, objects, dhym or all.
    Verify { suite: String },
    /// Print the mirror-dual data of the configured torus and twist.
    Mirror,
    /// Run every suite and print the full report.
    Report,
}

fn load(cli: &Cli) -> Result<RunConfig, String> {
    let mut config = load_config(&cli.config).map_err(|e| e.to_string())?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if cli.tol_abs.is_some() || cli.tol_phase.is_some() {
        let current = config.tolerances;
        config.tolerances = ToleranceConfig::new(
            cli.tol_abs.unwrap_or(current.abs_tol),
            current.rel_tol,
            cli.tol_phase.unwrap_or(current.phase_tol),
        )
        .map_err(|e| e.to_string())?;
    }
    Ok(config)
}

fn matrix_rows(m: &RealMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| format!("{}", m.get(i, j))).collect())
        .collect()
}

fn complex_rows(m: &ComplexMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let v = m.get(i, j);
                    format!(
                        "{}{}{}i",
                        v.re,
                        if v.im < 0.0 { "-" } else { "+" },
                        v.im.abs()
                    )
                })
                .collect()
        })
        .collect()
}

fn print_matrix_block(title: &str, rows: &[Vec<String>]) {
    println!("{title}:");
    for row in rows {
        println!("  [{}]", row.join(", "));
    }
}

fn mirror_command(config: &RunConfig, json: bool) -> Result<bool, String> {
    let tol = &config.tolerances;
    let twist_trivial = gerbytorus::gcs::b_transform_is_trivial(&config.torus, &config.tau, tol);
    if twist_trivial && !json {
        eprintln!("warning: τT is symmetric, so the configured twist deforms nothing");
    }
    let complex_structure = gcs_from_complex(&config.torus, tol).map_err(|e| e.to_string())?;
    let kahler_structure = gcs_from_kahler(&config.torus, tol).map_err(|e| e.to_string())?;

    let untwisted = extract_complexified_symplectic(&mirror(&complex_structure), tol)
        .map_err(|e| e.to_string())?;
    let twisted = extract_complexified_symplectic(
        &mirror(&b_transform(&complex_structure, &config.tau)),
        tol,
    )
    .map_err(|e| e.to_string())?;
    let twist_consistent = twisted.twist_matches(&config.tau, tol);

    let base_period =
        extract_period_matrix(&mirror(&kahler_structure), tol).map_err(|e| e.to_string())?;
    let denominator = mirror_denominator(&config.torus, &config.tau);
    let twisted_period = if denominator.determinant().norm() > tol.abs_tol {
        Some(
            extract_period_matrix(&mirror(&b_transform(&kahler_structure, &config.tau)), tol)
                .map_err(|e| e.to_string())?,
        )
    } else {
        None
    };

    if json {
        let doc = serde_json::json!({
            "twist_acts_trivially": twist_trivial,
            "omega_mat": matrix_rows(&untwisted.omega_mat),
            "b_mat": matrix_rows(&untwisted.b_mat),
            "twisted": {
                "omega_xx": matrix_rows(&twisted.omega_xx),
                "b_xx": matrix_rows(&twisted.b_xx),
                "consistent_with_config_twist": twist_consistent,
            },
            "mirror_period_matrix": complex_rows(&base_period),
            "twisted_mirror_period_matrix": twisted_period.as_ref().map(complex_rows),
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&doc).expect("serializable")
        );
    } else {
        print_matrix_block(
            "mirror symplectic matrix (omega / 2pi)",
            &matrix_rows(&untwisted.omega_mat),
        );
        print_matrix_block(
            "mirror B-field matrix (B / 2pi)",
            &matrix_rows(&untwisted.b_mat),
        );
        print_matrix_block(
            "twisted dx^dx block of omega (/ 2pi)",
            &matrix_rows(&twisted.omega_xx),
        );
        print_matrix_block(
            "twisted dx^dx block of B (/ 2pi)",
            &matrix_rows(&twisted.b_xx),
        );
        println!(
            "configured twist consistent with twisted blocks: {}",
            twist_consistent
        );
        print_matrix_block("mirror period matrix", &complex_rows(&base_period));
        match &twisted_period {
            Some(m) => print_matrix_block("twisted mirror period matrix", &complex_rows(m)),
            None => println!("twisted mirror period matrix: undefined (det(-tau - i*Y^t) = 0)"),
        }
    }
    Ok(twist_consistent)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match load(&cli) {
        Ok(c) => c,
        Err(message) => {
            eprintln!("config error: {message}");
            return ExitCode::from(2);
        }
    };
    let started = Instant::now();
    let code = match &cli.command {
        Command::Verify { suite } => {
            let suite: SuiteName = match suite.parse() {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("config error: {e}");
                    return ExitCode::from(2);
                }
            };
            let report = run_suite(&config, suite);
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.render_table());
            }
            report.exit_code()
        }
        Command::Report => {
            let report = run_suite(&config, SuiteName::All);
            if cli.json {
                println!("{}", report.to_json());
            } else {
                println!("configuration:\n{}", canonical_json(&config));
                print!("{}", report.render_table());
            }
            report.exit_code()
        }
        Command::Mirror => match mirror_command(&config, cli.json) {
            Ok(consistent) => {
                if consistent {
                    0
                } else {
                    1
                }
            }
            Err(message) => {
                eprintln!("config error: {message}");
                2
            }
        },
    };
    eprintln!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
    ExitCode::from(code as u8)
}
