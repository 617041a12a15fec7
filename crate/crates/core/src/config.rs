//! Configuration ingestion and canonical serialization.
//!
//! The interchange format is JSON with all real scalars written as decimal
//! strings (matrices as row-major nested arrays of decimal strings), which
//! keeps configs platform-independent and byte-stable under
//! serialize/parse round trips. Integer data (dimensions, twists, windings,
//! mode keys, seeds) uses plain JSON integers, and the cover margin ε is a
//! fraction string like "1/24".

use crate::gcs::ComplexTorus;
use crate::gerbe::Rat;
use crate::grid::DEFAULT_GRID_DENSITY;
use crate::matrix::{IntMatrix, RealMatrix, ToleranceConfig};
use crate::section::{FourierMode, SectionData};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Error, Debug)]
pub enum ConfigError {
    #[error("malformed config JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: cannot parse `{value}` as a decimal number")]
    BadDecimal { field: String, value: String },
    #[error("{field}: cannot parse `{value}` as a fraction p/q")]
    BadFraction { field: String, value: String },
    #[error("{field}: expected a {expected}x{expected} matrix")]
    BadShape { field: String, expected: usize },
    #[error("{field}: expected a vector of length {expected}")]
    BadLength { field: String, expected: usize },
    #[error("n must be between 1 and 4 (got {0})")]
    BadDimension(usize),
    #[error("epsilon must satisfy 0 < ε < 1/12 (got {0})")]
    BadEpsilon(Rat),
    #[error("grid_density must be at least 3 (got {0})")]
    BadGridDensity(usize),
    #[error("tolerances must be strictly positive")]
    BadTolerances,
    #[error("T: {0}")]
    InvalidTorus(String),
    #[error("objects[{index}]: {message}")]
    InvalidObject { index: usize, message: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct RawPeriod {
    re: Vec<Vec<String>>,
    im: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct RawMode {
    k: Vec<i64>,
    u: Vec<String>,
    v: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct RawObject {
    a: Vec<Vec<i64>>,
    c: Vec<String>,
    q: Vec<String>,
    #[serde(default)]
    modes: Vec<RawMode>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct RawTolerances {
    abs: String,
    rel: String,
    phase: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct RawConfig {
    n: usize,
    #[serde(rename = "T")]
    t: RawPeriod,
    #[serde(default)]
    tau: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    epsilon: Option<String>,
    #[serde(default)]
    grid_density: Option<usize>,
    #[serde(default)]
    tolerances: Option<RawTolerances>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    objects: Vec<RawObject>,
}

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub torus: ComplexTorus,
    pub tau: IntMatrix,
    pub epsilon: Rat,
    pub grid_density: usize,
    pub tolerances: ToleranceConfig,
    pub seed: u64,
    pub objects: Vec<SectionData>,
}

fn parse_decimal(field: &str, value: &str) -> Result<f64, ConfigError> {
    let parsed: f64 = value.trim().parse().map_err(|_| ConfigError::BadDecimal {
        field: field.to_string(),
        value: value.to_string(),
    })?;
    if !parsed.is_finite() {
        return Err(ConfigError::BadDecimal {
            field: field.to_string(),
            value: value.to_string(),
        });
    }
    Ok(parsed)
}

fn parse_fraction(field: &str, value: &str) -> Result<Rat, ConfigError> {
    let bad = || ConfigError::BadFraction {
        field: field.to_string(),
        value: value.to_string(),
    };
    let mut parts = value.trim().split('/');
    let num: i64 = parts
        .next()
        .ok_or_else(bad)?
        .trim()
        .parse()
        .map_err(|_| bad())?;
    let den: i64 = match parts.next() {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => 1,
    };
    if parts.next().is_some() || den == 0 {
        return Err(bad());
    }
    Ok(Rat::new(num, den))
}

fn parse_real_matrix(
    field: &str,
    rows: &[Vec<String>],
    n: usize,
) -> Result<RealMatrix, ConfigError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(ConfigError::BadShape {
            field: field.to_string(),
            expected: n,
        });
    }
    let mut out = RealMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            out.set(i, j, parse_decimal(&format!("{field}[{i}][{j}]"), cell)?);
        }
    }
    Ok(out)
}

fn parse_int_matrix(field: &str, rows: &[Vec<i64>], n: usize) -> Result<IntMatrix, ConfigError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(ConfigError::BadShape {
            field: field.to_string(),
            expected: n,
        });
    }
    IntMatrix::from_rows(rows.to_vec()).map_err(|_| ConfigError::BadShape {
        field: field.to_string(),
        expected: n,
    })
}

fn parse_real_vector(field: &str, values: &[String], n: usize) -> Result<Vec<f64>, ConfigError> {
    if values.len() != n {
        return Err(ConfigError::BadLength {
            field: field.to_string(),
            expected: n,
        });
    }
    values
        .iter()
        .enumerate()
        .map(|(i, v)| parse_decimal(&format!("{field}[{i}]"), v))
        .collect()
}

/// Parses and validates a config from JSON text, filling defaults
/// (ε = 1/24, grid density 9, default tolerances, τ = 0, seed = 0).
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text)?;
    let n = raw.n;
    if !(1..=4).contains(&n) {
        return Err(ConfigError::BadDimension(n));
    }
    let re = parse_real_matrix("T.re", &raw.t.re, n)?;
    let im = parse_real_matrix("T.im", &raw.t.im, n)?;

    let tolerances = match &raw.tolerances {
        None => ToleranceConfig::default(),
        Some(raw_tol) => ToleranceConfig::new(
            parse_decimal("tolerances.abs", &raw_tol.abs)?,
            parse_decimal("tolerances.rel", &raw_tol.rel)?,
            parse_decimal("tolerances.phase", &raw_tol.phase)?,
        )
        .map_err(|_| ConfigError::BadTolerances)?,
    };

    let torus = ComplexTorus::new(re, im, &tolerances)
        .map_err(|e| ConfigError::InvalidTorus(e.to_string()))?;

    let tau = match &raw.tau {
        None => IntMatrix::zeros(n),
        Some(rows) => parse_int_matrix("tau", rows, n)?,
    };

    let epsilon = match &raw.epsilon {
        None => Rat::new(1, 24),
        Some(text) => parse_fraction("epsilon", text)?,
    };
    if epsilon <= Rat::new(0, 1) || epsilon >= Rat::new(1, 12) {
        return Err(ConfigError::BadEpsilon(epsilon));
    }

    let grid_density = raw.grid_density.unwrap_or(DEFAULT_GRID_DENSITY);
    if grid_density < 3 {
        return Err(ConfigError::BadGridDensity(grid_density));
    }

    let mut objects = Vec::with_capacity(raw.objects.len());
    for (index, raw_obj) in raw.objects.iter().enumerate() {
        let winding = parse_int_matrix(&format!("objects[{index}].a"), &raw_obj.a, n)?;
        let offset = parse_real_vector(&format!("objects[{index}].c"), &raw_obj.c, n)?;
        let holonomy = parse_real_vector(&format!("objects[{index}].q"), &raw_obj.q, n)?;
        let mut modes = Vec::with_capacity(raw_obj.modes.len());
        for (mi, raw_mode) in raw_obj.modes.iter().enumerate() {
            if raw_mode.k.len() != n {
                return Err(ConfigError::BadLength {
                    field: format!("objects[{index}].modes[{mi}].k"),
                    expected: n,
                });
            }
            let u = parse_real_vector(&format!("objects[{index}].modes[{mi}].u"), &raw_mode.u, n)?;
            let v = parse_real_vector(&format!("objects[{index}].modes[{mi}].v"), &raw_mode.v, n)?;
            modes.push(FourierMode::new(raw_mode.k.clone(), u, v).map_err(|e| {
                ConfigError::InvalidObject {
                    index,
                    message: e.to_string(),
                }
            })?);
        }
        objects.push(
            SectionData::new(winding, offset, modes, holonomy).map_err(|e| {
                ConfigError::InvalidObject {
                    index,
                    message: e.to_string(),
                }
            })?,
        );
    }

    Ok(RunConfig {
        n,
        torus,
        tau,
        epsilon,
        grid_density,
        tolerances,
        seed: raw.seed.unwrap_or(0),
        objects,
    })
}

/// Reads a config from a file path, or stdin when the path is "-".
pub fn load_config(path: &str) -> Result<RunConfig, ConfigError> {
    let text = if path == "-" {
        let mut buf = String::new();
        use std::io::Read;
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        std::fs::read_to_string(path)?
    };
    parse_config(&text)
}

fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

fn real_matrix_rows(m: &RealMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| fmt_f64(m.get(i, j))).collect())
        .collect()
}

/// Canonical serialization of a validated config: defaults made explicit,
/// floats in shortest round-trip decimal form, stable field order.
pub fn canonical_json(config: &RunConfig) -> String {
    let raw = RawConfig {
        n: config.n,
        t: RawPeriod {
            re: real_matrix_rows(config.torus.re()),
            im: real_matrix_rows(config.torus.im()),
        },
        tau: Some(config.tau.rows_vec()),
        epsilon: Some(format!(
            "{}/{}",
            config.epsilon.numer(),
            config.epsilon.denom()
        )),
        grid_density: Some(config.grid_density),
        tolerances: Some(RawTolerances {
            abs: fmt_f64(config.tolerances.abs_tol),
            rel: fmt_f64(config.tolerances.rel_tol),
            phase: fmt_f64(config.tolerances.phase_tol),
        }),
        seed: Some(config.seed),
        objects: config
            .objects
            .iter()
            .map(|s| RawObject {
                a: s.winding().rows_vec(),
                c: s.offset().iter().map(|&v| fmt_f64(v)).collect(),
                q: s.holonomy().iter().map(|&v| fmt_f64(v)).collect(),
                modes: s
                    .modes()
                    .iter()
                    .map(|m| RawMode {
                        k: m.k.clone(),
                        u: m.u.iter().map(|&v| fmt_f64(v)).collect(),
                        v: m.v.iter().map(|&v| fmt_f64(v)).collect(),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("config serialization cannot fail")
}
