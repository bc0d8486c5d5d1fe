use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use qes_core::algebra::AlgebraError;
use qes_core::lab::LabError;
use qes_core::models::ModelError;
use qes_core::numerics::NumericsError;
use qes_core::ode::OdeError;
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: &str = "v1";

/// Domain failure reported as JSON on stderr with exit code 1.
#[derive(Debug, Clone, Serialize)]
pub struct CliError {
    pub code: String,
    pub message: String,
    /// Flag combinations clap cannot reject on its own; exit code 2.
    #[serde(skip)]
    pub usage: bool,
}

impl CliError {
    pub fn new(code: &str, message: impl Into<String>) -> Self {
        CliError {
            code: code.to_string(),
            message: message.into(),
            usage: false,
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            usage: true,
            ..CliError::new("USAGE", message)
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        let code = match e {
            AlgebraError::MalformedRational(_) => "MALFORMED_RATIONAL",
            AlgebraError::ZeroPolynomial => "ZERO_POLYNOMIAL",
            AlgebraError::EmptyInterval => "EMPTY_INTERVAL",
            AlgebraError::Parse { .. } => "PARSE_ERROR",
            AlgebraError::NotUnivariate { .. } => "NOT_UNIVARIATE",
            AlgebraError::Schema(_) => "SCHEMA_VIOLATION",
        };
        CliError::new(code, e.to_string())
    }
}

impl From<OdeError> for CliError {
    fn from(e: OdeError) -> Self {
        let code = match e {
            OdeError::NotPolynomial { .. } => "NOT_POLYNOMIAL",
            OdeError::LeadingCoeffVanishes { .. } => "LEADING_COEFF_VANISHES",
            OdeError::WrongShape(_) => "WRONG_SHAPE",
            OdeError::UnboundParameter(_) => "UNBOUND_PARAMETER",
            OdeError::NoDerivative => "NO_DERIVATIVE",
            OdeError::IndexClash(_) => "INDEX_CLASH",
        };
        CliError::new(code, e.to_string())
    }
}

impl From<LabError> for CliError {
    fn from(e: LabError) -> Self {
        let code = match &e {
            LabError::WrongShape(_) => "WRONG_SHAPE",
            LabError::LeadingZeroAt { .. } => "LEADING_ZERO_AT",
            LabError::LeadNotConstant { .. } => "LEAD_NOT_CONST",
            LabError::UnboundParameter(_) => "UNBOUND_PARAMETER",
            LabError::DegreeDefect { .. } => "DEGREE_DEFECT",
            LabError::InsufficientMoments { .. } => "INSUFFICIENT_MOMENTS",
            LabError::SImaginary { .. } => "S_IMAGINARY",
            LabError::Algebra(a) => return a.clone().into(),
        };
        CliError::new(code, e.to_string())
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        let code = match e {
            ModelError::InvalidParams(_) => "INVALID_PARAMS",
            ModelError::InvalidG1(_) => "INVALID_G1",
            ModelError::BetaOutOfRange(_) => "BETA_OUT_OF_RANGE",
            ModelError::NumericOverflow(_) => "NUMERIC_OVERFLOW",
            ModelError::ResidualNonzero(_) => "RESIDUAL_NONZERO",
            ModelError::Ode(o) => return o.into(),
            ModelError::Lab(l) => return l.into(),
        };
        CliError::new(code, e.to_string())
    }
}

impl From<NumericsError> for CliError {
    fn from(e: NumericsError) -> Self {
        let code = match e {
            NumericsError::InvalidGrid(_) => "INVALID_GRID",
            NumericsError::NonfinitePotential { .. } => "NONFINITE_POTENTIAL",
            NumericsError::NoConvergence { .. } => "NO_CONVERGENCE",
            NumericsError::DegeneratePsi { .. } => "DEGENERATE_PSI",
            NumericsError::MismatchedProblems(_) => "MISMATCHED_PROBLEMS",
            NumericsError::TooManyEigenvalues { .. } => "TOO_MANY_EIGENVALUES",
        };
        CliError::new(code, e.to_string())
    }
}

/// What a subcommand produces: resolved parameters, a JSON result and the
/// same data as CSV rows (header row first).
pub struct Artifact {
    pub params: Value,
    pub result: Value,
    pub csv: String,
}

impl Artifact {
    pub fn new<T: Serialize>(params: Value, result: &T, csv: String) -> Self {
        Artifact {
            params,
            result: serde_json::to_value(result).expect("serializable result"),
            csv,
        }
    }
}

fn stamp() -> Value {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    json!({ "unix_time": secs, "tool_version": env!("CARGO_PKG_VERSION") })
}

pub fn render_json(command: &str, a: &Artifact, with_stamp: bool) -> String {
    let mut env = json!({
        "schema": format!("qeslab/{command}/{SCHEMA_VERSION}"),
        "command": command,
        "params": a.params,
    });
    if with_stamp {
        env["stamp"] = stamp();
    }
    env["result"] = a.result.clone();
    let mut s = serde_json::to_string_pretty(&env).expect("json value");
    s.push('\n');
    s
}

pub fn render_csv(command: &str, a: &Artifact, with_stamp: bool) -> String {
    let mut s = format!("# qeslab {command} {SCHEMA_VERSION} {}\n", a.params);
    if with_stamp {
        s.push_str(&format!("# stamp {}\n", stamp()));
    }
    s.push_str(&a.csv);
    s
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Shortest round-trip form, switching to exponent notation for very small
/// or large magnitudes.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
