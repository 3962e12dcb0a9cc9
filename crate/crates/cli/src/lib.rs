//! Command-line front end: ψ_n tables, membership tests, extremal-function
//! exports and the verification suite.

use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use qconic::classes::DEFAULT_TAIL_TOLERANCE;
use qconic::classes::{jucv_membership, just_membership, ClassParams, GridSpec, MembershipVerdict};
use qconic::conic::{
    boundary_curve, extremal_coeffs, extremal_eval, ConicParams, DEFAULT_RADIUS, DEFAULT_SAMPLES,
};
use qconic::qcore::QContext;
use qconic::qoperator::{weights, OperatorParams};
use qconic::series::TruncatedSeries;
use qconic::verify::{run_suite, SuiteConfig, VerificationReport};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "QCONIC_OUTPUT_DIR";
pub const REPORTS_FILE: &str = "reports.json";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const EXTREMAL_SAMPLES_FILE: &str = "extremal_samples.csv";
pub const EXTREMAL_COEFFS_FILE: &str = "extremal_coeffs.csv";
pub const BOUNDARY_FILE: &str = "boundary.csv";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid value for {flag}: {message}")]
    Param { flag: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("malformed input {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Numeric(#[from] qconic::Error),
}

impl CliError {
    fn param(flag: &str, message: impl Into<String>) -> Self {
        Self::Param {
            flag: flag.to_string(),
            message: message.into(),
        }
    }

    fn io(path: &Path, source: io::Error) -> Self {
        Self::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// Exit status for this error: 2 for bad input, 1 for anything that
    /// went wrong during the computation itself.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Numeric(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "qconic",
    version,
    about = "q-analogue conic-domain function classes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Clone, Copy, PartialEq, Args, Serialize, Deserialize)]
pub struct ParamArgs {
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub q: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub k: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma: f64,
}

impl Default for ParamArgs {
    fn default() -> Self {
        Self {
            q: 0.5,
            alpha: 1.0,
            beta: 0.0,
            k: 0.0,
            gamma: 0.0,
        }
    }
}

impl ParamArgs {
    /// Range checks, naming the offending flag with `prefix` prepended.
    pub fn validate(&self, prefix: &str) -> Result<()> {
        let checks: [(&str, f64, bool, &str); 5] = [
            (
                "q",
                self.q,
                self.q > 0.0 && self.q < 1.0,
                "must lie in (0, 1)",
            ),
            ("alpha", self.alpha, self.alpha > 0.0, "must be positive"),
            ("beta", self.beta, self.beta > -1.0, "must exceed -1"),
            (
                "k",
                self.k,
                self.k >= 0.0 && self.k.is_finite(),
                "must be finite and >= 0",
            ),
            (
                "gamma",
                self.gamma,
                (0.0..1.0).contains(&self.gamma),
                "must lie in [0, 1)",
            ),
        ];
        for (name, value, ok, reason) in checks {
            if !ok {
                return Err(CliError::param(
                    &format!("{prefix}{name}"),
                    format!("{value} {reason}"),
                ));
            }
        }
        Ok(())
    }

    pub fn class_params(&self) -> Result<ClassParams> {
        Ok(ClassParams::new(
            self.q, self.alpha, self.beta, self.k, self.gamma,
        )?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    Just,
    Jucv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grid {
    /// Polar grid up to radius 0.95.
    Standard,
    /// Grid limited to where the truncation tail is negligible.
    Truncation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Default,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Table of the operator weights psi_n.
    Coeffs {
        #[command(flatten)]
        params: ParamArgs,
        /// Largest index.
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output file (stdout when absent).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Membership test of a function read from JSON.
    Membership {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Class::Just)]
        class: Class,
        #[arg(long, value_enum, default_value_t = Grid::Standard)]
        grid: Grid,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Samples, coefficients and boundary curve of the conic extremal function.
    Extremal {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        k: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gamma: f64,
        /// Number of coefficients and of points per exported curve.
        #[arg(long, default_value_t = 32)]
        n: usize,
        /// Radius of the sampled circle.
        #[arg(long, default_value_t = 0.9)]
        radius: f64,
        #[arg(long, env = OUTPUT_DIR_ENV, default_value = ".")]
        output_dir: PathBuf,
    },
    /// Runs the verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::Default)]
        suite: Suite,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        degree: usize,
        #[arg(long, env = OUTPUT_DIR_ENV, default_value = ".")]
        output_dir: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Coeffs,
    Membership { class: Class, grid: Grid },
    Extremal,
    Verify { suite: Suite },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IoConfig {
    pub input: Option<PathBuf>,
    /// File for `coeffs` and `membership`, directory for `extremal` and
    /// `verify`; stdout when absent.
    pub output: Option<PathBuf>,
    pub format: Format,
}

/// Everything `run` needs, independent of how it was parsed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub params: ParamArgs,
    pub io: IoConfig,
    pub seed: u64,
    pub degree: usize,
    /// Sampling radius of `extremal`.
    pub radius: f64,
}

impl From<Sub> for RunConfig {
    fn from(sub: Sub) -> Self {
        let base = |command, params, io| RunConfig {
            command,
            params,
            io,
            seed: 0,
            degree: 32,
            radius: 0.9,
        };
        match sub {
            Sub::Coeffs {
                params,
                n,
                format,
                output,
            } => RunConfig {
                degree: n,
                ..base(
                    Command::Coeffs,
                    params,
                    IoConfig {
                        input: None,
                        output,
                        format,
                    },
                )
            },
            Sub::Membership {
                input,
                class,
                grid,
                format,
                output,
            } => base(
                Command::Membership { class, grid },
                ParamArgs::default(),
                IoConfig {
                    input: Some(input),
                    output,
                    format,
                },
            ),
            Sub::Extremal {
                k,
                gamma,
                n,
                radius,
                output_dir,
            } => RunConfig {
                degree: n,
                radius,
                ..base(
                    Command::Extremal,
                    ParamArgs {
                        k,
                        gamma,
                        ..ParamArgs::default()
                    },
                    IoConfig {
                        input: None,
                        output: Some(output_dir),
                        format: Format::Csv,
                    },
                )
            },
            Sub::Verify {
                suite,
                seed,
                degree,
                output_dir,
            } => RunConfig {
                seed,
                degree,
                ..base(
                    Command::Verify { suite },
                    ParamArgs::default(),
                    IoConfig {
                        input: None,
                        output: Some(output_dir),
                        format: Format::Csv,
                    },
                )
            },
        }
    }
}

/// Function input of `membership`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionInput {
    pub coeffs_re: Vec<f64>,
    #[serde(default)]
    pub coeffs_im: Vec<f64>,
    pub params: ParamArgs,
}

impl FunctionInput {
    pub fn series(&self) -> Result<TruncatedSeries> {
        if self.coeffs_im.len() > self.coeffs_re.len() {
            return Err(CliError::param(
                "--input",
                "coeffs_im is longer than coeffs_re",
            ));
        }
        let coeffs = self
            .coeffs_re
            .iter()
            .enumerate()
            .map(|(i, &re)| Complex64::new(re, self.coeffs_im.get(i).copied().unwrap_or(0.0)))
            .collect();
        let f = TruncatedSeries::new(coeffs);
        f.ensure_normalized()
            .map_err(|e| CliError::param("--input", e.to_string()))?;
        Ok(f)
    }
}

/// One row of the verification summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub theorem: String,
    pub params: String,
    pub trials: usize,
    pub violations: usize,
    pub worst_slack: f64,
}

impl From<&VerificationReport> for SummaryRow {
    fn from(r: &VerificationReport) -> Self {
        Self {
            theorem: r.theorem.clone(),
            params: r.params.clone(),
            trials: r.trials,
            violations: r.violations,
            worst_slack: r.worst_slack,
        }
    }
}

/// Parameter checks done before any work.
pub fn validate(config: &RunConfig) -> Result<()> {
    match config.command {
        Command::Coeffs => {
            config.params.validate("--")?;
            if config.degree == 0 {
                return Err(CliError::param("--n", "must be at least 1"));
            }
        }
        Command::Membership { .. } => {}
        Command::Extremal => {
            config.params.validate("--")?;
            if config.degree < 2 {
                return Err(CliError::param("--n", "must be at least 2"));
            }
            if !(config.radius > 0.0 && config.radius < 1.0) {
                return Err(CliError::param(
                    "--radius",
                    format!("{} must lie in (0, 1)", config.radius),
                ));
            }
        }
        Command::Verify { .. } => {
            if config.degree < 3 {
                return Err(CliError::param("--degree", "must be at least 3"));
            }
        }
    }
    Ok(())
}

/// Runs `config`; returns 0 on success and 1 when verification found
/// violations.
pub fn run(config: &RunConfig) -> Result<u8> {
    validate(config)?;
    match config.command {
        Command::Coeffs => run_coeffs(config),
        Command::Membership { class, grid } => run_membership(config, class, grid),
        Command::Extremal => run_extremal(config),
        Command::Verify { suite } => run_verify(config, suite),
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).map_err(|e| CliError::io(p, e))?),
        None => Box::new(io::stdout()),
    })
}

fn write_json<T: Serialize + ?Sized>(path: Option<&Path>, value: &T) -> Result<()> {
    let shown = path.unwrap_or(Path::new("<stdout>"));
    let mut out = sink(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|source| CliError::Json {
        path: shown.display().to_string(),
        source,
    })?;
    writeln!(out).map_err(|e| CliError::io(shown, e))
}

fn run_coeffs(config: &RunConfig) -> Result<u8> {
    let p = &config.params;
    let op = OperatorParams::new(p.alpha, p.beta, QContext::new(p.q)?)?;
    let psi = weights(&op, config.degree)?;
    #[derive(Serialize)]
    struct Row {
        n: usize,
        psi_n: f64,
    }
    let rows: Vec<Row> = (1..=config.degree)
        .map(|n| Row {
            n,
            psi_n: psi.psi(n),
        })
        .collect();
    match config.io.format {
        Format::Json => write_json(config.io.output.as_deref(), &rows),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink(config.io.output.as_deref())?);
            for row in &rows {
                w.serialize(row)?;
            }
            w.flush()
                .map_err(|e| CliError::io(Path::new("<output>"), e))
        }
    }?;
    Ok(0)
}

/// Reads a function input file.
pub fn read_function(path: &Path) -> Result<FunctionInput> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.display().to_string(),
        source,
    })
}

fn run_membership(config: &RunConfig, class: Class, grid: Grid) -> Result<u8> {
    let input_path = config
        .io
        .input
        .as_deref()
        .ok_or_else(|| CliError::param("--input", "missing"))?;
    let input = read_function(input_path)?;
    input.params.validate("--input params.")?;
    let f = input.series()?;
    let params = input.params.class_params()?;
    let grid = match grid {
        Grid::Standard => GridSpec::standard(),
        Grid::Truncation => GridSpec::for_truncation(&f, DEFAULT_TAIL_TOLERANCE),
    };
    let verdict = match class {
        Class::Just => just_membership(&f, &params, &grid)?,
        Class::Jucv => jucv_membership(&f, &params, &grid)?,
    };
    match config.io.format {
        Format::Json => write_json(config.io.output.as_deref(), &verdict)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink(config.io.output.as_deref())?);
            w.write_record([
                "member",
                "worst_margin",
                "witness_re",
                "witness_im",
                "max_radius",
                "tail_estimate",
                "points",
            ])?;
            w.write_record([
                verdict.member.to_string(),
                verdict.worst_margin.to_string(),
                verdict.witness.re.to_string(),
                verdict.witness.im.to_string(),
                verdict.max_radius.to_string(),
                verdict.tail_estimate.to_string(),
                verdict.points.to_string(),
            ])?;
            w.flush()
                .map_err(|e| CliError::io(Path::new("<output>"), e))?;
        }
    }
    Ok(0)
}

/// Parses a verdict previously written by `membership`.
pub fn parse_verdict(text: &str) -> serde_json::Result<MembershipVerdict> {
    serde_json::from_str(text)
}

fn output_dir(config: &RunConfig) -> Result<PathBuf> {
    let dir = config
        .io
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    Ok(dir)
}

fn run_extremal(config: &RunConfig) -> Result<u8> {
    let conic = ConicParams::new(config.params.k, config.params.gamma)?;
    let dir = output_dir(config)?;
    let m = config.degree;

    let mut w = csv::Writer::from_path(dir.join(EXTREMAL_SAMPLES_FILE))?;
    w.write_record(["theta", "re", "im"])?;
    for j in 0..m {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
        let v = extremal_eval(Complex64::from_polar(config.radius, theta), &conic)?;
        w.write_record([theta.to_string(), v.re.to_string(), v.im.to_string()])?;
    }
    w.flush().map_err(|e| CliError::io(&dir, e))?;

    let coeffs = extremal_coeffs(&conic, m, DEFAULT_RADIUS, DEFAULT_SAMPLES)?;
    let mut w = csv::Writer::from_path(dir.join(EXTREMAL_COEFFS_FILE))?;
    w.write_record(["n", "p_n"])?;
    for (n, p) in coeffs.as_series().coeffs().iter().enumerate() {
        w.write_record([n.to_string(), p.re.to_string()])?;
    }
    w.flush().map_err(|e| CliError::io(&dir, e))?;

    let mut w = csv::Writer::from_path(dir.join(BOUNDARY_FILE))?;
    w.write_record(["re", "im"])?;
    for p in boundary_curve(&conic, m) {
        w.write_record([p.re.to_string(), p.im.to_string()])?;
    }
    w.flush().map_err(|e| CliError::io(&dir, e))?;
    Ok(0)
}

/// Writes the summary CSV of `reports` to `path`.
pub fn write_summary(path: &Path, reports: &[VerificationReport]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in reports {
        w.serialize(SummaryRow::from(r))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn run_verify(config: &RunConfig, suite: Suite) -> Result<u8> {
    let suite_config = match suite {
        Suite::Default => SuiteConfig {
            degree: config.degree,
            ..SuiteConfig::default_suite(config.seed)
        },
    };
    let reports = run_suite(&suite_config)?;
    let dir = output_dir(config)?;
    let json_path = dir.join(REPORTS_FILE);
    write_json(Some(&json_path), &reports)?;
    write_summary(&dir.join(SUMMARY_FILE), &reports)?;

    let violations: usize = reports.iter().map(|r| r.violations).sum();
    let failed: Vec<&VerificationReport> = reports.iter().filter(|r| !r.passed()).collect();
    let mut out = io::stdout().lock();
    let _ = writeln!(
        out,
        "{} reports, {} failed, {} violations; wrote {} and {}",
        reports.len(),
        failed.len(),
        violations,
        json_path.display(),
        dir.join(SUMMARY_FILE).display()
    );
    for r in failed {
        let _ = writeln!(
            out,
            "FAIL {} [{}]: {} of {} trials, worst slack {:e}",
            r.theorem, r.params, r.violations, r.trials, r.worst_slack
        );
    }
    Ok(if violations == 0 { 0 } else { 1 })
}
