//! Command-line front end for the `schlicht` toolkit.
//!
//! Every command prints (or writes with `--json`) a [`report::ReportEnvelope`].
//! Negative verdicts are successful analyses and exit 0; usage errors exit 2,
//! numerical failures 3 and I/O failures 1.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

pub mod commands;
pub mod formula;
pub mod output;
pub mod render;
pub mod report;
pub mod spec;

use report::{CommandEcho, ReportEnvelope};
use spec::FunctionSpec;

/// Worker count for the data-parallel scans.
pub const THREADS_ENV: &str = "SCHLICHT_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "schlicht",
    version,
    about = "Numerical checks for the class U(lambda) on the unit disk"
)]
pub struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,

    /// Record wall_time_ms as 0 so identical requests give identical bytes.
    #[arg(long, global = true)]
    pub reproducible: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FunctionArgs {
    /// JSON function spec; the flags below override its fields.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long)]
    pub k: Option<u32>,
    /// Formula for omega, e.g. "0.5 z - 0.2 z^3" or "(z+a)/(1+az)".
    #[arg(long)]
    pub omega: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub a2: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PlanArgs {
    /// Number of dyadic circles r_j = 1 - 2^-j.
    #[arg(long)]
    pub radii_count: Option<usize>,
    #[arg(long)]
    pub angles: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KindArg {
    B1,
    B2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremArg {
    T42,
    T43,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Grid supremum of |U_f| and the class verdict.
    Membership {
        #[command(flatten)]
        function: FunctionArgs,
        #[command(flatten)]
        plan: PlanArgs,
        /// Level to test against (defaults to the function's lambda).
        #[arg(long)]
        against: Option<f64>,
    },
    /// Taylor coefficients a_1..a_n next to the bound sum_{k<n} lambda^k.
    Coeffs {
        #[command(flatten)]
        function: FunctionArgs,
        #[arg(long, default_value_t = 12)]
        n: usize,
    },
    /// Third coefficient of f_a against 1 + lambda + lambda^2, or a scan.
    Counterexample {
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        a: Option<f64>,
        /// Scan a (lambda, a) grid and estimate the threshold.
        #[arg(long)]
        scan: bool,
        #[arg(long, default_value_t = 0.2)]
        lambda_min: f64,
        #[arg(long, default_value_t = 0.4)]
        lambda_max: f64,
        #[arg(long, default_value_t = 0.001)]
        lambda_step: f64,
        /// Write the scan table here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Convexity in a direction, a direction scan, or boundary checks.
    Convexity {
        #[command(flatten)]
        function: FunctionArgs,
        #[command(flatten)]
        plan: PlanArgs,
        /// Direction to certify; scans `--gammas` directions when omitted.
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long, default_value_t = 64)]
        gammas: usize,
        #[arg(long, default_value_t = 128)]
        mu_points: usize,
        #[arg(long, default_value_t = 65)]
        nu_points: usize,
        /// Only evaluate the boundary inequalities for `--lambda`.
        #[arg(long)]
        boundary: bool,
    },
    /// Recover the Schwarz function of z/f against (1 - z)(1 - lambda z).
    Subordination {
        #[command(flatten)]
        function: FunctionArgs,
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long)]
        against: Option<f64>,
    },
    /// G-sums and Julia quotients of the example Blaschke products.
    Blaschke {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, default_value_t = 40)]
        factors: usize,
        /// Argument of the boundary point zeta.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        zeta_arg: f64,
        #[arg(long, default_value_t = 50)]
        terms: usize,
        /// Number of dyadic radii for the Julia quotients.
        #[arg(long, default_value_t = 20)]
        radii: usize,
    },
    /// Close-to-convexity certificate for H + conj(G).
    Harmonic {
        #[command(flatten)]
        function: FunctionArgs,
        #[command(flatten)]
        plan: PlanArgs,
        /// Formula for the dilatation G'/H'.
        #[arg(long)]
        dilatation: Option<String>,
        #[arg(long, value_enum)]
        theorem: TheoremArg,
    },
    /// Boundary curve f(r e^{it}) as SVG and CSV.
    Render {
        #[command(flatten)]
        function: FunctionArgs,
        #[arg(long, default_value_t = 0.999)]
        r: f64,
        #[arg(long, default_value_t = 4096)]
        n: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Membership { .. } => "membership",
            Command::Coeffs { .. } => "coeffs",
            Command::Counterexample { .. } => "counterexample",
            Command::Convexity { .. } => "convexity",
            Command::Subordination { .. } => "subordination",
            Command::Blaschke { .. } => "blaschke",
            Command::Harmonic { .. } => "harmonic",
            Command::Render { .. } => "render",
        }
    }
}

impl FunctionArgs {
    /// Merges the `--spec` file (if any) with the flags; flags win.
    pub fn to_spec(&self) -> Result<FunctionSpec, CliError> {
        let mut spec = match &self.spec {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                FunctionSpec::from_json(&text)?
            }
            None => FunctionSpec::default(),
        };
        if let Some(f) = &self.family {
            spec.family = f.clone();
        }
        if spec.family.is_empty() {
            return Err(CliError::Usage("--family or --spec is required".into()));
        }
        macro_rules! merge {
            ($($field:ident),*) => {$(
                if self.$field.is_some() {
                    spec.$field = self.$field.clone();
                }
            )*};
        }
        merge!(lambda, theta, a, k, omega, a2);
        Ok(spec)
    }
}

/// Result of one invocation before the JSON is emitted.
#[derive(Debug)]
pub struct Outcome {
    pub envelope: ReportEnvelope,
    /// 0, or 3 when the analysis ran but hit a numerical failure.
    pub exit_code: i32,
}

/// A command's payload, warnings and whether it ended in a numerical failure.
pub struct Payload {
    pub result: serde_json::Value,
    pub warnings: Vec<String>,
    pub numerical_failure: bool,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let payload = commands::dispatch(&cli.command)?;
    let elapsed = if cli.reproducible {
        0
    } else {
        start.elapsed().as_millis() as u64
    };
    let echo = CommandEcho {
        name: cli.command.name().into(),
        args: echo_args(&cli.command),
    };
    Ok(Outcome {
        envelope: ReportEnvelope::new(echo, payload.result, payload.warnings, elapsed),
        exit_code: if payload.numerical_failure { 3 } else { 0 },
    })
}

fn echo_args(cmd: &Command) -> serde_json::Value {
    // externally tagged: {"membership": {...}}
    match serde_json::to_value(cmd).expect("arguments serialize") {
        serde_json::Value::Object(mut m) => m.remove(cmd.name()).unwrap_or_default(),
        other => other,
    }
}

fn thread_count() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))),
        },
        Err(_) => Ok(None),
    }
}

/// Full process behaviour: parse, run on a bounded pool, emit JSON, and
/// return the exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "schlicht: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count()? {
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Numerical(format!("thread pool: {e}")))?;
    let outcome = pool.install(|| run(cli))?;
    let json = outcome.envelope.to_json();
    match &cli.json {
        Some(path) => output::write_atomic(path, json.as_bytes())?,
        None => stdout.write_all(json.as_bytes())?,
    }
    Ok(outcome.exit_code)
}
