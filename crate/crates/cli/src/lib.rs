//! Command-line front end for `termint`.
//!
//! [`run`] parses the arguments, executes one subcommand and writes a
//! [`RunRecord`] in the requested format. Exit status: 0 when the result
//! converged or the check passed, 2 when it did not, 1 for usage errors.

mod commands;
mod render;
pub mod spec;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use termint::integrand::Integrand;
use termint::LimitPolicy;

pub use commands::Outcome;

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable naming a JSON policy file used when `--policy` is absent.
pub const POLICY_ENV: &str = "TERMINT_POLICY";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot parse `{token}`: {reason}")]
    Spec { token: String, reason: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] termint::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "termint", version, about = "Improper integrals regularised by termination functions")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Limit-detection settings. Without a policy file the defaults are adapted
/// to the integrand's period; explicit flags always win.
#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct PolicyArgs {
    /// JSON policy file (falls back to $TERMINT_POLICY).
    #[arg(long, global = true)]
    pub policy: Option<PathBuf>,
    #[arg(long, global = true)]
    pub b_start: Option<f64>,
    #[arg(long, global = true)]
    pub b_count: Option<usize>,
    #[arg(long, global = true)]
    pub b_step: Option<f64>,
    #[arg(long, global = true)]
    pub window: Option<usize>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Also report the Cesàro mean of the tail samples.
    #[arg(long, global = true)]
    pub averaging: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IntegrandArgs {
    /// Catalog name, e.g. sin_ax, x_cos_ax, exp_sin, exp_decay, square_wave.
    #[arg(long)]
    pub integrand: String,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub y: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Lower bound of integration.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
}

impl IntegrandArgs {
    fn build(&self) -> Result<Integrand, CliError> {
        let params: Vec<(&str, f64)> = [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("y", self.y),
            ("lambda", self.lambda),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k, v)))
        .collect();
        termint::catalog(&self.integrand, &params).map_err(|e| CliError::Spec {
            token: self.integrand.clone(),
            reason: e.to_string(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParametricExample {
    SinXy,
    CosXyOverX,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Evaluate one integral under one termination.
    Eval {
        #[command(flatten)]
        integrand: IntegrandArgs,
        #[arg(long, default_value = "step")]
        termination: String,
    },
    /// Evaluate under several terminations and their pairwise combinations.
    Compare {
        #[command(flatten)]
        integrand: IntegrandArgs,
        #[arg(long, required = true)]
        termination: Vec<String>,
        /// Add N members: the first termination combined with a random one.
        #[arg(long, default_value_t = 0)]
        random_extra: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare c1·∫g1 + c2·∫g2 with ∫(c1·g1 + c2·g2).
    Linearity {
        /// Integrand as name:key=value,...
        #[arg(long)]
        g1: String,
        #[arg(long)]
        g2: String,
        #[arg(long)]
        z1: String,
        #[arg(long)]
        z2: String,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        c1: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        c2: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        a: f64,
    },
    /// Differentiate under the integral sign and compare with a finite difference.
    Leibniz {
        #[arg(long, value_enum)]
        example: ParametricExample,
        #[arg(long, allow_negative_numbers = true)]
        y: f64,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, default_value_t = 1e-4)]
        h: f64,
    },
    /// Swap ∫dy and the x-integral of sin(xy) with unit weight.
    Interchange {
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        y_lo: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        y_hi: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        a: f64,
        /// Gauss–Legendre nodes for the outer integral.
        #[arg(long, default_value_t = 33)]
        nodes: usize,
    },
    /// Substitute u = r + s·x and compare the two evaluations.
    CovLinear {
        #[command(flatten)]
        integrand: IntegrandArgs,
        #[arg(long)]
        termination: String,
        #[arg(long, allow_negative_numbers = true)]
        r: f64,
        #[arg(long)]
        s: f64,
    },
    /// The square-wave substitution x = u + α·sin(πu).
    CovCounterexample {
        #[arg(long, default_value_t = 0.25, allow_negative_numbers = true)]
        alpha: f64,
    },
    /// Integral over the plane, checked across several curve families.
    Eval2d {
        /// gaussian, sin_r2 or constant.
        #[arg(long)]
        integrand: String,
        /// Value of the constant integrand.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        constant: f64,
        #[arg(long, default_value = "point")]
        kernel: String,
        #[arg(long = "family", default_values_t = ["circle".to_string(), "square".to_string()])]
        families: Vec<String>,
        /// Initial panel width for the 2-D quadrature.
        #[arg(long)]
        radial_panel: Option<f64>,
    },
    /// Reproduce the six worked examples with built-in settings.
    Demo,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval { .. } => "eval",
            Command::Compare { .. } => "compare",
            Command::Linearity { .. } => "linearity",
            Command::Leibniz { .. } => "leibniz",
            Command::Interchange { .. } => "interchange",
            Command::CovLinear { .. } => "cov-linear",
            Command::CovCounterexample { .. } => "cov-counterexample",
            Command::Eval2d { .. } => "eval2d",
            Command::Demo => "demo",
        }
    }
}

impl PolicyArgs {
    fn file_policy(&self) -> Result<Option<LimitPolicy>, CliError> {
        let path = match &self.policy {
            Some(p) => p.clone(),
            None => match std::env::var_os(POLICY_ENV) {
                Some(p) if !p.is_empty() => PathBuf::from(p),
                _ => return Ok(None),
            },
        };
        let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let policy: LimitPolicy = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: invalid policy: {e}", path.display())))?;
        Ok(Some(policy))
    }

    fn apply_overrides(&self, mut p: LimitPolicy) -> Result<LimitPolicy, CliError> {
        if let Some(v) = self.b_start {
            p.b_start = v;
        }
        if let Some(v) = self.b_count {
            p.b_count = v;
        }
        if let Some(v) = self.b_step {
            p.b_step = v;
        }
        if let Some(v) = self.window {
            p.window = v;
        }
        if let Some(v) = self.tol {
            p.tol = v;
        }
        p.averaging |= self.averaging;
        p.validate()?;
        Ok(p)
    }

    /// Policy for `g`: the file if given, otherwise `base` adapted to `g`.
    pub fn resolve(&self, base: LimitPolicy, g: Option<&Integrand>) -> Result<LimitPolicy, CliError> {
        let p = match self.file_policy()? {
            Some(p) => p,
            None if self.b_step.is_none() => g.map_or(base, |g| base.scaled_for(g)),
            None => base,
        };
        self.apply_overrides(p)
    }
}

/// Everything a run emits. `wall_time_ms` is the only field that varies
/// between identical runs; it is written last.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub command: String,
    pub config: serde_json::Value,
    pub status: String,
    pub passed: bool,
    pub result: serde_json::Value,
    pub wall_time_ms: f64,
}

impl RunRecord {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_PASS
        } else {
            EXIT_NOT_CONVERGED
        }
    }
}

/// Runs one command line, writing the record to `out` and diagnostics to
/// `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    EXIT_PASS
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let start = Instant::now();
    let outcome = match commands::execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let record = RunRecord {
        schema_version: SCHEMA_VERSION,
        command: cli.command.name().to_string(),
        config: serde_json::to_value(&cli).expect("arguments serialise"),
        status: outcome.status.clone(),
        passed: outcome.passed,
        result: outcome.result.clone(),
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    let text = render::render(&record, &outcome, cli.format);
    if let Err(e) = out.write_all(text.as_bytes()) {
        let _ = writeln!(err, "error: {e}");
        return EXIT_USAGE;
    }
    record.exit_code()
}
