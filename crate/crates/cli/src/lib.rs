//! Command-line harness: subcommands, JSON/CSV reports, verification suites
//! and exploratory probes.

pub mod commands;
pub mod config;
pub mod probe;
pub mod report;
pub mod verify;

use std::time::Instant;

use blochkit::error::BlochError;
use clap::{Parser, Subcommand};

use config::{CommonArgs, Settings};
use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_SUITE: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
}

impl From<BlochError> for CliError {
    fn from(e: BlochError) -> Self {
        match e {
            BlochError::OutsideDomain
            | BlochError::NumericalDomain(_)
            | BlochError::UnsupportedMetric(_)
            | BlochError::Unsupported(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "blochkit", version, about = "Bloch-space quantities and multiplication operators on bounded symmetric domains")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Domain facts and membership of --point
    Domain,
    /// Q_f at --point
    Qf,
    /// Bloch seminorm and norm of --symbol
    Beta,
    /// Extremal function values at --point
    Omega,
    /// Distance from the origin to --point
    Rho,
    /// sigma_psi, sigma_0 and boundedness evidence
    Sigma,
    /// Operator-norm sandwich
    Bounds,
    /// Empirical lower bound for the operator norm
    Opnorm,
    /// Sampled range of the symbol
    Spectrum,
    /// Whether M_psi is compact, with a witness when it is not
    Compactness,
    /// Whether M_psi is an isometry, from powers of psi up to --k
    Isometry,
    /// Bloch constants
    Constants,
    /// Run a verification suite
    Verify,
    /// Exploratory data for open questions
    Probe,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Domain => "domain",
            Command::Qf => "qf",
            Command::Beta => "beta",
            Command::Omega => "omega",
            Command::Rho => "rho",
            Command::Sigma => "sigma",
            Command::Bounds => "bounds",
            Command::Opnorm => "opnorm",
            Command::Spectrum => "spectrum",
            Command::Compactness => "compactness",
            Command::Isometry => "isometry",
            Command::Constants => "constants",
            Command::Verify => "verify",
            Command::Probe => "probe",
        }
    }
}

/// What one invocation produced.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    /// Text for stdout: the rendered report, or usage and error messages.
    pub stdout: String,
    pub stderr: String,
    pub report: Option<Report>,
}

impl Outcome {
    fn error(code: i32, msg: String) -> Outcome {
        Outcome { code, stdout: String::new(), stderr: msg, report: None }
    }
}

fn run(cmd: Command, s: &Settings) -> Result<Report, CliError> {
    match cmd {
        Command::Domain => commands::domain(s),
        Command::Qf => commands::qf(s),
        Command::Beta => commands::beta(s),
        Command::Omega => commands::omega(s),
        Command::Rho => commands::rho(s),
        Command::Sigma => commands::sigma(s),
        Command::Bounds => commands::bounds(s),
        Command::Opnorm => commands::opnorm(s),
        Command::Spectrum => commands::spectrum(s),
        Command::Compactness => commands::compactness(s),
        Command::Isometry => commands::isometry(s),
        Command::Constants => commands::constants(s),
        Command::Verify => verify::command(s),
        Command::Probe => probe::command(s),
    }
}

/// Parses `argv` (including the program name), runs the subcommand and
/// renders its report. Exit codes: 0 success, 1 usage error, 2 numerical
/// domain error, 3 failed verification suite.
pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new(), report: None }
            } else {
                Outcome::error(code, text)
            };
        }
    };
    let settings = match Settings::resolve(&cli.common) {
        Ok(s) => s,
        Err(e) => return failure(e),
    };
    let start = Instant::now();
    let mut report = match run(cli.cmd, &settings) {
        Ok(r) => r,
        Err(e) => return failure(e),
    };
    report.command = cli.cmd.name().into();
    if settings.timing {
        report.elapsed_ms = start.elapsed().as_millis() as u64;
    }
    let text = report.render(settings.format);
    let code = if report.all_checks_pass() { EXIT_OK } else { EXIT_SUITE };
    let stdout = match &settings.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => String::new(),
            Err(e) => return Outcome::error(EXIT_USAGE, format!("cannot write {}: {e}\n", path.display())),
        },
        None => text,
    };
    Outcome { code, stdout, stderr: String::new(), report: Some(report) }
}

fn failure(e: CliError) -> Outcome {
    match e {
        CliError::Usage(m) => Outcome::error(EXIT_USAGE, format!("error: {m}\n")),
        CliError::Numerical(m) => Outcome::error(EXIT_NUMERICAL, format!("error: {m}\n")),
    }
}
