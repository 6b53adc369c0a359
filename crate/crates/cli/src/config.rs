//! Flag parsing and the validated run configuration.

use std::f64::consts::TAU;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use imani_core::leah::DEFAULT_ORDER;

use crate::error::{CliError, Result};

/// Default sample count over `[0, 2T]` for `sample`, `fig1` and `fig2`.
pub const DEFAULT_GRID: usize = 1000;
/// Default number of points for `verify`.
pub const DEFAULT_VERIFY_GRID: usize = 10_000;
/// Default samples per Leah period for `extract` and `spectrum --leah`.
pub const DEFAULT_ORBIT_GRID: usize = 4096;
/// Default integrator tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Single-term modulation used by the figure commands.
pub const FIGURE_COEFFS: [f64; 1] = [0.5];

#[derive(Debug, Parser)]
#[command(
    name = "imani",
    version,
    about = "Imani functions and the Leah oscillator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Period T of the phase function.
    #[arg(
        long = "T",
        global = true,
        value_name = "REAL",
        allow_hyphen_values = true
    )]
    pub period: Option<f64>,

    /// Modulation coefficients a_1,a_2,... as a comma-separated list.
    #[arg(long, global = true, value_name = "LIST", allow_hyphen_values = true)]
    pub coeffs: Option<CoeffList>,

    /// Number of grid intervals (sample, figures), points (verify) or
    /// samples per period (extract, spectrum).
    #[arg(long, global = true, value_name = "COUNT")]
    pub grid: Option<usize>,

    /// Evaluation time for `eval`.
    #[arg(
        long = "t",
        global = true,
        value_name = "REAL",
        allow_hyphen_values = true
    )]
    pub time: Option<f64>,

    /// Output file; standard output when absent.
    #[arg(long = "out", global = true, value_name = "PATH")]
    pub out_path: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Harmonic order K.
    #[arg(long = "K", global = true, value_name = "COUNT")]
    pub order: Option<usize>,

    /// Integrator step tolerance.
    #[arg(long, global = true, value_name = "REAL")]
    pub tol: Option<f64>,

    /// Analyze the Leah oscillator solution instead of Ics.
    #[arg(long, global = true)]
    pub leah: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Print t, psi, Ics, Isn, their derivatives and the residual at --t.
    Eval,
    /// Write the eval columns on a uniform grid over [0, 2T].
    Sample,
    /// Run the invariant suite and report pass/fail per check.
    Verify,
    /// Print the Leah oscillator period and its error estimate.
    Period,
    /// Write the Fourier spectrum of Ics, or of the Leah solution with --leah.
    Spectrum,
    /// Integrate the Leah oscillator and fit Imani phase coefficients.
    Extract,
    /// Phase psi(t) against t.
    Fig1,
    /// Ics(t) against t.
    Fig2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Svg,
}

/// Comma-separated list of reals. The empty string is the empty list.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoeffList(pub Vec<f64>);

#[derive(Debug, Clone, PartialEq)]
pub struct ParseCoeffsError(String);

impl fmt::Display for ParseCoeffsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid coefficient {:?}", self.0)
    }
}

impl std::error::Error for ParseCoeffsError {}

impl FromStr for CoeffList {
    type Err = ParseCoeffsError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s.trim().is_empty() {
            return Ok(CoeffList(Vec::new()));
        }
        s.split(',')
            .map(|item| {
                let item = item.trim();
                item.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| ParseCoeffsError(item.to_owned()))
            })
            .collect::<std::result::Result<_, _>>()
            .map(CoeffList)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub period: f64,
    pub coeffs: Vec<f64>,
    pub grid: usize,
    pub t: f64,
    pub out_path: Option<PathBuf>,
    pub format: Format,
    pub order: usize,
    pub tol: f64,
    pub leah: bool,
}

impl RunConfig {
    /// Defaults for `command` with no flags given.
    pub fn defaults(command: Command) -> Self {
        let figure = matches!(command, Command::Fig1 | Command::Fig2);
        let grid = match command {
            Command::Verify => DEFAULT_VERIFY_GRID,
            Command::Extract | Command::Spectrum => DEFAULT_ORBIT_GRID,
            _ => DEFAULT_GRID,
        };
        RunConfig {
            command,
            period: TAU,
            coeffs: if figure {
                FIGURE_COEFFS.to_vec()
            } else {
                Vec::new()
            },
            grid,
            t: 0.0,
            out_path: None,
            format: Format::Csv,
            order: DEFAULT_ORDER,
            tol: DEFAULT_TOL,
            leah: false,
        }
    }

    pub fn from_cli(cli: Cli) -> Result<Self> {
        let mut cfg = RunConfig::defaults(cli.command);
        if let Some(p) = cli.period {
            cfg.period = p;
        }
        if let Some(c) = cli.coeffs {
            cfg.coeffs = c.0;
        }
        if let Some(g) = cli.grid {
            cfg.grid = g;
        }
        if let Some(t) = cli.time {
            cfg.t = t;
        }
        if let Some(k) = cli.order {
            cfg.order = k;
        }
        if let Some(tol) = cli.tol {
            cfg.tol = tol;
        }
        cfg.out_path = cli.out_path;
        cfg.format = cli.format.unwrap_or_default();
        cfg.leah = cli.leah;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.period > 0.0 && self.period.is_finite()) {
            return Err(CliError::usage("--T must be positive and finite"));
        }
        if self.grid < 2 {
            return Err(CliError::usage("--grid must be at least 2"));
        }
        if !self.t.is_finite() {
            return Err(CliError::usage("--t must be finite"));
        }
        if self.order == 0 {
            return Err(CliError::usage("--K must be at least 1"));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(CliError::usage("--tol must lie in (0, 1)"));
        }
        let figure = matches!(self.command, Command::Fig1 | Command::Fig2);
        if self.format == Format::Svg && !figure {
            return Err(CliError::usage(
                "--format svg is only available for fig1 and fig2",
            ));
        }
        if self.leah && self.command != Command::Spectrum {
            return Err(CliError::usage("--leah only applies to spectrum"));
        }
        Ok(())
    }
}
