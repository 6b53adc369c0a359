//! Command-line front end for `imani-core`: point evaluation, sampled
//! tables, the invariant suite, Leah oscillator period/spectrum/phase fits,
//! and the two figures as CSV or SVG.

pub mod config;
pub mod error;
pub mod run;
pub mod svg;
pub mod table;
pub mod verify;

pub use config::{Cli, Command, Format, RunConfig};
pub use error::{CliError, Result};
pub use run::{execute, run};
