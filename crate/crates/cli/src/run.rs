//! Command execution.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use imani_core::fourier::{analyze, analyze_samples, default_samples, Spectrum};
use imani_core::imani::imani_eval;
use imani_core::leah::{extract_phase, leah_period};
use imani_core::phase::phase_eval;
use imani_core::ImaniParams;

use crate::config::{Command, Format, RunConfig};
use crate::error::{CliError, Result};
use crate::svg::{line_plot, Channel};
use crate::table::{
    fmt_real, sample_rows, uniform_times, write_pairs, write_row, write_samples, SampleRow,
};
use crate::verify::{leah_orbit, run_suite, Status};

/// Runs `cfg`, writing to `--out` or else to `stdout`.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    match &cfg.out_path {
        Some(path) => {
            let file = File::create(path).map_err(|e| io_error(path, e))?;
            let mut w = BufWriter::new(file);
            execute(cfg, &mut w)?;
            w.flush().map_err(|e| io_error(path, e))
        }
        None => execute(cfg, stdout),
    }
}

fn io_error(path: &Path, source: io::Error) -> CliError {
    CliError::Io {
        path: Some(path.display().to_string()),
        source,
    }
}

/// Runs `cfg` against an explicit sink, ignoring `out_path`.
pub fn execute(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    match cfg.command {
        Command::Eval => write_row(out, &SampleRow::at(&params(cfg)?, cfg.t)),
        Command::Sample => write_samples(out, &sample_rows(&params(cfg)?, cfg.grid)),
        Command::Verify => verify(cfg, out),
        Command::Period => period(out),
        Command::Spectrum => spectrum(cfg, out),
        Command::Extract => extract(cfg, out),
        Command::Fig1 | Command::Fig2 => figure(cfg, out),
    }
}

fn params(cfg: &RunConfig) -> Result<ImaniParams> {
    ImaniParams::new(cfg.period, cfg.coeffs.clone()).map_err(|e| CliError::usage(e.to_string()))
}

fn verify(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let checks = run_suite(&params(cfg)?, cfg.grid, cfg.tol);
    for check in &checks {
        writeln!(out, "{check}")?;
    }
    let failed = checks.iter().filter(|c| c.status == Status::Fail).count();
    writeln!(
        out,
        "{} passed, {} failed, {} skipped",
        checks.len() - failed - skipped(&checks),
        failed,
        skipped(&checks)
    )?;
    if failed > 0 {
        out.flush()?;
        return Err(CliError::CheckFailed { failed });
    }
    Ok(())
}

fn skipped(checks: &[crate::verify::Check]) -> usize {
    checks.iter().filter(|c| c.status == Status::Skip).count()
}

fn period(out: &mut dyn Write) -> Result<()> {
    let r = leah_period()?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["period", "error_estimate"])?;
    w.write_record([fmt_real(r.value), fmt_real(r.error_estimate)])?;
    w.flush()?;
    Ok(())
}

fn spectrum(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let min_samples = 4 * cfg.order + 4;
    let spec = if cfg.leah {
        let samples = cfg.grid.max(min_samples);
        let (period, traj) = leah_orbit(samples, cfg.tol)?;
        let xs: Vec<f64> = traj.states[..samples].iter().map(|s| s.x).collect();
        analyze_samples(&xs, period, cfg.order)?
    } else {
        let p = params(cfg)?;
        let samples = cfg.grid.max(default_samples(cfg.order));
        analyze(|t| imani_eval(&p, t).ics, p.period(), cfg.order, samples)?
    };
    write_spectrum(out, &spec)
}

/// `k,cos,sin` rows for `k = 0..=K`, then a `tail` row carrying the
/// residual power in the `cos` column.
pub fn write_spectrum(out: &mut dyn Write, spec: &Spectrum) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "cos", "sin"])?;
    for (k, a) in spec.cos_coeffs.iter().enumerate() {
        let b = if k == 0 { 0.0 } else { spec.sin_coeffs[k - 1] };
        w.write_record([k.to_string(), fmt_real(*a), fmt_real(b)])?;
    }
    w.write_record(["tail".to_owned(), fmt_real(spec.tail_energy), String::new()])?;
    w.flush()?;
    Ok(())
}

/// `name,value` rows: period, fit residual, orientation, then `a1..aK`.
fn extract(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let samples = cfg.grid.max(4 * cfg.order + 4);
    let (period, traj) = leah_orbit(samples, cfg.tol)?;
    let fit = extract_phase(&traj, period, cfg.order)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["name", "value"])?;
    w.write_record(["period".to_owned(), fmt_real(period)])?;
    w.write_record(["fit_residual".to_owned(), fmt_real(fit.fit_residual)])?;
    w.write_record(["reversed".to_owned(), fit.reversed.to_string()])?;
    for (k, a) in fit.params.coeffs().iter().enumerate() {
        w.write_record([format!("a{}", k + 1), fmt_real(*a)])?;
    }
    w.flush()?;
    Ok(())
}

/// Abscissa and ordinate of `fig1` (`ψ`) or `fig2` (`x = Ics`) over `[0, 2T]`.
pub fn figure_series(cfg: &RunConfig) -> Result<(Vec<f64>, Vec<f64>)> {
    let p = params(cfg)?;
    let t = uniform_times(2.0 * p.period(), cfg.grid);
    let y = match cfg.command {
        Command::Fig1 => t.iter().map(|&s| phase_eval(&p, s).psi).collect(),
        _ => t.iter().map(|&s| imani_eval(&p, s).ics).collect(),
    };
    Ok((t, y))
}

fn figure(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let (t, y) = figure_series(cfg)?;
    let (column, title) = match cfg.command {
        Command::Fig1 => ("psi", "phase psi(t)"),
        _ => ("x", "x(t) = Ics(t)"),
    };
    match cfg.format {
        Format::Csv => {
            let rows: Vec<(f64, f64)> = t.iter().copied().zip(y.iter().copied()).collect();
            write_pairs(out, ["t", column], &rows)
        }
        Format::Svg => {
            let title = format!("{title}, T = {:.4}, a = {:?}", cfg.period, cfg.coeffs);
            let svg = line_plot(
                &title,
                "t",
                &t,
                &[Channel {
                    label: column,
                    color: "#1f4e9c",
                    y: &y,
                }],
            );
            out.write_all(svg.as_bytes())?;
            Ok(())
        }
    }
}
