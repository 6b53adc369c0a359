//! CSV tables of sampled Imani functions.

use std::io::{Read, Write};

use imani_core::imani::{imani_derivatives, imani_eval, residual};
use imani_core::phase::phase_eval;
use imani_core::ImaniParams;

use crate::error::{CliError, Result};

/// Column names of `eval` and `sample` output.
pub const SAMPLE_COLUMNS: [&str; 7] = ["t", "psi", "ics", "isn", "dics", "disn", "residual"];

/// Prints `v` with 17 significant digits.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleRow {
    pub t: f64,
    pub psi: f64,
    pub ics: f64,
    pub isn: f64,
    pub dics: f64,
    pub disn: f64,
    pub residual: f64,
}

impl SampleRow {
    pub fn at(params: &ImaniParams, t: f64) -> Self {
        let pair = imani_eval(params, t);
        let (dics, disn) = imani_derivatives(params, t);
        SampleRow {
            t,
            psi: phase_eval(params, t).psi,
            ics: pair.ics,
            isn: pair.isn,
            dics,
            disn,
            residual: residual(params, t),
        }
    }

    fn fields(&self) -> [f64; 7] {
        [
            self.t,
            self.psi,
            self.ics,
            self.isn,
            self.dics,
            self.disn,
            self.residual,
        ]
    }

    fn from_fields(v: [f64; 7]) -> Self {
        SampleRow {
            t: v[0],
            psi: v[1],
            ics: v[2],
            isn: v[3],
            dics: v[4],
            disn: v[5],
            residual: v[6],
        }
    }
}

/// `intervals + 1` equally spaced times covering `[0, span]`.
pub fn uniform_times(span: f64, intervals: usize) -> Vec<f64> {
    (0..=intervals)
        .map(|j| span * j as f64 / intervals as f64)
        .collect()
}

pub fn sample_rows(params: &ImaniParams, intervals: usize) -> Vec<SampleRow> {
    uniform_times(2.0 * params.period(), intervals)
        .into_iter()
        .map(|t| SampleRow::at(params, t))
        .collect()
}

/// Writes a header line followed by `rows`.
pub fn write_samples<W: Write>(out: W, rows: &[SampleRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SAMPLE_COLUMNS)?;
    for row in rows {
        w.write_record(row.fields().map(fmt_real))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes one row without a header.
pub fn write_row<W: Write>(out: W, row: &SampleRow) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(row.fields().map(fmt_real))?;
    w.flush()?;
    Ok(())
}

/// Reads a table written by [`write_samples`].
pub fn read_samples<R: Read>(input: R) -> Result<Vec<SampleRow>> {
    let mut r = csv::Reader::from_reader(input);
    if r.headers()?.iter().ne(SAMPLE_COLUMNS) {
        return Err(CliError::usage(format!(
            "expected columns {}",
            SAMPLE_COLUMNS.join(",")
        )));
    }
    r.records()
        .map(|rec| {
            let rec = rec?;
            let mut v = [0.0; 7];
            for (slot, field) in v.iter_mut().zip(rec.iter()) {
                *slot = field
                    .parse()
                    .map_err(|_| CliError::usage(format!("not a number: {field:?}")))?;
            }
            Ok(SampleRow::from_fields(v))
        })
        .collect()
}

/// Writes a two-column table with a header.
pub fn write_pairs<W: Write>(out: W, header: [&str; 2], rows: &[(f64, f64)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for &(a, b) in rows {
        w.write_record([fmt_real(a), fmt_real(b)])?;
    }
    w.flush()?;
    Ok(())
}
