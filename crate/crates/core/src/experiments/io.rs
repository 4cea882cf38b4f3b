//! CSV input and output.
//!
//! Input is a header row followed by numeric cells. Output floats carry 17
//! significant digits so that they round-trip exactly.

use std::io::{Read, Write};

use super::asymptotics::{AsymptoticsRecord, CounterexampleOutcome};
use super::harness::{ComparisonRow, SummaryRow};
use crate::data::DataMatrix;
use crate::error::{LookoutError, Result};
use crate::pipeline::AnomalyResult;

pub const DETECT_HEADER: &str = "index,surprisal_loo,probability,flag";
pub const RESULTS_HEADER: &str =
    "experiment,iteration,parameter,rep,variant,tp,fp,tn,fn,tpr,fpr,fmeasure,gmean,auc";
pub const SUMMARY_HEADER: &str =
    "experiment,iteration,parameter,variant,reps,tpr,fpr,fmeasure,gmean,auc";
pub const ASYMPTOTICS_HEADER: &str = "family,n,m,gamma,rep,d_value,scaled,admissibility,d_max";
pub const COUNTEREXAMPLE_HEADER: &str = "family,n,m,reps,omega,exceed_count,fraction";

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Reads a header row and then rows of finite numbers into a matrix.
pub fn read_matrix<R: Read>(reader: R) -> Result<DataMatrix<f64>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let width = rdr.headers().map_err(csv_error)?.len();
    let mut values = Vec::new();
    let mut n = 0;
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != width {
            return Err(LookoutError::Csv {
                line,
                message: format!("expected {width} fields, found {}", record.len()),
            });
        }
        for (col, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| LookoutError::Csv {
                line,
                message: format!("column {}: '{cell}' is not a number", col + 1),
            })?;
            if !v.is_finite() {
                return Err(LookoutError::Csv {
                    line,
                    message: format!("column {}: non-finite value '{cell}'", col + 1),
                });
            }
            values.push(v);
        }
        n += 1;
    }
    if n == 0 {
        return Err(LookoutError::InsufficientData("input has no data rows".into()));
    }
    DataMatrix::from_row_major(values, n, width)
}

fn csv_error(e: csv::Error) -> LookoutError {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => LookoutError::Io(io.to_string()),
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => LookoutError::Csv {
            line,
            message: format!("expected {expected_len} fields, found {len}"),
        },
        csv::ErrorKind::Utf8 { err, .. } => LookoutError::Csv { line, message: err.to_string() },
        other => LookoutError::Csv { line, message: format!("{other:?}") },
    }
}

pub fn write_detect<W: Write>(mut w: W, result: &AnomalyResult<f64>) -> Result<()> {
    writeln!(w, "{DETECT_HEADER}")?;
    for (i, ((&s, &p), &flag)) in
        result.surprisals_loo.iter().zip(&result.probabilities).zip(&result.flags).enumerate()
    {
        writeln!(w, "{i},{},{},{}", fmt(s), fmt(p), flag as u8)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_results<W: Write>(mut w: W, id: u8, rows: &[ComparisonRow]) -> Result<()> {
    writeln!(w, "{RESULTS_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{id},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.iteration,
            fmt(r.parameter),
            r.rep,
            r.variant,
            r.tp,
            r.fp,
            r.tn,
            r.fn_,
            fmt(r.tpr),
            fmt(r.fpr),
            fmt(r.fmeasure),
            fmt(r.gmean),
            fmt(r.auc)
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary<W: Write>(mut w: W, id: u8, rows: &[SummaryRow]) -> Result<()> {
    writeln!(w, "{SUMMARY_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{id},{},{},{},{},{},{},{},{},{}",
            r.iteration,
            fmt(r.parameter),
            r.variant,
            r.reps,
            fmt(r.tpr),
            fmt(r.fpr),
            fmt(r.fmeasure),
            fmt(r.gmean),
            fmt(r.auc)
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_asymptotics<W: Write>(mut w: W, records: &[AsymptoticsRecord]) -> Result<()> {
    writeln!(w, "{ASYMPTOTICS_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.family,
            r.n,
            r.m,
            fmt(r.gamma),
            r.rep,
            fmt(r.d_value),
            fmt(r.scaled),
            fmt(r.admissibility),
            fmt(r.d_max)
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_counterexample<W: Write>(mut w: W, outcomes: &[CounterexampleOutcome]) -> Result<()> {
    writeln!(w, "{COUNTEREXAMPLE_HEADER}")?;
    for o in outcomes {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            o.family,
            o.n,
            o.m,
            o.reps,
            o.omega,
            o.exceed_count,
            fmt(o.fraction)
        )?;
    }
    w.flush()?;
    Ok(())
}
