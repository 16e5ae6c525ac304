//! CSV and JSON Lines writers for summary rows and bound reports.
//!
//! Integers are written verbatim and reals with 12 significant digits, so
//! reruns are byte-identical. Absent values are empty CSV fields and `null`
//! in JSON.

use std::io::Write;

use serde::Serialize;

use crate::analytic::BoundReport;
use crate::error::Result;
use crate::fmt::{opt_real, real};
use crate::threshold::SummaryRecord;

pub const SUMMARY_HEADER: &str = "n,alpha,theta,trials,mean_set_size,mean_product_size,mean_deficiency,\
empirical_tail_prob,markov_bound_raw,exact_expectation,mean_ratio";

pub const BOUND_HEADER: &str = "name,parameters,lhs,rhs,ratio,passed";

pub fn summary_row(r: &SummaryRecord) -> String {
    [
        r.n.to_string(),
        real(r.alpha),
        opt_real(r.theta),
        r.trials.to_string(),
        real(r.mean_set_size),
        real(r.mean_product_size),
        real(r.mean_deficiency),
        real(r.empirical_tail_prob),
        opt_real(r.markov_bound_raw),
        opt_real(r.exact_expectation),
        opt_real(r.mean_ratio),
    ]
    .join(",")
}

pub fn write_summary_csv<W: Write>(mut w: W, rows: &[SummaryRecord]) -> Result<()> {
    writeln!(w, "{SUMMARY_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", summary_row(r))?;
    }
    w.flush()?;
    Ok(())
}

/// `k=v;k=v` with reals formatted like every other field.
pub fn format_parameters(report: &BoundReport) -> String {
    report
        .parameters
        .iter()
        .map(|p| format!("{}={}", p.name, real(p.value)))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn bound_row(r: &BoundReport) -> String {
    let passed = match r.passed {
        Some(true) => "true",
        Some(false) => "false",
        None => "",
    };
    format!(
        "{},{},{},{},{},{}",
        r.name,
        format_parameters(r),
        real(r.lhs),
        real(r.rhs),
        opt_real(r.ratio),
        passed
    )
}

pub fn write_bounds_csv<W: Write>(mut w: W, rows: &[BoundReport]) -> Result<()> {
    writeln!(w, "{BOUND_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", bound_row(r))?;
    }
    w.flush()?;
    Ok(())
}

/// One JSON object per line.
pub fn write_json_lines<W: Write, T: Serialize>(mut w: W, rows: &[T]) -> Result<()> {
    for r in rows {
        serde_json::to_writer(&mut w, r).map_err(std::io::Error::from)?;
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}
