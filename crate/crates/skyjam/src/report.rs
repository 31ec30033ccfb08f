//! Output files. Numbers use the shortest decimal that parses back to the
//! same `f64`, lines end in `\n` and every CSV starts with a header row.

use std::io::{self, Write};

use serde::Serialize;
use skyjam_core::{SchemeId, SecrecyReport, Solution};

pub const TRAJECTORY_HEADER: [&str; 5] = ["slot", "x_m", "y_m", "p_s_w", "p_u_w"];
pub const RATES_HEADER: [&str; 6] =
    ["T_s", "scheme", "surrogate_bps_hz", "mc_expectation_bps_hz", "mc_realization_bps_hz", "mc_stderr"];

/// Shortest round-trip representation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

/// One row per slot, numbered from 1.
pub fn write_trajectory_csv<W: Write>(w: W, sol: &Solution) -> csv::Result<()> {
    let mut out = csv_writer(w);
    out.write_record(TRAJECTORY_HEADER)?;
    let p = &sol.schedule;
    for (n, q) in sol.trajectory.points().iter().enumerate() {
        out.write_record([(n + 1).to_string(), fmt_f64(q.x), fmt_f64(q.y), fmt_f64(p.p_s[n]), fmt_f64(p.p_u[n])])?;
    }
    out.flush()?;
    Ok(())
}

/// One evaluated (scheme, T) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub period: f64,
    pub scheme: SchemeId,
    pub report: SecrecyReport,
}

/// `mc_stderr` is the standard error of the expectation-form estimate.
pub fn write_rates_csv<W: Write>(w: W, rows: &[RateRow]) -> csv::Result<()> {
    let mut out = csv_writer(w);
    out.write_record(RATES_HEADER)?;
    for r in rows {
        out.write_record([
            fmt_f64(r.period),
            r.scheme.to_string(),
            fmt_f64(r.report.surrogate_rate),
            fmt_f64(r.report.mc_rate_expectation_form),
            fmt_f64(r.report.mc_rate_realization_form),
            fmt_f64(r.report.std_errors.expectation_form),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceLine {
    pub iteration: usize,
    pub objective: f64,
    /// Seconds since the cell started.
    pub wall_s: f64,
}

pub fn write_trace_jsonl<W: Write>(mut w: W, lines: &[TraceLine]) -> io::Result<()> {
    for line in lines {
        serde_json::to_writer(&mut w, line)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(mut w: W, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()
}
