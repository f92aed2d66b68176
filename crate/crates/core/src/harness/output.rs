//! Trace and summary tables, and their CSV form.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

pub const RAW_HEADER: [&str; 11] = [
    "policy_id",
    "replication",
    "t",
    "action",
    "reward",
    "inst_regret",
    "cum_regret",
    "cum_pseudo_regret",
    "b_hat",
    "b_tilde",
    "beta_used",
];

pub const SUMMARY_HEADER: [&str; 6] = ["policy_id", "t", "mean_cum_regret", "ci_low", "ci_high", "n"];

/// Normal quantile for two-sided 95% bands.
pub const Z_95: f64 = 1.96;

/// Format like C's `printf("%.17g", x)`, which round-trips every `f64`.
pub fn format_g17(x: f64) -> String {
    const PRECISION: i32 = 17;
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.to_string();
    }
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..PRECISION).contains(&exp) {
        let fixed = format!("{:.*}", (PRECISION - 1 - exp) as usize, x);
        strip_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", strip_zeros(mantissa), sign, exp.abs())
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One step of one replication.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub t: u64,
    pub action: usize,
    pub reward: f64,
    pub inst_regret: f64,
    pub cum_regret: f64,
    pub cum_pseudo_regret: f64,
    pub b_hat: f64,
    pub b_tilde: f64,
    pub beta_used: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub policy_id: String,
    pub t: u64,
    pub mean_cum_regret: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n: usize,
}

/// Mean and normal-approximation 95% band; the sample standard deviation of
/// a single value is taken as zero.
pub fn mean_band(values: &[f64]) -> (f64, f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    let half = Z_95 * sd / n.sqrt();
    (mean, mean - half, mean + half)
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Numerical(format!("csv: {other:?}")),
    }
}

pub(crate) fn raw_writer<W: Write>(out: W) -> Result<csv::Writer<W>> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RAW_HEADER).map_err(csv_err)?;
    Ok(w)
}

pub(crate) fn write_trace_row<W: Write>(w: &mut csv::Writer<W>, policy_id: &str, replication: u64, row: &TraceRow) -> Result<()> {
    w.write_record([
        policy_id.to_string(),
        replication.to_string(),
        row.t.to_string(),
        row.action.to_string(),
        format_g17(row.reward),
        format_g17(row.inst_regret),
        format_g17(row.cum_regret),
        format_g17(row.cum_pseudo_regret),
        format_g17(row.b_hat),
        format_g17(row.b_tilde),
        format_g17(row.beta_used),
    ])
    .map_err(csv_err)
}

/// Marks a replication that aborted at step `t`.
pub(crate) fn write_error_row<W: Write>(w: &mut csv::Writer<W>, policy_id: &str, replication: u64, t: u64) -> Result<()> {
    let mut record = vec![policy_id.to_string(), replication.to_string(), t.to_string(), "error".to_string()];
    record.extend(std::iter::repeat_n("NaN".to_string(), RAW_HEADER.len() - 4));
    w.write_record(record).map_err(csv_err)
}

pub fn write_summary<W: Write>(out: W, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.policy_id.clone(),
            r.t.to_string(),
            format_g17(r.mean_cum_regret),
            format_g17(r.ci_low),
            format_g17(r.ci_high),
            r.n.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_file(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    create_parent(path)?;
    write_summary(std::io::BufWriter::new(std::fs::File::create(path)?), rows)
}

pub(crate) fn create_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(())
}
