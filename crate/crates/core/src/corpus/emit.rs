//! Machine-readable reports.

use std::fmt;
use std::str::FromStr;

use crate::invariants::InvariantReport;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}` (expected json or csv)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

pub const CSV_HEADER: [&str; 9] = ["name", "n", "k", "icis", "mu", "tau", "e_crit", "ratio", "verdict"];

/// `pass`, `fail` (an asserted check failed) or `error` (evaluation stopped early).
pub fn verdict_label(r: &InvariantReport) -> &'static str {
    if r.error.is_some() {
        "error"
    } else if r.passed() {
        "pass"
    } else {
        "fail"
    }
}

/// `mu / tau`, absent for non-ICIS entries and for `0 / 0`.
pub fn ratio(r: &InvariantReport) -> Option<f64> {
    let mu = r.mu_exact?;
    let tau = r.tau?.finite()?;
    (r.is_icis && tau > 0).then(|| mu as f64 / tau as f64)
}

pub fn emit_report(reports: &[InvariantReport], format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(reports).expect("reports serialize");
            out.push(b'\n');
            out
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER).expect("in-memory write");
            for r in reports {
                let opt = |v: Option<u64>| v.map(|v| v.to_string()).unwrap_or_default();
                w.write_record([
                    r.name.clone(),
                    r.n.to_string(),
                    r.k.to_string(),
                    r.is_icis.to_string(),
                    opt(r.mu_exact),
                    r.tau.map(|t| t.to_string()).unwrap_or_default(),
                    opt(r.e_crit_samuel),
                    ratio(r).map(|x| format!("{x:?}")).unwrap_or_default(),
                    verdict_label(r).to_string(),
                ])
                .expect("in-memory write");
            }
            w.into_inner().expect("in-memory flush")
        }
    }
}

/// Reads back a JSON report.
pub fn parse_json_report(bytes: &[u8]) -> serde_json::Result<Vec<InvariantReport>> {
    serde_json::from_slice(bytes)
}
