//! The per-point output record and its CSV/JSON serialization.
//!
//! CSV reals carry 17 significant digits so every f64 round-trips; nulls
//! serialize as empty fields. JSON uses the same field names with `null`
//! for absent values and never stringifies numbers.

use serde::Serialize;

pub const CSV_HEADER: &str =
    "g,delta_g,n_sites,a,region,gap_direct,gap_integral,lower_bound,upper_bound,xi,ground_parity,error";

#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub g: f64,
    pub delta_g: f64,
    pub n_sites: usize,
    pub a: f64,
    pub region: String,
    pub gap_direct: f64,
    pub gap_integral: Option<f64>,
    pub lower_bound: Option<f64>,
    pub upper_bound: Option<f64>,
    pub xi: Option<f64>,
    pub ground_parity: String,
    pub error: String,
}

pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_real).unwrap_or_default()
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl SweepRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt_real(self.g),
            fmt_real(self.delta_g),
            self.n_sites,
            fmt_real(self.a),
            self.region,
            fmt_real(self.gap_direct),
            fmt_opt(self.gap_integral),
            fmt_opt(self.lower_bound),
            fmt_opt(self.upper_bound),
            fmt_opt(self.xi),
            self.ground_parity,
            csv_escape(&self.error),
        )
    }
}
