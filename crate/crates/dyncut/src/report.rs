//! Run reports: versioned JSON documents and CSV ratio tables.

use std::io::Write;

use serde::Serialize;

use crate::graph::Capacity;

pub const SCHEMA: u32 = 1;

/// A capacity as a float for plotting and as an exact fraction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Exact {
    pub value: f64,
    pub exact: String,
}

impl From<Capacity> for Exact {
    fn from(c: Capacity) -> Self {
        Exact { value: to_f64(c), exact: c.to_string() }
    }
}

pub fn to_f64(c: Capacity) -> f64 {
    *c.numer() as f64 / *c.denom() as f64
}

/// `a / b`, or `None` when `b` is zero.
pub fn ratio(a: Capacity, b: Capacity) -> Option<f64> {
    (*b.numer() != 0).then(|| to_f64(a / b))
}

#[derive(Clone, Debug, Serialize)]
pub struct UpdateRecord {
    pub index: usize,
    pub line: usize,
    pub kind: &'static str,
    /// Edges of the maintained output after the update.
    pub output_edges: usize,
    pub recourse: u64,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub detail: serde_json::Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct QueryRecord {
    pub line: usize,
    pub query: String,
    pub value: Exact,
    pub witness_value: Exact,
    pub per_chain: Vec<Option<Exact>>,
    pub chain: usize,
    /// Part label per input vertex, cut out after the configured limit.
    pub witness: Vec<usize>,
    pub witness_truncated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Exact>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Timings {
    pub build_ms: f64,
    pub updates_ms: f64,
    pub queries_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub input: InputSummary,
    pub updates: Vec<UpdateRecord>,
    pub queries: Vec<QueryRecord>,
    pub summary: serde_json::Value,
    pub violations: Vec<String>,
    pub mismatches: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct InputSummary {
    pub vertices: usize,
    pub edges: usize,
    pub stream_items: usize,
}

impl RunReport {
    pub fn new(command: &str, seed: u64, config: impl Serialize) -> Self {
        RunReport {
            schema: SCHEMA,
            command: command.to_string(),
            seed,
            config: serde_json::to_value(config).expect("config serializes"),
            input: InputSummary::default(),
            updates: Vec::new(),
            queries: Vec::new(),
            summary: serde_json::Value::Null,
            violations: Vec::new(),
            mismatches: Vec::new(),
            timings: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// One row of a ratio table.
#[derive(Clone, Debug, Serialize)]
pub struct RatioRow {
    pub config: String,
    pub seed: u64,
    pub n: usize,
    pub query: String,
    pub reported: f64,
    pub exact: Option<f64>,
    pub ratio: Option<f64>,
}

pub fn write_csv<W: Write, R: Serialize>(out: W, rows: &[R]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn exact_values_keep_fractions() {
        let e = Exact::from(Ratio::new(3, 2));
        assert_eq!(e.exact, "3/2");
        assert_eq!(e.value, 1.5);
        assert_eq!(ratio(Ratio::new(3, 1), Ratio::new(0, 1)), None);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let mut buf = Vec::new();
        let row = RatioRow { config: "L=1".into(), seed: 7, n: 4, query: "ST 0 1".into(), reported: 2.0, exact: Some(1.0), ratio: Some(2.0) };
        write_csv(&mut buf, &[row]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "config,seed,n,query,reported,exact,ratio\nL=1,7,4,ST 0 1,2.0,1.0,2.0\n");
    }
}
