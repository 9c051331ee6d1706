use std::fmt::Write;

use serde::{Deserialize, Serialize};

/// One statistic: oracle value where one exists, Monte Carlo estimate when
/// trials were run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub label: String,
    pub exact: Option<f64>,
    pub estimate: Option<f64>,
    pub stderr: Option<f64>,
    pub n: u64,
}

impl EstimateRow {
    pub fn exact(label: impl Into<String>, exact: f64) -> Self {
        Self {
            label: label.into(),
            exact: Some(exact),
            estimate: None,
            stderr: None,
            n: 0,
        }
    }

    pub fn with_estimate(mut self, estimate: f64, stderr: f64, n: u64) -> Self {
        self.estimate = Some(estimate);
        self.stderr = Some(stderr);
        self.n = n;
        self
    }

    /// `|estimate − exact| ≤ k·stderr`; true when either side is missing.
    pub fn within(&self, k: f64) -> bool {
        match (self.exact, self.estimate, self.stderr) {
            (Some(x), Some(e), Some(s)) => (e - x).abs() <= k * s + 1e-12,
            _ => true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EstimateTable {
    pub rows: Vec<EstimateRow>,
}

impl EstimateTable {
    pub const HEADER: &'static str = "label,exact,estimate,stderr,n";

    pub fn push(&mut self, row: EstimateRow) {
        self.rows.push(row);
    }

    pub fn get(&self, label: &str) -> Option<&EstimateRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    /// CSV with the fixed header; missing values are empty fields. Floats use
    /// Rust's shortest round-trip formatting.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(Self::HEADER);
        out.push('\n');
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.rows {
            debug_assert!(!r.label.contains(','), "label {} contains a comma", r.label);
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.label,
                opt(r.exact),
                opt(r.estimate),
                opt(r.stderr),
                r.n
            );
        }
        out
    }
}
