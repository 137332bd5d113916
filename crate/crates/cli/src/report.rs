use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use termlab_core::{StateBox, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Sct,
    Ranking,
    Transinv,
    Simulate,
    Segments,
    Ramsey,
    Matrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReportVerdict {
    #[serde(rename = "terminates")]
    Terminates,
    #[serde(rename = "unknown")]
    Unknown,
    #[serde(rename = "n/a")]
    NotApplicable,
}

impl From<Verdict> for ReportVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Terminates => ReportVerdict::Terminates,
            Verdict::Unknown => ReportVerdict::Unknown,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckedDomain {
    Exact,
    Box {
        ranges: Vec<(i64, i64)>,
        input_cap: i64,
    },
}

impl CheckedDomain {
    pub fn boxed(bx: &StateBox, input_cap: i64) -> Self {
        CheckedDomain::Box {
            ranges: bx.ranges.iter().map(|r| (*r.start(), *r.end())).collect(),
            input_cap,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool_version: &'static str,
    pub program: Option<String>,
    pub method: Method,
    pub verdict: ReportVerdict,
    pub certificate: Value,
    pub checked_domain: CheckedDomain,
    pub diagnostics: Vec<String>,
    pub timing: Timing,
}

impl Report {
    pub fn new(method: Method, program: Option<String>) -> Self {
        Report {
            tool_version: env!("CARGO_PKG_VERSION"),
            program,
            method,
            verdict: ReportVerdict::NotApplicable,
            certificate: Value::Null,
            checked_domain: CheckedDomain::Exact,
            diagnostics: Vec::new(),
            timing: Timing { elapsed_ms: 0.0 },
        }
    }

    pub fn write_json(&self, path: &Path) -> std::io::Result<()> {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        fs::write(path, text)
    }
}
