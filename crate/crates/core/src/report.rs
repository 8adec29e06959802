//! Experiment reports: rows of `(n, sup_err, bound, err_times_qn, ratio)`
//! plus ordered metadata, serialized to CSV, JSON, or Markdown. Identical
//! configuration and mode produce byte-identical output.

use sha2::{Digest, Sha256};

use crate::scalar::Scalar;

/// Output format for serialized reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutFormat {
    Csv,
    Json,
    Markdown,
}

impl std::str::FromStr for OutFormat {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutFormat::Csv),
            "json" => Ok(OutFormat::Json),
            "md" | "markdown" => Ok(OutFormat::Markdown),
            other => Err(crate::error::Error::config(format!(
                "unknown output format {other:?} (expected csv, json, or md)"
            ))),
        }
    }
}

/// Which experiment produced a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    Convergence,
    Voronovskaja,
    LowerBound,
    Saturation,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Convergence => "convergence",
            ExperimentKind::Voronovskaja => "voronovskaja",
            ExperimentKind::LowerBound => "lower_bound",
            ExperimentKind::Saturation => "saturation",
        }
    }
}

/// One row per polynomial degree `n`.
#[derive(Clone, Debug)]
pub struct ReportRow<S: Scalar> {
    pub n: usize,
    pub sup_err: S,
    pub bound: S,
    pub err_times_qn: S,
    /// `sup_err(n) / sup_err(n+1)`; absent on the last row and when the
    /// next error vanishes.
    pub ratio: Option<S>,
}

/// Rows sorted by `n` plus an ordered metadata echo (configuration,
/// tolerances, derived summary values, and a content-hash run stamp).
#[derive(Clone, Debug)]
pub struct Report<S: Scalar> {
    pub kind: ExperimentKind,
    pub rows: Vec<ReportRow<S>>,
    pub metadata: Vec<(String, String)>,
}

impl<S: Scalar> Report<S> {
    /// Look up a metadata value.
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Whether the experiment's row-wise soundness condition held.
    pub fn passing(&self) -> bool {
        self.meta("passing") == Some("true")
    }

    pub fn write(&self, format: OutFormat) -> String {
        match format {
            OutFormat::Csv => self.to_csv(),
            OutFormat::Json => self.to_json(),
            OutFormat::Markdown => self.to_markdown(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,sup_err,bound,err_times_qn,ratio\n");
        for row in &self.rows {
            let ratio = row.ratio.as_ref().map(|r| r.report_str()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.n,
                row.sup_err.report_str(),
                row.bound.report_str(),
                row.err_times_qn.report_str(),
                ratio
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let exact = S::is_exact();
        let num = |v: &S| -> String {
            if exact {
                format!("\"{}\"", v.report_str())
            } else {
                v.report_str()
            }
        };
        let mut out = String::from("{\n");
        out.push_str(&format!("  \"kind\": \"{}\",\n", self.kind.name()));
        out.push_str("  \"metadata\": {\n");
        for (i, (k, v)) in self.metadata.iter().enumerate() {
            let comma = if i + 1 < self.metadata.len() { "," } else { "" };
            out.push_str(&format!(
                "    \"{}\": \"{}\"{comma}\n",
                json_escape(k),
                json_escape(v)
            ));
        }
        out.push_str("  },\n  \"rows\": [\n");
        for (i, row) in self.rows.iter().enumerate() {
            let ratio = row
                .ratio
                .as_ref()
                .map(|r| num(r))
                .unwrap_or_else(|| "null".to_string());
            let comma = if i + 1 < self.rows.len() { "," } else { "" };
            out.push_str(&format!(
                "    {{\"n\": {}, \"sup_err\": {}, \"bound\": {}, \"err_times_qn\": {}, \"ratio\": {}}}{comma}\n",
                row.n,
                num(&row.sup_err),
                num(&row.bound),
                num(&row.err_times_qn),
                ratio
            ));
        }
        out.push_str("  ]\n}\n");
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("# {} report\n\n", self.kind.name());
        for (k, v) in &self.metadata {
            out.push_str(&format!("- {k}: {v}\n"));
        }
        out.push_str("\n| n | sup_err | bound | err_times_qn | ratio |\n");
        out.push_str("|---|---------|-------|--------------|-------|\n");
        for row in &self.rows {
            let ratio = row
                .ratio
                .as_ref()
                .map(|r| r.report_str())
                .unwrap_or_else(|| "-".to_string());
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} |\n",
                row.n,
                row.sup_err.report_str(),
                row.bound.report_str(),
                row.err_times_qn.report_str(),
                ratio
            ));
        }
        out
    }
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// Short content hash of the configuration echo, so identical configs carry
/// an identical, recognizable stamp (deliberately not a timestamp: reports
/// must be byte-identical across runs).
pub fn run_stamp(parts: &[(String, String)]) -> String {
    let mut hasher = Sha256::new();
    for (k, v) in parts {
        hasher.update(k.as_bytes());
        hasher.update(b"=");
        hasher.update(v.as_bytes());
        hasher.update(b";");
    }
    let digest = hasher.finalize();
    let mut out = String::with_capacity(12);
    for b in digest.iter().take(6) {
        out.push_str(&format!("{b:02x}"));
    }
    out
}
