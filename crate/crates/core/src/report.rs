//! Verification records and their text/JSON rendering.

use std::fmt::Write as _;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    /// Computed and shown, never asserted.
    Reported,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
            Status::Reported => "REPORTED",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationRecord {
    pub case: String,
    pub status: Status,
    pub detail: String,
    /// Numeric sort key; output is ordered by it.
    #[serde(skip)]
    pub key: Vec<i64>,
}

impl VerificationRecord {
    pub fn new(case: String, key: Vec<i64>, status: Status, detail: String) -> Self {
        VerificationRecord {
            case,
            status,
            detail,
            key,
        }
    }
}

/// A named set of records, e.g. one verification sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportGroup {
    pub name: String,
    pub records: Vec<VerificationRecord>,
}

impl ReportGroup {
    pub fn new(name: impl Into<String>, mut records: Vec<VerificationRecord>) -> Self {
        records.sort_by(|a, b| a.key.cmp(&b.key).then_with(|| a.case.cmp(&b.case)));
        ReportGroup {
            name: name.into(),
            records,
        }
    }

    pub fn count(&self, status: Status) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    pub fn failed(&self) -> bool {
        self.count(Status::Fail) > 0
    }

    /// `PASS (n cases)`, with failure and skip tallies when present.
    pub fn summary(&self) -> String {
        let n = self.records.len();
        let fails = self.count(Status::Fail);
        let skipped = self.count(Status::Skipped);
        let mut s = if fails == 0 {
            format!("PASS ({n} cases")
        } else {
            format!("FAIL ({fails} of {n} cases failed")
        };
        if skipped > 0 {
            let _ = write!(s, ", {skipped} skipped");
        }
        let reported = self.count(Status::Reported);
        if reported > 0 {
            let _ = write!(s, ", {reported} reported only");
        }
        s.push(')');
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputMode {
    Text,
    Json,
}

/// Text: one summary line per group followed by each failing case. JSON: a
/// flat array of `{case, status, detail}`.
pub fn emit_report(groups: &[ReportGroup], mode: OutputMode) -> String {
    match mode {
        OutputMode::Json => {
            let all: Vec<&VerificationRecord> = groups.iter().flat_map(|g| &g.records).collect();
            let mut s = serde_json::to_string_pretty(&all).expect("records serialize");
            s.push('\n');
            s
        }
        OutputMode::Text => {
            let mut s = String::new();
            for g in groups {
                if g.name.is_empty() {
                    let _ = writeln!(s, "{}", g.summary());
                } else {
                    let _ = writeln!(s, "{}: {}", g.name, g.summary());
                }
                for r in g.records.iter().filter(|r| r.status == Status::Fail) {
                    let _ = writeln!(s, "  FAIL {}: {}", r.case, r.detail);
                }
            }
            if groups.is_empty() {
                s.push_str("PASS (0 cases)\n");
            }
            s
        }
    }
}

pub fn any_failed(groups: &[ReportGroup]) -> bool {
    groups.iter().any(ReportGroup::failed)
}
