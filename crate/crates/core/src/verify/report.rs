//! Check records and their aggregation.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One independently reportable check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub case_id: String,
    pub check: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
}

impl CheckRecord {
    pub fn new(
        case_id: &str,
        check: impl Into<String>,
        expected: impl ToString,
        computed: impl ToString,
    ) -> Self {
        let expected = expected.to_string();
        let computed = computed.to_string();
        let status = if expected == computed {
            Status::Pass
        } else {
            Status::Fail
        };
        CheckRecord {
            case_id: case_id.to_string(),
            check: check.into(),
            expected,
            computed,
            status,
        }
    }

    /// A record whose verdict is decided by the caller.
    pub fn verdict(
        case_id: &str,
        check: impl Into<String>,
        expected: impl ToString,
        computed: impl ToString,
        ok: bool,
    ) -> Self {
        CheckRecord {
            case_id: case_id.to_string(),
            check: check.into(),
            expected: expected.to_string(),
            computed: computed.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for CheckRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        write!(
            f,
            "{mark} {} [{}] expected={} computed={}",
            self.case_id, self.check, self.expected, self.computed
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, r: CheckRecord) {
        self.records.push(r);
    }

    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(CheckRecord::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.passed())
    }

    /// Stable sort by `case_id`; checks within a case keep their order.
    pub fn sort(&mut self) {
        self.records.sort_by(|a, b| a.case_id.cmp(&b.case_id));
    }

    pub fn summary(&self) -> String {
        let fail = self.failures().count();
        format!(
            "checks={} pass={} fail={}",
            self.records.len(),
            self.records.len() - fail,
            fail
        )
    }
}

impl FromIterator<Report> for Report {
    fn from_iter<I: IntoIterator<Item = Report>>(iter: I) -> Self {
        let mut out = Report::new();
        for r in iter {
            out.extend(r);
        }
        out
    }
}
