//! Check records and the report document.

use std::fmt;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Both sides computed and shown; the tool does not adjudicate.
    Flagged,
    /// Depends on a nontrivial Brauer class, absent in this scenario.
    Skipped,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Flagged => "flagged",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub paper_location: String,
    pub status: Status,
    pub expected: String,
    pub actual: String,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        location: impl Into<String>,
        status: Status,
        expected: impl Into<String>,
        actual: impl Into<String>,
    ) -> Self {
        Check {
            name: name.into(),
            paper_location: location.into(),
            status,
            expected: expected.into(),
            actual: actual.into(),
        }
    }

    /// Pass iff `expected == actual`.
    pub fn compare(
        name: impl Into<String>,
        location: impl Into<String>,
        expected: impl Into<String>,
        actual: impl Into<String>,
    ) -> Self {
        let (e, a) = (expected.into(), actual.into());
        Check::new(name, location, Status::from_bool(e == a), e, a)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}, expected {}, actual {}",
            self.name, self.status, self.expected, self.actual
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
    pub exit: i32,
}

impl Report {
    pub fn new(checks: Vec<Check>) -> Self {
        let mut r = Report {
            checks,
            data: None,
            exit: 0,
        };
        r.exit = r.exit_code();
        r
    }

    pub fn with_data(data: Value) -> Self {
        Report {
            checks: Vec::new(),
            data: Some(data),
            exit: 0,
        }
    }

    /// 1 if any check failed; flagged and skipped never count.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.checks.iter().any(|c| c.status == Status::Fail))
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&c.to_string());
            out.push('\n');
        }
        if !self.checks.is_empty() {
            out.push_str(&format!(
                "summary: {} pass, {} fail, {} flagged, {} skipped\n",
                self.count(Status::Pass),
                self.count(Status::Fail),
                self.count(Status::Flagged),
                self.count(Status::Skipped)
            ));
        }
        out
    }
}
