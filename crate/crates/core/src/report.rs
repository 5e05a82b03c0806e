//! Verification records shared by every check.

use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

/// `Violation` is reserved for proved statements and `Finding` for conjectural ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Finding,
    Violation,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Finding => "finding",
            Status::Violation => "violation",
        })
    }
}

/// What kind of statement a check instantiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backing {
    Theorem,
    Conjecture,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub check: String,
    #[serde(rename = "N")]
    pub n: u32,
    pub r: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    pub expected: String,
    pub observed: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default)]
    pub seed: u64,
    /// Wall time; kept out of JSON so reports stay byte-identical across runs.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl ReportRecord {
    /// Builds a record whose status follows from `ok` and the check's backing.
    pub fn new(
        check: &str,
        n: u32,
        r: usize,
        expected: impl ToString,
        observed: impl ToString,
        ok: bool,
        backing: Backing,
    ) -> Self {
        let status = match (ok, backing) {
            (true, _) => Status::Pass,
            (false, Backing::Theorem) => Status::Violation,
            (false, Backing::Conjecture) => Status::Finding,
        };
        Self {
            check: check.to_string(),
            n,
            r,
            j: None,
            expected: expected.to_string(),
            observed: observed.to_string(),
            status,
            detail: None,
            seed: 0,
            elapsed: Duration::ZERO,
        }
    }

    pub fn with_j(mut self, j: usize) -> Self {
        self.j = Some(j);
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    /// Turns a violation into an error, passing everything else through.
    pub fn into_result(self) -> crate::Result<Self> {
        if self.status == Status::Violation {
            Err(crate::Error::TheoremViolation(Box::new(self)))
        } else {
            Ok(self)
        }
    }
}

impl fmt::Display for ReportRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<9} {} N={} r={}",
            self.status, self.check, self.n, self.r
        )?;
        if let Some(j) = self.j {
            write!(f, " j={j}")?;
        }
        write!(
            f,
            ": expected {}, observed {}",
            self.expected, self.observed
        )?;
        if let Some(d) = &self.detail {
            write!(f, " ({d})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_backing() {
        let r = ReportRecord::new("x", 12, 2, 1, 1, true, Backing::Theorem);
        assert_eq!(r.status, Status::Pass);
        let r = ReportRecord::new("x", 12, 2, 1, 0, false, Backing::Theorem);
        assert_eq!(r.status, Status::Violation);
        assert!(r.into_result().is_err());
        let r = ReportRecord::new("x", 12, 2, 1, 0, false, Backing::Conjecture);
        assert_eq!(r.status, Status::Finding);
        assert!(r.into_result().is_ok());
    }

    #[test]
    fn json_schema() {
        let r = ReportRecord::new("rank", 15, 3, 8, 8, true, Backing::Conjecture);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(
            s,
            r#"{"check":"rank","N":15,"r":3,"expected":"8","observed":"8","status":"pass","seed":0}"#
        );
    }
}
