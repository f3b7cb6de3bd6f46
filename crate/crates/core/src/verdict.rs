//! Pass/fail records for checked inequalities.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// Allowed slack for `lhs ≤ rhs`: `rel·max(|lhs|, |rhs|) + abs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slack {
    pub rel: f64,
    pub abs: f64,
}

impl Slack {
    /// Slack used for every bound-versus-`w²` comparison.
    pub const BOUND: Slack = Slack { rel: 1e-7, abs: 1e-9 };
    /// Slack for the auxiliary lemma inequalities.
    pub const LEMMA: Slack = Slack { rel: 1e-8, abs: 1e-8 };

    pub fn tolerance(&self, lhs: f64, rhs: f64) -> f64 {
        self.rel * lhs.abs().max(rhs.abs()) + self.abs
    }
}

/// One checked claim, recorded as `lhs ≤ rhs` (or `lhs < rhs` for strict claims).
///
/// `margin = rhs − lhs`; negative margins within slack still pass.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub id: String,
    pub status: Status,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

impl Verdict {
    /// `lhs ≤ rhs` up to `slack`. Non-finite operands fail.
    pub fn le(id: impl Into<String>, lhs: f64, rhs: f64, slack: Slack) -> Self {
        let ok = lhs.is_finite() && rhs.is_finite() && lhs <= rhs + slack.tolerance(lhs, rhs);
        Self::record(id, ok, lhs, rhs)
    }

    /// `lhs ≥ rhs` up to `slack`, stored as `rhs ≤ lhs`.
    pub fn ge(id: impl Into<String>, lhs: f64, rhs: f64, slack: Slack) -> Self {
        Self::le(id, rhs, lhs, slack)
    }

    /// Strict `lhs < rhs`, with no slack.
    pub fn lt(id: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let ok = lhs.is_finite() && rhs.is_finite() && lhs < rhs;
        Self::record(id, ok, lhs, rhs)
    }

    /// `|a − b| ≤ tol`, stored as `|a − b| ≤ tol`.
    pub fn close(id: impl Into<String>, a: f64, b: f64, tol: f64) -> Self {
        let diff = (a - b).abs();
        let ok = a.is_finite() && b.is_finite() && diff <= tol;
        Self::record(id, ok, diff, tol)
    }

    /// A boolean claim; `lhs`/`rhs` carry whatever quantities explain it.
    pub fn holds(id: impl Into<String>, ok: bool, lhs: f64, rhs: f64) -> Self {
        Self::record(id, ok, lhs, rhs)
    }

    pub fn skipped(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            status: Status::Skipped,
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    fn record(id: impl Into<String>, ok: bool, lhs: f64, rhs: f64) -> Self {
        Self {
            id: id.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            lhs,
            rhs,
            margin: rhs - lhs,
        }
    }
}
