//! Verification reports and the deterministic reduction used by sweeps.

use serde::{Serialize, Serializer};
use serde_json::{json, Value};

/// Result of checking an inequality over a family of instances.
///
/// `worst_slack` is the minimum of `LHS − RHS` oriented so that `≥ 0` means
/// the inequality holds; `witness` describes the instance achieving it.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub instances_checked: u64,
    pub passes: u64,
    #[serde(serialize_with = "serialize_slack")]
    pub worst_slack: f64,
    pub witness: Value,
    pub config: Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<VerificationReport>,
}

/// JSON has no infinities or NaN; those are written as strings.
fn serialize_slack<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_str(&x.to_string())
    }
}

impl VerificationReport {
    /// A report with no instances; `worst_slack` is `+∞`.
    pub fn empty(name: impl Into<String>, config: Value) -> Self {
        Self {
            name: name.into(),
            instances_checked: 0,
            passes: 0,
            worst_slack: f64::INFINITY,
            witness: Value::Null,
            config,
            parts: Vec::new(),
        }
    }

    pub fn from_tally(name: impl Into<String>, config: Value, tally: &Tally, witness: impl FnOnce(usize) -> Value) -> Self {
        let mut report = Self::empty(name, config);
        report.instances_checked = tally.instances;
        report.passes = tally.passes;
        if let Some((slack, idx)) = tally.worst {
            report.worst_slack = slack;
            report.witness = witness(idx);
        }
        report
    }

    /// One instance per `(slack, witness)` pair, all at tolerance `tol`.
    pub fn from_checks(name: impl Into<String>, config: Value, tol: f64, checks: Vec<(f64, Value)>) -> Self {
        let mut tally = Tally::default();
        for (i, (s, _)) in checks.iter().enumerate() {
            tally.push(i, *s, tol);
        }
        let mut checks = checks;
        Self::from_tally(name, config, &tally, |i| std::mem::take(&mut checks[i].1))
    }

    /// Every instance here and in every part passed.
    pub fn all_passed(&self) -> bool {
        self.passes == self.instances_checked && self.parts.iter().all(|p| p.all_passed())
    }

    pub fn failures(&self) -> u64 {
        self.instances_checked - self.passes
    }

    /// Combine sub-reports under one name: counts add, the worst part's slack
    /// and witness are lifted (earliest part wins ties).
    pub fn combine(name: impl Into<String>, config: Value, parts: Vec<VerificationReport>) -> Self {
        let mut report = Self::empty(name, config);
        for p in &parts {
            report.instances_checked += p.instances_checked;
            report.passes += p.passes;
            if slack_key(p.worst_slack) < slack_key(report.worst_slack) {
                report.worst_slack = p.worst_slack;
                report.witness = json!({ "part": p.name, "instance": p.witness });
            }
        }
        report.parts = parts;
        report
    }
}

/// NaN sorts below everything so that it is always reported.
fn slack_key(x: f64) -> f64 {
    if x.is_nan() {
        f64::NEG_INFINITY
    } else {
        x
    }
}

/// Running counts for a sweep: instances, passes and the worst slack with the
/// index of the instance achieving it. Merging is associative and picks the
/// lowest index among equal slacks, so parallel folds are deterministic.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Tally {
    pub instances: u64,
    pub passes: u64,
    pub worst: Option<(f64, usize)>,
}

impl Tally {
    pub fn one(index: usize, slack: f64, tolerance: f64) -> Self {
        Self {
            instances: 1,
            passes: u64::from(slack >= -tolerance),
            worst: Some((slack, index)),
        }
    }

    pub fn push(&mut self, index: usize, slack: f64, tolerance: f64) {
        *self = self.merge(Self::one(index, slack, tolerance));
    }

    pub fn merge(self, other: Self) -> Self {
        let worst = match (self.worst, other.worst) {
            (None, w) | (w, None) => w,
            (Some(a), Some(b)) => {
                let (ka, kb) = (slack_key(a.0), slack_key(b.0));
                if ka < kb || (ka == kb && a.1 <= b.1) {
                    Some(a)
                } else {
                    Some(b)
                }
            }
        };
        Self {
            instances: self.instances + other.instances,
            passes: self.passes + other.passes,
            worst,
        }
    }

    pub fn worst_slack(&self) -> f64 {
        self.worst.map_or(f64::INFINITY, |w| w.0)
    }
}
