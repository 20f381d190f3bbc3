//! Outcome of one checked identity or inequality.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// How `lhs` and `rhs` are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `lhs ≤ rhs`, margin `rhs − lhs`.
    LessEq,
    /// `lhs ≥ rhs`, margin `lhs − rhs`.
    GreaterEq,
    /// `lhs = rhs`, margin `−|lhs − rhs|`.
    Equal,
}

/// Allowed slack: `absolute + relative · max(|lhs|, |rhs|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerance {
    pub absolute: f64,
    pub relative: f64,
}

impl Tolerance {
    pub const fn relative(relative: f64) -> Self {
        Self { absolute: 0.0, relative }
    }

    pub const fn absolute(absolute: f64) -> Self {
        Self { absolute, relative: 0.0 }
    }

    pub fn slack(&self, lhs: f64, rhs: f64) -> f64 {
        self.absolute + self.relative * lhs.abs().max(rhs.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// The hypothesis of the statement does not hold for this input.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub relation: Relation,
    #[serde(with = "nan_as_null")]
    pub lhs: f64,
    #[serde(with = "nan_as_null")]
    pub rhs: f64,
    #[serde(with = "nan_as_null")]
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default)]
    pub diagnostics: BTreeMap<String, f64>,
    #[serde(default)]
    pub scenario: BTreeMap<String, String>,
}

impl InequalityReport {
    pub fn new(name: impl Into<String>, relation: Relation, lhs: f64, rhs: f64, tol: Tolerance) -> Self {
        let margin = match relation {
            Relation::LessEq => rhs - lhs,
            Relation::GreaterEq => lhs - rhs,
            Relation::Equal => -(lhs - rhs).abs(),
        };
        let tolerance = tol.slack(lhs, rhs);
        let pass = margin >= -tolerance;
        Self {
            name: name.into(),
            relation,
            lhs,
            rhs,
            margin,
            tolerance,
            pass,
            status: if pass { Status::Pass } else { Status::Fail },
            note: None,
            diagnostics: BTreeMap::new(),
            scenario: BTreeMap::new(),
        }
    }

    /// A check whose precondition failed; it neither passes nor fails.
    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            relation: Relation::LessEq,
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            tolerance: 0.0,
            pass: true,
            status: Status::Skipped,
            note: Some(reason.into()),
            diagnostics: BTreeMap::new(),
            scenario: BTreeMap::new(),
        }
    }

    /// A check that could not be computed.
    pub fn failed(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            pass: false,
            status: Status::Fail,
            ..Self::skipped(name, reason)
        }
    }

    /// `|lhs − rhs| / max(|lhs|, |rhs|)`, 0 when both vanish.
    pub fn relative_gap(&self) -> f64 {
        let scale = self.lhs.abs().max(self.rhs.abs());
        if scale == 0.0 {
            0.0
        } else {
            (self.lhs - self.rhs).abs() / scale
        }
    }

    pub fn with_diagnostic(mut self, key: &str, value: f64) -> Self {
        self.diagnostics.insert(key.to_owned(), value);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Skipped checks carry NaN sides; JSON has no NaN, so they travel as null.
mod nan_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_nan() {
            s.serialize_none()
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_and_tolerance() {
        let r = InequalityReport::new("le", Relation::LessEq, 1.01, 1.0, Tolerance::relative(0.02));
        assert!(r.pass);
        assert!(r.margin < 0.0);
        let r = InequalityReport::new("ge", Relation::GreaterEq, 0.9, 1.0, Tolerance::relative(0.02));
        assert!(!r.pass);
        let r = InequalityReport::new("eq", Relation::Equal, 0.0, 0.0, Tolerance::relative(0.0));
        assert!(r.pass);
        assert_eq!(r.relative_gap(), 0.0);
    }

    #[test]
    fn skipped_reports_round_trip_through_json() {
        let r = InequalityReport::skipped("s", "why");
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"lhs\":null"));
        let back: InequalityReport = serde_json::from_str(&text).unwrap();
        assert!(back.lhs.is_nan() && back.status == Status::Skipped);
    }
}
