use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::canonical::format6;
use crate::engine::{LocusPoint, SignalId};
use crate::model::{AssessorScore, CommitteeAssessment, ModelParameters};

/// Current journal record layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    Config,
    Register,
    Assess,
    Decay,
    Retire,
    Close,
}

impl fmt::Display for RecordKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RecordKind::Config => "config",
            RecordKind::Register => "register",
            RecordKind::Assess => "assess",
            RecordKind::Decay => "decay",
            RecordKind::Retire => "retire",
            RecordKind::Close => "close",
        })
    }
}

/// Committee input as stored in the journal; the session date lives on the
/// record itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssessmentPayload {
    pub scores: Vec<AssessorScore>,
    pub frequency_count: u32,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
}

impl AssessmentPayload {
    pub fn from_assessment(assessment: &CommitteeAssessment) -> Self {
        Self {
            scores: assessment.scores.clone(),
            frequency_count: assessment.frequency_count,
            notes: assessment.notes.clone(),
        }
    }

    pub fn to_assessment(&self, date: NaiveDate) -> CommitteeAssessment {
        CommitteeAssessment {
            scores: self.scores.clone(),
            frequency_count: self.frequency_count,
            session_date: date,
            notes: self.notes.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegisterPayload {
    pub name: String,
    #[serde(default)]
    pub definition: String,
    #[serde(default)]
    pub scope: String,
    pub scores: Vec<AssessorScore>,
    pub frequency_count: u32,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
}

impl RegisterPayload {
    pub fn to_assessment(&self, date: NaiveDate) -> CommitteeAssessment {
        CommitteeAssessment {
            scores: self.scores.clone(),
            frequency_count: self.frequency_count,
            session_date: date,
            notes: self.notes.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExitPayload {
    #[serde(default)]
    pub rationale: String,
    #[serde(default, rename = "override", skip_serializing_if = "std::ops::Not::not")]
    pub override_gate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmptyPayload {}

/// Kind-specific content of a record.
#[derive(Debug, Clone, PartialEq)]
pub enum RecordBody {
    Config(ModelParameters),
    Register(RegisterPayload),
    Assess(AssessmentPayload),
    Decay,
    Retire(ExitPayload),
    Close(ExitPayload),
}

impl RecordBody {
    pub fn kind(&self) -> RecordKind {
        match self {
            RecordBody::Config(_) => RecordKind::Config,
            RecordBody::Register(_) => RecordKind::Register,
            RecordBody::Assess(_) => RecordKind::Assess,
            RecordBody::Decay => RecordKind::Decay,
            RecordBody::Retire(_) => RecordKind::Retire,
            RecordBody::Close(_) => RecordKind::Close,
        }
    }
}

/// Canonical checksums of the point a record appended. Replay recomputes
/// them and compares the six-decimal text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Computed {
    pub x: serde_json::Number,
    pub y: serde_json::Number,
    pub d: serde_json::Number,
    #[serde(rename = "S")]
    pub severity: serde_json::Number,
}

impl Computed {
    pub fn of(point: &LocusPoint) -> Self {
        let number = |v: f64| {
            format6(v)
                .parse::<serde_json::Number>()
                .expect("fixed-point text is a JSON number")
        };
        Self {
            x: number(point.position.x()),
            y: number(point.position.y()),
            d: number(point.d),
            severity: number(point.severity),
        }
    }

    /// Field-by-field comparison against a recomputed point; returns the
    /// first mismatch as `(field, stored, recomputed)`.
    pub fn mismatch(&self, point: &LocusPoint) -> Option<(&'static str, String, String)> {
        let fresh = Computed::of(point);
        for (field, stored, recomputed) in [
            ("x", &self.x, &fresh.x),
            ("y", &self.y, &fresh.y),
            ("d", &self.d, &fresh.d),
            ("S", &self.severity, &fresh.severity),
        ] {
            if stored.to_string() != recomputed.to_string() {
                return Some((field, stored.to_string(), recomputed.to_string()));
            }
        }
        None
    }
}

/// One line of the session journal.
#[derive(Debug, Clone, PartialEq)]
pub struct JournalRecord {
    pub schema_version: u32,
    pub seq: u64,
    pub signal_id: Option<SignalId>,
    pub date: Option<NaiveDate>,
    pub body: RecordBody,
    pub computed: Option<Computed>,
}

impl JournalRecord {
    pub fn kind(&self) -> RecordKind {
        self.body.kind()
    }

    /// Encodes the record as a single JSON line without the trailing newline.
    pub fn to_line(&self) -> Result<String, serde_json::Error> {
        #[derive(Serialize)]
        struct Line<'a, P: Serialize> {
            schema_version: u32,
            seq: u64,
            kind: RecordKind,
            #[serde(skip_serializing_if = "Option::is_none")]
            signal_id: Option<&'a SignalId>,
            #[serde(skip_serializing_if = "Option::is_none")]
            date: Option<NaiveDate>,
            payload: P,
            #[serde(skip_serializing_if = "Option::is_none")]
            computed: Option<&'a Computed>,
        }
        fn encode<P: Serialize>(record: &JournalRecord, payload: P) -> Result<String, serde_json::Error> {
            serde_json::to_string(&Line {
                schema_version: record.schema_version,
                seq: record.seq,
                kind: record.kind(),
                signal_id: record.signal_id.as_ref(),
                date: record.date,
                payload,
                computed: record.computed.as_ref(),
            })
        }
        match &self.body {
            RecordBody::Config(params) => encode(self, params),
            RecordBody::Register(p) => encode(self, p),
            RecordBody::Assess(p) => encode(self, p),
            RecordBody::Decay => encode(self, EmptyPayload {}),
            RecordBody::Retire(p) | RecordBody::Close(p) => encode(self, p),
        }
    }

    /// Decodes one JSON line.
    pub fn from_line(line: &str) -> Result<Self, String> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Line {
            schema_version: u32,
            seq: u64,
            kind: RecordKind,
            #[serde(default)]
            signal_id: Option<SignalId>,
            #[serde(default)]
            date: Option<NaiveDate>,
            payload: serde_json::Value,
            #[serde(default)]
            computed: Option<Computed>,
        }
        let raw: Line = serde_json::from_str(line).map_err(|e| e.to_string())?;
        if raw.schema_version != SCHEMA_VERSION {
            return Err(format!("unsupported schema_version {}", raw.schema_version));
        }
        fn payload<T: for<'de> Deserialize<'de>>(value: serde_json::Value) -> Result<T, String> {
            serde_json::from_value(value).map_err(|e| format!("payload: {e}"))
        }
        let body = match raw.kind {
            RecordKind::Config => RecordBody::Config(payload(raw.payload)?),
            RecordKind::Register => RecordBody::Register(payload(raw.payload)?),
            RecordKind::Assess => RecordBody::Assess(payload(raw.payload)?),
            RecordKind::Decay => {
                let EmptyPayload {} = payload(raw.payload)?;
                RecordBody::Decay
            }
            RecordKind::Retire => RecordBody::Retire(payload(raw.payload)?),
            RecordKind::Close => RecordBody::Close(payload(raw.payload)?),
        };
        Ok(JournalRecord {
            schema_version: raw.schema_version,
            seq: raw.seq,
            signal_id: raw.signal_id,
            date: raw.date,
            body,
            computed: raw.computed,
        })
    }
}
