use std::fmt;

use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::canonical::Canonical;

/// Upper bound of both field axes.
pub const FIELD_MAX: f64 = 10.0;

/// Midline splitting each axis into low and high halves.
pub const REGION_MIDLINE: f64 = 5.0;

/// Scale factor from a 0..=4 rating onto the 0..=10 field.
pub const NRS_SCALE: f64 = 2.5;

/// Largest coordinate a newly registered signal may occupy on either axis.
pub const ENTRY_MAX: f64 = 2.5;

/// A single 0..=4 numeric rating from one assessor on one axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct NrsScore(u8);

impl NrsScore {
    pub const MAX: u8 = 4;

    pub fn new(value: u8) -> Result<Self, ModelError> {
        if value <= Self::MAX {
            Ok(Self(value))
        } else {
            Err(ModelError::NrsOutOfRange(i64::from(value)))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

impl TryFrom<u8> for NrsScore {
    type Error = ModelError;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        Self::new(value)
    }
}

impl From<NrsScore> for u8 {
    fn from(score: NrsScore) -> u8 {
        score.0
    }
}

impl fmt::Display for NrsScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A point on the cultivation field: `x` is risk intensity, `y` is risk
/// growth potential. Both coordinates always lie in `[0, 10]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position {
    x: f64,
    y: f64,
}

impl Position {
    pub const ORIGIN: Position = Position { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Result<Self, ModelError> {
        let in_field = |v: f64| (0.0..=FIELD_MAX).contains(&v);
        if in_field(x) && in_field(y) {
            Ok(Self { x, y })
        } else {
            Err(ModelError::OutOfField { x, y })
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }
}

impl Serialize for Position {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut state = serializer.serialize_struct("Position", 2)?;
        state.serialize_field("x", &Canonical(self.x))?;
        state.serialize_field("y", &Canonical(self.y))?;
        state.end()
    }
}

impl<'de> Deserialize<'de> for Position {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            x: f64,
            y: f64,
        }
        let raw = Raw::deserialize(deserializer)?;
        Position::new(raw.x, raw.y).map_err(serde::de::Error::custom)
    }
}

/// The four named quadrants of the field, split at `(5, 5)` with the high
/// side inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Region {
    QuestionMarks,
    LitFuses,
    Owls,
    SleepingCats,
}

impl Region {
    pub const ALL: [Region; 4] = [
        Region::QuestionMarks,
        Region::LitFuses,
        Region::Owls,
        Region::SleepingCats,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Region::QuestionMarks => "QuestionMarks",
            Region::LitFuses => "LitFuses",
            Region::Owls => "Owls",
            Region::SleepingCats => "SleepingCats",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Interpretation bands for the session severity index. Intervals are
/// half-open: `[0, 0.5)`, `[0.5, 1.5)`, `[1.5, 2.5)`, `[2.5, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SeverityBand {
    Low,
    Moderate,
    Elevated,
    Critical,
}

impl SeverityBand {
    pub const ALL: [SeverityBand; 4] = [
        SeverityBand::Low,
        SeverityBand::Moderate,
        SeverityBand::Elevated,
        SeverityBand::Critical,
    ];

    pub fn from_severity(severity: f64) -> Self {
        if severity < 0.5 {
            SeverityBand::Low
        } else if severity < 1.5 {
            SeverityBand::Moderate
        } else if severity < 2.5 {
            SeverityBand::Elevated
        } else {
            SeverityBand::Critical
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SeverityBand::Low => "Low",
            SeverityBand::Moderate => "Moderate",
            SeverityBand::Elevated => "Elevated",
            SeverityBand::Critical => "Critical",
        }
    }

    pub fn recommended_action(self) -> &'static str {
        match self {
            SeverityBand::Low => "Routine monitoring; log and observe",
            SeverityBand::Moderate => "Team review recommended",
            SeverityBand::Elevated => "Management notification; increase session frequency",
            SeverityBand::Critical => "Escalation imminent or SMS already triggered",
        }
    }
}

impl fmt::Display for SeverityBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
