use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::{ModelError, NrsScore, NRS_SCALE};

/// One assessor's pair of ratings. The label is optional; anonymous scoring
/// is allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssessorScore {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assessor: Option<String>,
    pub nrs_x: NrsScore,
    pub nrs_y: NrsScore,
}

impl AssessorScore {
    pub fn new(nrs_x: u8, nrs_y: u8) -> Result<Self, ModelError> {
        Ok(Self {
            assessor: None,
            nrs_x: NrsScore::new(nrs_x)?,
            nrs_y: NrsScore::new(nrs_y)?,
        })
    }

    pub fn labelled(mut self, assessor: impl Into<String>) -> Self {
        self.assessor = Some(assessor.into());
        self
    }
}

/// A committee's ratings for one signal at one session, plus the
/// facilitator-recorded cumulative occurrence count for the observation year.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitteeAssessment {
    pub scores: Vec<AssessorScore>,
    pub frequency_count: u32,
    pub session_date: NaiveDate,
    #[serde(default)]
    pub notes: String,
}

impl CommitteeAssessment {
    pub fn new(session_date: NaiveDate, frequency_count: u32, scores: Vec<AssessorScore>) -> Self {
        Self {
            scores,
            frequency_count,
            session_date,
            notes: String::new(),
        }
    }

    /// Builds an assessment from unlabelled `(nrs_x, nrs_y)` pairs.
    pub fn from_pairs(session_date: NaiveDate, frequency_count: u32, pairs: &[(u8, u8)]) -> Result<Self, ModelError> {
        let scores = pairs
            .iter()
            .map(|&(x, y)| AssessorScore::new(x, y))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(session_date, frequency_count, scores))
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }

    /// Committee size `n`.
    pub fn committee_size(&self) -> u32 {
        u32::try_from(self.scores.len()).unwrap_or(u32::MAX)
    }

    pub fn spread(&self) -> Result<CommitteeSpread, ModelError> {
        CommitteeSpread::of(&self.scores)
    }
}

/// Aggregated field coordinates of a committee assessment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    #[serde(serialize_with = "crate::canonical::f6")]
    pub x_new: f64,
    #[serde(serialize_with = "crate::canonical::f6")]
    pub y_new: f64,
}

/// Mean of the committee's ratings per axis, scaled onto the field.
pub fn aggregate_committee(assessment: &CommitteeAssessment) -> Result<Aggregate, ModelError> {
    let scores = &assessment.scores;
    if scores.is_empty() {
        return Err(ModelError::EmptyCommittee);
    }
    let n = scores.len() as f64;
    let sum_x: u32 = scores.iter().map(|s| u32::from(s.nrs_x.value())).sum();
    let sum_y: u32 = scores.iter().map(|s| u32::from(s.nrs_y.value())).sum();
    Ok(Aggregate {
        x_new: scale_mean(sum_x, n),
        y_new: scale_mean(sum_y, n),
    })
}

fn scale_mean(sum: u32, n: f64) -> f64 {
    NRS_SCALE * (f64::from(sum) / n)
}

/// Range of the raw ratings on one axis, recorded as discussion material.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpread {
    pub min: u8,
    pub max: u8,
    #[serde(serialize_with = "crate::canonical::f6")]
    pub mean: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommitteeSpread {
    pub n: u32,
    pub x: AxisSpread,
    pub y: AxisSpread,
}

impl CommitteeSpread {
    fn of(scores: &[AssessorScore]) -> Result<Self, ModelError> {
        if scores.is_empty() {
            return Err(ModelError::EmptyCommittee);
        }
        let axis = |pick: fn(&AssessorScore) -> u8| {
            let values = scores.iter().map(pick);
            let sum: u32 = values.clone().map(u32::from).sum();
            AxisSpread {
                min: values.clone().min().unwrap_or(0),
                max: values.max().unwrap_or(0),
                mean: f64::from(sum) / scores.len() as f64,
            }
        };
        Ok(Self {
            n: u32::try_from(scores.len()).unwrap_or(u32::MAX),
            x: axis(|s| s.nrs_x.value()),
            y: axis(|s| s.nrs_y.value()),
        })
    }
}
