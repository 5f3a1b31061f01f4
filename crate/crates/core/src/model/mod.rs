//! Pure field model: rating scale, committee aggregation, recency-weighted
//! position updates with consensus momentum and passive decay, and the
//! derived distance, severity and region metrics.
//!
//! Nothing in this module touches a clock, the filesystem or shared state.

mod assessment;
mod formulas;
mod params;
mod types;

use thiserror::Error;

pub use assessment::{aggregate_committee, Aggregate, AssessorScore, AxisSpread, CommitteeAssessment, CommitteeSpread};
pub use formulas::{
    classify_region, closure_eligible, committee_cap, consensus_momentum, decayed_growth, dimensionless_time, distance,
    effective_weights, entry_eligible, escalation_active, passive_decay, recency_weight, scale_nrs, session_severity,
    update_position, Momentum,
};
pub use params::ModelParameters;
pub use types::{NrsScore, Position, Region, SeverityBand, ENTRY_MAX, FIELD_MAX, NRS_SCALE, REGION_MIDLINE};

/// Distance from the origin to the field centre `(5, 5)`; reaching it raises
/// the escalation flag.
pub fn sms_threshold() -> f64 {
    50f64.sqrt()
}

/// Distance from the origin to the far corner `(10, 10)`.
pub fn max_distance() -> f64 {
    200f64.sqrt()
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("NRS score {0} is outside 0..=4")]
    NrsOutOfRange(i64),
    #[error("position ({x}, {y}) lies outside the [0, 10] x [0, 10] field")]
    OutOfField { x: f64, y: f64 },
    #[error("assessment has no assessor scores")]
    EmptyCommittee,
    #[error("parameter `{key}` = {value} is invalid: expected {expected}")]
    InvalidParameter {
        key: &'static str,
        value: f64,
        expected: &'static str,
    },
}
