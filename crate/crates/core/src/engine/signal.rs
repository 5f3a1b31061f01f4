use std::fmt;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use super::{Axis, EngineError, StreakState};
use crate::canonical::{f6, opt_f6};
use crate::model::{
    aggregate_committee, classify_region, closure_eligible, committee_cap, consensus_momentum, decayed_growth,
    dimensionless_time, distance, effective_weights, entry_eligible, escalation_active, passive_decay, recency_weight,
    session_severity, update_position, Aggregate, CommitteeAssessment, CommitteeSpread, ModelParameters, Position,
    Region, SeverityBand,
};

/// Opaque registry-unique signal identifier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignalId(String);

impl SignalId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    /// Sequential id for the `ordinal`-th registered signal.
    pub fn sequential(ordinal: usize) -> Self {
        Self(format!("sig-{ordinal:04}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SignalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalStatus {
    Active,
    Retired,
    Closed,
}

impl fmt::Display for SignalStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignalStatus::Active => "active",
            SignalStatus::Retired => "retired",
            SignalStatus::Closed => "closed",
        })
    }
}

/// How a signal left active tracking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalExit {
    pub date: NaiveDate,
    pub rationale: String,
    /// Closure was forced past the distance gate.
    pub override_used: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    Entry,
    Assessment,
    DecayOnly,
}

/// Every intermediate quantity of one position update.
///
/// Decay-only sessions carry zero weights and momentum, unit amplifiers and
/// no aggregate; the entry point carries `tau = 0` and its aggregate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SessionOutcome {
    #[serde(serialize_with = "f6")]
    pub tau: f64,
    #[serde(serialize_with = "f6")]
    pub alpha_tau: f64,
    #[serde(serialize_with = "f6")]
    pub beta_tau: f64,
    #[serde(serialize_with = "f6")]
    pub kappa_x: f64,
    #[serde(serialize_with = "f6")]
    pub kappa_y: f64,
    #[serde(serialize_with = "f6")]
    pub rho_x: f64,
    #[serde(serialize_with = "f6")]
    pub rho_y: f64,
    #[serde(serialize_with = "opt_f6")]
    pub n_cap: Option<f64>,
    #[serde(serialize_with = "f6")]
    pub alpha_eff: f64,
    #[serde(serialize_with = "f6")]
    pub beta_eff: f64,
    #[serde(serialize_with = "opt_f6")]
    pub x_new_agg: Option<f64>,
    #[serde(serialize_with = "opt_f6")]
    pub y_new_agg: Option<f64>,
    /// Growth potential after decay, before blending and flooring.
    #[serde(serialize_with = "f6")]
    pub y_decay: f64,
    pub position_after: Position,
    pub reversal_x: bool,
    pub reversal_y: bool,
    /// Streak lengths after this session.
    pub k_x: u32,
    pub k_y: u32,
}

impl SessionOutcome {
    fn at_rest(tau: f64, y_decay: f64, position_after: Position, streaks: StreakState) -> Self {
        Self {
            tau,
            alpha_tau: 0.0,
            beta_tau: 0.0,
            kappa_x: 0.0,
            kappa_y: 0.0,
            rho_x: 1.0,
            rho_y: 1.0,
            n_cap: None,
            alpha_eff: 0.0,
            beta_eff: 0.0,
            x_new_agg: None,
            y_new_agg: None,
            y_decay,
            position_after,
            reversal_x: false,
            reversal_y: false,
            k_x: streaks.x.k,
            k_y: streaks.y.k,
        }
    }
}

/// One timestamped position on a signal's risk locus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocusPoint {
    pub session_index: u32,
    pub date: NaiveDate,
    pub kind: PointKind,
    pub position: Position,
    #[serde(serialize_with = "f6")]
    pub d: f64,
    pub region: Region,
    #[serde(serialize_with = "f6")]
    pub severity: f64,
    pub band: SeverityBand,
    pub frequency_count: u32,
    pub escalation_flag: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spread: Option<CommitteeSpread>,
    pub outcome: SessionOutcome,
}

impl LocusPoint {
    fn derive(
        session_index: u32,
        date: NaiveDate,
        kind: PointKind,
        frequency_count: u32,
        spread: Option<CommitteeSpread>,
        outcome: SessionOutcome,
    ) -> Self {
        let position = outcome.position_after;
        let d = distance(position);
        let severity = session_severity(d, frequency_count);
        Self {
            session_index,
            date,
            kind,
            position,
            d,
            region: classify_region(position),
            severity,
            band: SeverityBand::from_severity(severity),
            frequency_count,
            escalation_flag: escalation_active(d),
            spread,
            outcome,
        }
    }
}

/// The state change one session makes to a signal, computed without
/// touching the signal.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionEffect {
    pub point: LocusPoint,
    pub streaks: StreakState,
    pub last_assessment: Option<Aggregate>,
}

/// A registered weak signal and its full, append-only locus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Signal {
    pub id: SignalId,
    pub name: String,
    pub definition: String,
    pub scope: String,
    pub registered_on: NaiveDate,
    pub status: SignalStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exit: Option<SignalExit>,
    /// Date of the first session at or beyond the escalation threshold.
    pub escalated_on: Option<NaiveDate>,
    pub streaks: StreakState,
    pub last_assessment: Option<Aggregate>,
    locus: Vec<LocusPoint>,
}

impl Signal {
    /// Creates a signal at the committee's aggregated entry position.
    pub fn register(
        id: SignalId,
        name: impl Into<String>,
        definition: impl Into<String>,
        scope: impl Into<String>,
        assessment: &CommitteeAssessment,
    ) -> Result<Signal, EngineError> {
        let name = name.into();
        if name.trim().is_empty() {
            return Err(EngineError::EmptyName);
        }
        let agg = aggregate_committee(assessment)?;
        if !entry_eligible(agg) {
            return Err(EngineError::EntryConstraint {
                x: agg.x_new,
                y: agg.y_new,
            });
        }
        let position = Position::new(agg.x_new, agg.y_new)?;
        let streaks = StreakState::default();
        let outcome = SessionOutcome {
            x_new_agg: Some(agg.x_new),
            y_new_agg: Some(agg.y_new),
            ..SessionOutcome::at_rest(0.0, position.y(), position, streaks)
        };
        let point = LocusPoint::derive(
            1,
            assessment.session_date,
            PointKind::Entry,
            assessment.frequency_count,
            Some(assessment.spread()?),
            outcome,
        );
        let escalated_on = point.escalation_flag.then_some(point.date);
        Ok(Signal {
            id,
            name,
            definition: definition.into(),
            scope: scope.into(),
            registered_on: assessment.session_date,
            status: SignalStatus::Active,
            exit: None,
            escalated_on,
            streaks,
            last_assessment: Some(agg),
            locus: vec![point],
        })
    }

    pub fn locus(&self) -> &[LocusPoint] {
        &self.locus
    }

    pub fn current(&self) -> &LocusPoint {
        self.locus
            .last()
            .expect("a registered signal always has an entry point")
    }

    pub fn position(&self) -> Position {
        self.current().position
    }

    pub fn escalated_ever(&self) -> bool {
        self.escalated_on.is_some()
    }

    pub fn is_active(&self) -> bool {
        self.status == SignalStatus::Active
    }

    /// Position as of `date` with passive decay applied over the gap since
    /// the last session. Nothing is appended.
    pub fn position_as_of(&self, date: NaiveDate, params: &ModelParameters) -> Result<Position, EngineError> {
        let last = self.current();
        if date < last.date {
            return Err(EngineError::DateBeforeLast { date, last: last.date });
        }
        if !self.is_active() {
            return Ok(last.position);
        }
        let tau = dimensionless_time(days_between(last.date, date), params);
        Ok(passive_decay(last.position, tau, params))
    }

    /// Runs the full update pipeline for one committee assessment.
    pub fn evaluate_assessment(
        &self,
        assessment: &CommitteeAssessment,
        params: &ModelParameters,
    ) -> Result<SessionEffect, EngineError> {
        let tau = self.session_tau(assessment.session_date, params)?;
        let agg = aggregate_committee(assessment)?;
        self.check_frequency(assessment.session_date, assessment.frequency_count)?;

        let prior = self.position();
        let n = assessment.committee_size();

        let alpha_tau = recency_weight(tau, params.alpha_base, params.lambda);
        let beta_tau = recency_weight(tau, params.beta_base, params.nu);

        let (streaks, reversal_x) = self.streaks.update(Axis::X, prior.x(), agg.x_new);
        let (streaks, reversal_y) = streaks.update(Axis::Y, prior.y(), agg.y_new);

        let momentum_x = consensus_momentum((agg.x_new - prior.x()).abs(), streaks.x.k, n, reversal_x, params);
        let momentum_y = consensus_momentum((agg.y_new - prior.y()).abs(), streaks.y.k, n, reversal_y, params);

        let n_cap = committee_cap(n, params);
        let (alpha_eff, beta_eff) = effective_weights(alpha_tau, beta_tau, momentum_x.kappa, momentum_y.kappa, n_cap);

        let position_after = update_position(prior, agg, alpha_eff, beta_eff, tau, params)?;

        let outcome = SessionOutcome {
            tau,
            alpha_tau,
            beta_tau,
            kappa_x: momentum_x.kappa,
            kappa_y: momentum_y.kappa,
            rho_x: momentum_x.rho,
            rho_y: momentum_y.rho,
            n_cap: Some(n_cap),
            alpha_eff,
            beta_eff,
            x_new_agg: Some(agg.x_new),
            y_new_agg: Some(agg.y_new),
            y_decay: decayed_growth(prior.y(), tau, params),
            position_after,
            reversal_x,
            reversal_y,
            k_x: streaks.x.k,
            k_y: streaks.y.k,
        };
        let point = LocusPoint::derive(
            self.next_index(),
            assessment.session_date,
            PointKind::Assessment,
            assessment.frequency_count,
            Some(assessment.spread()?),
            outcome,
        );
        Ok(SessionEffect {
            point,
            streaks,
            last_assessment: Some(agg),
        })
    }

    /// A session with no new assessment: `x` persists and `y` decays.
    pub fn evaluate_decay(&self, date: NaiveDate, params: &ModelParameters) -> Result<SessionEffect, EngineError> {
        let tau = self.session_tau(date, params)?;
        let prior = self.position();
        let position_after = passive_decay(prior, tau, params);
        let outcome = SessionOutcome::at_rest(
            tau,
            decayed_growth(prior.y(), tau, params),
            position_after,
            self.streaks,
        );
        let point = LocusPoint::derive(
            self.next_index(),
            date,
            PointKind::DecayOnly,
            self.current().frequency_count,
            None,
            outcome,
        );
        Ok(SessionEffect {
            point,
            streaks: self.streaks,
            last_assessment: self.last_assessment,
        })
    }

    /// Retirement is a team judgment; no distance precondition applies.
    pub fn evaluate_retire(&self, date: NaiveDate, rationale: &str) -> Result<SignalExit, EngineError> {
        self.check_exit(date)?;
        Ok(SignalExit {
            date,
            rationale: rationale.to_owned(),
            override_used: false,
        })
    }

    /// Closure requires the current distance to be below `d_close`, unless
    /// explicitly overridden with a rationale.
    pub fn evaluate_close(
        &self,
        date: NaiveDate,
        override_gate: bool,
        rationale: &str,
        params: &ModelParameters,
    ) -> Result<SignalExit, EngineError> {
        self.check_exit(date)?;
        let d = self.current().d;
        let eligible = closure_eligible(d, params);
        if !eligible {
            if !override_gate {
                return Err(EngineError::ClosureNotEligible {
                    d,
                    d_close: params.d_close,
                });
            }
            if rationale.trim().is_empty() {
                return Err(EngineError::OverrideNeedsRationale);
            }
        }
        Ok(SignalExit {
            date,
            rationale: rationale.to_owned(),
            override_used: !eligible,
        })
    }

    pub(crate) fn apply_session(&mut self, effect: SessionEffect) {
        debug_assert_eq!(effect.point.session_index, self.next_index());
        if effect.point.escalation_flag && self.escalated_on.is_none() {
            self.escalated_on = Some(effect.point.date);
        }
        self.streaks = effect.streaks;
        self.last_assessment = effect.last_assessment;
        self.locus.push(effect.point);
    }

    pub(crate) fn apply_exit(&mut self, status: SignalStatus, exit: SignalExit) {
        self.status = status;
        self.exit = Some(exit);
    }

    fn next_index(&self) -> u32 {
        u32::try_from(self.locus.len() + 1).unwrap_or(u32::MAX)
    }

    fn ensure_active(&self) -> Result<(), EngineError> {
        if self.is_active() {
            Ok(())
        } else {
            Err(EngineError::NotActive {
                name: self.name.clone(),
                status: self.status,
            })
        }
    }

    fn session_tau(&self, date: NaiveDate, params: &ModelParameters) -> Result<f64, EngineError> {
        self.ensure_active()?;
        let last = self.current().date;
        if date <= last {
            return Err(EngineError::DateNotAfter { date, last });
        }
        Ok(dimensionless_time(days_between(last, date), params))
    }

    fn check_exit(&self, date: NaiveDate) -> Result<(), EngineError> {
        self.ensure_active()?;
        let last = self.current().date;
        if date < last {
            return Err(EngineError::DateBeforeLast { date, last });
        }
        Ok(())
    }

    /// Within one calendar year the cumulative count may not fall.
    fn check_frequency(&self, date: NaiveDate, frequency_count: u32) -> Result<(), EngineError> {
        let last = self.current();
        if last.date.year() == date.year() && frequency_count < last.frequency_count {
            return Err(EngineError::FrequencyDecreased {
                previous: last.frequency_count,
                given: frequency_count,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
impl Signal {
    /// A signal whose entry point sits at an arbitrary position, bypassing
    /// the entry box.
    pub(crate) fn seeded(id: usize, name: &str, date: NaiveDate, position: Position, frequency_count: u32) -> Signal {
        let outcome = SessionOutcome::at_rest(0.0, position.y(), position, StreakState::default());
        let point = LocusPoint::derive(1, date, PointKind::Entry, frequency_count, None, outcome);
        Signal {
            id: SignalId::sequential(id),
            name: name.to_owned(),
            definition: String::new(),
            scope: String::new(),
            registered_on: date,
            status: SignalStatus::Active,
            exit: None,
            escalated_on: point.escalation_flag.then_some(date),
            streaks: StreakState::default(),
            last_assessment: None,
            locus: vec![point],
        }
    }
}

fn days_between(from: NaiveDate, to: NaiveDate) -> u32 {
    u32::try_from((to - from).num_days()).unwrap_or(u32::MAX)
}
