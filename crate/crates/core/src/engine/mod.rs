//! Signal lifecycle: registration, assessment and decay sessions, streak
//! bookkeeping, escalation flagging, retirement and closure.
//!
//! Every mutation is split into a pure *plan* step that computes the change
//! against current state and a *commit* step that applies it. Previews run
//! the plan step alone, so a preview and the commit that follows it produce
//! identical locus points.

mod signal;
mod streak;

use chrono::NaiveDate;
use thiserror::Error;

pub use signal::{LocusPoint, PointKind, SessionEffect, SessionOutcome, Signal, SignalExit, SignalId, SignalStatus};
pub use streak::{Axis, AxisStreak, Direction, StreakState};

use crate::model::{CommitteeAssessment, ModelError, ModelParameters};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("signal name must not be empty")]
    EmptyName,
    #[error("a signal named `{0}` is already registered")]
    DuplicateName(String),
    #[error(
        "entry position ({x:.3}, {y:.3}) lies outside [0, 2.5] x [0, 2.5]; only weak signals \
         (NRS <= 1 on both axes) are registered, mature known risks do not enter via this pathway"
    )]
    EntryConstraint { x: f64, y: f64 },
    #[error("unknown signal `{0}`")]
    UnknownSignal(String),
    #[error("signal `{name}` is {status}, not active")]
    NotActive { name: String, status: SignalStatus },
    #[error("session date {date} must be after the previous session on {last}")]
    DateNotAfter { date: NaiveDate, last: NaiveDate },
    #[error("date {date} precedes the previous session on {last}")]
    DateBeforeLast { date: NaiveDate, last: NaiveDate },
    #[error("frequency count {given} is below the previous count {previous} for this observation year")]
    FrequencyDecreased { previous: u32, given: u32 },
    #[error("distance {d:.3} is not below the closure threshold {d_close}; closing requires an override")]
    ClosureNotEligible { d: f64, d_close: f64 },
    #[error("a closure override requires a rationale")]
    OverrideNeedsRationale,
}

impl EngineError {
    /// Name of the request field the error refers to, where there is one.
    pub fn field(&self) -> Option<&'static str> {
        match self {
            EngineError::Model(ModelError::NrsOutOfRange(_)) | EngineError::Model(ModelError::EmptyCommittee) => {
                Some("scores")
            }
            EngineError::Model(_) => None,
            EngineError::EmptyName | EngineError::DuplicateName(_) => Some("name"),
            EngineError::EntryConstraint { .. } => Some("scores"),
            EngineError::UnknownSignal(_) => Some("signal"),
            EngineError::NotActive { .. } => Some("status"),
            EngineError::DateNotAfter { .. } | EngineError::DateBeforeLast { .. } => Some("date"),
            EngineError::FrequencyDecreased { .. } => Some("frequency_count"),
            EngineError::ClosureNotEligible { .. } => Some("override"),
            EngineError::OverrideNeedsRationale => Some("rationale"),
        }
    }

    /// Short machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            EngineError::Model(_) => "invalid_input",
            EngineError::EmptyName => "empty_name",
            EngineError::DuplicateName(_) => "duplicate_name",
            EngineError::EntryConstraint { .. } => "entry_constraint",
            EngineError::UnknownSignal(_) => "not_found",
            EngineError::NotActive { .. } => "not_active",
            EngineError::DateNotAfter { .. } | EngineError::DateBeforeLast { .. } => "date_order",
            EngineError::FrequencyDecreased { .. } => "frequency_decreased",
            EngineError::ClosureNotEligible { .. } => "closure_not_eligible",
            EngineError::OverrideNeedsRationale => "override_needs_rationale",
        }
    }
}

/// A validated, not-yet-applied change to a registry.
#[derive(Debug, Clone, PartialEq)]
pub enum Mutation {
    Register(Box<Signal>),
    Session {
        signal: SignalId,
        effect: Box<SessionEffect>,
    },
    Exit {
        signal: SignalId,
        status: SignalStatus,
        exit: SignalExit,
    },
}

impl Mutation {
    pub fn signal_id(&self) -> &SignalId {
        match self {
            Mutation::Register(signal) => &signal.id,
            Mutation::Session { signal, .. } | Mutation::Exit { signal, .. } => signal,
        }
    }

    /// The locus point this mutation appends, if any.
    pub fn point(&self) -> Option<&LocusPoint> {
        match self {
            Mutation::Register(signal) => signal.locus().first(),
            Mutation::Session { effect, .. } => Some(&effect.point),
            Mutation::Exit { .. } => None,
        }
    }
}

/// All signals tracked by one team under one parameter set.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Registry {
    params: ModelParameters,
    signals: Vec<Signal>,
}

impl Registry {
    pub fn new(params: ModelParameters) -> Result<Self, EngineError> {
        params.validate()?;
        Ok(Self {
            params,
            signals: Vec::new(),
        })
    }

    pub fn params(&self) -> &ModelParameters {
        &self.params
    }

    pub fn signals(&self) -> &[Signal] {
        &self.signals
    }

    pub fn get(&self, id: &SignalId) -> Option<&Signal> {
        self.signals.iter().find(|s| &s.id == id)
    }

    /// Looks a signal up by id, falling back to its name.
    pub fn find(&self, key: &str) -> Option<&Signal> {
        self.signals
            .iter()
            .find(|s| s.id.as_str() == key)
            .or_else(|| self.signals.iter().find(|s| s.name == key))
    }

    pub fn resolve(&self, key: &str) -> Result<&Signal, EngineError> {
        self.find(key).ok_or_else(|| EngineError::UnknownSignal(key.to_owned()))
    }

    /// Registered names closest to `key`, best first.
    pub fn near_matches(&self, key: &str, limit: usize) -> Vec<&str> {
        let mut scored: Vec<(f64, &str)> = self
            .signals
            .iter()
            .map(|s| (strsim::normalized_damerau_levenshtein(key, &s.name), s.name.as_str()))
            .filter(|(score, _)| *score >= 0.4)
            .collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0));
        scored.into_iter().take(limit).map(|(_, name)| name).collect()
    }

    pub fn plan_register(
        &self,
        name: &str,
        definition: &str,
        scope: &str,
        assessment: &CommitteeAssessment,
    ) -> Result<Mutation, EngineError> {
        if self.signals.iter().any(|s| s.name == name) {
            return Err(EngineError::DuplicateName(name.to_owned()));
        }
        let id = SignalId::sequential(self.signals.len() + 1);
        let signal = Signal::register(id, name, definition, scope, assessment)?;
        Ok(Mutation::Register(Box::new(signal)))
    }

    pub fn plan_assessment(&self, key: &str, assessment: &CommitteeAssessment) -> Result<Mutation, EngineError> {
        let signal = self.resolve(key)?;
        let effect = signal.evaluate_assessment(assessment, &self.params)?;
        Ok(Mutation::Session {
            signal: signal.id.clone(),
            effect: Box::new(effect),
        })
    }

    pub fn plan_decay(&self, key: &str, date: NaiveDate) -> Result<Mutation, EngineError> {
        let signal = self.resolve(key)?;
        let effect = signal.evaluate_decay(date, &self.params)?;
        Ok(Mutation::Session {
            signal: signal.id.clone(),
            effect: Box::new(effect),
        })
    }

    pub fn plan_retire(&self, key: &str, date: NaiveDate, rationale: &str) -> Result<Mutation, EngineError> {
        let signal = self.resolve(key)?;
        let exit = signal.evaluate_retire(date, rationale)?;
        Ok(Mutation::Exit {
            signal: signal.id.clone(),
            status: SignalStatus::Retired,
            exit,
        })
    }

    pub fn plan_close(
        &self,
        key: &str,
        date: NaiveDate,
        override_gate: bool,
        rationale: &str,
    ) -> Result<Mutation, EngineError> {
        let signal = self.resolve(key)?;
        let exit = signal.evaluate_close(date, override_gate, rationale, &self.params)?;
        Ok(Mutation::Exit {
            signal: signal.id.clone(),
            status: SignalStatus::Closed,
            exit,
        })
    }

    /// Applies a mutation planned against the current state.
    ///
    /// # Panics
    ///
    /// If the mutation names a signal that is not registered, i.e. it was
    /// planned against a different registry.
    pub fn commit(&mut self, mutation: Mutation) -> &Signal {
        match mutation {
            Mutation::Register(signal) => {
                self.signals.push(*signal);
                self.signals.last().expect("just pushed")
            }
            Mutation::Session { signal, effect } => {
                let target = self.get_mut(&signal);
                target.apply_session(*effect);
                target
            }
            Mutation::Exit { signal, status, exit } => {
                let target = self.get_mut(&signal);
                target.apply_exit(status, exit);
                target
            }
        }
    }

    #[cfg(test)]
    pub(crate) fn insert(&mut self, signal: Signal) {
        self.signals.push(signal);
    }

    fn get_mut(&mut self, id: &SignalId) -> &mut Signal {
        self.signals
            .iter_mut()
            .find(|s| &s.id == id)
            .expect("mutation planned against this registry")
    }

    pub fn register(
        &mut self,
        name: &str,
        definition: &str,
        scope: &str,
        assessment: &CommitteeAssessment,
    ) -> Result<&Signal, EngineError> {
        let mutation = self.plan_register(name, definition, scope, assessment)?;
        Ok(self.commit(mutation))
    }

    pub fn assess(&mut self, key: &str, assessment: &CommitteeAssessment) -> Result<&LocusPoint, EngineError> {
        let mutation = self.plan_assessment(key, assessment)?;
        Ok(self.commit(mutation).current())
    }

    pub fn decay(&mut self, key: &str, date: NaiveDate) -> Result<&LocusPoint, EngineError> {
        let mutation = self.plan_decay(key, date)?;
        Ok(self.commit(mutation).current())
    }

    pub fn retire(&mut self, key: &str, date: NaiveDate, rationale: &str) -> Result<&Signal, EngineError> {
        let mutation = self.plan_retire(key, date, rationale)?;
        Ok(self.commit(mutation))
    }

    pub fn close(
        &mut self,
        key: &str,
        date: NaiveDate,
        override_gate: bool,
        rationale: &str,
    ) -> Result<&Signal, EngineError> {
        let mutation = self.plan_close(key, date, override_gate, rationale)?;
        Ok(self.commit(mutation))
    }
}
