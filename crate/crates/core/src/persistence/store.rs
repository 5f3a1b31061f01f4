use std::path::Path;

use chrono::NaiveDate;
use thiserror::Error;

use super::journal::{Journal, JournalError};
use super::record::{
    AssessmentPayload, Computed, ExitPayload, JournalRecord, RecordBody, RegisterPayload, SCHEMA_VERSION,
};
use super::replay::{replay, ReplayError};
use crate::engine::{EngineError, LocusPoint, Mutation, Registry, Signal, SignalId};
use crate::model::{CommitteeAssessment, ModelParameters};

#[derive(Debug, Error)]
pub enum StoreError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Journal(#[from] JournalError),
    #[error(transparent)]
    Replay(#[from] ReplayError),
}

impl StoreError {
    /// True for input the engine or the journal's ordering rules refused;
    /// false for storage failures and integrity errors.
    pub fn is_validation(&self) -> bool {
        match self {
            StoreError::Engine(_) => true,
            StoreError::Journal(e) => matches!(
                e,
                JournalError::OutOfOrder { .. }
                    | JournalError::ConfigAfterSignal
                    | JournalError::DateRegression { .. }
                    | JournalError::MissingField { .. }
            ),
            StoreError::Replay(_) => false,
        }
    }
}

/// A validated change together with the journal record that describes it.
/// Nothing has been written yet.
#[derive(Debug, Clone, PartialEq)]
pub struct Staged {
    mutation: Mutation,
    record: JournalRecord,
}

impl Staged {
    /// The locus point this change appends, if any.
    pub fn point(&self) -> Option<&LocusPoint> {
        self.mutation.point()
    }

    pub fn signal_id(&self) -> &SignalId {
        self.mutation.signal_id()
    }

    pub fn record(&self) -> &JournalRecord {
        &self.record
    }
}

/// A registry kept in step with its journal. Every change is staged, written
/// to the journal, and only then applied.
#[derive(Debug)]
pub struct Store {
    journal: Journal,
    registry: Registry,
}

impl Store {
    pub fn in_memory(params: ModelParameters) -> Result<Self, StoreError> {
        Self::start(Journal::in_memory(), params)
    }

    /// Creates a new journal file. A config record is written when
    /// parameters are given; otherwise the defaults apply.
    pub fn init(path: impl AsRef<Path>, params: Option<ModelParameters>) -> Result<Self, StoreError> {
        let journal = Journal::create(path)?;
        match params {
            Some(params) => Self::start(journal, params),
            None => Ok(Self {
                journal,
                registry: Registry::default(),
            }),
        }
    }

    pub fn open(path: impl AsRef<Path>) -> Result<Self, StoreError> {
        Self::from_journal(Journal::open(path)?)
    }

    pub fn from_journal(journal: Journal) -> Result<Self, StoreError> {
        let registry = replay(journal.records())?;
        Ok(Self { journal, registry })
    }

    fn start(journal: Journal, params: ModelParameters) -> Result<Self, StoreError> {
        let registry = Registry::new(params)?;
        let mut store = Self { journal, registry };
        let record = store.draft(None, None, RecordBody::Config(params), None);
        store.journal.append(record)?;
        Ok(store)
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn journal(&self) -> &Journal {
        &self.journal
    }

    pub fn stage_register(
        &self,
        name: &str,
        definition: &str,
        scope: &str,
        assessment: &CommitteeAssessment,
    ) -> Result<Staged, StoreError> {
        let mutation = self.registry.plan_register(name, definition, scope, assessment)?;
        let body = RecordBody::Register(RegisterPayload {
            name: name.to_owned(),
            definition: definition.to_owned(),
            scope: scope.to_owned(),
            scores: assessment.scores.clone(),
            frequency_count: assessment.frequency_count,
            notes: assessment.notes.clone(),
        });
        self.stage(mutation, assessment.session_date, body)
    }

    pub fn stage_assessment(&self, key: &str, assessment: &CommitteeAssessment) -> Result<Staged, StoreError> {
        let mutation = self.registry.plan_assessment(key, assessment)?;
        let body = RecordBody::Assess(AssessmentPayload::from_assessment(assessment));
        self.stage(mutation, assessment.session_date, body)
    }

    pub fn stage_decay(&self, key: &str, date: NaiveDate) -> Result<Staged, StoreError> {
        let mutation = self.registry.plan_decay(key, date)?;
        self.stage(mutation, date, RecordBody::Decay)
    }

    pub fn stage_retire(&self, key: &str, date: NaiveDate, rationale: &str) -> Result<Staged, StoreError> {
        let mutation = self.registry.plan_retire(key, date, rationale)?;
        let body = RecordBody::Retire(ExitPayload {
            rationale: rationale.to_owned(),
            override_gate: false,
        });
        self.stage(mutation, date, body)
    }

    pub fn stage_close(
        &self,
        key: &str,
        date: NaiveDate,
        override_gate: bool,
        rationale: &str,
    ) -> Result<Staged, StoreError> {
        let mutation = self.registry.plan_close(key, date, override_gate, rationale)?;
        let body = RecordBody::Close(ExitPayload {
            rationale: rationale.to_owned(),
            override_gate,
        });
        self.stage(mutation, date, body)
    }

    /// Writes a staged change to the journal file. Needs only shared
    /// access, so readers are not blocked during the write; the caller must
    /// hold the single writer role until `apply`.
    pub fn persist(&self, staged: &Staged) -> Result<(), StoreError> {
        Ok(self.journal.persist(&staged.record)?)
    }

    /// Applies a persisted change in memory.
    pub fn apply(&mut self, staged: Staged) -> Result<&Signal, StoreError> {
        self.journal.push(staged.record)?;
        Ok(self.registry.commit(staged.mutation))
    }

    /// Persists and applies a staged change.
    pub fn commit(&mut self, staged: Staged) -> Result<&Signal, StoreError> {
        self.persist(&staged)?;
        self.apply(staged)
    }

    pub fn register(
        &mut self,
        name: &str,
        definition: &str,
        scope: &str,
        assessment: &CommitteeAssessment,
    ) -> Result<&Signal, StoreError> {
        let staged = self.stage_register(name, definition, scope, assessment)?;
        self.commit(staged)
    }

    pub fn assess(&mut self, key: &str, assessment: &CommitteeAssessment) -> Result<&LocusPoint, StoreError> {
        let staged = self.stage_assessment(key, assessment)?;
        Ok(self.commit(staged)?.current())
    }

    pub fn decay(&mut self, key: &str, date: NaiveDate) -> Result<&LocusPoint, StoreError> {
        let staged = self.stage_decay(key, date)?;
        Ok(self.commit(staged)?.current())
    }

    pub fn retire(&mut self, key: &str, date: NaiveDate, rationale: &str) -> Result<&Signal, StoreError> {
        let staged = self.stage_retire(key, date, rationale)?;
        self.commit(staged)
    }

    pub fn close(
        &mut self,
        key: &str,
        date: NaiveDate,
        override_gate: bool,
        rationale: &str,
    ) -> Result<&Signal, StoreError> {
        let staged = self.stage_close(key, date, override_gate, rationale)?;
        self.commit(staged)
    }

    /// The point `assess` would append, without appending it.
    pub fn preview_assessment(&self, key: &str, assessment: &CommitteeAssessment) -> Result<LocusPoint, StoreError> {
        Ok(session_point(self.stage_assessment(key, assessment)?))
    }

    /// The point `decay` would append, without appending it.
    pub fn preview_decay(&self, key: &str, date: NaiveDate) -> Result<LocusPoint, StoreError> {
        Ok(session_point(self.stage_decay(key, date)?))
    }

    fn stage(&self, mutation: Mutation, date: NaiveDate, body: RecordBody) -> Result<Staged, StoreError> {
        let record = self.draft(Some(mutation.signal_id().clone()), Some(date), body, mutation.point());
        self.journal.check_next(&record)?;
        Ok(Staged { mutation, record })
    }

    fn draft(
        &self,
        signal_id: Option<SignalId>,
        date: Option<NaiveDate>,
        body: RecordBody,
        point: Option<&LocusPoint>,
    ) -> JournalRecord {
        JournalRecord {
            schema_version: SCHEMA_VERSION,
            seq: self.journal.next_seq(),
            signal_id,
            date,
            body,
            computed: point.map(Computed::of),
        }
    }
}

fn session_point(staged: Staged) -> LocusPoint {
    staged.point().expect("session changes append a point").clone()
}
