use thiserror::Error;

use super::journal::Journal;
use super::record::{JournalRecord, RecordBody};
use crate::engine::{EngineError, Mutation, Registry};

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("record {index} is malformed: {reason}")]
    Malformed { index: usize, reason: String },
    #[error("record {index} was rejected by the engine: {source}")]
    Rejected {
        index: usize,
        #[source]
        source: EngineError,
    },
    #[error(
        "integrity error at record {index}: signal {signal}, session {session}, field {field} \
         stored {stored} but recomputes to {recomputed}"
    )]
    Integrity {
        index: usize,
        signal: String,
        session: u32,
        field: &'static str,
        stored: String,
        recomputed: String,
    },
}

/// Rebuilds a registry by re-executing every record through the engine.
///
/// Stored `computed` values are checksums: each is compared with the
/// recomputed point at six decimals. `index` in errors is the 1-based record
/// position.
pub fn replay(records: &[JournalRecord]) -> Result<Registry, ReplayError> {
    let mut registry = Registry::default();
    let mut seen = Journal::in_memory();
    for (i, record) in records.iter().enumerate() {
        let index = i + 1;
        seen.append(record.clone()).map_err(|e| ReplayError::Malformed {
            index,
            reason: e.to_string(),
        })?;
        let rejected = |source| ReplayError::Rejected { index, source };
        let (Some(id), Some(date)) = (&record.signal_id, record.date) else {
            if let RecordBody::Config(params) = &record.body {
                registry = Registry::new(*params).map_err(rejected)?;
            }
            continue;
        };
        let mutation = match &record.body {
            RecordBody::Config(_) => unreachable!("config records are checked to come first"),
            RecordBody::Register(p) => registry
                .plan_register(&p.name, &p.definition, &p.scope, &p.to_assessment(date))
                .map_err(rejected)?,
            RecordBody::Assess(p) => registry
                .plan_assessment(id.as_str(), &p.to_assessment(date))
                .map_err(rejected)?,
            RecordBody::Decay => registry.plan_decay(id.as_str(), date).map_err(rejected)?,
            RecordBody::Retire(p) => registry
                .plan_retire(id.as_str(), date, &p.rationale)
                .map_err(rejected)?,
            RecordBody::Close(p) => registry
                .plan_close(id.as_str(), date, p.override_gate, &p.rationale)
                .map_err(rejected)?,
        };
        if mutation.signal_id() != id {
            return Err(ReplayError::Integrity {
                index,
                signal: id.to_string(),
                session: 0,
                field: "signal_id",
                stored: id.to_string(),
                recomputed: mutation.signal_id().to_string(),
            });
        }
        check_computed(index, record, &mutation)?;
        registry.commit(mutation);
    }
    Ok(registry)
}

fn check_computed(index: usize, record: &JournalRecord, mutation: &Mutation) -> Result<(), ReplayError> {
    let (Some(stored), Some(point)) = (&record.computed, mutation.point()) else {
        return Ok(());
    };
    match stored.mismatch(point) {
        None => Ok(()),
        Some((field, stored, recomputed)) => Err(ReplayError::Integrity {
            index,
            signal: mutation.signal_id().to_string(),
            session: point.session_index,
            field,
            stored,
            recomputed,
        }),
    }
}
