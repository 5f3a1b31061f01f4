//! Append-only session journal, replay, parameter files and locus exports.

mod config;
mod export;
mod journal;
mod record;
mod replay;
mod store;

pub use config::{load_config, parse_config, ConfigError};
pub use export::{export_locus, locus_table, locus_timeseries, ExportFormat, TABLE_HEADER};
pub use journal::{Journal, JournalError};
pub use record::{
    AssessmentPayload, Computed, EmptyPayload, ExitPayload, JournalRecord, RecordBody, RecordKind, RegisterPayload,
    SCHEMA_VERSION,
};
pub use replay::{replay, ReplayError};
pub use store::{Staged, Store, StoreError};
