use std::fs::{File, OpenOptions};
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use thiserror::Error;

use super::record::{JournalRecord, RecordKind};

#[derive(Debug, Error)]
pub enum JournalError {
    #[error("journal storage error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("journal record {line} is malformed: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("record sequence {got} does not follow the journal tail (expected {expected})")]
    OutOfOrder { expected: u64, got: u64 },
    #[error("a config record may only appear before any signal record")]
    ConfigAfterSignal,
    #[error("record dated {date} precedes the journal's last record on {last}")]
    DateRegression { date: NaiveDate, last: NaiveDate },
    #[error("{kind} record is missing its {field}")]
    MissingField { kind: RecordKind, field: &'static str },
    #[error("journal already exists at {0}")]
    AlreadyExists(PathBuf),
    #[error("could not encode record: {0}")]
    Encode(#[from] serde_json::Error),
}

impl JournalError {
    /// Failures of the underlying storage, as opposed to records that break
    /// the journal's ordering rules.
    pub fn is_storage(&self) -> bool {
        matches!(self, JournalError::Io { .. } | JournalError::Encode(_))
    }

    fn io(path: &Path, source: io::Error) -> Self {
        JournalError::Io {
            path: path.to_owned(),
            source,
        }
    }
}

/// An append-only sequence of records, optionally backed by a
/// newline-delimited file.
///
/// Each append writes one complete line with a single write followed by a
/// data sync. Records are never rewritten.
#[derive(Debug, Default)]
pub struct Journal {
    path: Option<PathBuf>,
    records: Vec<JournalRecord>,
}

impl Journal {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Creates an empty journal file. Fails if a non-empty file is present.
    pub fn create(path: impl AsRef<Path>) -> Result<Self, JournalError> {
        let path = path.as_ref();
        match std::fs::metadata(path) {
            Ok(meta) if meta.len() > 0 => return Err(JournalError::AlreadyExists(path.to_owned())),
            Ok(_) => {}
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(JournalError::io(path, e)),
        }
        let file = OpenOptions::new()
            .create(true)
            .write(true)
            .truncate(false)
            .open(path)
            .map_err(|e| JournalError::io(path, e))?;
        file.sync_all().map_err(|e| JournalError::io(path, e))?;
        Ok(Self {
            path: Some(path.to_owned()),
            records: Vec::new(),
        })
    }

    /// Reads and validates every record of an existing journal file.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, JournalError> {
        let path = path.as_ref();
        let mut text = String::new();
        File::open(path)
            .and_then(|mut f| f.read_to_string(&mut text))
            .map_err(|e| JournalError::io(path, e))?;
        let mut journal = Self::parse(&text)?;
        journal.path = Some(path.to_owned());
        Ok(journal)
    }

    /// Parses journal text. A final line without its newline is a torn write
    /// and is reported as malformed.
    pub fn parse(text: &str) -> Result<Self, JournalError> {
        let mut journal = Self::in_memory();
        let mut rest = text;
        let mut line_no = 0;
        while !rest.is_empty() {
            line_no += 1;
            let Some(end) = rest.find('\n') else {
                return Err(JournalError::Malformed {
                    line: line_no,
                    reason: "incomplete final record (torn write)".into(),
                });
            };
            let line = &rest[..end];
            rest = &rest[end + 1..];
            let record =
                JournalRecord::from_line(line).map_err(|reason| JournalError::Malformed { line: line_no, reason })?;
            journal.check_next(&record).map_err(|e| JournalError::Malformed {
                line: line_no,
                reason: e.to_string(),
            })?;
            journal.records.push(record);
        }
        Ok(journal)
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn records(&self) -> &[JournalRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn next_seq(&self) -> u64 {
        self.records.last().map_or(1, |r| r.seq + 1)
    }

    pub fn last_date(&self) -> Option<NaiveDate> {
        self.records.iter().rev().find_map(|r| r.date)
    }

    /// Checks that `record` may be appended next without writing anything.
    pub fn check_next(&self, record: &JournalRecord) -> Result<(), JournalError> {
        let expected = self.next_seq();
        if record.seq != expected {
            return Err(JournalError::OutOfOrder {
                expected,
                got: record.seq,
            });
        }
        let kind = record.kind();
        if kind == RecordKind::Config {
            if !self.records.is_empty() {
                return Err(JournalError::ConfigAfterSignal);
            }
            return Ok(());
        }
        if record.signal_id.is_none() {
            return Err(JournalError::MissingField {
                kind,
                field: "signal_id",
            });
        }
        let Some(date) = record.date else {
            return Err(JournalError::MissingField { kind, field: "date" });
        };
        if matches!(kind, RecordKind::Register | RecordKind::Assess | RecordKind::Decay) && record.computed.is_none() {
            return Err(JournalError::MissingField {
                kind,
                field: "computed",
            });
        }
        if let Some(last) = self.last_date() {
            if date < last {
                return Err(JournalError::DateRegression { date, last });
            }
        }
        Ok(())
    }

    /// Validates, persists and records one entry.
    pub fn append(&mut self, record: JournalRecord) -> Result<(), JournalError> {
        self.check_next(&record)?;
        self.persist(&record)?;
        self.records.push(record);
        Ok(())
    }

    /// Writes `record` to the backing file without adding it to memory.
    /// Callers must `push` the same record before anything else is appended.
    pub(crate) fn persist(&self, record: &JournalRecord) -> Result<(), JournalError> {
        self.check_next(record)?;
        let Some(path) = &self.path else {
            return Ok(());
        };
        let mut line = record.to_line()?;
        line.push('\n');
        let mut file = OpenOptions::new()
            .append(true)
            .open(path)
            .map_err(|e| JournalError::io(path, e))?;
        file.write_all(line.as_bytes())
            .and_then(|()| file.sync_data())
            .map_err(|e| JournalError::io(path, e))
    }

    pub(crate) fn push(&mut self, record: JournalRecord) -> Result<(), JournalError> {
        self.check_next(&record)?;
        self.records.push(record);
        Ok(())
    }
}
