use std::fmt::Write;

use serde::Serialize;

use crate::canonical::format6;
use crate::engine::{LocusPoint, Signal, SignalId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    /// Comma-separated rows with a header.
    Table,
    /// One JSON document per point, with the full session audit.
    Timeseries,
}

pub const TABLE_HEADER: &str = "session_index,date,x,y,d,region,S,f,escalation_flag";

pub fn export_locus(signal: &Signal, format: ExportFormat) -> String {
    match format {
        ExportFormat::Table => locus_table(signal),
        ExportFormat::Timeseries => locus_timeseries(signal),
    }
}

pub fn locus_table(signal: &Signal) -> String {
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    for p in signal.locus() {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            p.session_index,
            p.date,
            format6(p.position.x()),
            format6(p.position.y()),
            format6(p.d),
            p.region.as_str(),
            format6(p.severity),
            p.frequency_count,
            p.escalation_flag,
        )
        .expect("writing to a String");
    }
    out
}

#[derive(Serialize)]
struct TimeseriesLine<'a> {
    signal_id: &'a SignalId,
    signal_name: &'a str,
    point: &'a LocusPoint,
}

pub fn locus_timeseries(signal: &Signal) -> String {
    let mut out = String::new();
    for point in signal.locus() {
        let line = TimeseriesLine {
            signal_id: &signal.id,
            signal_name: &signal.name,
            point,
        };
        out.push_str(&serde_json::to_string(&line).expect("locus points serialize"));
        out.push('\n');
    }
    out
}
