//! Command-line front end. Exit status 0 on success, 1 when input is
//! refused, 2 on integrity or storage failures.

use std::ffi::OsString;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::canonical::display;
use crate::engine::{EngineError, LocusPoint, Registry, Signal};
use crate::model::{
    classify_region, distance, escalation_active, session_severity, sms_threshold, AssessorScore, CommitteeAssessment,
    Position, Region, SeverityBand,
};
use crate::persistence::{export_locus, load_config, ExportFormat, Store, StoreError};

pub const JOURNAL_ENV: &str = "WSCM_JOURNAL";

/// Decimals for human-readable numbers.
const SHOWN: usize = 3;

#[derive(Debug, Parser)]
#[command(name = "wscm", version, about = "Weak signal cultivation registry")]
struct Cli {
    /// Session journal file.
    #[arg(long, short, global = true, env = JOURNAL_ENV)]
    journal: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Create an empty journal.
    Init {
        /// Parameter file; its values are fixed into the journal.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Register a new weak signal from its entry assessment.
    Register {
        name: String,
        #[arg(long, default_value = "")]
        definition: String,
        #[arg(long, default_value = "")]
        scope: String,
        #[command(flatten)]
        session: SessionArgs,
    },
    /// Record a committee assessment.
    Assess {
        signal: String,
        #[command(flatten)]
        session: SessionArgs,
        /// Show the result without recording it.
        #[arg(long)]
        preview: bool,
    },
    /// Record a decay-only point.
    Decay {
        signal: String,
        #[arg(long)]
        date: NaiveDate,
        #[arg(long)]
        preview: bool,
    },
    /// End active tracking by team judgment.
    Retire {
        signal: String,
        #[arg(long)]
        date: NaiveDate,
        #[arg(long, default_value = "")]
        rationale: String,
    },
    /// Close a signal that has fallen below the closure distance.
    Close {
        signal: String,
        #[arg(long)]
        date: NaiveDate,
        /// Close even though the distance gate is not met.
        #[arg(long = "override")]
        override_gate: bool,
        #[arg(long, default_value = "")]
        rationale: String,
    },
    /// Re-execute the journal and verify every stored value.
    Replay {
        /// Journal to check, instead of --journal.
        path: Option<PathBuf>,
    },
    /// Current position of every active signal.
    Report {
        /// Apply passive decay up to this date.
        #[arg(long)]
        as_of: Option<NaiveDate>,
    },
    /// Write one signal's locus.
    Export {
        signal: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Output file; standard output when absent.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value = crate::service::DEFAULT_ADDR)]
        addr: SocketAddr,
    },
}

#[derive(Debug, Args)]
struct SessionArgs {
    #[arg(long)]
    date: NaiveDate,
    /// One assessor's scores as `x,y` or `name:x,y`; repeat per assessor.
    #[arg(long = "nrs", required = true, value_parser = parse_score)]
    scores: Vec<AssessorScore>,
    /// Cumulative occurrences in the observation year.
    #[arg(long = "f")]
    frequency_count: u32,
    #[arg(long, default_value = "")]
    notes: String,
}

impl SessionArgs {
    fn assessment(&self) -> CommitteeAssessment {
        CommitteeAssessment::new(self.date, self.frequency_count, self.scores.clone()).with_notes(self.notes.clone())
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Timeseries,
}

fn parse_score(text: &str) -> Result<AssessorScore, String> {
    let (label, pair) = match text.split_once(':') {
        Some((label, pair)) => (Some(label.trim()), pair),
        None => (None, text),
    };
    let (x, y) = pair
        .split_once(',')
        .ok_or_else(|| format!("expected `x,y`, got `{text}`"))?;
    let axis = |s: &str| {
        s.trim()
            .parse::<u8>()
            .map_err(|_| format!("`{}` is not an NRS score", s.trim()))
    };
    let score = AssessorScore::new(axis(x)?, axis(y)?).map_err(|e| e.to_string())?;
    Ok(match label {
        Some(label) if !label.is_empty() => score.labelled(label),
        _ => score,
    })
}

#[derive(Debug)]
struct Failure {
    status: i32,
    message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Self {
            status: 1,
            message: message.into(),
        }
    }

    fn store(e: StoreError, registry: Option<&Registry>) -> Self {
        let mut message = e.to_string();
        if let (StoreError::Engine(EngineError::UnknownSignal(key)), Some(registry)) = (&e, registry) {
            let near = registry.near_matches(key, 3);
            if !near.is_empty() {
                message.push_str(&format!("; did you mean: {}?", near.join(", ")));
            }
        }
        Self {
            status: if e.is_validation() { 1 } else { 2 },
            message,
        }
    }
}

/// Parses the process arguments and runs one command.
pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            if help {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            let _ = write!(err, "{}", e.render());
            return 1;
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.status
        }
    }
}

fn journal_path(cli_path: Option<PathBuf>) -> Result<PathBuf, Failure> {
    cli_path.ok_or_else(|| Failure::validation(format!("no journal given; pass --journal or set {JOURNAL_ENV}")))
}

fn open(path: &Path) -> Result<Store, Failure> {
    Store::open(path).map_err(|e| Failure::store(e, None))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure {
        status: 2,
        message: format!("cannot write output: {e}"),
    })
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    if let Command::Replay { path: Some(path) } = &cli.command {
        return replay(path, out);
    }
    let path = journal_path(cli.journal)?;
    match cli.command {
        Command::Init { config } => {
            let params = match config {
                Some(config) => Some(load_config(&config).map_err(|e| Failure::validation(e.to_string()))?),
                None => None,
            };
            Store::init(&path, params).map_err(|e| Failure::store(e, None))?;
            emit(out, &format!("initialized journal {}\n", path.display()))
        }
        Command::Register {
            name,
            definition,
            scope,
            session,
        } => {
            let mut store = open(&path)?;
            let staged = store
                .stage_register(&name, &definition, &scope, &session.assessment())
                .map_err(|e| Failure::store(e, Some(store.registry())))?;
            let signal = store.commit(staged).map_err(|e| Failure::store(e, None))?;
            emit(
                out,
                &format!(
                    "registered {} {}\n{}",
                    signal.id,
                    signal.name,
                    describe(signal.current())
                ),
            )
        }
        Command::Assess {
            signal,
            session,
            preview,
        } => {
            let mut store = open(&path)?;
            let staged = store
                .stage_assessment(&signal, &session.assessment())
                .map_err(|e| Failure::store(e, Some(store.registry())))?;
            session_result(&mut store, staged, preview, out)
        }
        Command::Decay { signal, date, preview } => {
            let mut store = open(&path)?;
            let staged = store
                .stage_decay(&signal, date)
                .map_err(|e| Failure::store(e, Some(store.registry())))?;
            session_result(&mut store, staged, preview, out)
        }
        Command::Retire {
            signal,
            date,
            rationale,
        } => {
            let mut store = open(&path)?;
            let staged = store
                .stage_retire(&signal, date, &rationale)
                .map_err(|e| Failure::store(e, Some(store.registry())))?;
            let signal = store.commit(staged).map_err(|e| Failure::store(e, None))?;
            emit(out, &format!("retired {} {} on {date}\n", signal.id, signal.name))
        }
        Command::Close {
            signal,
            date,
            override_gate,
            rationale,
        } => {
            let mut store = open(&path)?;
            let staged = store
                .stage_close(&signal, date, override_gate, &rationale)
                .map_err(|e| Failure::store(e, Some(store.registry())))?;
            let signal = store.commit(staged).map_err(|e| Failure::store(e, None))?;
            let how = match &signal.exit {
                Some(exit) if exit.override_used => " by override",
                _ => "",
            };
            emit(out, &format!("closed {} {} on {date}{how}\n", signal.id, signal.name))
        }
        Command::Replay { path: None } => replay(&path, out),
        Command::Replay { path: Some(_) } => unreachable!("handled above"),
        Command::Report { as_of } => {
            let store = open(&path)?;
            let text = report(store.registry(), as_of).map_err(|e| Failure::store(e.into(), None))?;
            emit(out, &text)
        }
        Command::Export { signal, format, output } => {
            let store = open(&path)?;
            let registry = store.registry();
            let signal = registry
                .resolve(&signal)
                .map_err(|e| Failure::store(e.into(), Some(registry)))?;
            let format = match format {
                Format::Table => ExportFormat::Table,
                Format::Timeseries => ExportFormat::Timeseries,
            };
            let text = export_locus(signal, format);
            match output {
                Some(file) => std::fs::write(&file, text).map_err(|e| Failure {
                    status: 2,
                    message: format!("cannot write {}: {e}", file.display()),
                }),
                None => emit(out, &text),
            }
        }
        Command::Serve { addr } => {
            let store = open(&path)?;
            let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure {
                status: 2,
                message: format!("cannot start runtime: {e}"),
            })?;
            emit(out, &format!("serving {} on http://{addr}\n", path.display()))?;
            let _ = out.flush();
            runtime
                .block_on(crate::service::serve(store, addr))
                .map_err(|e| Failure {
                    status: 2,
                    message: format!("service stopped: {e}"),
                })
        }
    }
}

fn session_result(
    store: &mut Store,
    staged: crate::persistence::Staged,
    preview: bool,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    if preview {
        let point = staged.point().expect("sessions append a point");
        return emit(out, &format!("preview, not recorded\n{}", describe(point)));
    }
    let signal = store.commit(staged).map_err(|e| Failure::store(e, None))?;
    emit(out, &describe(signal.current()))
}

fn replay(path: &Path, out: &mut dyn Write) -> Result<(), Failure> {
    let store = open(path)?;
    emit(
        out,
        &format!(
            "journal ok: {} records, {} signals\n",
            store.journal().len(),
            store.registry().signals().len()
        ),
    )
}

/// Position line followed by escalation state and the band's action.
pub fn describe(point: &LocusPoint) -> String {
    let escalation = if point.escalation_flag {
        format!("ON (d >= {})", display(sms_threshold(), SHOWN))
    } else {
        "off".to_owned()
    };
    format!(
        "({}, {}) {} d={} S={} band={}\nescalation: {escalation}\naction: {}\n",
        display(point.position.x(), SHOWN),
        display(point.position.y(), SHOWN),
        point.region.as_str(),
        display(point.d, SHOWN),
        display(point.severity, SHOWN),
        point.band.as_str(),
        point.band.recommended_action(),
    )
}

struct Row<'a> {
    signal: &'a Signal,
    date: NaiveDate,
    position: Position,
    d: f64,
    region: Region,
    severity: f64,
    escalated: bool,
}

impl<'a> Row<'a> {
    fn new(signal: &'a Signal, as_of: Option<NaiveDate>, registry: &Registry) -> Result<Self, EngineError> {
        let point = signal.current();
        let date = as_of.unwrap_or(point.date);
        let position = signal.position_as_of(date, registry.params())?;
        let d = distance(position);
        Ok(Self {
            signal,
            date,
            position,
            d,
            region: classify_region(position),
            severity: session_severity(d, point.frequency_count),
            escalated: escalation_active(d),
        })
    }
}

/// Table of active signals with region and band occupancy.
pub fn report(registry: &Registry, as_of: Option<NaiveDate>) -> Result<String, EngineError> {
    let rows = registry
        .signals()
        .iter()
        .filter(|s| s.is_active())
        .map(|s| Row::new(s, as_of, registry))
        .collect::<Result<Vec<_>, _>>()?;
    let width = rows.iter().map(|r| r.signal.name.len()).max().unwrap_or(0).max(6);
    let mut text = format!(
        "{:<width$}  {:>4}  {:<10}  {:>4}  {:>6}  {:>6}  {:>6}  {:<13}  {:>5}  {:>4}  {}\n",
        "signal", "sess", "date", "day", "x", "y", "d", "region", "S", "f", "band"
    );
    for r in &rows {
        let point = r.signal.current();
        let day = (r.date - r.signal.registered_on).num_days();
        let mark = if r.escalated { "*" } else { " " };
        text.push_str(&format!(
            "{:<width$}  {:>4}  {:<10}  {:>4}  {:>6}  {:>6}  {:>6}{mark} {:<13}  {:>5}  {:>4}  {}\n",
            r.signal.name,
            point.session_index,
            r.date,
            day,
            display(r.position.x(), SHOWN),
            display(r.position.y(), SHOWN),
            display(r.d, SHOWN),
            r.region.as_str(),
            display(r.severity, SHOWN),
            point.frequency_count,
            SeverityBand::from_severity(r.severity).as_str(),
        ));
    }
    text.push_str("\nregions:");
    for region in Region::ALL {
        let n = rows.iter().filter(|r| r.region == region).count();
        text.push_str(&format!(" {}={n}", region.as_str()));
    }
    text.push_str("\nbands:");
    for band in SeverityBand::ALL {
        let n = rows
            .iter()
            .filter(|r| SeverityBand::from_severity(r.severity) == band)
            .count();
        text.push_str(&format!(" {}={n}", band.as_str()));
    }
    let escalated = rows.iter().filter(|r| r.escalated).count();
    text.push_str(&format!("\nescalated: {escalated}\n"));
    Ok(text)
}
