//! Reference values for the gas fumes history checked against the engine. Shared by the
//! `fixtures` test target and the acceptance gate.

#![allow(dead_code)]

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use chrono::NaiveDate;

use wscm::engine::Registry;
use wscm::model::{
    classify_region, closure_eligible, committee_cap, consensus_momentum, decayed_growth, distance, escalation_active,
    recency_weight, session_severity, sms_threshold, CommitteeAssessment, ModelParameters, Position, Region,
};

pub type Check = Result<(), String>;

fn near(what: &str, got: f64, want: f64, tol: f64) -> Check {
    if (got - want).abs() <= tol {
        Ok(())
    } else {
        Err(format!("{what}: got {got:.6}, want {want} within {tol}"))
    }
}

fn exact(what: &str, got: f64, want: f64) -> Check {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, want exactly {want:?}"))
    }
}

fn holds(what: &str, cond: bool) -> Check {
    if cond {
        Ok(())
    } else {
        Err(format!("{what} does not hold"))
    }
}

fn date(day: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(2026, 1, day).unwrap()
}

/// Gas fumes entry on day 0 from a single (1, 1) assessment, then the same
/// assessor again on day 14.
pub fn worked_sessions() -> Check {
    let mut reg = Registry::default();
    let entry = CommitteeAssessment::from_pairs(date(1), 3, &[(1, 1)]).map_err(|e| e.to_string())?;
    reg.register("gas-fumes", "", "", &entry).map_err(|e| e.to_string())?;
    let first = reg.find("gas-fumes").unwrap().current().clone();
    exact("entry x", first.position.x(), 2.5)?;
    exact("entry y", first.position.y(), 2.5)?;

    let second = CommitteeAssessment::from_pairs(date(15), 4, &[(1, 1)]).map_err(|e| e.to_string())?;
    let point = reg.assess("gas-fumes", &second).map_err(|e| e.to_string())?.clone();
    let o = point.outcome;
    let tol = 0.0005;
    near("tau", o.tau, 1.0, 1e-12)?;
    near("alpha(1.0)", o.alpha_tau, 0.475, tol)?;
    near("kappa", o.kappa_x, 0.060, tol)?;
    near("n_cap", o.n_cap.unwrap_or(f64::NAN), 0.76, tol)?;
    near("alpha_eff", o.alpha_eff, 0.535, tol)?;
    near("y_decay", o.y_decay, 2.292, tol)?;
    near("x2", point.position.x(), 2.500, tol)?;
    near("y2", point.position.y(), 2.403, tol)?;
    holds("session 2 in QuestionMarks", point.region == Region::QuestionMarks)
}

/// One printed row: session, x', y', f, escalation asterisk, region.
pub struct Row {
    pub session: u32,
    pub x: f64,
    pub y: f64,
    pub f: u32,
    pub escalated: bool,
    pub region: Region,
}

const fn row(session: u32, x: f64, y: f64, f: u32, escalated: bool, region: Region) -> Row {
    Row {
        session,
        x,
        y,
        f,
        escalated,
        region,
    }
}

use Region::{LitFuses as LF, Owls as OW, QuestionMarks as QM, SleepingCats as SC};

pub const GAS_FUMES: [Row; 26] = [
    row(1, 2.50, 2.50, 3, false, QM),
    row(2, 2.50, 2.40, 4, false, QM),
    row(3, 2.50, 3.94, 5, false, QM),
    row(4, 4.20, 4.63, 7, false, QM),
    row(5, 5.94, 3.62, 9, false, LF),
    row(6, 9.51, 2.71, 12, true, LF),
    row(7, 8.54, 3.76, 15, true, LF),
    row(8, 9.24, 3.08, 19, true, LF),
    row(9, 8.07, 4.29, 23, true, LF),
    row(10, 9.00, 4.59, 27, true, LF),
    row(11, 8.19, 6.66, 33, true, OW),
    row(12, 9.17, 9.40, 40, true, OW),
    row(13, 9.72, 9.85, 48, true, OW),
    row(14, 9.97, 7.56, 52, true, OW),
    row(15, 8.07, 9.36, 54, true, OW),
    row(16, 7.73, 8.17, 55, true, OW),
    row(17, 5.92, 7.65, 56, true, OW),
    row(18, 3.46, 7.42, 57, true, SC),
    row(19, 2.80, 8.34, 57, true, SC),
    row(20, 4.16, 9.27, 58, true, SC),
    row(21, 3.46, 9.48, 58, true, SC),
    row(22, 2.81, 7.96, 58, true, SC),
    row(23, 2.59, 7.43, 58, true, SC),
    row(24, 2.52, 5.38, 58, false, SC),
    row(25, 2.50, 6.52, 58, false, SC),
    row(26, 2.50, 6.85, 58, true, SC),
];

fn metrics(r: &Row) -> Result<(f64, f64, bool, Region), String> {
    let pos = Position::new(r.x, r.y).map_err(|e| e.to_string())?;
    let d = distance(pos);
    Ok((d, session_severity(d, r.f), escalation_active(d), classify_region(pos)))
}

/// Derived distance, severity and escalation for the quoted rows.
pub fn table_rows() -> Check {
    let expect: [(u32, f64, Option<f64>, bool); 4] = [
        (6, 9.89, Some(1.79), true),
        (12, 13.13, None, true),
        (13, 13.84, Some(3.81), true),
        (24, 5.94, Some(1.71), false),
    ];
    for (session, d_want, s_want, flag) in expect {
        let r = &GAS_FUMES[session as usize - 1];
        let (d, s, esc, _) = metrics(r)?;
        near(&format!("S{session} d"), d, d_want, 0.005)?;
        if let Some(s_want) = s_want {
            near(&format!("S{session} S"), s, s_want, 0.005)?;
        }
        holds(&format!("S{session} escalation flag = {flag}"), esc == flag)?;
    }
    Ok(())
}

/// Region labels and escalation asterisks for every printed row, plus the
/// severity peak.
pub fn whole_table() -> Check {
    let mut peak = (0, f64::MIN);
    for r in &GAS_FUMES {
        let (_, s, esc, region) = metrics(r)?;
        holds(
            &format!("S{} escalation flag = {}", r.session, r.escalated),
            esc == r.escalated,
        )?;
        holds(&format!("S{} region {:?}", r.session, r.region), region == r.region)?;
        if s > peak.1 {
            peak = (r.session, s);
        }
    }
    holds(&format!("severity peaks at S13 (got S{})", peak.0), peak.0 == 13)
}

pub fn appendix_constants() -> Check {
    let p = ModelParameters::default();
    let half_life = std::f64::consts::LN_2 / 8.0;
    near("mu vs ln2/8", half_life, p.mu, 1e-3)?;
    let ratio = decayed_growth(1.0, 8.0, &p);
    holds(
        &format!("eight-period ratio {ratio:.5} in [0.498, 0.500]"),
        (0.498..=0.500).contains(&ratio),
    )?;
    near(
        "alpha(1)/alpha_base",
        recency_weight(1.0, p.alpha_base, p.lambda) / p.alpha_base,
        0.5276,
        1e-4,
    )?;
    exact("kappa max", consensus_momentum(10.0, 5, 5, false, &p).kappa, 1.0)?;
    exact(
        "rho at full-committee reversal",
        consensus_momentum(10.0, 0, 5, true, &p).rho,
        1.5,
    )?;
    exact("n_cap(1)", committee_cap(1, &p), 0.76)?;
    let inside = distance(Position::new(0.70, 0.70).map_err(|e| e.to_string())?);
    holds("closure at (0.70, 0.70)", closure_eligible(inside, &p))?;
    holds("no closure at d = 1.0", !closure_eligible(1.0, &p))?;
    exact("escalation threshold", sms_threshold(), 50f64.sqrt())?;
    holds("escalation at sqrt 50", escalation_active(50f64.sqrt()))?;
    holds(
        "no escalation just below sqrt 50",
        !escalation_active(50f64.sqrt() - f64::EPSILON * 8.0),
    )
}

fn wscm(bin: &Path, journal: &Path, args: &[&str]) -> Result<String, String> {
    let out = Command::new(bin)
        .args(args)
        .env("WSCM_JOURNAL", journal)
        .output()
        .map_err(|e| format!("cannot run wscm: {e}"))?;
    if !out.status.success() {
        return Err(format!(
            "wscm {} exited {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

/// init, register, assess, report and replay through the binary.
pub fn cli_end_to_end(bin: &Path) -> Result<Duration, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let journal = dir.path().join("gas.wscm");
    let started = Instant::now();
    wscm(bin, &journal, &["init"])?;
    wscm(
        bin,
        &journal,
        &[
            "register",
            "gas-fumes",
            "--date",
            "2026-01-01",
            "--nrs",
            "1,1",
            "--f",
            "3",
        ],
    )?;
    let assessed = wscm(
        bin,
        &journal,
        &[
            "assess",
            "gas-fumes",
            "--date",
            "2026-01-15",
            "--nrs",
            "1,1",
            "--f",
            "4",
        ],
    )?;
    let report = wscm(bin, &journal, &["report"])?;
    let journal_arg = journal.to_string_lossy().into_owned();
    let replayed = wscm(bin, &journal, &["replay", &journal_arg])?;
    let elapsed = started.elapsed();

    let line = "(2.500, 2.403) QuestionMarks d=3.468 S=0.395 band=Low";
    holds(
        &format!("assess prints `{line}`"),
        assessed.lines().next() == Some(line),
    )?;
    let row = report
        .lines()
        .find(|l| l.starts_with("gas-fumes"))
        .ok_or("report has no gas-fumes row")?;
    let cells: Vec<&str> = row.split_whitespace().collect();
    holds(
        &format!("report row `{row}`"),
        cells
            == [
                "gas-fumes",
                "2",
                "2026-01-15",
                "14",
                "2.500",
                "2.403",
                "3.468",
                "QuestionMarks",
                "0.395",
                "4",
                "Low",
            ],
    )?;
    holds("replay reports success", replayed.starts_with("journal ok"))?;
    holds(
        &format!("runtime {elapsed:?} under 1 s"),
        elapsed < Duration::from_secs(1),
    )?;
    Ok(elapsed)
}
