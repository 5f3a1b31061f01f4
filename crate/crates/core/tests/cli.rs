use std::path::{Path, PathBuf};
use std::process::{Command, Output};

struct Session {
    _dir: tempfile::TempDir,
    journal: PathBuf,
}

impl Session {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let journal = dir.path().join("team.wscm");
        Self { _dir: dir, journal }
    }

    fn dir(&self) -> &Path {
        self.journal.parent().unwrap()
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_wscm"))
            .args(args)
            .env("WSCM_JOURNAL", &self.journal)
            .output()
            .unwrap()
    }

    fn ok(&self, args: &[&str]) -> String {
        let out = self.run(args);
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        String::from_utf8(out.stdout).unwrap()
    }

    fn fails(&self, args: &[&str], code: i32) -> String {
        let out = self.run(args);
        assert_eq!(
            out.status.code(),
            Some(code),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        String::from_utf8(out.stderr).unwrap()
    }

    fn bytes(&self) -> Vec<u8> {
        std::fs::read(&self.journal).unwrap()
    }

    fn gas_fumes(&self) {
        self.ok(&["init"]);
        self.ok(&[
            "register",
            "gas-fumes",
            "--date",
            "2026-01-01",
            "--nrs",
            "1,1",
            "--f",
            "3",
        ]);
        self.ok(&[
            "assess",
            "gas-fumes",
            "--date",
            "2026-01-15",
            "--nrs",
            "1,1",
            "--f",
            "4",
        ]);
    }
}

#[test]
fn assess_prints_position_band_and_action() {
    let s = Session::new();
    s.ok(&["init"]);
    s.ok(&[
        "register",
        "gas-fumes",
        "--date",
        "2026-01-01",
        "--nrs",
        "1,1",
        "--f",
        "3",
    ]);
    let out = s.ok(&[
        "assess",
        "gas-fumes",
        "--date",
        "2026-01-15",
        "--nrs",
        "1,1",
        "--f",
        "4",
    ]);
    assert_eq!(
        out,
        "(2.500, 2.403) QuestionMarks d=3.468 S=0.395 band=Low\n\
         escalation: off\n\
         action: Routine monitoring; log and observe\n"
    );
}

#[test]
fn entry_outside_box_exits_one() {
    let s = Session::new();
    s.ok(&["init"]);
    let before = s.bytes();
    let err = s.fails(
        &["register", "hot", "--date", "2026-01-01", "--nrs", "2,1", "--f", "0"],
        1,
    );
    assert!(err.contains("do not enter via this pathway"), "{err}");
    assert_eq!(s.bytes(), before);
}

#[test]
fn unknown_signal_lists_near_matches() {
    let s = Session::new();
    s.gas_fumes();
    let err = s.fails(
        &["assess", "gas-fume", "--date", "2026-02-01", "--nrs", "1,1", "--f", "4"],
        1,
    );
    assert!(err.contains("did you mean: gas-fumes?"), "{err}");
}

#[test]
fn reads_leave_journal_bytes_alone() {
    let s = Session::new();
    s.gas_fumes();
    let before = s.bytes();
    s.ok(&["report"]);
    s.ok(&["report", "--as-of", "2026-03-01"]);
    s.ok(&["replay"]);
    s.ok(&["export", "gas-fumes"]);
    s.ok(&["export", "gas-fumes", "--format", "timeseries"]);
    s.ok(&[
        "assess",
        "gas-fumes",
        "--date",
        "2026-02-01",
        "--nrs",
        "4,4",
        "--f",
        "5",
        "--preview",
    ]);
    s.ok(&["decay", "gas-fumes", "--date", "2026-02-01", "--preview"]);
    assert_eq!(s.bytes(), before);
}

#[test]
fn tampered_journal_exits_two() {
    let s = Session::new();
    s.gas_fumes();
    let text = String::from_utf8(s.bytes())
        .unwrap()
        .replace("\"y\":2.403110", "\"y\":2.403111");
    std::fs::write(&s.journal, text).unwrap();
    let err = s.fails(&["replay"], 2);
    assert!(err.contains("signal sig-0001, session 2, field y"), "{err}");
    s.fails(&["report"], 2);
}

#[test]
fn torn_tail_exits_two() {
    let s = Session::new();
    s.gas_fumes();
    let mut bytes = s.bytes();
    bytes.truncate(bytes.len() - 10);
    std::fs::write(&s.journal, bytes).unwrap();
    let err = s.fails(&["replay"], 2);
    assert!(err.contains("torn write"), "{err}");
}

#[test]
fn missing_journal_exits_two() {
    let s = Session::new();
    s.fails(&["report"], 2);
}

#[test]
fn flag_overrides_environment() {
    let s = Session::new();
    let other = s.dir().join("other.wscm");
    let other_arg = other.to_str().unwrap();
    s.ok(&["--journal", other_arg, "init"]);
    assert!(other.exists());
    assert!(!s.journal.exists());
}

#[test]
fn init_refuses_existing_journal() {
    let s = Session::new();
    s.gas_fumes();
    s.fails(&["init"], 2);
}

#[test]
fn init_fixes_config_into_journal() {
    let s = Session::new();
    let config = s.dir().join("params.toml");
    std::fs::write(&config, "t_ref_days = 7\n").unwrap();
    s.ok(&["init", "--config", config.to_str().unwrap()]);
    s.ok(&[
        "register",
        "gas-fumes",
        "--date",
        "2026-01-01",
        "--nrs",
        "1,1",
        "--f",
        "3",
    ]);
    std::fs::remove_file(&config).unwrap();
    // a week is one reference period under this journal's parameters
    let out = s.ok(&[
        "assess",
        "gas-fumes",
        "--date",
        "2026-01-08",
        "--nrs",
        "1,1",
        "--f",
        "4",
    ]);
    assert!(out.starts_with("(2.500, 2.403) QuestionMarks"), "{out}");
}

#[test]
fn bad_config_exits_one() {
    let s = Session::new();
    let config = s.dir().join("params.toml");
    std::fs::write(&config, "mu = -1\n").unwrap();
    let err = s.fails(&["init", "--config", config.to_str().unwrap()], 1);
    assert!(err.contains("`mu`"), "{err}");
    std::fs::write(&config, "gamma = 2\n").unwrap();
    s.fails(&["init", "--config", config.to_str().unwrap()], 1);
}

#[test]
fn export_writes_table_file() {
    let s = Session::new();
    s.gas_fumes();
    let file = s.dir().join("locus.csv");
    s.ok(&["export", "gas-fumes", "--output", file.to_str().unwrap()]);
    let table = std::fs::read_to_string(file).unwrap();
    assert_eq!(
        table,
        "session_index,date,x,y,d,region,S,f,escalation_flag\n\
         1,2026-01-01,2.500000,2.500000,3.535534,QuestionMarks,0.346574,3,false\n\
         2,2026-01-15,2.500000,2.403110,3.467699,QuestionMarks,0.394640,4,false\n"
    );
    s.fails(&["export", "nothing"], 1);
}

#[test]
fn retire_and_close_lifecycle() {
    let s = Session::new();
    s.gas_fumes();
    s.ok(&[
        "register",
        "roof-leak",
        "--date",
        "2026-01-20",
        "--nrs",
        "0,1",
        "--nrs",
        "b:1,0",
        "--f",
        "1",
    ]);
    let err = s.fails(&["close", "gas-fumes", "--date", "2026-01-21"], 1);
    assert!(err.contains("requires an override"), "{err}");
    s.fails(&["close", "gas-fumes", "--date", "2026-01-21", "--override"], 1);
    let out = s.ok(&[
        "close",
        "gas-fumes",
        "--date",
        "2026-01-21",
        "--override",
        "--rationale",
        "merged",
    ]);
    assert_eq!(out, "closed sig-0001 gas-fumes on 2026-01-21 by override\n");
    s.ok(&["retire", "roof-leak", "--date", "2026-01-22", "--rationale", "repaired"]);
    s.fails(
        &[
            "assess",
            "roof-leak",
            "--date",
            "2026-02-01",
            "--nrs",
            "1,1",
            "--f",
            "1",
        ],
        1,
    );
    let report = s.ok(&["report"]);
    assert!(report.contains("QuestionMarks=0"), "{report}");
    s.ok(&["replay"]);
}

#[test]
fn decay_appends_point() {
    let s = Session::new();
    s.gas_fumes();
    let out = s.ok(&["decay", "gas-fumes", "--date", "2026-02-12"]);
    assert!(out.starts_with("(2.500, "), "{out}");
    let table = s.ok(&["export", "gas-fumes"]);
    assert_eq!(table.lines().count(), 4);
}

#[test]
fn usage_errors_exit_one() {
    let s = Session::new();
    s.fails(
        &[
            "assess",
            "gas-fumes",
            "--date",
            "2026-13-01",
            "--nrs",
            "1,1",
            "--f",
            "1",
        ],
        1,
    );
    s.fails(
        &[
            "assess",
            "gas-fumes",
            "--date",
            "2026-01-01",
            "--nrs",
            "5,1",
            "--f",
            "1",
        ],
        1,
    );
    s.fails(&["launch"], 1);
}
