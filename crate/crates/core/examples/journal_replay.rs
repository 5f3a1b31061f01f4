//! Writes a journal to disk, replays it, then shows what a tampered value
//! looks like on replay.

use chrono::NaiveDate;
use wscm::model::{CommitteeAssessment, ModelParameters};
use wscm::persistence::{Journal, Store};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("team.wscm");
    let day = |d| NaiveDate::from_ymd_opt(2026, 1, d).unwrap();

    {
        let mut store = Store::init(&path, Some(ModelParameters::default()))?;
        store.register(
            "gas-fumes",
            "",
            "",
            &CommitteeAssessment::from_pairs(day(1), 3, &[(1, 1)])?,
        )?;
        store.assess(
            "gas-fumes",
            &CommitteeAssessment::from_pairs(day(15), 4, &[(1, 1), (1, 2)])?,
        )?;
        store.decay("gas-fumes", day(29))?;
    }

    let text = std::fs::read_to_string(&path)?;
    print!("{text}");

    let store = Store::open(&path)?;
    println!(
        "replayed {} records, {} signal(s)",
        store.journal().len(),
        store.registry().signals().len()
    );

    let tampered = text.replacen("\"y\":2.500000", "\"y\":2.600000", 1);
    let journal = Journal::parse(&tampered)?;
    match Store::from_journal(journal) {
        Ok(_) => println!("tampering went unnoticed"),
        Err(e) => println!("replay refused: {e}"),
    }
    Ok(())
}
