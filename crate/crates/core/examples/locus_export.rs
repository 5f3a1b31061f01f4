//! Runs several sessions and prints the locus as a table and as a JSON-lines
//! time series.

use chrono::{Days, NaiveDate};
use wscm::model::{CommitteeAssessment, ModelParameters};
use wscm::persistence::{export_locus, ExportFormat, Store};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let start = NaiveDate::from_ymd_opt(2026, 1, 5).unwrap();
    let mut store = Store::in_memory(ModelParameters::default())?;
    store.register(
        "badge-tailgating",
        "",
        "",
        &CommitteeAssessment::from_pairs(start, 2, &[(1, 1), (0, 1)])?,
    )?;

    let sessions: [&[(u8, u8)]; 4] = [
        &[(2, 1), (2, 2)],
        &[(3, 2), (3, 2), (2, 2)],
        &[(4, 3), (3, 3)],
        &[(2, 3)],
    ];
    for (i, pairs) in sessions.iter().enumerate() {
        let date = start + Days::new(14 * (i as u64 + 1));
        store.assess(
            "badge-tailgating",
            &CommitteeAssessment::from_pairs(date, 3 + 2 * i as u32, pairs)?,
        )?;
    }

    let signal = store.registry().find("badge-tailgating").unwrap();
    print!("{}", export_locus(signal, ExportFormat::Table));
    println!();
    print!("{}", export_locus(signal, ExportFormat::Timeseries));
    Ok(())
}
