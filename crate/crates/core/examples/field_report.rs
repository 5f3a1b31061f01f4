//! A registry with several signals, summarised the way the `report` command
//! and the dashboard route do.

use chrono::NaiveDate;
use wscm::cli::report;
use wscm::model::{CommitteeAssessment, ModelParameters};
use wscm::persistence::Store;
use wscm::service::Dashboard;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let day = |m, d| NaiveDate::from_ymd_opt(2026, m, d).unwrap();
    let mut store = Store::in_memory(ModelParameters::default())?;

    store.register(
        "gas-fumes",
        "",
        "",
        &CommitteeAssessment::from_pairs(day(1, 1), 3, &[(1, 1)])?,
    )?;
    store.register(
        "roof-leak",
        "",
        "",
        &CommitteeAssessment::from_pairs(day(1, 2), 1, &[(0, 1), (1, 1)])?,
    )?;
    store.register(
        "pallet-stacking",
        "",
        "",
        &CommitteeAssessment::from_pairs(day(1, 3), 0, &[(1, 0)])?,
    )?;
    store.assess(
        "gas-fumes",
        &CommitteeAssessment::from_pairs(day(1, 15), 12, &[(4, 1); 5])?,
    )?;
    store.assess(
        "gas-fumes",
        &CommitteeAssessment::from_pairs(day(1, 29), 20, &[(4, 2); 5])?,
    )?;
    store.assess(
        "roof-leak",
        &CommitteeAssessment::from_pairs(day(2, 1), 3, &[(1, 4), (2, 4)])?,
    )?;

    print!("{}", report(store.registry(), None)?);
    println!();
    print!("{}", report(store.registry(), Some(day(4, 1)))?);
    println!();
    println!("{}", serde_json::to_string_pretty(&Dashboard::of(store.registry()))?);
    Ok(())
}
