//! Registers the gas fumes signal and runs its second session, printing each
//! intermediate of the update.

use chrono::NaiveDate;
use wscm::engine::Registry;
use wscm::model::CommitteeAssessment;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let day = |d| NaiveDate::from_ymd_opt(2026, 1, d).unwrap();
    let mut registry = Registry::default();

    let entry = CommitteeAssessment::from_pairs(day(1), 3, &[(1, 1)])?;
    let signal = registry.register(
        "gas-fumes",
        "faint gas odor near loading dock B",
        "dock B and the storage corridor",
        &entry,
    )?;
    let p = signal.current();
    println!(
        "session 1: ({:.3}, {:.3}) {:?}",
        p.position.x(),
        p.position.y(),
        p.region
    );

    let second = CommitteeAssessment::from_pairs(day(15), 4, &[(1, 1)])?;
    let p = registry.assess("gas-fumes", &second)?;
    let o = &p.outcome;
    println!("tau       {:.3}", o.tau);
    println!("alpha     {:.6}", o.alpha_tau);
    println!("kappa     {:.6}", o.kappa_x);
    println!("n_cap     {:.6}", o.n_cap.unwrap_or_default());
    println!("alpha_eff {:.6}", o.alpha_eff);
    println!("y_decay   {:.6}", o.y_decay);
    println!(
        "session 2: ({:.3}, {:.3}) {:?} d={:.3} S={:.3} band={:?}",
        p.position.x(),
        p.position.y(),
        p.region,
        p.d,
        p.severity,
        p.band
    );
    println!("action: {}", p.band.recommended_action());
    Ok(())
}
