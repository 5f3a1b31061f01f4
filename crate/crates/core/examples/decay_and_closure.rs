//! Passive decay between sessions, lazy evaluation for reporting, and the
//! distance gate on closure.

use chrono::{Days, NaiveDate};
use wscm::engine::Registry;
use wscm::model::CommitteeAssessment;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let start = NaiveDate::from_ymd_opt(2026, 2, 2).unwrap();
    let mut registry = Registry::default();
    registry.register(
        "slippery-ramp",
        "",
        "",
        &CommitteeAssessment::from_pairs(start, 1, &[(0, 1)])?,
    )?;
    let params = *registry.params();

    let signal = registry.find("slippery-ramp").unwrap();
    for weeks in [0u64, 4, 8, 16, 32] {
        let as_of = start + Days::new(7 * weeks);
        let p = signal.position_as_of(as_of, &params)?;
        println!("as of {as_of}: ({:.3}, {:.3})", p.x(), p.y());
    }

    let later = start + Days::new(7 * 16);
    let p = registry.decay("slippery-ramp", later)?;
    println!(
        "decay point recorded: ({:.3}, {:.3}) d={:.3}",
        p.position.x(),
        p.position.y(),
        p.d
    );

    let close_on = later + Days::new(1);
    match registry.close("slippery-ramp", close_on, false, "") {
        Ok(_) => println!("closed"),
        Err(e) => println!("close refused: {e}"),
    }
    let signal = registry.close("slippery-ramp", close_on, true, "ramp resurfaced; hazard removed")?;
    println!("status {} exit {:?}", signal.status, signal.exit);
    Ok(())
}
