//! How committee size and sustained agreement change the update weight,
//! and how a full-committee reversal is amplified.

use chrono::{Days, NaiveDate};
use wscm::engine::Registry;
use wscm::model::{committee_cap, CommitteeAssessment, ModelParameters};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ModelParameters::default();
    println!("committee cap by size:");
    for n in 1..=6 {
        println!("  n={n} cap={:.2}", committee_cap(n, &params));
    }

    let start = NaiveDate::from_ymd_opt(2026, 3, 2).unwrap();
    let mut registry = Registry::new(params)?;
    registry.register(
        "forklift-near-miss",
        "",
        "",
        &CommitteeAssessment::from_pairs(start, 1, &[(1, 0)])?,
    )?;

    // five assessors agree the signal is worsening, three sessions running,
    // then all five reverse
    let full = |x, y| vec![(x, y); 5];
    let sessions = [full(2, 2), full(3, 2), full(4, 3), full(1, 1)];
    for (i, pairs) in sessions.iter().enumerate() {
        let date = start + Days::new(14 * (i as u64 + 1));
        let a = CommitteeAssessment::from_pairs(date, 2 + i as u32, pairs)?;
        let p = registry.assess("forklift-near-miss", &a)?;
        let o = &p.outcome;
        println!(
            "{date}: k_x={} reversal={} rho={:.2} kappa={:.3} alpha_eff={:.3} -> ({:.2}, {:.2}) {:?}",
            o.k_x,
            o.reversal_x,
            o.rho_x,
            o.kappa_x,
            o.alpha_eff,
            p.position.x(),
            p.position.y(),
            p.region
        );
    }
    Ok(())
}
