//! Sorts firms into formal choosers, De Soto, parasite and survival types.
//!
//! cargo run --example taxonomy

use firmlab::economy::{build_population, simulate_economy, FirmRecord, FirmTaxonomy, PopulationSpec};
use firmlab::{DetectionTech, LaborSupply, Policy, ProductionTech};

fn main() -> firmlab::Result<()> {
    let tech = ProductionTech::new(0.5)?;
    let supply = LaborSupply::new(1.0, 1.4)?;
    let policy = Policy {
        tau: 0.3,
        c_f: 0.05,
        phi: 0.2,
        delta: 0.1,
        detection: DetectionTech::new(1.0, 2.0)?,
        ..Policy::default()
    };
    let pop = build_population(&PopulationSpec { mu: 0.0, sigma: 1.0, k: 512 })?;
    // heavy tax, mild informality penalty: parasites appear
    let high_tax = Policy { tau: 0.5, delta: 0.08, c_f: 0.05, ..policy };

    for (label, p) in [("reference", policy), ("high tax", high_tax)] {
        println!("{label}:");
        let run = simulate_economy(&tech, &supply, &p, &pop)?;
        tally(&run.firms, pop.len());
    }
    Ok(())
}

fn tally(firms: &[FirmRecord], k: usize) {
    for t in FirmTaxonomy::ALL {
        let members: Vec<_> = firms.iter().filter(|f| f.taxonomy == t).collect();
        let emp: f64 = members.iter().map(|f| f.decision.employment).sum::<f64>() / k as f64 + 0.0;
        let range = match (members.first(), members.last()) {
            (Some(lo), Some(hi)) => format!("a in [{:.3}, {:.3}]", lo.a, hi.a),
            _ => "-".to_string(),
        };
        println!("  {:<16} {:>4} firms  employment {emp:.4}  {range}", t.as_str(), members.len());
    }
}
