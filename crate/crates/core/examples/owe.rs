//! Own-wage elasticity of a minimum wage increase: positive under monopsony,
//! negative in the competitive limit.
//!
//! cargo run --example owe

use firmlab::economy::{build_population, compute_owe, PopulationSpec};
use firmlab::{LaborSupply, Policy, ProductionTech};

fn main() -> firmlab::Result<()> {
    let tech = ProductionTech::new(0.5)?;
    let one = build_population(&PopulationSpec { mu: 0.0, sigma: 1.0, k: 1 })?;
    let policy = Policy::default();

    for (eta, w_new) in [(1.4, 0.6), (1.4, 0.8), (3.0, 0.7), (1e9, 1.1)] {
        let supply = LaborSupply::new(1.0, eta)?;
        let r = compute_owe(&tech, &supply, &policy, w_new, &one)?;
        println!(
            "eta={eta:<6} w_min 0 -> {w_new}: dL {:+.2}%  dw {:+.2}%  owe {:+.4}",
            r.pct_demployment, r.pct_dwage, r.owe
        );
    }

    let pop = build_population(&PopulationSpec { mu: 0.0, sigma: 0.5, k: 512 })?;
    let supply = LaborSupply::new(1.0, 1.4)?;
    let r = compute_owe(&tech, &supply, &policy, 0.6, &pop)?;
    println!(
        "population: owe {:+.4}, {:.1}% of employment affected",
        r.owe,
        100.0 * r.affected_employment_share
    );
    Ok(())
}
