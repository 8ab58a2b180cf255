//! Employment response of one firm to a rising minimum wage.
//!
//! Below the monopsony wage nothing happens, then employment rises along the
//! supply curve up to the competitive wage, then falls along labor demand.
//!
//! cargo run --example min_wage_regimes

use firmlab::{formal_optimum, LaborSupply, Policy, ProductionTech};

fn main() -> firmlab::Result<()> {
    let tech = ProductionTech::new(0.5)?;
    let supply = LaborSupply::new(1.0, 1.4)?;
    for i in 0..=12 {
        let w_min = 0.1 * i as f64;
        let d = formal_optimum(1.0, &tech, &supply, &Policy { w_min, ..Policy::default() })?;
        let bar = "#".repeat((d.employment * 60.0) as usize);
        println!(
            "w_min={w_min:.1} L={:.5} {:<18} {bar}",
            d.employment,
            d.regime.map(|r| r.as_str()).unwrap_or("")
        );
    }
    Ok(())
}
