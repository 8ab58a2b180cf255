//! Wage markdown of a monopsonist for a few labor-supply elasticities.
//!
//! cargo run --example markdown

use firmlab::{formal_optimum_unconstrained, marginal_product, LaborSupply, ProductionTech};

fn main() -> firmlab::Result<()> {
    let tech = ProductionTech::new(0.5)?;
    println!("{:>8} {:>10} {:>10} {:>10} {:>10}", "eta", "L*", "w*", "MRPL", "markdown");
    for eta in [0.5, 1.0, 1.4, 3.0, 7.1, 20.0, 1e9] {
        let supply = LaborSupply::new(1.0, eta)?;
        let d = formal_optimum_unconstrained(1.0, &tech, &supply, 0.0)?;
        let mrpl = marginal_product(&tech, 1.0, d.employment)?;
        println!(
            "{eta:>8} {:>10.5} {:>10.5} {:>10.5} {:>9.1}%",
            d.employment,
            d.wage,
            mrpl,
            100.0 * (1.0 - d.wage / mrpl)
        );
    }
    Ok(())
}
