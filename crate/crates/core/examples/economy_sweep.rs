//! Aggregate outcomes along an enforcement sweep, written to CSV.
//!
//! cargo run --example economy_sweep -- [out.csv]

use firmlab::economy::{build_population, policy_sweep, PopulationSpec, SweepParam};
use firmlab::report::{fmt_f64, write_csv, Table};
use firmlab::{DetectionTech, LaborSupply, Policy, ProductionTech};

fn main() -> Result<(), Box<dyn std::error::Error>> {
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
    let pop = build_population(&PopulationSpec { mu: 0.0, sigma: 1.0, k: 256 })?;
    let grid = [0.0, 0.1, 0.2, 0.4, 0.8, 1.6];
    let rows = policy_sweep(&tech, &supply, &policy, SweepParam::Phi, &grid, &pop)?;

    let mut table = Table::new(&["phi", "formal_firm_share", "informal_employment_share", "output", "avg_wage"]);
    for r in &rows {
        let o = &r.outcome;
        println!(
            "phi={:<4} formal share {:.3}  informal emp {:.3}  output {:.5}  A* {}",
            r.value, o.formal_firm_share, o.informal_employment_share, o.output, o.threshold_a
        );
        table.push(
            [r.value, o.formal_firm_share, o.informal_employment_share, o.output, o.avg_wage]
                .map(fmt_f64)
                .to_vec(),
        );
    }
    if let Some(path) = std::env::args().nth(1) {
        write_csv(&table, path.as_ref())?;
        println!("wrote {path}");
    }
    Ok(())
}
