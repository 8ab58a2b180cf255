//! Productivity cutoff between informal and formal firms, and how enforcement
//! and the fixed formality cost move it.
//!
//! cargo run --example formality_threshold

use firmlab::economy::{find_threshold, StatusOptions, Threshold};
use firmlab::{DetectionTech, LaborSupply, Policy, ProductionTech};

fn main() -> firmlab::Result<()> {
    let tech = ProductionTech::new(0.5)?;
    let supply = LaborSupply::new(1.0, 1.4)?;
    let base = Policy {
        tau: 0.3,
        c_f: 0.05,
        w_min: 0.0,
        phi: 0.2,
        delta: 0.1,
        detection: DetectionTech::new(1.0, 2.0)?,
    };

    for a in [0.5, 1.0, 1.5, 3.0] {
        let o = StatusOptions::evaluate(a, &tech, &supply, &base)?;
        println!(
            "a={a:<4} formal={:>8.4} informal={:>8.4} -> {:?}",
            o.formal.profit,
            o.informal.profit,
            o.choose().status
        );
    }

    let show = |label: &str, p: &Policy| -> firmlab::Result<()> {
        match find_threshold(&tech, &supply, p, 0.05, 50.0)? {
            Threshold::Interior(a) => println!("{label:<14} A* = {a:.4}"),
            other => println!("{label:<14} {other:?}"),
        }
        Ok(())
    };
    show("baseline", &base)?;
    show("phi x2", &Policy { phi: 0.4, ..base })?;
    show("c_f / 2", &Policy { c_f: 0.025, ..base })?;
    show("no tax", &Policy { tau: 0.0, ..base })?;
    show("huge c_f", &Policy { c_f: 1e6, ..base })?;
    Ok(())
}
