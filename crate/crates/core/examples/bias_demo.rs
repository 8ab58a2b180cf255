//! Selective publication of significant negative estimates manufactures an
//! effect out of nothing; FAT-PET recovers the zero.
//!
//! cargo run --example bias_demo -- [seed]

use firmlab::metareg::{fat_pet, funnel_points, naive_pooled_mean, simulate_studies, CensorRule, LiteratureSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(42);
    let demo = LiteratureSpec::bias_demo();
    for (label, rule) in [("no censoring", CensorRule::None), ("negative & significant", demo.rule)] {
        let studies = simulate_studies(&LiteratureSpec { rule, ..demo }, seed)?;
        let r = fat_pet(&studies)?;
        println!(
            "{label:<24} naive {:+.4}  PET {:+.4}  FAT {:+.3}",
            naive_pooled_mean(&studies)?,
            r.pet,
            r.fat
        );
        // crude funnel: mean effect by precision band
        let pts = funnel_points(&studies);
        for (lo, hi) in [(2.0, 5.0), (5.0, 10.0), (10.0, 20.0)] {
            let band: Vec<f64> = pts.iter().filter(|p| p.1 >= lo && p.1 < hi).map(|p| p.0).collect();
            if !band.is_empty() {
                println!("    precision [{lo:>4}, {hi:>4}): {:>4} studies, mean {:+.4}", band.len(), band.iter().sum::<f64>() / band.len() as f64);
            }
        }
    }
    Ok(())
}
