//! FAT-PET meta-regression on a study file (`effect,se` columns) or on a
//! small built-in literature.
//!
//! cargo run --example fat_pet -- [studies.csv]

use firmlab::cli::read_studies;
use firmlab::metareg::{fat_pet, fat_pet_precision_form, naive_pooled_mean, StudyEstimate};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let studies = match std::env::args().nth(1) {
        Some(path) => read_studies(path.as_ref())?,
        None => [(-0.40, 0.30), (-0.25, 0.12), (-0.05, 0.04), (-0.10, 0.08), (-0.60, 0.28), (0.02, 0.05), (-0.30, 0.15)]
            .iter()
            .map(|&(e, s)| StudyEstimate::new(e, s))
            .collect::<Result<_, _>>()?,
    };
    let r = fat_pet(&studies)?;
    let alt = fat_pet_precision_form(&studies)?;
    println!("n          {}", r.n);
    println!("naive mean {:+.4}", naive_pooled_mean(&studies)?);
    println!("PET        {:+.4} (se {:.4}, t {:+.2})", r.pet, r.se_pet, r.pet / r.se_pet);
    println!("FAT        {:+.4} (se {:.4}, t {:+.2})", r.fat, r.se_fat, r.fat / r.se_fat);
    println!("t-on-precision form: PET {:+.4} FAT {:+.4}", alt.pet, alt.fat);
    Ok(())
}
