use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::numeric::normal_quantile;

/// Lognormal productivity distribution discretized on `k` quantile midpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopulationSpec {
    pub mu: f64,
    pub sigma: f64,
    pub k: usize,
}

impl PopulationSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.mu.is_finite() {
            return Err(domain(format!("population.mu must be finite, got {}", self.mu)));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(domain(format!(
                "population.sigma must be positive, got {}",
                self.sigma
            )));
        }
        if self.k == 0 {
            return Err(domain("population.k must be >= 1"));
        }
        Ok(())
    }
}

/// Productivities `exp(mu + sigma * z_j)` with `z_j` the standard normal
/// quantile at `(j - 0.5) / k`, in increasing order.
pub fn build_population(spec: &PopulationSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let k = spec.k as f64;
    Ok((1..=spec.k)
        .map(|j| {
            let z = normal_quantile((j as f64 - 0.5) / k);
            (spec.mu + spec.sigma * z).exp()
        })
        .collect())
}
