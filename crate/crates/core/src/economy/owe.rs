use rayon::prelude::*;

use super::aggregate::solve_firms;
use crate::error::{domain, Error, Result};
use crate::firm::{formal_optimum, FirmDecision, Status};
use crate::model::{LaborSupply, Policy, ProductionTech};

/// Own-wage elasticity of a minimum-wage increase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OweResult {
    pub owe: f64,
    pub pct_demployment: f64,
    pub pct_dwage: f64,
    /// Baseline employment of the affected firms over total baseline employment.
    pub affected_employment_share: f64,
}

/// Raises the minimum wage to `w_min_new` and compares affected firms before
/// and after.
///
/// A firm is affected when its baseline wage is below `w_min_new`; the set is
/// frozen at baseline. Firms keep their baseline formality status and
/// re-optimize employment within it, so only formal firms respond. Percent
/// changes compare affected employment and the affected average wage.
pub fn compute_owe(
    tech: &ProductionTech,
    supply: &LaborSupply,
    policy_base: &Policy,
    w_min_new: f64,
    population: &[f64],
) -> Result<OweResult> {
    if !(w_min_new > policy_base.w_min && w_min_new.is_finite()) {
        return Err(domain(format!(
            "new minimum wage {w_min_new} must exceed the baseline {}",
            policy_base.w_min
        )));
    }
    tech.validate()?;
    supply.validate()?;
    policy_base.validate()?;
    if population.is_empty() {
        return Err(domain("population is empty"));
    }
    let policy_new = Policy { w_min: w_min_new, ..*policy_base };
    let before = solve_firms(tech, supply, policy_base, population)?;
    let after: Vec<FirmDecision> = population
        .par_iter()
        .zip(&before)
        .map(|(&a, b)| match b.status {
            Status::Formal => formal_optimum(a, tech, supply, &policy_new),
            // the minimum wage does not reach informal or exited firms
            Status::Informal => Ok(*b),
        })
        .collect::<Result<_>>()?;

    let (mut e0, mut w0, mut e1, mut w1, mut total0) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut any = false;
    for (b, n) in before.iter().zip(&after) {
        total0 += b.employment;
        if b.wage < w_min_new {
            any = true;
            e0 += b.employment;
            w0 += b.wage_bill();
            e1 += n.employment;
            w1 += n.wage_bill();
        }
    }
    if !any || e0 == 0.0 {
        return Err(Error::NoAffectedWorkers);
    }
    if e1 == 0.0 {
        return Err(Error::UndefinedOwe);
    }
    let pct_demployment = 100.0 * (e1 - e0) / e0;
    let avg0 = w0 / e0;
    let pct_dwage = 100.0 * (w1 / e1 - avg0) / avg0;
    if pct_dwage == 0.0 || !pct_dwage.is_finite() {
        return Err(Error::UndefinedOwe);
    }
    Ok(OweResult {
        owe: pct_demployment / pct_dwage,
        pct_demployment,
        pct_dwage,
        affected_employment_share: e0 / total0,
    })
}
