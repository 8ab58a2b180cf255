use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::{classify_decided, find_threshold, FirmTaxonomy, StatusOptions, Threshold};
use crate::error::{domain, Error, Result};
use crate::firm::{FirmDecision, Status};
use crate::model::{LaborSupply, Policy, ProductionTech};

/// Threshold as reported in aggregate output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdOutcome {
    Interior(f64),
    AllFormal,
    AllInformal,
    /// The profit gap crossed zero more than once over the population range.
    NonMonotone,
}

impl fmt::Display for ThresholdOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdOutcome::Interior(a) => write!(f, "{a}"),
            ThresholdOutcome::AllFormal => f.write_str("all_formal"),
            ThresholdOutcome::AllInformal => f.write_str("all_informal"),
            ThresholdOutcome::NonMonotone => f.write_str("non_monotone"),
        }
    }
}

/// Economy-wide totals, each firm weighted by `1/k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateOutcome {
    pub total_employment: f64,
    pub formal_employment: f64,
    pub informal_employment: f64,
    pub formal_firm_share: f64,
    pub informal_employment_share: f64,
    pub output: f64,
    pub avg_wage: f64,
    /// Payroll taxes plus expected fines.
    pub gov_revenue: f64,
    pub threshold_a: ThresholdOutcome,
}

impl AggregateOutcome {
    /// Output per worker.
    pub fn labor_productivity(&self) -> f64 {
        if self.total_employment > 0.0 {
            self.output / self.total_employment
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirmRecord {
    pub a: f64,
    pub decision: FirmDecision,
    pub taxonomy: FirmTaxonomy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EconomyRun {
    pub outcome: AggregateOutcome,
    pub firms: Vec<FirmRecord>,
}

/// Per-firm status decisions, in population order.
pub(crate) fn solve_firms(
    tech: &ProductionTech,
    supply: &LaborSupply,
    policy: &Policy,
    population: &[f64],
) -> Result<Vec<FirmDecision>> {
    population
        .par_iter()
        .map(|&a| Ok(StatusOptions::evaluate(a, tech, supply, policy)?.choose()))
        .collect()
}

fn validate_inputs(
    tech: &ProductionTech,
    supply: &LaborSupply,
    policy: &Policy,
    population: &[f64],
) -> Result<()> {
    tech.validate()?;
    supply.validate()?;
    policy.validate()?;
    if population.is_empty() {
        return Err(domain("population is empty"));
    }
    Ok(())
}

/// Solves every firm, labels it, and aggregates in index order.
///
/// Firms are solved in parallel; the reduction is sequential so the result
/// does not depend on scheduling.
pub fn simulate_economy(
    tech: &ProductionTech,
    supply: &LaborSupply,
    policy: &Policy,
    population: &[f64],
) -> Result<EconomyRun> {
    validate_inputs(tech, supply, policy, population)?;
    let firms: Vec<FirmRecord> = population
        .par_iter()
        .map(|&a| {
            let decision = StatusOptions::evaluate(a, tech, supply, policy)?.choose();
            let taxonomy = classify_decided(a, &decision, tech, supply, policy)?;
            Ok(FirmRecord { a, decision, taxonomy })
        })
        .collect::<Result<_>>()?;

    let threshold_a = population_threshold(tech, supply, policy, population, &firms)?;

    let w = 1.0 / population.len() as f64;
    let mut formal_employment = 0.0;
    let mut informal_employment = 0.0;
    let mut formal_firms = 0usize;
    let mut output = 0.0;
    let mut wage_bill = 0.0;
    let mut gov_revenue = 0.0;
    for rec in &firms {
        let d = &rec.decision;
        match d.status {
            Status::Formal => {
                formal_firms += 1;
                formal_employment += w * d.employment;
                gov_revenue += w * policy.tau * d.wage * d.employment;
            }
            Status::Informal => {
                informal_employment += w * d.employment;
                gov_revenue += w * d.detection_prob.unwrap_or(0.0) * policy.phi;
            }
        }
        output += w * d.output;
        wage_bill += w * d.wage_bill();
    }
    let total_employment = formal_employment + informal_employment;
    let outcome = AggregateOutcome {
        total_employment,
        formal_employment,
        informal_employment,
        formal_firm_share: formal_firms as f64 / population.len() as f64,
        informal_employment_share: if total_employment > 0.0 {
            informal_employment / total_employment
        } else {
            0.0
        },
        output,
        avg_wage: if total_employment > 0.0 {
            wage_bill / total_employment
        } else {
            0.0
        },
        gov_revenue,
        threshold_a,
    };
    Ok(EconomyRun { outcome, firms })
}

fn population_threshold(
    tech: &ProductionTech,
    supply: &LaborSupply,
    policy: &Policy,
    population: &[f64],
    firms: &[FirmRecord],
) -> Result<ThresholdOutcome> {
    let lo = population.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = population.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if lo >= hi {
        return Ok(if firms.iter().all(|r| r.decision.status == Status::Formal) {
            ThresholdOutcome::AllFormal
        } else {
            ThresholdOutcome::AllInformal
        });
    }
    match find_threshold(tech, supply, policy, lo, hi) {
        Ok(Threshold::Interior(a)) => Ok(ThresholdOutcome::Interior(a)),
        Ok(Threshold::AllFormal) => Ok(ThresholdOutcome::AllFormal),
        Ok(Threshold::AllInformal) => Ok(ThresholdOutcome::AllInformal),
        Err(Error::NonMonotoneCrossing { .. }) => Ok(ThresholdOutcome::NonMonotone),
        Err(e) => Err(e),
    }
}

/// Policy parameter varied by [`policy_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParam {
    Tau,
    CF,
    WMin,
    Phi,
    LBar,
    Gamma,
    Delta,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::Tau => "tau",
            SweepParam::CF => "c_f",
            SweepParam::WMin => "w_min",
            SweepParam::Phi => "phi",
            SweepParam::LBar => "l_bar",
            SweepParam::Gamma => "gamma",
            SweepParam::Delta => "delta",
        }
    }

    /// Copy of `policy` with this parameter set to `value`.
    pub fn apply(&self, policy: &Policy, value: f64) -> Policy {
        let mut p = *policy;
        match self {
            SweepParam::Tau => p.tau = value,
            SweepParam::CF => p.c_f = value,
            SweepParam::WMin => p.w_min = value,
            SweepParam::Phi => p.phi = value,
            SweepParam::LBar => p.detection.l_bar = value,
            SweepParam::Gamma => p.detection.gamma = value,
            SweepParam::Delta => p.delta = value,
        }
        p
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "tau" => SweepParam::Tau,
            "c_f" => SweepParam::CF,
            "w_min" => SweepParam::WMin,
            "phi" => SweepParam::Phi,
            "l_bar" => SweepParam::LBar,
            "gamma" => SweepParam::Gamma,
            "delta" => SweepParam::Delta,
            other => return Err(Error::UnknownParameter(other.to_string())),
        })
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub outcome: AggregateOutcome,
}

/// One [`simulate_economy`] row per grid value with everything else fixed.
///
/// The grid must be nonempty and sorted, ascending or descending.
pub fn policy_sweep(
    tech: &ProductionTech,
    supply: &LaborSupply,
    policy: &Policy,
    param: SweepParam,
    grid: &[f64],
    population: &[f64],
) -> Result<Vec<SweepRow>> {
    if grid.is_empty() {
        return Err(domain("sweep grid is empty"));
    }
    let ascending = grid.windows(2).all(|w| w[0] <= w[1]);
    let descending = grid.windows(2).all(|w| w[0] >= w[1]);
    if !(ascending || descending) {
        return Err(domain(format!("sweep grid for {param} is not sorted")));
    }
    grid.iter()
        .map(|&value| {
            let p = param.apply(policy, value);
            let run = simulate_economy(tech, supply, &p, population)?;
            Ok(SweepRow { value, outcome: run.outcome })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::economy::{build_population, PopulationSpec};
    use crate::model::DetectionTech;

    fn reference() -> (ProductionTech, LaborSupply) {
        (ProductionTech::new(0.5).unwrap(), LaborSupply::new(1.0, 1.4).unwrap())
    }

    fn interior_policy() -> Policy {
        Policy {
            tau: 0.3,
            c_f: 0.05,
            w_min: 0.0,
            phi: 0.2,
            delta: 0.1,
            detection: DetectionTech::new(1.0, 2.0).unwrap(),
        }
    }

    fn population(k: usize) -> Vec<f64> {
        build_population(&PopulationSpec { mu: 0.7, sigma: 0.6, k }).unwrap()
    }

    #[test]
    fn single_firm_economy_is_that_firm() {
        let (t, s) = reference();
        let run = simulate_economy(&t, &s, &Policy::default(), &[1.0]).unwrap();
        let d = run.firms[0].decision;
        let o = run.outcome;
        assert_eq!(o.formal_firm_share, 1.0);
        assert_eq!(o.total_employment, d.employment);
        assert_eq!(o.formal_employment, d.employment);
        assert_eq!(o.output, d.output);
        assert_eq!(o.avg_wage, d.wage);
        assert_eq!(o.gov_revenue, 0.0);
        assert_eq!(o.threshold_a, ThresholdOutcome::AllFormal);
        assert!(simulate_economy(&t, &s, &Policy::default(), &[]).is_err());
    }

    #[test]
    fn totals_match_firm_table() {
        let (t, s) = reference();
        let pop = population(200);
        let run = simulate_economy(&t, &s, &interior_policy(), &pop).unwrap();
        let o = run.outcome;
        let k = pop.len() as f64;
        let sum: f64 = run.firms.iter().map(|r| r.decision.employment).sum::<f64>() / k;
        assert!((o.total_employment - sum).abs() <= 1e-12);
        assert_eq!(o.total_employment, o.formal_employment + o.informal_employment);
        assert!((0.0..=1.0).contains(&o.formal_firm_share));
        assert!((0.0..=1.0).contains(&o.informal_employment_share));
        assert!(o.output >= 0.0);
        assert!(o.formal_firm_share > 0.0 && o.formal_firm_share < 1.0);
        assert!(matches!(o.threshold_a, ThresholdOutcome::Interior(_)));
    }

    #[test]
    fn taxonomy_partitions_informal_firms() {
        let (t, s) = reference();
        let run = simulate_economy(&t, &s, &interior_policy(), &population(300)).unwrap();
        let informal = run.firms.iter().filter(|r| r.decision.status == Status::Informal).count();
        let labeled = run
            .firms
            .iter()
            .filter(|r| r.taxonomy != FirmTaxonomy::FormalChooser)
            .count();
        assert_eq!(informal, labeled);
        for r in &run.firms {
            assert_eq!(
                r.taxonomy == FirmTaxonomy::FormalChooser,
                r.decision.status == Status::Formal
            );
        }
    }

    #[test]
    fn de_soto_firms_formalize_without_entry_cost() {
        let (t, s) = reference();
        let p = interior_policy();
        let pop = population(300);
        let run = simulate_economy(&t, &s, &p, &pop).unwrap();
        let free = simulate_economy(&t, &s, &Policy { c_f: 0.0, ..p }, &pop).unwrap();
        let mut seen = 0;
        for (r, f) in run.firms.iter().zip(&free.firms) {
            if r.taxonomy == FirmTaxonomy::DeSoto {
                seen += 1;
                assert_eq!(f.taxonomy, FirmTaxonomy::FormalChooser);
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn threshold_agrees_with_firm_choices() {
        let (t, s) = reference();
        let pop = population(400);
        let run = simulate_economy(&t, &s, &interior_policy(), &pop).unwrap();
        let ThresholdOutcome::Interior(a_star) = run.outcome.threshold_a else {
            panic!("expected interior threshold");
        };
        let mismatches: Vec<usize> = run
            .firms
            .iter()
            .enumerate()
            .filter(|(_, r)| (r.a > a_star) != (r.decision.status == Status::Formal))
            .map(|(i, _)| i)
            .collect();
        // at most the single grid firm straddling A*
        assert!(mismatches.len() <= 1, "{mismatches:?}");
    }

    #[test]
    fn doubling_fine_raises_formal_share() {
        let (t, s) = reference();
        let p = interior_policy();
        let pop = population(256);
        let base = simulate_economy(&t, &s, &p, &pop).unwrap().outcome;
        let tough = simulate_economy(&t, &s, &Policy { phi: 2.0 * p.phi, ..p }, &pop)
            .unwrap()
            .outcome;
        assert!(tough.formal_firm_share > base.formal_firm_share);
    }

    #[test]
    fn parallel_and_serial_runs_are_identical() {
        let (t, s) = reference();
        let pop = population(300);
        let p = interior_policy();
        let par = simulate_economy(&t, &s, &p, &pop).unwrap();
        let serial = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| simulate_economy(&t, &s, &p, &pop).unwrap());
        assert_eq!(par, serial);
    }

    #[test]
    fn sweep_rows_follow_grid() {
        let (t, s) = reference();
        let pop = population(64);
        let p = interior_policy();
        let rows = policy_sweep(&t, &s, &p, SweepParam::WMin, &[0.0], &pop).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].outcome, simulate_economy(&t, &s, &p, &pop).unwrap().outcome);

        let grid = [0.2, 0.1, 0.05, 0.0];
        let rows = policy_sweep(&t, &s, &p, SweepParam::CF, &grid, &pop).unwrap();
        assert_eq!(rows.iter().map(|r| r.value).collect::<Vec<_>>(), grid);
        for w in rows.windows(2) {
            assert!(w[1].outcome.formal_firm_share >= w[0].outcome.formal_firm_share);
        }

        assert!(policy_sweep(&t, &s, &p, SweepParam::Phi, &[], &pop).is_err());
        assert!(policy_sweep(&t, &s, &p, SweepParam::Phi, &[0.1, 0.3, 0.2], &pop).is_err());
        assert!(matches!("kappa".parse::<SweepParam>(), Err(Error::UnknownParameter(_))));
        assert_eq!("l_bar".parse::<SweepParam>().unwrap(), SweepParam::LBar);
    }
}
