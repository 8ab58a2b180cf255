//! Formality choice, productivity threshold, informal-firm taxonomy,
//! population construction, aggregation and policy experiments.

mod aggregate;
mod owe;
mod population;

pub use aggregate::{
    policy_sweep, simulate_economy, AggregateOutcome, EconomyRun, FirmRecord, SweepParam,
    SweepRow, ThresholdOutcome,
};
pub use owe::{compute_owe, OweResult};
pub use population::{build_population, PopulationSpec};

use std::fmt;

use crate::error::{domain, Error, Result};
use crate::firm::{formal_optimum, informal_optimum, FirmDecision, Status};
use crate::model::{LaborSupply, Policy, ProductionTech};
use crate::numeric::bisect;

/// Number of log-spaced points used to check single crossing before bisecting.
pub const THRESHOLD_SCAN_POINTS: usize = 64;
/// Relative bracket width at which the threshold bisection stops.
pub const THRESHOLD_REL_TOL: f64 = 1e-8;

/// Both status-specific optima of one firm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatusOptions {
    pub formal: FirmDecision,
    pub informal: FirmDecision,
}

impl StatusOptions {
    pub fn evaluate(
        a: f64,
        tech: &ProductionTech,
        supply: &LaborSupply,
        policy: &Policy,
    ) -> Result<Self> {
        Ok(Self {
            formal: formal_optimum(a, tech, supply, policy)?,
            informal: informal_optimum(a, tech, supply, policy)?,
        })
    }

    /// `Pi_F* - E[Pi_I*]`.
    pub fn gap(&self) -> f64 {
        self.formal.profit - self.informal.profit
    }

    /// Higher-profit option, ties to formal; a firm losing money either way exits.
    pub fn choose(&self) -> FirmDecision {
        if self.formal.profit < 0.0 && self.informal.profit < 0.0 {
            return FirmDecision {
                status: Status::Informal,
                employment: 0.0,
                wage: 0.0,
                profit: 0.0,
                output: 0.0,
                regime: None,
                detection_prob: Some(0.0),
                exited: true,
            };
        }
        if self.formal.profit >= self.informal.profit {
            self.formal
        } else {
            self.informal
        }
    }
}

/// Status with the higher maximal profit.
pub fn choose_status(
    a: f64,
    tech: &ProductionTech,
    supply: &LaborSupply,
    policy: &Policy,
) -> Result<FirmDecision> {
    Ok(StatusOptions::evaluate(a, tech, supply, policy)?.choose())
}

/// Result of the threshold search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    /// Firms above this productivity are formal, those below informal.
    Interior(f64),
    AllFormal,
    AllInformal,
}

impl Threshold {
    pub fn value(&self) -> Option<f64> {
        match self {
            Threshold::Interior(a) => Some(*a),
            _ => None,
        }
    }
}

/// Productivity `A*` at which the formal and informal profits cross on
/// `[a_lo, a_hi]`.
///
/// The profit gap is first scanned on a log grid; exactly one
/// informal-to-formal sign change is required. Several changes, or a single
/// formal-to-informal change, are reported as [`Error::NonMonotoneCrossing`]
/// with every bracket found.
pub fn find_threshold(
    tech: &ProductionTech,
    supply: &LaborSupply,
    policy: &Policy,
    a_lo: f64,
    a_hi: f64,
) -> Result<Threshold> {
    if !(a_lo > 0.0 && a_hi > a_lo && a_hi.is_finite()) {
        return Err(domain(format!(
            "threshold search needs 0 < a_lo < a_hi, got [{a_lo}, {a_hi}]"
        )));
    }
    let n = THRESHOLD_SCAN_POINTS;
    let ratio = (a_hi / a_lo).ln();
    let grid: Vec<f64> = (0..n)
        .map(|i| {
            if i == n - 1 {
                a_hi
            } else {
                a_lo * (ratio * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect();
    let mut formal_side = Vec::with_capacity(n);
    for &a in &grid {
        formal_side.push(StatusOptions::evaluate(a, tech, supply, policy)?.gap() >= 0.0);
    }
    let brackets: Vec<(usize, (f64, f64))> = (0..n - 1)
        .filter(|&i| formal_side[i] != formal_side[i + 1])
        .map(|i| (i, (grid[i], grid[i + 1])))
        .collect();

    match brackets.as_slice() {
        [] if formal_side[0] => Ok(Threshold::AllFormal),
        [] => Ok(Threshold::AllInformal),
        [(i, (lo, hi))] if !formal_side[*i] => {
            let mut failure = None;
            let root = bisect(
                |a| match StatusOptions::evaluate(a, tech, supply, policy) {
                    Ok(opts) => {
                        let g = opts.gap();
                        // ties count as formal
                        if g >= 0.0 {
                            g.max(f64::MIN_POSITIVE)
                        } else {
                            g
                        }
                    }
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                },
                *lo,
                *hi,
                THRESHOLD_REL_TOL * lo,
            )?;
            if let Some(e) = failure {
                return Err(e);
            }
            Ok(Threshold::Interior(root))
        }
        _ => Err(Error::NonMonotoneCrossing {
            brackets: brackets.into_iter().map(|(_, b)| b).collect(),
        }),
    }
}

/// Which view of informality a firm fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FirmTaxonomy {
    FormalChooser,
    /// Would formalize if the fixed entry cost disappeared.
    DeSoto,
    /// Viable formally but evades by choice.
    Parasite,
    /// Cannot subsist formally even without the entry cost.
    Survival,
}

impl FirmTaxonomy {
    pub const ALL: [FirmTaxonomy; 4] = [
        FirmTaxonomy::FormalChooser,
        FirmTaxonomy::DeSoto,
        FirmTaxonomy::Parasite,
        FirmTaxonomy::Survival,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FirmTaxonomy::FormalChooser => "formal_chooser",
            FirmTaxonomy::DeSoto => "de_soto",
            FirmTaxonomy::Parasite => "parasite",
            FirmTaxonomy::Survival => "survival",
        }
    }
}

impl fmt::Display for FirmTaxonomy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Taxonomy label for a firm whose decision under `policy` is already known.
pub(crate) fn classify_decided(
    a: f64,
    decision: &FirmDecision,
    tech: &ProductionTech,
    supply: &LaborSupply,
    policy: &Policy,
) -> Result<FirmTaxonomy> {
    if decision.status == Status::Formal {
        return Ok(FirmTaxonomy::FormalChooser);
    }
    if decision.exited {
        return Ok(FirmTaxonomy::Survival);
    }
    let free_entry = Policy { c_f: 0.0, ..*policy };
    let opts = StatusOptions::evaluate(a, tech, supply, &free_entry)?;
    if opts.formal.profit < 0.0 {
        Ok(FirmTaxonomy::Survival)
    } else if opts.choose().status == Status::Formal {
        Ok(FirmTaxonomy::DeSoto)
    } else {
        Ok(FirmTaxonomy::Parasite)
    }
}

/// Classifies a firm as formal, De Soto, parasite or survival.
///
/// Informal firms are checked in priority order: survival (negative formal
/// profit even with `c_f = 0`), De Soto (`c_f = 0` flips the choice), parasite.
pub fn classify_firm(
    a: f64,
    tech: &ProductionTech,
    supply: &LaborSupply,
    policy: &Policy,
) -> Result<FirmTaxonomy> {
    let d = choose_status(a, tech, supply, policy)?;
    classify_decided(a, &d, tech, supply, policy)
}
