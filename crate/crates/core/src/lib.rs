//! Firm-level labor-market laboratory.
//!
//! Heterogeneous firms with monopsony power choose employment and whether to
//! operate formally, facing a payroll tax, a fixed formality cost, a minimum
//! wage and imperfect enforcement against informality. On top of the single
//! firm solver sit a deterministic lognormal population, aggregate outcomes,
//! the own-wage elasticity of minimum-wage increases and policy sweeps.
//!
//! The [`metareg`] module is independent of the model: funnel-plot data,
//! precision-weighted pooling, FAT-PET meta-regression and a seeded generator
//! of selectively published study literatures.

pub mod cli;
pub mod config;
pub mod economy;
pub mod error;
pub mod firm;
pub mod metareg;
pub mod model;
pub mod numeric;
pub mod report;

pub use error::{Error, Result};
pub use firm::{
    formal_optimum, formal_optimum_unconstrained, informal_optimum, profit_at, FirmDecision,
    MinWageRegime, Status,
};
pub use model::{
    detection_prob, marginal_product, production_output, supply_employment, supply_wage,
    DetectionTech, LaborSupply, Policy, ProductionTech,
};
