//! Run configuration: a TOML file with `tech`, `supply`, `policy`,
//! `population` and optional per-subcommand blocks. Unknown keys are errors.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::economy::{PopulationSpec, SweepParam};
use crate::metareg::{CensorRule, LiteratureSpec};
use crate::model::{LaborSupply, Policy, ProductionTech};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    pub tech: ProductionTech,
    pub supply: LaborSupply,
    #[serde(default)]
    pub policy: Policy,
    pub population: PopulationSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub owe: Option<OweConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<ThresholdConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metareg: Option<MetaregConfig>,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: String,
    pub values: Vec<f64>,
}

impl SweepConfig {
    pub fn param(&self) -> crate::Result<SweepParam> {
        self.parameter.parse()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OweConfig {
    pub w_min_new: f64,
}

/// Search range for the `threshold` subcommand; defaults to the population range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdConfig {
    pub a_lo: f64,
    pub a_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct MetaregConfig {
    /// Study CSV (`effect,se`), relative to the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulate: Option<SimulateConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    None,
    TwoSidedSig,
    NegativeSig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulateConfig {
    pub true_effect: f64,
    pub n: usize,
    pub se_lo: f64,
    pub se_hi: f64,
    pub rule: RuleKind,
    pub p_keep: f64,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        let demo = LiteratureSpec::bias_demo();
        Self {
            true_effect: demo.true_effect,
            n: demo.n,
            se_lo: demo.se_lo,
            se_hi: demo.se_hi,
            rule: RuleKind::NegativeSig,
            p_keep: 0.1,
        }
    }
}

impl SimulateConfig {
    pub fn literature(&self) -> LiteratureSpec {
        let rule = match self.rule {
            RuleKind::None => CensorRule::None,
            RuleKind::TwoSidedSig => CensorRule::TwoSidedSig { p_keep: self.p_keep },
            RuleKind::NegativeSig => CensorRule::NegativeSig { p_keep: self.p_keep },
        };
        LiteratureSpec {
            true_effect: self.true_effect,
            n: self.n,
            se_lo: self.se_lo,
            se_hi: self.se_hi,
            rule,
        }
    }
}

#[derive(Debug)]
pub enum ConfigError {
    Io { path: PathBuf, source: std::io::Error },
    /// Syntax error, wrong type or unknown key.
    Parse { path: PathBuf, key: String, msg: String },
    /// Well-formed but violates a parameter constraint.
    Invalid { key: String, msg: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            ConfigError::Parse { path, key, msg } if key.is_empty() || key == "." => {
                write!(f, "{}: {msg}", path.display())
            }
            ConfigError::Parse { path, key, msg } => {
                write!(f, "{}: at `{key}`: {msg}", path.display())
            }
            ConfigError::Invalid { key, msg } => write!(f, "invalid `{key}`: {msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

fn invalid(key: &str, msg: impl fmt::Display) -> ConfigError {
    ConfigError::Invalid { key: key.to_string(), msg: msg.to_string() }
}

fn model_check(key: &str, r: crate::Result<()>) -> Result<(), ConfigError> {
    r.map_err(|e| invalid(key, e))
}

impl RunConfig {
    /// Parses TOML text; `origin` is only used in messages.
    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self, ConfigError> {
        let de = toml::Deserializer::new(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let key = e.path().to_string();
            let inner = e.into_inner();
            ConfigError::Parse {
                path: origin.to_path_buf(),
                key,
                msg: inner.message().trim().to_string(),
            }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        model_check("tech.alpha", self.tech.validate())?;
        if !(self.supply.b > 0.0 && self.supply.b.is_finite()) {
            return Err(invalid("supply.b", format!("must be positive, got {}", self.supply.b)));
        }
        model_check("supply.eta", self.supply.validate())?;
        let p = &self.policy;
        for (key, v) in [
            ("policy.tau", p.tau),
            ("policy.c_f", p.c_f),
            ("policy.w_min", p.w_min),
            ("policy.phi", p.phi),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(invalid(key, format!("must be finite and >= 0, got {v}")));
            }
        }
        if !(p.delta >= 0.0 && p.delta < 1.0) {
            return Err(invalid("policy.delta", format!("must lie in [0, 1), got {}", p.delta)));
        }
        if !(p.detection.l_bar > 0.0 && p.detection.l_bar.is_finite()) {
            return Err(invalid(
                "policy.detection.l_bar",
                format!("must be positive, got {}", p.detection.l_bar),
            ));
        }
        if !(p.detection.gamma >= 1.0 && p.detection.gamma.is_finite()) {
            return Err(invalid(
                "policy.detection.gamma",
                format!("must be >= 1, got {}", p.detection.gamma),
            ));
        }
        let pop = &self.population;
        if !pop.mu.is_finite() {
            return Err(invalid("population.mu", "must be finite"));
        }
        if !(pop.sigma > 0.0 && pop.sigma.is_finite()) {
            return Err(invalid("population.sigma", format!("must be positive, got {}", pop.sigma)));
        }
        if pop.k == 0 {
            return Err(invalid("population.k", "must be >= 1"));
        }
        if let Some(s) = &self.sweep {
            let param = s.param().map_err(|e| invalid("sweep.parameter", e))?;
            if s.values.is_empty() {
                return Err(invalid("sweep.values", "must be nonempty"));
            }
            let asc = s.values.windows(2).all(|w| w[0] <= w[1]);
            let desc = s.values.windows(2).all(|w| w[0] >= w[1]);
            if !(asc || desc) {
                return Err(invalid("sweep.values", "must be sorted"));
            }
            for &v in &s.values {
                let swept = param.apply(p, v);
                model_check("sweep.values", swept.validate())?;
            }
        }
        if let Some(o) = &self.owe {
            if !(o.w_min_new > p.w_min && o.w_min_new.is_finite()) {
                return Err(invalid(
                    "owe.w_min_new",
                    format!("must exceed policy.w_min = {}, got {}", p.w_min, o.w_min_new),
                ));
            }
        }
        if let Some(t) = &self.threshold {
            if !(t.a_lo > 0.0 && t.a_hi > t.a_lo && t.a_hi.is_finite()) {
                return Err(invalid("threshold", "need 0 < a_lo < a_hi"));
            }
        }
        if let Some(m) = &self.metareg {
            if m.input.is_some() && m.simulate.is_some() {
                return Err(invalid("metareg", "set either `input` or `simulate`, not both"));
            }
            if let Some(s) = &m.simulate {
                if !(s.se_lo > 0.0 && s.se_hi > s.se_lo && s.se_hi.is_finite()) {
                    return Err(invalid("metareg.simulate.se_lo", "need 0 < se_lo < se_hi"));
                }
                if s.n == 0 {
                    return Err(invalid("metareg.simulate.n", "must be >= 1"));
                }
                if !(0.0..=1.0).contains(&s.p_keep) {
                    return Err(invalid("metareg.simulate.p_keep", "must lie in [0, 1]"));
                }
            }
        }
        Ok(())
    }

    /// Canonical TOML echo with all defaults filled in.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }
}

/// Reads and validates a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
    RunConfig::from_toml_str(&text, path)
}
