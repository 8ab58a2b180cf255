//! Batch front end: loads a configuration, runs one subcommand, writes CSV
//! artifacts and a manifest into the output directory.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::config::{load_config, ConfigError, RunConfig, SimulateConfig};
use crate::economy::{
    build_population, compute_owe, find_threshold, policy_sweep, simulate_economy,
    AggregateOutcome, FirmTaxonomy, Threshold,
};
use crate::error::Error;
use crate::firm::Status;
use crate::metareg::{fat_pet, funnel_points, naive_pooled_mean, simulate_studies, StudyEstimate};
use crate::report::{fmt_f64, read_csv, write_csv, CsvError, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MODEL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

pub const MANIFEST: &str = "manifest.txt";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Simulate,
    Sweep,
    Owe,
    Threshold,
    Classify,
    Metareg,
    Biasdemo,
}

impl Subcommand {
    pub const ALL: [Subcommand; 7] = [
        Subcommand::Simulate,
        Subcommand::Sweep,
        Subcommand::Owe,
        Subcommand::Threshold,
        Subcommand::Classify,
        Subcommand::Metareg,
        Subcommand::Biasdemo,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Subcommand::Simulate => "simulate",
            Subcommand::Sweep => "sweep",
            Subcommand::Owe => "owe",
            Subcommand::Threshold => "threshold",
            Subcommand::Classify => "classify",
            Subcommand::Metareg => "metareg",
            Subcommand::Biasdemo => "biasdemo",
        }
    }
}

impl FromStr for Subcommand {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Subcommand::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "unknown subcommand `{s}`; expected one of {}",
                    Subcommand::ALL.map(|c| c.name()).join(", ")
                ))
            })
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] Error),
    #[error(transparent)]
    Csv(#[from] CsvError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Config(ConfigError::Io { .. }) => EXIT_IO,
            CliError::Config(ConfigError::Parse { .. }) => EXIT_USAGE,
            CliError::Config(ConfigError::Invalid { .. }) => EXIT_MODEL,
            CliError::Model(_) => EXIT_MODEL,
            CliError::Csv(e) if e.is_io() => EXIT_IO,
            CliError::Csv(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

/// Files written by a successful run, relative to the output directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub out_dir: PathBuf,
    pub files: Vec<String>,
}

/// Loads `config_path` and runs `cmd`. Relative paths in the config resolve
/// against the config file's directory; `out` overrides `output_dir`.
pub fn run_from_path(
    cmd: Subcommand,
    config_path: &Path,
    out: Option<&Path>,
) -> Result<RunReport, CliError> {
    let cfg = load_config(config_path)?;
    let base = config_path.parent().unwrap_or(Path::new("."));
    let out_dir = match out {
        Some(o) => o.to_path_buf(),
        None => base.join(&cfg.output_dir),
    };
    run(cmd, &cfg, base, &out_dir)
}

/// Runs `cmd` against an already validated configuration.
pub fn run(
    cmd: Subcommand,
    cfg: &RunConfig,
    config_dir: &Path,
    out_dir: &Path,
) -> Result<RunReport, CliError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|source| CliError::Io { path: out_dir.to_path_buf(), source })?;
    let tables = match cmd {
        Subcommand::Simulate => simulate(cfg)?,
        Subcommand::Sweep => sweep(cfg)?,
        Subcommand::Owe => owe(cfg)?,
        Subcommand::Threshold => threshold(cfg)?,
        Subcommand::Classify => classify(cfg)?,
        Subcommand::Metareg => metareg(cfg, config_dir)?,
        Subcommand::Biasdemo => biasdemo(cfg)?,
    };
    let mut files = Vec::with_capacity(tables.len() + 1);
    for (name, table) in &tables {
        write_csv(table, &out_dir.join(name))?;
        files.push(name.to_string());
    }
    write_manifest(cmd, cfg, &files, out_dir)?;
    files.push(MANIFEST.to_string());
    Ok(RunReport { out_dir: out_dir.to_path_buf(), files })
}

fn write_manifest(
    cmd: Subcommand,
    cfg: &RunConfig,
    files: &[String],
    out_dir: &Path,
) -> Result<(), CliError> {
    // Comment header plus the canonical config, so the manifest itself is a
    // loadable config that reproduces the run.
    let text = format!(
        "# tool: {} {}\n# subcommand: {}\n# seed: {}\n# outputs: {}\n{}",
        env!("CARGO_PKG_NAME"),
        env!("CARGO_PKG_VERSION"),
        cmd,
        cfg.seed,
        files.join(" "),
        cfg.to_toml()
    );
    let path = out_dir.join(MANIFEST);
    std::fs::write(&path, text).map_err(|source| CliError::Io { path, source })
}

type Outputs = Vec<(&'static str, Table)>;

const AGGREGATE_COLUMNS: [&str; 9] = [
    "total_employment",
    "formal_employment",
    "informal_employment",
    "formal_firm_share",
    "informal_employment_share",
    "output",
    "avg_wage",
    "gov_revenue",
    "threshold_a",
];

fn aggregate_cells(o: &AggregateOutcome) -> Vec<String> {
    vec![
        fmt_f64(o.total_employment),
        fmt_f64(o.formal_employment),
        fmt_f64(o.informal_employment),
        fmt_f64(o.formal_firm_share),
        fmt_f64(o.informal_employment_share),
        fmt_f64(o.output),
        fmt_f64(o.avg_wage),
        fmt_f64(o.gov_revenue),
        match o.threshold_a {
            crate::economy::ThresholdOutcome::Interior(a) => fmt_f64(a),
            other => other.to_string(),
        },
    ]
}

fn population(cfg: &RunConfig) -> Result<Vec<f64>, CliError> {
    Ok(build_population(&cfg.population)?)
}

fn simulate(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let pop = population(cfg)?;
    let run = simulate_economy(&cfg.tech, &cfg.supply, &cfg.policy, &pop)?;
    let mut firms = Table::new(&[
        "a", "status", "employment", "wage", "profit", "regime", "taxonomy",
    ]);
    for r in &run.firms {
        let d = &r.decision;
        firms.push(vec![
            fmt_f64(r.a),
            d.status.to_string(),
            fmt_f64(d.employment),
            fmt_f64(d.wage),
            fmt_f64(d.profit),
            d.regime.map(|g| g.to_string()).unwrap_or_default(),
            r.taxonomy.to_string(),
        ]);
    }
    let mut agg = Table::new(&AGGREGATE_COLUMNS);
    agg.push(aggregate_cells(&run.outcome));
    Ok(vec![("firms.csv", firms), ("aggregate.csv", agg)])
}

fn sweep(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let s = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Usage("`sweep` needs a [sweep] block in the config".into()))?;
    let param = s.param()?;
    let pop = population(cfg)?;
    let rows = policy_sweep(&cfg.tech, &cfg.supply, &cfg.policy, param, &s.values, &pop)?;
    let mut header = vec![param.name()];
    header.extend(AGGREGATE_COLUMNS);
    let mut t = Table::new(&header);
    for r in rows {
        let mut cells = vec![fmt_f64(r.value)];
        cells.extend(aggregate_cells(&r.outcome));
        t.push(cells);
    }
    Ok(vec![("sweep.csv", t)])
}

fn owe(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let o = cfg
        .owe
        .ok_or_else(|| CliError::Usage("`owe` needs an [owe] block in the config".into()))?;
    let pop = population(cfg)?;
    let r = compute_owe(&cfg.tech, &cfg.supply, &cfg.policy, o.w_min_new, &pop)?;
    let mut t = Table::new(&["owe", "pct_demployment", "pct_dwage", "affected_employment_share"]);
    t.push(vec![
        fmt_f64(r.owe),
        fmt_f64(r.pct_demployment),
        fmt_f64(r.pct_dwage),
        fmt_f64(r.affected_employment_share),
    ]);
    Ok(vec![("owe.csv", t)])
}

fn threshold(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let (a_lo, a_hi) = match cfg.threshold {
        Some(t) => (t.a_lo, t.a_hi),
        None => {
            let pop = population(cfg)?;
            let lo = pop[0];
            let hi = pop[pop.len() - 1];
            if lo >= hi {
                return Err(CliError::Usage(
                    "`threshold` needs a [threshold] range or a population with k >= 2".into(),
                ));
            }
            (lo, hi)
        }
    };
    let th = find_threshold(&cfg.tech, &cfg.supply, &cfg.policy, a_lo, a_hi)?;
    let (kind, value) = match th {
        Threshold::Interior(a) => ("interior", fmt_f64(a)),
        Threshold::AllFormal => ("all_formal", String::new()),
        Threshold::AllInformal => ("all_informal", String::new()),
    };
    let mut t = Table::new(&["a_lo", "a_hi", "kind", "threshold_a"]);
    t.push(vec![fmt_f64(a_lo), fmt_f64(a_hi), kind.to_string(), value]);
    Ok(vec![("threshold.csv", t)])
}

fn classify(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let pop = population(cfg)?;
    let run = simulate_economy(&cfg.tech, &cfg.supply, &cfg.policy, &pop)?;
    let mut firms = Table::new(&["a", "status", "taxonomy"]);
    for r in &run.firms {
        firms.push(vec![fmt_f64(r.a), r.decision.status.to_string(), r.taxonomy.to_string()]);
    }
    let k = run.firms.len();
    let informal = run.firms.iter().filter(|r| r.decision.status == Status::Informal).count();
    let mut summary = Table::new(&["taxonomy", "count", "share_of_firms", "share_of_informal"]);
    for label in FirmTaxonomy::ALL {
        let n = run.firms.iter().filter(|r| r.taxonomy == label).count();
        let of_informal = if label == FirmTaxonomy::FormalChooser || informal == 0 {
            String::new()
        } else {
            fmt_f64(n as f64 / informal as f64)
        };
        summary.push(vec![
            label.to_string(),
            n.to_string(),
            fmt_f64(n as f64 / k as f64),
            of_informal,
        ]);
    }
    Ok(vec![("taxonomy.csv", firms), ("taxonomy_summary.csv", summary)])
}

/// Reads a study file with header `effect,se`.
pub fn read_studies(path: &Path) -> Result<Vec<StudyEstimate>, CliError> {
    let t = read_csv(path)?;
    let p = path.display().to_string();
    if t.header != ["effect", "se"] {
        return Err(CsvError::Format {
            path: p,
            msg: format!("expected header `effect,se`, got `{}`", t.header.join(",")),
        }
        .into());
    }
    t.rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let num = |s: &str| {
                s.trim().parse::<f64>().map_err(|e| CsvError::Format {
                    path: p.clone(),
                    msg: format!("row {}: `{s}`: {e}", i + 1),
                })
            };
            Ok(StudyEstimate::new(num(&row[0])?, num(&row[1])?)?)
        })
        .collect()
}

fn meta_outputs(studies: &[StudyEstimate]) -> Result<Outputs, CliError> {
    let r = fat_pet(studies)?;
    let naive = naive_pooled_mean(studies)?;
    let mut m = Table::new(&["pet", "fat", "se_pet", "se_fat", "n", "naive_mean"]);
    m.push(vec![
        fmt_f64(r.pet),
        fmt_f64(r.fat),
        fmt_f64(r.se_pet),
        fmt_f64(r.se_fat),
        r.n.to_string(),
        fmt_f64(naive),
    ]);
    let mut f = Table::new(&["effect", "precision"]);
    for (e, p) in funnel_points(studies) {
        f.push(vec![fmt_f64(e), fmt_f64(p)]);
    }
    Ok(vec![("metareg.csv", m), ("funnel.csv", f)])
}

fn studies_table(studies: &[StudyEstimate]) -> Table {
    let mut t = Table::new(&["effect", "se"]);
    for s in studies {
        t.push(vec![fmt_f64(s.effect), fmt_f64(s.se)]);
    }
    t
}

fn metareg(cfg: &RunConfig, config_dir: &Path) -> Result<Outputs, CliError> {
    let block = cfg.metareg.clone().unwrap_or_default();
    match (&block.input, &block.simulate) {
        (Some(input), _) => meta_outputs(&read_studies(&config_dir.join(input))?),
        (None, sim) => {
            let sim = sim.unwrap_or_default();
            let studies = simulate_studies(&sim.literature(), cfg.seed)?;
            let mut out = vec![("studies.csv", studies_table(&studies))];
            out.extend(meta_outputs(&studies)?);
            Ok(out)
        }
    }
}

fn biasdemo(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let sim: SimulateConfig = cfg
        .metareg
        .as_ref()
        .and_then(|m| m.simulate)
        .unwrap_or_default();
    let studies = simulate_studies(&sim.literature(), cfg.seed)?;
    let mut out = vec![("studies.csv", studies_table(&studies))];
    out.extend(meta_outputs(&studies)?);
    Ok(out)
}
