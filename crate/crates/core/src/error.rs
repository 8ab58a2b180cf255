use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the model, the economy layer and the meta-regression toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The profit gap between formality and informality changes sign more
    /// than once (or in the wrong direction) on the scan grid.
    #[error("non-monotone formality crossing; sign-change brackets: {}", fmt_brackets(.brackets))]
    NonMonotoneCrossing { brackets: Vec<(f64, f64)> },

    #[error("no firm pays a baseline wage below the new minimum wage")]
    NoAffectedWorkers,

    #[error("own-wage elasticity undefined: average wage of affected workers did not change")]
    UndefinedOwe,

    #[error("singular regression design: {0}")]
    Singular(String),

    #[error("FAT unidentified: all standard errors are equal ({0})")]
    FatUnidentified(f64),

    #[error("censoring rule too restrictive: {published} of {target} studies published after {attempts} draws")]
    AttemptsExhausted {
        attempts: u64,
        published: usize,
        target: usize,
    },

    #[error("optimizer failure: {0}")]
    Optimizer(String),

    #[error("unknown sweep parameter `{0}` (expected one of tau, c_f, w_min, phi, l_bar, gamma, delta)")]
    UnknownParameter(String),
}

fn fmt_brackets(brackets: &[(f64, f64)]) -> String {
    brackets
        .iter()
        .map(|(lo, hi)| format!("[{lo}, {hi}]"))
        .collect::<Vec<_>>()
        .join(", ")
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
