//! Publication-bias toolkit: funnel data, precision-weighted pooling, the
//! FAT-PET meta-regression, and a seeded generator of selectively published
//! study literatures.

mod rng;

pub use rng::SplitMix64;

use crate::error::{domain, Error, Result};

/// Critical |t| for two-sided 5% significance.
pub const SIGNIFICANCE_T: f64 = 1.96;

/// One reported estimate and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyEstimate {
    pub effect: f64,
    pub se: f64,
}

impl StudyEstimate {
    pub fn new(effect: f64, se: f64) -> Result<Self> {
        if !(se > 0.0 && se.is_finite()) {
            return Err(domain(format!("standard error must be positive, got {se}")));
        }
        if !effect.is_finite() {
            return Err(domain(format!("effect must be finite, got {effect}")));
        }
        Ok(Self { effect, se })
    }

    pub fn precision(&self) -> f64 {
        1.0 / self.se
    }

    pub fn t_stat(&self) -> f64 {
        self.effect / self.se
    }
}

/// Coefficients of a two-variable weighted least-squares fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WlsFit {
    pub intercept: f64,
    pub slope: f64,
    pub se_intercept: f64,
    pub se_slope: f64,
}

/// Weighted least squares of `ys` on `[1, xs]`.
///
/// Coefficient variances are `s^2 (X'WX)^-1` with
/// `s^2 = sum w r^2 / (n - 2)`.
pub fn wls_fit(xs: &[f64], ys: &[f64], weights: &[f64]) -> Result<WlsFit> {
    let n = xs.len();
    if ys.len() != n || weights.len() != n {
        return Err(domain(format!(
            "length mismatch: {} xs, {} ys, {} weights",
            n,
            ys.len(),
            weights.len()
        )));
    }
    if n < 3 {
        return Err(domain(format!("need at least 3 observations, got {n}")));
    }
    if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
        return Err(domain("weights must be finite and >= 0"));
    }
    let sw: f64 = weights.iter().sum();
    if sw <= 0.0 {
        return Err(domain("weights are all zero"));
    }
    let x_bar = weights.iter().zip(xs).map(|(w, x)| w * x).sum::<f64>() / sw;
    let y_bar = weights.iter().zip(ys).map(|(w, y)| w * y).sum::<f64>() / sw;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..n {
        let dx = xs[i] - x_bar;
        sxx += weights[i] * dx * dx;
        sxy += weights[i] * dx * (ys[i] - y_bar);
    }
    if sxx <= f64::EPSILON * sw * x_bar.abs().max(1.0).powi(2) {
        return Err(Error::Singular("all regressor values are equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = y_bar - slope * x_bar;
    let ssr: f64 = (0..n)
        .map(|i| {
            let r = ys[i] - intercept - slope * xs[i];
            weights[i] * r * r
        })
        .sum();
    let s2 = ssr / (n as f64 - 2.0);
    Ok(WlsFit {
        intercept,
        slope,
        se_intercept: (s2 * (1.0 / sw + x_bar * x_bar / sxx)).sqrt(),
        se_slope: (s2 / sxx).sqrt(),
    })
}

/// FAT-PET coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FatPetResult {
    /// Bias-corrected effect (intercept).
    pub pet: f64,
    /// Funnel asymmetry (slope on the standard error).
    pub fat: f64,
    pub se_pet: f64,
    pub se_fat: f64,
    pub n: usize,
}

fn check_identified(studies: &[StudyEstimate]) -> Result<()> {
    if studies.len() < 3 {
        return Err(domain(format!("FAT-PET needs at least 3 studies, got {}", studies.len())));
    }
    let first = studies[0].se;
    if studies.iter().all(|s| s.se == first) {
        return Err(Error::FatUnidentified(first));
    }
    Ok(())
}

/// Regresses effects on standard errors with weights `1/se^2`; the
/// intercept is the PET, the slope the FAT.
pub fn fat_pet(studies: &[StudyEstimate]) -> Result<FatPetResult> {
    check_identified(studies)?;
    let xs: Vec<f64> = studies.iter().map(|s| s.se).collect();
    let ys: Vec<f64> = studies.iter().map(|s| s.effect).collect();
    let ws: Vec<f64> = studies.iter().map(|s| 1.0 / (s.se * s.se)).collect();
    let fit = wls_fit(&xs, &ys, &ws)?;
    Ok(FatPetResult {
        pet: fit.intercept,
        fat: fit.slope,
        se_pet: fit.se_intercept,
        se_fat: fit.se_slope,
        n: studies.len(),
    })
}

/// The same regression written as OLS of `t = effect/se` on precision
/// `1/se`: the slope is the PET and the intercept the FAT.
pub fn fat_pet_precision_form(studies: &[StudyEstimate]) -> Result<FatPetResult> {
    check_identified(studies)?;
    let xs: Vec<f64> = studies.iter().map(StudyEstimate::precision).collect();
    let ys: Vec<f64> = studies.iter().map(StudyEstimate::t_stat).collect();
    let ws = vec![1.0; studies.len()];
    let fit = wls_fit(&xs, &ys, &ws)?;
    Ok(FatPetResult {
        pet: fit.slope,
        fat: fit.intercept,
        se_pet: fit.se_slope,
        se_fat: fit.se_intercept,
        n: studies.len(),
    })
}

/// Precision-weighted mean of the effects.
pub fn naive_pooled_mean(studies: &[StudyEstimate]) -> Result<f64> {
    if studies.is_empty() {
        return Err(domain("pooled mean of zero studies"));
    }
    let (num, den) = studies.iter().fold((0.0, 0.0), |(n, d), s| {
        let w = 1.0 / (s.se * s.se);
        (n + w * s.effect, d + w)
    });
    Ok(num / den)
}

/// Funnel plot coordinates `(effect, precision)` in input order.
pub fn funnel_points(studies: &[StudyEstimate]) -> Vec<(f64, f64)> {
    studies.iter().map(|s| (s.effect, s.precision())).collect()
}

/// Which estimates get published for sure; the rest are published with
/// probability `p_keep`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CensorRule {
    None,
    /// Significant in either direction.
    TwoSidedSig { p_keep: f64 },
    /// Negative and significant.
    NegativeSig { p_keep: f64 },
}

impl CensorRule {
    fn passes(&self, effect: f64, se: f64) -> bool {
        let t = effect / se;
        match self {
            CensorRule::None => true,
            CensorRule::TwoSidedSig { .. } => t.abs() >= SIGNIFICANCE_T,
            CensorRule::NegativeSig { .. } => effect < 0.0 && t.abs() >= SIGNIFICANCE_T,
        }
    }

    fn p_keep(&self) -> f64 {
        match self {
            CensorRule::None => 1.0,
            CensorRule::TwoSidedSig { p_keep } | CensorRule::NegativeSig { p_keep } => *p_keep,
        }
    }
}

/// Parameters of a simulated literature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiteratureSpec {
    pub true_effect: f64,
    pub n: usize,
    pub se_lo: f64,
    pub se_hi: f64,
    pub rule: CensorRule,
}

impl LiteratureSpec {
    /// Zero true effect, 2000 studies with SE in [0.05, 0.5), and only
    /// negative significant results published for sure (10% of the rest).
    pub fn bias_demo() -> Self {
        Self {
            true_effect: 0.0,
            n: 2000,
            se_lo: 0.05,
            se_hi: 0.5,
            rule: CensorRule::NegativeSig { p_keep: 0.1 },
        }
    }
}

/// Draws studies until `n` are published.
///
/// Each attempt takes `se = se_lo + (se_hi - se_lo) u`, then a normal `z`
/// (two uniforms), with `effect = true_effect + se z`. Estimates failing the
/// rule consume one more uniform and are kept when it is below `p_keep`.
pub fn simulate_studies(spec: &LiteratureSpec, seed: u64) -> Result<Vec<StudyEstimate>> {
    let LiteratureSpec { true_effect, n, se_lo, se_hi, rule } = *spec;
    if !(se_lo > 0.0 && se_hi > se_lo && se_hi.is_finite()) {
        return Err(domain(format!("need 0 < se_lo < se_hi, got [{se_lo}, {se_hi}]")));
    }
    if n == 0 {
        return Err(domain("target study count must be >= 1"));
    }
    if !true_effect.is_finite() {
        return Err(domain("true effect must be finite"));
    }
    let p_keep = rule.p_keep();
    if !(0.0..=1.0).contains(&p_keep) {
        return Err(domain(format!("p_keep must lie in [0, 1], got {p_keep}")));
    }
    let max_attempts = 1000 * n as u64;
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0u64;
    while out.len() < n {
        if attempts >= max_attempts {
            return Err(Error::AttemptsExhausted { attempts, published: out.len(), target: n });
        }
        attempts += 1;
        let se = se_lo + (se_hi - se_lo) * rng.next_f64();
        let effect = true_effect + se * rng.next_normal();
        if rule.passes(effect, se) || rng.next_f64() < p_keep {
            out.push(StudyEstimate { effect, se });
        }
    }
    Ok(out)
}
