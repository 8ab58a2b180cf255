//! Functional forms and primitive parameters of the firm environment.
//!
//! Production is Cobb-Douglas in labor, `q = a * L^alpha`. Each firm faces an
//! isoelastic labor supply curve `w(L) = b * L^(1/eta)`, so the supply
//! elasticity is the constant `eta`. Informal firms are detected with
//! probability `min(1, (L / l_bar)^gamma)`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Production technology `f(L) = L^alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductionTech {
    pub alpha: f64,
}

impl ProductionTech {
    pub fn new(alpha: f64) -> Result<Self> {
        let tech = Self { alpha };
        tech.validate()?;
        Ok(tech)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(domain(format!("tech.alpha must lie in (0, 1), got {}", self.alpha)));
        }
        Ok(())
    }

    /// `f(L)`.
    #[inline]
    pub fn f(&self, l: f64) -> f64 {
        if l == 0.0 {
            0.0
        } else {
            l.powf(self.alpha)
        }
    }

    /// `f'(L)`; infinite at zero.
    #[inline]
    pub fn f_prime(&self, l: f64) -> f64 {
        self.alpha * l.powf(self.alpha - 1.0)
    }
}

/// Firm-level labor supply `w(L) = b * L^(1/eta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaborSupply {
    pub b: f64,
    pub eta: f64,
}

impl LaborSupply {
    pub fn new(b: f64, eta: f64) -> Result<Self> {
        let supply = Self { b, eta };
        supply.validate()?;
        Ok(supply)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.b > 0.0 && self.b.is_finite()) {
            return Err(domain(format!("supply.b must be positive, got {}", self.b)));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(domain(format!("supply.eta must be positive, got {}", self.eta)));
        }
        Ok(())
    }

    /// Markdown factor `eta / (1 + eta)`: the share of the (tax-inclusive)
    /// marginal product paid as a wage at an unconstrained optimum.
    pub fn markdown_factor(&self) -> f64 {
        self.eta / (1.0 + self.eta)
    }
}

/// Detection technology `pi_d(L) = min(1, (L / l_bar)^gamma)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectionTech {
    pub l_bar: f64,
    pub gamma: f64,
}

impl Default for DetectionTech {
    fn default() -> Self {
        Self { l_bar: 1.0, gamma: 1.0 }
    }
}

impl DetectionTech {
    pub fn new(l_bar: f64, gamma: f64) -> Result<Self> {
        let d = Self { l_bar, gamma };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.l_bar > 0.0 && self.l_bar.is_finite()) {
            return Err(domain(format!(
                "policy.detection.l_bar must be positive, got {}",
                self.l_bar
            )));
        }
        if !(self.gamma >= 1.0 && self.gamma.is_finite()) {
            return Err(domain(format!(
                "policy.detection.gamma must be >= 1, got {}",
                self.gamma
            )));
        }
        Ok(())
    }

    /// Derivative of the detection probability; zero above the cap and the
    /// left derivative at it.
    pub fn prob_prime(&self, l: f64) -> f64 {
        if l > self.l_bar {
            0.0
        } else {
            self.gamma / self.l_bar * (l / self.l_bar).powf(self.gamma - 1.0)
        }
    }
}

/// Policy and enforcement environment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Policy {
    /// Payroll tax rate on the formal wage bill.
    pub tau: f64,
    /// Fixed per-period cost of formality.
    pub c_f: f64,
    /// Minimum wage; zero means no minimum wage.
    pub w_min: f64,
    /// Fine paid when an informal firm is detected.
    pub phi: f64,
    /// Productivity loss of operating informally.
    pub delta: f64,
    pub detection: DetectionTech,
}

impl Default for Policy {
    fn default() -> Self {
        Self {
            tau: 0.0,
            c_f: 0.0,
            w_min: 0.0,
            phi: 0.0,
            delta: 0.0,
            detection: DetectionTech::default(),
        }
    }
}

impl Policy {
    pub fn validate(&self) -> Result<()> {
        let nonneg = [
            ("policy.tau", self.tau),
            ("policy.c_f", self.c_f),
            ("policy.w_min", self.w_min),
            ("policy.phi", self.phi),
        ];
        for (key, v) in nonneg {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(domain(format!("{key} must be finite and >= 0, got {v}")));
            }
        }
        if !(self.delta >= 0.0 && self.delta < 1.0) {
            return Err(domain(format!("policy.delta must lie in [0, 1), got {}", self.delta)));
        }
        self.detection.validate()
    }
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite and >= 0, got {v}")))
    }
}

/// Output `a * L^alpha`.
pub fn production_output(tech: &ProductionTech, a: f64, l: f64) -> Result<f64> {
    check_nonneg("productivity", a)?;
    check_nonneg("employment", l)?;
    Ok(a * tech.f(l))
}

/// Marginal revenue product of labor `a * alpha * L^(alpha - 1)`.
pub fn marginal_product(tech: &ProductionTech, a: f64, l: f64) -> Result<f64> {
    check_nonneg("productivity", a)?;
    if !(l > 0.0 && l.is_finite()) {
        return Err(domain(format!(
            "marginal product requires positive employment, got {l}"
        )));
    }
    Ok(a * tech.f_prime(l))
}

/// Wage needed to attract `l` workers.
pub fn supply_wage(s: &LaborSupply, l: f64) -> Result<f64> {
    check_nonneg("employment", l)?;
    Ok(wage_at(s, l))
}

/// Workers supplied at wage `w`.
pub fn supply_employment(s: &LaborSupply, w: f64) -> Result<f64> {
    check_nonneg("wage", w)?;
    Ok(employment_at(s, w))
}

pub fn detection_prob(d: &DetectionTech, l: f64) -> Result<f64> {
    check_nonneg("employment", l)?;
    Ok(prob_at(d, l))
}

// Unchecked kernels shared by the solvers.

#[inline]
pub(crate) fn wage_at(s: &LaborSupply, l: f64) -> f64 {
    if l == 0.0 {
        0.0
    } else {
        s.b * l.powf(1.0 / s.eta)
    }
}

#[inline]
pub(crate) fn employment_at(s: &LaborSupply, w: f64) -> f64 {
    if w == 0.0 {
        0.0
    } else {
        (w / s.b).powf(s.eta)
    }
}

#[inline]
pub(crate) fn prob_at(d: &DetectionTech, l: f64) -> f64 {
    if l >= d.l_bar {
        1.0
    } else if l <= 0.0 {
        0.0
    } else {
        (l / d.l_bar).powf(d.gamma)
    }
}
