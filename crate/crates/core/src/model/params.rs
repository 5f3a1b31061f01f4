use serde::{Deserialize, Serialize};

use super::{sms_threshold, ModelError};

/// Every tunable constant of the update model.
///
/// Field names double as the configuration-file keys. Defaults are the
/// biweekly deployment values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelParameters {
    /// Reference period in days; `tau = elapsed_days / t_ref_days`.
    pub t_ref_days: u32,
    /// Ceiling of the recency weight on the intensity axis.
    pub alpha_base: f64,
    /// Ceiling of the recency weight on the growth axis.
    pub beta_base: f64,
    /// Saturation rate of the intensity recency weight.
    pub lambda: f64,
    /// Saturation rate of the growth recency weight.
    pub nu: f64,
    /// Passive decay rate of growth potential, per reference period.
    pub mu: f64,
    /// Growth potential never decays below this floor while a signal is open.
    pub y_min: f64,
    /// Magnitude sensitivity of consensus momentum.
    pub delta: f64,
    /// Sustained-agreement sensitivity of consensus momentum.
    pub eta: f64,
    /// Committee-size sensitivity of consensus momentum.
    pub phi: f64,
    /// Reversal amplifier strength.
    pub psi: f64,
    /// Consecutive same-direction sessions for full momentum.
    pub k_ref: u32,
    /// Committee size for full volume effect.
    pub n_ref: u32,
    /// Effective-weight ceiling for a single assessor (before volume credit).
    pub alpha_min: f64,
    /// Closure requires distance from origin strictly below this.
    pub d_close: f64,
}

impl Default for ModelParameters {
    fn default() -> Self {
        Self {
            t_ref_days: 14,
            alpha_base: 0.90,
            beta_base: 0.90,
            lambda: 0.75,
            nu: 0.75,
            mu: 0.087,
            y_min: 0.50,
            delta: 0.50,
            eta: 0.30,
            phi: 0.30,
            psi: 0.50,
            k_ref: 5,
            n_ref: 5,
            alpha_min: 0.70,
            d_close: 1.0,
        }
    }
}

impl ModelParameters {
    /// Checks every parameter against its admissible range and reports the
    /// first offending key.
    pub fn validate(&self) -> Result<(), ModelError> {
        fn check(ok: bool, key: &'static str, value: f64, expected: &'static str) -> Result<(), ModelError> {
            if ok {
                Ok(())
            } else {
                Err(ModelError::InvalidParameter { key, value, expected })
            }
        }
        let unit = |v: f64| v > 0.0 && v <= 1.0;
        let positive = |v: f64| v.is_finite() && v > 0.0;
        let non_negative = |v: f64| v.is_finite() && v >= 0.0;

        check(
            self.t_ref_days > 0,
            "t_ref_days",
            f64::from(self.t_ref_days),
            "a positive whole number of days",
        )?;
        check(
            unit(self.alpha_base),
            "alpha_base",
            self.alpha_base,
            "a value in (0, 1]",
        )?;
        check(unit(self.beta_base), "beta_base", self.beta_base, "a value in (0, 1]")?;
        check(positive(self.lambda), "lambda", self.lambda, "a positive value")?;
        check(positive(self.nu), "nu", self.nu, "a positive value")?;
        check(positive(self.mu), "mu", self.mu, "a positive value")?;
        check(
            (0.0..10.0).contains(&self.y_min),
            "y_min",
            self.y_min,
            "a value in [0, 10)",
        )?;
        check(non_negative(self.delta), "delta", self.delta, "a non-negative value")?;
        check(non_negative(self.eta), "eta", self.eta, "a non-negative value")?;
        check(non_negative(self.phi), "phi", self.phi, "a non-negative value")?;
        check(non_negative(self.psi), "psi", self.psi, "a non-negative value")?;
        check(
            self.k_ref > 0,
            "k_ref",
            f64::from(self.k_ref),
            "a positive whole number",
        )?;
        check(
            self.n_ref > 0,
            "n_ref",
            f64::from(self.n_ref),
            "a positive whole number",
        )?;
        check(unit(self.alpha_min), "alpha_min", self.alpha_min, "a value in (0, 1]")?;
        check(
            positive(self.d_close) && self.d_close < sms_threshold(),
            "d_close",
            self.d_close,
            "a positive value below sqrt(50)",
        )?;
        Ok(())
    }
}
