use serde::{Deserialize, Serialize};

use super::{
    max_distance, sms_threshold, Aggregate, ModelError, ModelParameters, NrsScore, Position, Region, ENTRY_MAX,
    NRS_SCALE, REGION_MIDLINE,
};

/// Maps a 0..=4 rating onto the field: `2.5 * value`.
pub fn scale_nrs(score: NrsScore) -> f64 {
    NRS_SCALE * f64::from(score.value())
}

/// Elapsed calendar days expressed in reference periods.
pub fn dimensionless_time(delta_days: u32, params: &ModelParameters) -> f64 {
    f64::from(delta_days) / f64::from(params.t_ref_days)
}

/// Exponential-saturation recency weight `base * (1 - e^(-rate * tau))`.
pub fn recency_weight(tau: f64, base: f64, rate: f64) -> f64 {
    base * -(-rate * tau).exp_m1()
}

/// Consensus momentum for one axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Momentum {
    /// Committee volume credit `min(1, n / n_ref)`.
    pub n_boost: f64,
    /// Un-amplified momentum, capped at 1.
    pub raw: f64,
    /// Reversal amplifier (1 unless a full committee reversed direction).
    pub rho: f64,
    /// `rho * raw`.
    pub kappa: f64,
}

/// Momentum from change magnitude, sustained agreement `k` and committee
/// size `n`, amplified when a full committee reverses direction.
pub fn consensus_momentum(delta_abs: f64, k: u32, n: u32, reversal: bool, params: &ModelParameters) -> Momentum {
    let k_ref = f64::from(params.k_ref);
    let k = f64::from(k);
    let n_boost = volume_credit(n, params);
    let magnitude = params.delta * (delta_abs / 10.0) * ((k + 1.0) / k_ref);
    let persistence = params.eta * (k / k_ref);
    let volume = params.phi * n_boost;
    let raw = (magnitude + persistence + volume).min(1.0);
    let rho = if reversal && n >= params.n_ref {
        1.0 + params.psi * n_boost
    } else {
        1.0
    };
    Momentum {
        n_boost,
        raw,
        rho,
        kappa: rho * raw,
    }
}

fn volume_credit(n: u32, params: &ModelParameters) -> f64 {
    (f64::from(n) / f64::from(params.n_ref)).min(1.0)
}

/// Ceiling on the effective update weight for a committee of `n`.
pub fn committee_cap(n: u32, params: &ModelParameters) -> f64 {
    params.alpha_min + (1.0 - params.alpha_min) * volume_credit(n, params)
}

/// Recency weight plus momentum per axis, each limited by the committee cap.
pub fn effective_weights(alpha_tau: f64, beta_tau: f64, kappa_x: f64, kappa_y: f64, n_cap: f64) -> (f64, f64) {
    (n_cap.min(alpha_tau + kappa_x), n_cap.min(beta_tau + kappa_y))
}

/// Growth potential after `tau` periods of unfloored exponential decay.
pub fn decayed_growth(y: f64, tau: f64, params: &ModelParameters) -> f64 {
    y * (-params.mu * tau).exp()
}

/// Blends the current position toward the committee aggregate.
///
/// Intensity moves directly; growth potential is decayed first, blended, then
/// floored at `y_min`. For weights in [0, 1] the result is a convex
/// combination, so leaving the field signals an invalid weight and is
/// reported, not clamped.
pub fn update_position(
    pos: Position,
    agg: Aggregate,
    alpha_eff: f64,
    beta_eff: f64,
    tau: f64,
    params: &ModelParameters,
) -> Result<Position, ModelError> {
    let x = blend(pos.x(), agg.x_new, alpha_eff);
    let y_decay = decayed_growth(pos.y(), tau, params);
    let y = blend(y_decay, agg.y_new, beta_eff).max(params.y_min);
    Position::new(x, y)
}

/// `from + w (to - from)`, kept on the segment when `w` is a proper weight;
/// at `w = 1` the raw expression can miss `to` by one ulp.
fn blend(from: f64, to: f64, w: f64) -> f64 {
    let v = from + w * (to - from);
    if (0.0..=1.0).contains(&w) {
        v.clamp(from.min(to), from.max(to))
    } else {
        v
    }
}

/// Pure decay used when a session brings no new assessment: `x` persists,
/// `y` decays toward the floor.
pub fn passive_decay(pos: Position, tau: f64, params: &ModelParameters) -> Position {
    let y = decayed_growth(pos.y(), tau, params).max(params.y_min);
    Position::new(pos.x(), y).expect("y_min < 10 and decay never grows y")
}

/// Euclidean distance from the origin.
pub fn distance(pos: Position) -> f64 {
    pos.x().hypot(pos.y())
}

/// Reporting metric `(d / sqrt(200)) * ln(1 + f)`.
pub fn session_severity(d: f64, frequency_count: u32) -> f64 {
    (d / max_distance()) * f64::from(frequency_count).ln_1p()
}

pub fn classify_region(pos: Position) -> Region {
    match (pos.x() >= REGION_MIDLINE, pos.y() >= REGION_MIDLINE) {
        (true, true) => Region::Owls,
        (true, false) => Region::LitFuses,
        (false, true) => Region::SleepingCats,
        (false, false) => Region::QuestionMarks,
    }
}

/// New signals must start inside `[0, 2.5] x [0, 2.5]`.
pub fn entry_eligible(agg: Aggregate) -> bool {
    agg.x_new <= ENTRY_MAX && agg.y_new <= ENTRY_MAX
}

pub fn escalation_active(d: f64) -> bool {
    d >= sms_threshold()
}

pub fn closure_eligible(d: f64, params: &ModelParameters) -> bool {
    d < params.d_close
}
