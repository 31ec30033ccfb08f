//! Channel gains and per-slot rate bounds.
//!
//! All gains are divided by the receiver noise power, so `gamma0` stands in for
//! the reference gain and the noise never shows up explicitly.

use crate::math;
use crate::model::{Scenario, Vec2};
use crate::{Error, Result, EULER_GAMMA};

/// `e^{-EULER_GAMMA}`, the Jensen penalty on the destination's faded link.
pub fn jensen_factor() -> f64 {
    math::exp(-EULER_GAMMA)
}

/// Noise-normalized gains seen in one slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotGains {
    /// UAV -> D line-of-sight gain.
    pub h_d_norm: f64,
    /// UAV -> E line-of-sight gain.
    pub h_e_norm: f64,
    /// Mean S -> D ground gain.
    pub g_d_mean: f64,
    /// Mean S -> E ground gain.
    pub g_e_mean: f64,
}

impl SlotGains {
    pub fn at(s: &Scenario, q: Vec2) -> Self {
        SlotGains {
            h_d_norm: uav_gain(s, q, s.wd()),
            h_e_norm: uav_gain(s, q, s.we()),
            g_d_mean: ground_gain_mean(s, s.wd()),
            g_e_mean: ground_gain_mean(s, s.we()),
        }
    }
}

/// Free-space gain from a UAV above `q` to a ground node at `w`.
#[inline]
pub fn uav_gain(s: &Scenario, q: Vec2, w: Vec2) -> f64 {
    let h = s.altitude();
    s.gamma0() / ((q - w).norm_sq() + h * h)
}

/// Mean gain of the Rayleigh-faded ground link from S to `w`.
#[inline]
pub fn ground_gain_mean(s: &Scenario, w: Vec2) -> f64 {
    s.gamma0() * math::powf(s.ws().dist(w), -s.pathloss_exp())
}

/// Lower bound on the destination's ergodic rate in one slot.
pub fn rate_lb_dest(s: &Scenario, q: Vec2, p_s: f64, p_u: f64) -> f64 {
    let snr = jensen_factor() * ground_gain_mean(s, s.wd()) * p_s;
    let interference = uav_gain(s, q, s.wd()) * p_u;
    math::log2_1p(snr / (interference + 1.0))
}

/// Upper bound on the eavesdropper's ergodic rate in one slot.
pub fn rate_ub_eve(s: &Scenario, q: Vec2, p_s: f64, p_u: f64) -> f64 {
    let snr = ground_gain_mean(s, s.we()) * p_s;
    let interference = uav_gain(s, q, s.we()) * p_u;
    math::log2_1p(snr / (interference + 1.0))
}

/// `E[ln X]` for `X ~ Exp(lambda)`, i.e. `-ln(lambda) - EULER_GAMMA`.
pub fn expected_ln_exponential(lambda: f64) -> Result<f64> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::NonPositiveRate(lambda));
    }
    Ok(-math::ln(lambda) - EULER_GAMMA)
}
