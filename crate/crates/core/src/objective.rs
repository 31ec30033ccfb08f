//! Surrogate secrecy rate and its Monte-Carlo counterpart.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::channel::{self, ground_gain_mean, uav_gain};
use crate::math;
use crate::model::{ensure_feasible, PowerSchedule, Scenario, Trajectory};
use crate::{Error, Result};

/// Average over slots of `R_D^lo[n] - R_E^up[n]`, without clipping at zero.
pub fn surrogate_objective(s: &Scenario, t: &Trajectory, p: &PowerSchedule) -> Result<f64> {
    ensure_feasible(s, t, p)?;
    Ok(surrogate_unchecked(s, t, p))
}

pub(crate) fn surrogate_unchecked(s: &Scenario, t: &Trajectory, p: &PowerSchedule) -> f64 {
    let sum: f64 = t
        .points()
        .iter()
        .zip(p.p_s.iter().zip(&p.p_u))
        .map(|(&q, (&ps, &pu))| channel::rate_lb_dest(s, q, ps, pu) - channel::rate_ub_eve(s, q, ps, pu))
        .sum();
    sum / t.len() as f64
}

/// Standard errors of the two aggregate Monte-Carlo estimates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StdErrors {
    pub expectation_form: f64,
    pub realization_form: f64,
}

/// Monte-Carlo evaluation of a design next to its analytic surrogate.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SecrecyReport {
    pub surrogate_rate: f64,
    /// `mean_n [E R_D[n] - E R_E[n]]^+`.
    pub mc_rate_expectation_form: f64,
    /// `mean_n E[(R_D[n] - R_E[n])^+]`, clipping each fading realization.
    pub mc_rate_realization_form: f64,
    pub std_errors: StdErrors,
    /// Estimated `E R_D[n]` per slot.
    pub slot_rate_dest: Vec<f64>,
    /// Estimated `E R_E[n]` per slot.
    pub slot_rate_eve: Vec<f64>,
    pub slot_se_dest: Vec<f64>,
    pub slot_se_eve: Vec<f64>,
    pub samples: u64,
    pub seed: u64,
}

/// Count, mean and centred sum of squares, merged block by block.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    /// Folds in a block of samples: two-pass moments of the block, then the
    /// pairwise combination of Chan et al.
    fn push_block(&mut self, xs: &[f64]) {
        if xs.is_empty() {
            return;
        }
        let nb = xs.len() as f64;
        let mean_b = xs.iter().sum::<f64>() / nb;
        let m2_b: f64 = xs.iter().map(|&x| (x - mean_b) * (x - mean_b)).sum();
        let na = self.n as f64;
        let total = na + nb;
        let delta = mean_b - self.mean;
        self.mean += delta * nb / total;
        self.m2 += m2_b + delta * delta * na * nb / total;
        self.n += xs.len() as u64;
    }

    fn std_error(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        math::sqrt(self.m2 / (self.n - 1) as f64 / self.n as f64)
    }
}

/// Unit-mean exponential variates from an independent ChaCha stream.
struct ExpStream(ChaCha8Rng);

impl ExpStream {
    fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        ExpStream(rng)
    }

    #[inline]
    fn sample(&mut self) -> f64 {
        // uniform on (0, 1], so the logarithm is finite
        let u = ((self.0.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
        -math::ln(u)
    }
}

struct SlotEstimate {
    dest: Moments,
    eve: Moments,
    clipped: Moments,
}

const BLOCK: usize = 1024;

fn estimate_slot(snr_d: f64, snr_e: f64, samples: u64, seed: u64, slot: u64) -> SlotEstimate {
    let mut est = SlotEstimate { dest: Moments::default(), eve: Moments::default(), clipped: Moments::default() };
    let mut xi_d = ExpStream::new(seed, 2 * slot);
    let mut xi_e = ExpStream::new(seed, 2 * slot + 1);
    let (mut rd, mut re, mut rc) = ([0.0; BLOCK], [0.0; BLOCK], [0.0; BLOCK]);
    let mut left = samples;
    while left > 0 {
        let len = left.min(BLOCK as u64) as usize;
        for i in 0..len {
            rd[i] = math::log2_1p(xi_d.sample() * snr_d);
            re[i] = math::log2_1p(xi_e.sample() * snr_e);
            rc[i] = f64::max(rd[i] - re[i], 0.0);
        }
        est.dest.push_block(&rd[..len]);
        est.eve.push_block(&re[..len]);
        est.clipped.push_block(&rc[..len]);
        left -= len as u64;
    }
    est
}

/// Estimates the ergodic secrecy rate of a design under unit-mean Rayleigh
/// fading on both ground links.
///
/// Slot `n` draws D's fading from ChaCha stream `2n` and E's from `2n + 1`, so
/// the result depends only on `seed` and `samples`.
pub fn mc_secrecy_rate(
    s: &Scenario,
    t: &Trajectory,
    p: &PowerSchedule,
    samples: u64,
    seed: u64,
) -> Result<SecrecyReport> {
    if samples == 0 {
        return Err(Error::InvalidField { field: "samples", reason: "must be at least 1" });
    }
    ensure_feasible(s, t, p)?;
    let n = t.len();
    let g_d = ground_gain_mean(s, s.wd());
    let g_e = ground_gain_mean(s, s.we());

    let mut report = SecrecyReport {
        surrogate_rate: surrogate_unchecked(s, t, p),
        mc_rate_expectation_form: 0.0,
        mc_rate_realization_form: 0.0,
        std_errors: StdErrors::default(),
        slot_rate_dest: Vec::with_capacity(n),
        slot_rate_eve: Vec::with_capacity(n),
        slot_se_dest: Vec::with_capacity(n),
        slot_se_eve: Vec::with_capacity(n),
        samples,
        seed,
    };
    let (mut var_exp, mut var_real) = (0.0, 0.0);
    for (slot, (&q, (&ps, &pu))) in t.points().iter().zip(p.p_s.iter().zip(&p.p_u)).enumerate() {
        let snr_d = g_d * ps / (uav_gain(s, q, s.wd()) * pu + 1.0);
        let snr_e = g_e * ps / (uav_gain(s, q, s.we()) * pu + 1.0);
        let est = estimate_slot(snr_d, snr_e, samples, seed, slot as u64);
        let (se_d, se_e, se_c) = (est.dest.std_error(), est.eve.std_error(), est.clipped.std_error());

        report.mc_rate_expectation_form += f64::max(est.dest.mean - est.eve.mean, 0.0);
        report.mc_rate_realization_form += est.clipped.mean;
        var_exp += se_d * se_d + se_e * se_e;
        var_real += se_c * se_c;
        report.slot_rate_dest.push(est.dest.mean);
        report.slot_rate_eve.push(est.eve.mean);
        report.slot_se_dest.push(se_d);
        report.slot_se_eve.push(se_e);
    }
    let nf = n as f64;
    report.mc_rate_expectation_form /= nf;
    report.mc_rate_realization_form /= nf;
    report.std_errors =
        StdErrors { expectation_form: math::sqrt(var_exp) / nf, realization_form: math::sqrt(var_real) / nf };
    Ok(report)
}
