//! UAV jamming power block: one convexified step for `P_U`.
//!
//! Jamming lowers both the destination's and the eavesdropper's rate. The
//! destination term `log2(1 + c/(d p + 1))` is convex in `p`, so it is replaced by
//! its tangent at the current point `p^k`, which under-estimates it everywhere.
//! What remains per slot is
//!
//! ```text
//! A p - log2(1 + e/(f p + 1))        (A <= 0, concave in p)
//! ```
//!
//! and the average budget couples the slots. A multiplier `nu` on that budget
//! decouples them; each slot's stationarity condition is a quadratic in `f p`
//! and `nu` is bisected until the budget holds.

use alloc::vec::Vec;

use crate::channel::{ground_gain_mean, jensen_factor, uav_gain};
use crate::math::{self, LN_2};
use crate::model::{Scenario, Trajectory};
use crate::{Error, Result};

/// Per-slot coefficients of the jamming-power step, linearized at `anchor`.
#[derive(Debug, Clone, PartialEq)]
pub struct P5Coefficients {
    /// Destination SNR numerator, `e^-gamma * g_D * P_S[n]`.
    pub c: Vec<f64>,
    /// UAV -> D gain.
    pub d: Vec<f64>,
    /// Eavesdropper SNR numerator, `g_E * P_S[n]`.
    pub e: Vec<f64>,
    /// UAV -> E gain.
    pub f: Vec<f64>,
    /// Tangent slope of the destination term at the anchor.
    pub a_lin: Vec<f64>,
    /// Destination term at the anchor.
    pub b_lin: Vec<f64>,
    /// Jamming powers the tangent is taken at.
    pub anchor: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UavPowerSolution {
    pub p_u: Vec<f64>,
    /// Multiplier of the average-power constraint.
    pub nu: f64,
    /// Dual bound minus primal value; certifies optimality of `p_u`.
    pub dual_gap: f64,
}

/// Tangent `(A, B)` of `log2(1 + c/(d p + 1))` at `p = anchor`.
pub fn tangent(c: f64, d: f64, anchor: f64) -> (f64, f64) {
    let dp1 = d * anchor + 1.0;
    let slope = -c * d / (LN_2 * dp1 * (dp1 + c));
    (slope, math::log2_1p(c / dp1))
}

pub fn p5_coefficients(s: &Scenario, t: &Trajectory, p_s: &[f64], p_u_k: &[f64]) -> Result<P5Coefficients> {
    let n = s.n_slots();
    for (what, len) in [("trajectory", t.len()), ("source power", p_s.len()), ("UAV power", p_u_k.len())] {
        if len != n {
            return Err(Error::LengthMismatch { what, expected: n, found: len });
        }
    }
    let c0 = jensen_factor() * ground_gain_mean(s, s.wd());
    let e0 = ground_gain_mean(s, s.we());
    let mut coef = P5Coefficients {
        c: Vec::with_capacity(n),
        d: Vec::with_capacity(n),
        e: Vec::with_capacity(n),
        f: Vec::with_capacity(n),
        a_lin: Vec::with_capacity(n),
        b_lin: Vec::with_capacity(n),
        anchor: p_u_k.to_vec(),
    };
    for ((&q, &ps), &pk) in t.points().iter().zip(p_s).zip(p_u_k) {
        let (c, d) = (c0 * ps, uav_gain(s, q, s.wd()));
        let (a, b) = tangent(c, d, pk);
        coef.c.push(c);
        coef.d.push(d);
        coef.e.push(e0 * ps);
        coef.f.push(uav_gain(s, q, s.we()));
        coef.a_lin.push(a);
        coef.b_lin.push(b);
    }
    Ok(coef)
}

/// Jamming-block objective before linearization: sum of destination minus
/// eavesdropper rate bounds.
pub fn p4_objective(coef: &P5Coefficients, p_u: &[f64]) -> f64 {
    (0..p_u.len())
        .map(|n| {
            let p = p_u[n];
            math::log2_1p(coef.c[n] / (coef.d[n] * p + 1.0)) - math::log2_1p(coef.e[n] / (coef.f[n] * p + 1.0))
        })
        .sum()
}

fn slot_value(a: f64, e: f64, f: f64, p: f64) -> f64 {
    a * p - math::log2_1p(e / (f * p + 1.0))
}

/// Linearized objective: `sum A p - log2(1 + e/(f p + 1))`.
pub fn p5_objective(coef: &P5Coefficients, p_u: &[f64]) -> f64 {
    (0..p_u.len()).map(|n| slot_value(coef.a_lin[n], coef.e[n], coef.f[n], p_u[n])).sum()
}

/// Maximizer on `[0, peak]` of `A p - log2(1 + e/(f p + 1)) - nu p`.
pub fn slot_power(a: f64, e: f64, f: f64, nu: f64, peak: f64) -> f64 {
    if e <= 0.0 {
        return 0.0;
    }
    let slope = nu - a;
    if slope <= 0.0 {
        return peak;
    }
    // (f p + 1)(f p + e + 1) = e f / (ln2 (nu - A))
    let k = e * f / (LN_2 * slope);
    if k <= e + 1.0 {
        return 0.0;
    }
    let y = 2.0 * (k - e - 1.0) / ((e + 2.0) + math::sqrt(e * e + 4.0 * k));
    (y / f).min(peak)
}

fn powers_at(coef: &P5Coefficients, nu: f64, peak: f64) -> Vec<f64> {
    (0..coef.e.len()).map(|n| slot_power(coef.a_lin[n], coef.e[n], coef.f[n], nu, peak)).collect()
}

fn total_power(coef: &P5Coefficients, nu: f64, peak: f64) -> f64 {
    (0..coef.e.len()).map(|n| slot_power(coef.a_lin[n], coef.e[n], coef.f[n], nu, peak)).sum()
}

const MAX_BISECTIONS: usize = 4096;

/// Solves the linearized jamming-power problem exactly.
pub fn solve_p5(s: &Scenario, coef: &P5Coefficients) -> UavPowerSolution {
    let peak = s.p_u_peak();
    let n = coef.e.len();
    let budget = s.p_u_avg() * n as f64;

    let nu = if total_power(coef, 0.0, peak) <= budget {
        0.0
    } else {
        let (mut lo, mut hi) = (0.0, 1.0);
        while total_power(coef, hi, peak) > budget {
            lo = hi;
            hi *= 2.0;
        }
        for _ in 0..MAX_BISECTIONS {
            if hi - lo < 1e-12 * f64::max(1.0, hi) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if total_power(coef, mid, peak) > budget {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    };
    let p_u = powers_at(coef, nu, peak);
    let used: f64 = p_u.iter().sum();
    UavPowerSolution { dual_gap: nu * (budget - used), p_u, nu }
}
