//! Source power block: optimal `P_S` for a fixed trajectory and jamming schedule.
//!
//! Per slot the objective is `log2(1 + a x) - log2(1 + b x)`, which is concave
//! in `x >= 0` whenever `a > b` and non-positive otherwise. The average-power
//! budget is handled with a multiplier `mu` that is bisected until the budget
//! binds.

use alloc::vec::Vec;

use crate::channel::{ground_gain_mean, jensen_factor, uav_gain};
use crate::math::{self, LN_2};
use crate::model::{Scenario, Trajectory};
use crate::{Error, Result};

/// Effective per-watt SNRs of D (with the Jensen penalty) and E in every slot.
#[derive(Debug, Clone, PartialEq)]
pub struct P3Coefficients {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SourcePowerSolution {
    pub p_s: Vec<f64>,
    /// Multiplier of the average-power constraint; zero when it is slack.
    pub mu: f64,
}

pub fn p3_coefficients(s: &Scenario, t: &Trajectory, p_u: &[f64]) -> Result<P3Coefficients> {
    let n = s.n_slots();
    if t.len() != n {
        return Err(Error::LengthMismatch { what: "trajectory", expected: n, found: t.len() });
    }
    if p_u.len() != n {
        return Err(Error::LengthMismatch { what: "UAV power", expected: n, found: p_u.len() });
    }
    let a0 = jensen_factor() * ground_gain_mean(s, s.wd());
    let b0 = ground_gain_mean(s, s.we());
    let (a, b) = t
        .points()
        .iter()
        .zip(p_u)
        .map(|(&q, &pu)| (a0 / (uav_gain(s, q, s.wd()) * pu + 1.0), b0 / (uav_gain(s, q, s.we()) * pu + 1.0)))
        .unzip();
    Ok(P3Coefficients { a, b })
}

/// Sum over slots of `log2(1 + a x) - log2(1 + b x)`.
pub fn p3_objective(c: &P3Coefficients, p_s: &[f64]) -> f64 {
    c.a.iter().zip(&c.b).zip(p_s).map(|((&a, &b), &x)| math::log2_1p(a * x) - math::log2_1p(b * x)).sum()
}

/// Per-slot maximizer of `log2(1+ax) - log2(1+bx) - mu x` on `[0, peak]`.
///
/// The stationary point solves `ab x^2 + (a+b) x + 1 - (a-b)/(mu ln2) = 0`;
/// the larger root is evaluated in a cancellation-free form.
pub fn slot_power(a: f64, b: f64, mu: f64, peak: f64) -> f64 {
    if a <= b {
        return 0.0;
    }
    if mu <= 0.0 {
        return peak;
    }
    let k = (a - b) / (mu * LN_2) - 1.0;
    if k <= 0.0 {
        return 0.0;
    }
    let sum = a + b;
    let x = 2.0 * k / (sum + math::sqrt(sum * sum + 4.0 * a * b * k));
    x.min(peak)
}

fn total_power(c: &P3Coefficients, mu: f64, peak: f64) -> f64 {
    c.a.iter().zip(&c.b).map(|(&a, &b)| slot_power(a, b, mu, peak)).sum()
}

const MAX_BISECTIONS: usize = 4096;

/// Optimal source powers for the given coefficients.
pub fn solve_p3(s: &Scenario, c: &P3Coefficients) -> SourcePowerSolution {
    let peak = s.p_s_peak();
    let budget = s.p_s_avg() * c.a.len() as f64;
    let at = |mu: f64| -> Vec<f64> { c.a.iter().zip(&c.b).map(|(&a, &b)| slot_power(a, b, mu, peak)).collect() };

    if total_power(c, 0.0, peak) <= budget {
        return SourcePowerSolution { p_s: at(0.0), mu: 0.0 };
    }

    let (mut lo, mut hi) = (0.0, 1.0);
    while total_power(c, hi, peak) > budget {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..MAX_BISECTIONS {
        if hi - lo < 1e-12 * f64::max(1.0, hi) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if total_power(c, mid, peak) > budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    SourcePowerSolution { p_s: at(hi), mu: hi }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ScenarioParams, Vec2};
    use alloc::vec;
    use proptest::prelude::*;

    /// Closed form exactly as usually printed, for cross-checking `slot_power`.
    fn printed_root(a: f64, b: f64, mu: f64) -> f64 {
        let half = 1.0 / (2.0 * b) - 1.0 / (2.0 * a);
        math::sqrt(half * half + (1.0 / b - 1.0 / a) / (mu * LN_2)) - 1.0 / (2.0 * a) - 1.0 / (2.0 * b)
    }

    fn scenario(avg_w: f64, peak_w: f64, n: usize) -> Scenario {
        let mut p = ScenarioParams::reference(300.0);
        p.discretization = crate::model::Discretization::SlotCount(n);
        p.ps_avg_dbm = crate::model::watts_to_dbm(avg_w);
        p.ps_peak_dbm = crate::model::watts_to_dbm(peak_w);
        p.build().unwrap()
    }

    #[test]
    fn coefficients_without_jamming_are_constant() {
        let s = ScenarioParams::reference(300.0).build().unwrap();
        let t = Trajectory::straight_line(&s);
        let c = p3_coefficients(&s, &t, &vec![0.0; s.n_slots()]).unwrap();
        let a0 = jensen_factor() * ground_gain_mean(&s, s.wd());
        let b0 = ground_gain_mean(&s, s.we());
        assert!(c.a.iter().all(|&a| a == a0));
        assert!(c.b.iter().all(|&b| b == b0));
    }

    #[test]
    fn coefficients_above_eavesdropper() {
        let s = ScenarioParams::reference(300.0).build().unwrap();
        let t = Trajectory::new(vec![s.we(); s.n_slots()]);
        let c = p3_coefficients(&s, &t, &vec![0.01; s.n_slots()]).unwrap();
        let expect = ground_gain_mean(&s, s.we()) / (1e5 * 0.01 + 1.0);
        assert!((c.b[0] - expect).abs() <= 1e-12 * expect);

        // with D far away, heavy jamming above E wipes out b while a barely moves
        let mut far = s.params().clone();
        far.wd = Vec2::new(1e5, 0.0);
        let far = far.build().unwrap();
        let above_e = Trajectory::new(vec![far.we(); far.n_slots()]);
        let heavy = p3_coefficients(&far, &above_e, &vec![1.0; far.n_slots()]).unwrap();
        let none = p3_coefficients(&far, &above_e, &vec![0.0; far.n_slots()]).unwrap();
        assert!(heavy.a[0] / none.a[0] > 0.9);
        assert!(heavy.b[0] / none.b[0] < 1e-4);
    }

    #[test]
    fn stable_root_matches_printed_form() {
        for &(a, b, mu) in &[(2.0, 1.0, 0.3), (20.8, 0.044, 1.7), (1e3, 999.0, 1e-4), (5.0, 0.5, 50.0)] {
            let x = slot_power(a, b, mu, f64::INFINITY);
            let y = printed_root(a, b, mu).max(0.0);
            assert!((x - y).abs() <= 1e-9 * y.max(1.0), "{a} {b} {mu}: {x} vs {y}");
        }
    }

    #[test]
    fn large_multiplier_drives_power_to_zero() {
        assert_eq!(slot_power(3.0, 1.0, 1e9, 10.0), 0.0);
        assert!(printed_root(3.0, 1.0, 1e12) <= 0.0);
    }

    #[test]
    fn weaker_destination_gets_no_power() {
        let s = scenario(1.0, 4.0, 3);
        let c = P3Coefficients { a: vec![1.0, 0.5, 2.0], b: vec![1.0, 0.7, 2.5] };
        let sol = solve_p3(&s, &c);
        assert_eq!(sol.p_s, vec![0.0; 3]);
        assert_eq!(sol.mu, 0.0);
    }

    #[test]
    fn single_slot_matches_grid_search() {
        let s = scenario(10.0, 10.0, 1);
        let c = P3Coefficients { a: vec![2.0], b: vec![1.0] };
        let sol = solve_p3(&s, &c);
        let f = |x: f64| math::log2_1p(2.0 * x) - math::log2_1p(x);
        let mut best = (0.0, f(0.0));
        let mut x = 0.0;
        while x <= 10.0 {
            if f(x) > best.1 {
                best = (x, f(x));
            }
            x += 1e-6;
        }
        // objective peaks at 1/sqrt(2), well inside the box
        assert!((sol.p_s[0] - best.0).abs() < 1e-5, "{} vs {}", sol.p_s[0], best.0);
        assert!(f(sol.p_s[0]) >= best.1 - 1e-12);
    }

    #[test]
    fn budget_binds_when_peak_allocation_is_too_expensive() {
        let s = scenario(1.0, 4.0, 4);
        let c = P3Coefficients { a: vec![30.0, 12.0, 8.0, 1.0], b: vec![0.1, 0.5, 1.0, 2.0] };
        let sol = solve_p3(&s, &c);
        let mean = sol.p_s.iter().sum::<f64>() / 4.0;
        assert!(sol.mu > 0.0);
        assert!((mean - 1.0).abs() <= 1e-8, "{mean}");
        assert_eq!(sol.p_s[3], 0.0);
    }

    fn coefficients(n: usize) -> impl Strategy<Value = P3Coefficients> {
        prop::collection::vec((0.01f64..50.0, 0.01f64..50.0), n).prop_map(|ab| {
            let (a, b) = ab.into_iter().unzip();
            P3Coefficients { a, b }
        })
    }

    proptest! {
        #[test]
        fn total_power_nonincreasing_in_multiplier(c in coefficients(6), mu in 0.0f64..20.0, dmu in 0.0f64..5.0) {
            prop_assert!(total_power(&c, mu + dmu, 3.0) <= total_power(&c, mu, 3.0) + 1e-12);
        }

        #[test]
        fn returned_powers_are_locally_optimal(c in coefficients(5), avg in 0.05f64..2.0, ratio in 1.0f64..4.0) {
            let s = scenario(avg, avg * ratio, 5);
            let sol = solve_p3(&s, &c);
            let peak = s.p_s_peak();
            let mean = sol.p_s.iter().sum::<f64>() / 5.0;
            prop_assert!(mean <= avg * (1.0 + 1e-9));
            if sol.mu > 0.0 {
                prop_assert!((mean - avg).abs() <= 1e-8 * avg);
            }
            for n in 0..5 {
                let (a, b, x) = (c.a[n], c.b[n], sol.p_s[n]);
                prop_assert!(x >= 0.0 && x <= peak);
                if a > b {
                    // per-slot Lagrangian is maximized at x
                    let g = |y: f64| math::log2_1p(a * y) - math::log2_1p(b * y) - sol.mu * y;
                    for y in [x - 1e-4, x + 1e-4] {
                        let y = y.clamp(0.0, peak);
                        prop_assert!(g(x) >= g(y) - 1e-12);
                    }
                } else {
                    prop_assert_eq!(x, 0.0);
                }
            }
        }
    }
}
