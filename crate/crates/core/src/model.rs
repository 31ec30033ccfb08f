//! Problem instance, value types and feasibility checks.
//!
//! Everything inside the crate works in linear units (watts, linear gains).
//! Decibel quantities only appear in [`ScenarioParams`], which is what config
//! files map onto.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use crate::channel;
use crate::math;
use crate::{Error, Result};

/// Relative tolerance used by every constraint check.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Horizontal position in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        math::sqrt(self.norm_sq())
    }

    #[inline]
    pub fn dist(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from(v: [f64; 2]) -> Self {
        Vec2 { x: v[0], y: v[1] }
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

/// `10^(db/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    math::powf(10.0, db / 10.0)
}

pub fn linear_to_db(lin: f64) -> f64 {
    10.0 * libm::log10(lin)
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    math::powf(10.0, (dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * libm::log10(watts) + 30.0
}

/// How the flight period is cut into slots.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Discretization {
    /// Slot length in seconds; the slot count is `round(T / dt)`.
    SlotLength(f64),
    /// Explicit slot count.
    SlotCount(usize),
}

impl Default for Discretization {
    fn default() -> Self {
        Discretization::SlotLength(1.0)
    }
}

/// Scenario parameters in configuration units (dB, dBm).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScenarioParams {
    pub ws: Vec2,
    pub wd: Vec2,
    pub we: Vec2,
    pub q0: Vec2,
    pub qf: Vec2,
    /// UAV altitude `H` in meters.
    pub altitude: f64,
    /// Maximum horizontal speed `V` in m/s.
    pub v_max: f64,
    /// Flight period `T` in seconds.
    pub period: f64,
    pub discretization: Discretization,
    pub gamma0_db: f64,
    pub pathloss_exp: f64,
    pub ps_avg_dbm: f64,
    pub ps_peak_dbm: f64,
    pub pu_avg_dbm: f64,
    pub pu_peak_dbm: f64,
    pub epsilon: f64,
}

/// Ground path-loss exponent used when a config leaves it out.
pub const DEFAULT_PATHLOSS_EXP: f64 = 3.0;
pub const DEFAULT_EPSILON: f64 = 1e-4;

impl ScenarioParams {
    /// The reference evaluation setup (S at the origin, D at (300, 0), E at
    /// (200, 200), 100 m altitude, 3 m/s, 1 s slots) for flight period `period`.
    pub fn reference(period: f64) -> Self {
        ScenarioParams {
            ws: Vec2::new(0.0, 0.0),
            wd: Vec2::new(300.0, 0.0),
            we: Vec2::new(200.0, 200.0),
            q0: Vec2::new(-100.0, 100.0),
            qf: Vec2::new(500.0, 100.0),
            altitude: 100.0,
            v_max: 3.0,
            period,
            discretization: Discretization::SlotLength(1.0),
            gamma0_db: 90.0,
            pathloss_exp: DEFAULT_PATHLOSS_EXP,
            ps_avg_dbm: 30.0,
            ps_peak_dbm: 36.0,
            pu_avg_dbm: 10.0,
            pu_peak_dbm: 16.0,
            epsilon: DEFAULT_EPSILON,
        }
    }

    pub fn with_period(mut self, period: f64) -> Self {
        self.period = period;
        self
    }

    pub fn build(self) -> Result<Scenario> {
        Scenario::new(self)
    }
}

/// Immutable problem instance in linear units.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    params: ScenarioParams,
    n_slots: usize,
    slot_len: f64,
    step_max: f64,
    gamma0: f64,
    p_s_avg: f64,
    p_s_peak: f64,
    p_u_avg: f64,
    p_u_peak: f64,
}

fn require(cond: bool, field: &'static str, reason: &'static str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidField { field, reason })
    }
}

impl Scenario {
    pub fn new(params: ScenarioParams) -> Result<Self> {
        let p = &params;
        for (field, v) in [("ws", p.ws), ("wd", p.wd), ("we", p.we), ("q0", p.q0), ("qf", p.qf)] {
            require(v.is_finite(), field, "coordinates must be finite")?;
        }
        require(p.altitude.is_finite() && p.altitude > 0.0, "H", "must be positive")?;
        require(p.v_max.is_finite() && p.v_max > 0.0, "V", "must be positive")?;
        require(p.period.is_finite() && p.period > 0.0, "T", "must be positive")?;
        require(p.gamma0_db.is_finite(), "gamma0_db", "must be finite")?;
        require(p.pathloss_exp.is_finite() && p.pathloss_exp >= 2.0, "pathloss_exp", "must be at least 2")?;
        for (field, v) in [
            ("ps_avg_dbm", p.ps_avg_dbm),
            ("ps_peak_dbm", p.ps_peak_dbm),
            ("pu_avg_dbm", p.pu_avg_dbm),
            ("pu_peak_dbm", p.pu_peak_dbm),
        ] {
            require(v.is_finite(), field, "must be finite")?;
        }
        require(p.epsilon.is_finite() && p.epsilon > 0.0, "epsilon", "must be positive")?;
        require(p.ws.dist(p.wd) > 0.0, "wd", "destination coincides with source")?;
        require(p.ws.dist(p.we) > 0.0, "we", "eavesdropper coincides with source")?;

        let n_slots = match p.discretization {
            Discretization::SlotLength(dt) => {
                require(dt.is_finite() && dt > 0.0, "dt", "must be positive")?;
                let n = libm::round(p.period / dt);
                require(n >= 1.0, "dt", "longer than the flight period")?;
                n as usize
            }
            Discretization::SlotCount(n) => {
                require(n >= 1, "N", "must be at least 1")?;
                n
            }
        };
        let slot_len = p.period / n_slots as f64;
        let step_max = p.v_max * slot_len;

        let p_s_avg = dbm_to_watts(p.ps_avg_dbm);
        let p_s_peak = dbm_to_watts(p.ps_peak_dbm);
        let p_u_avg = dbm_to_watts(p.pu_avg_dbm);
        let p_u_peak = dbm_to_watts(p.pu_peak_dbm);
        require(p_s_avg <= p_s_peak, "ps_peak_dbm", "peak below average")?;
        require(p_u_avg <= p_u_peak, "pu_peak_dbm", "peak below average")?;

        let distance = p.q0.dist(p.qf);
        let reach = n_slots as f64 * step_max;
        if distance > reach * (1.0 + FEASIBILITY_TOL) {
            return Err(Error::Unreachable { distance, reach });
        }

        Ok(Scenario {
            gamma0: db_to_linear(p.gamma0_db),
            params,
            n_slots,
            slot_len,
            step_max,
            p_s_avg,
            p_s_peak,
            p_u_avg,
            p_u_peak,
        })
    }

    pub fn params(&self) -> &ScenarioParams {
        &self.params
    }

    /// Same scenario with a different flight period.
    pub fn with_period(&self, period: f64) -> Result<Self> {
        Scenario::new(self.params.clone().with_period(period))
    }

    pub fn ws(&self) -> Vec2 {
        self.params.ws
    }
    pub fn wd(&self) -> Vec2 {
        self.params.wd
    }
    pub fn we(&self) -> Vec2 {
        self.params.we
    }
    pub fn q0(&self) -> Vec2 {
        self.params.q0
    }
    pub fn qf(&self) -> Vec2 {
        self.params.qf
    }
    pub fn altitude(&self) -> f64 {
        self.params.altitude
    }
    pub fn v_max(&self) -> f64 {
        self.params.v_max
    }
    pub fn period(&self) -> f64 {
        self.params.period
    }
    pub fn n_slots(&self) -> usize {
        self.n_slots
    }
    /// Slot duration `T / N`.
    pub fn slot_len(&self) -> f64 {
        self.slot_len
    }
    /// Largest horizontal displacement per slot, `V * dt`.
    pub fn step_max(&self) -> f64 {
        self.step_max
    }
    /// Reference SNR (linear).
    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }
    pub fn pathloss_exp(&self) -> f64 {
        self.params.pathloss_exp
    }
    pub fn p_s_avg(&self) -> f64 {
        self.p_s_avg
    }
    pub fn p_s_peak(&self) -> f64 {
        self.p_s_peak
    }
    pub fn p_u_avg(&self) -> f64 {
        self.p_u_avg
    }
    pub fn p_u_peak(&self) -> f64 {
        self.p_u_peak
    }
    pub fn epsilon(&self) -> f64 {
        self.params.epsilon
    }

    /// True when `q0 -> qf` needs every slot at full speed, which leaves the
    /// uniform straight line as the only feasible trajectory.
    pub fn is_minimum_time(&self) -> bool {
        let reach = self.n_slots as f64 * self.step_max;
        self.q0().dist(self.qf()) >= reach * (1.0 - FEASIBILITY_TOL)
    }
}

/// UAV waypoints `q[1..=N]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct Trajectory(pub Vec<Vec2>);

impl Trajectory {
    pub fn new(points: Vec<Vec2>) -> Self {
        Trajectory(points)
    }

    /// Uniformly spaced straight line from `q0` (exclusive) to `qf` (inclusive).
    pub fn straight_line(s: &Scenario) -> Self {
        let n = s.n_slots();
        let (q0, qf) = (s.q0(), s.qf());
        let mut pts: Vec<Vec2> = (1..=n).map(|i| q0 + (qf - q0) * (i as f64 / n as f64)).collect();
        pts[n - 1] = qf;
        Trajectory(pts)
    }

    pub fn points(&self) -> &[Vec2] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest waypoint-wise distance to `other`.
    pub fn max_deviation(&self, other: &Trajectory) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.dist(*b)).fold(0.0, f64::max)
    }
}

/// Per-slot transmit powers in watts.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PowerSchedule {
    pub p_s: Vec<f64>,
    pub p_u: Vec<f64>,
}

impl PowerSchedule {
    /// Both transmitters at their average budgets in every slot.
    pub fn uniform_average(s: &Scenario) -> Self {
        PowerSchedule { p_s: alloc::vec![s.p_s_avg(); s.n_slots()], p_u: alloc::vec![s.p_u_avg(); s.n_slots()] }
    }

    pub fn len(&self) -> usize {
        self.p_s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_s.is_empty()
    }
}

/// Which constraint a [`Violation`] refers to. Slot indices are zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Constraint {
    /// `|q[0] - q0| <= L`.
    FirstStep,
    /// `|q[n+1] - q[n]| <= L`.
    Step(usize),
    /// `q[N-1] == qf`.
    FinalPoint,
    SourceNegative(usize),
    SourcePeak(usize),
    SourceAverage,
    UavNegative(usize),
    UavPeak(usize),
    UavAverage,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Violation {
    pub constraint: Constraint,
    /// Amount by which the constraint is exceeded, in the constraint's units
    /// (meters for mobility, watts for power).
    pub magnitude: f64,
}

/// Result of a feasibility check; feasible iff `violations` is empty.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    /// Largest violation magnitude, zero if feasible.
    pub fn worst(&self) -> f64 {
        self.violations.iter().map(|v| v.magnitude).fold(0.0, f64::max)
    }

    fn push(&mut self, constraint: Constraint, magnitude: f64) {
        self.violations.push(Violation { constraint, magnitude });
    }
}

fn check_len(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::LengthMismatch { what, expected, found })
    }
}

/// Checks the mobility constraints on `t`.
pub fn check_trajectory(s: &Scenario, t: &Trajectory) -> Result<Verdict> {
    check_len("trajectory", s.n_slots(), t.len())?;
    let l = s.step_max();
    let limit_sq = l * l * (1.0 + FEASIBILITY_TOL);
    let mut verdict = Verdict::default();

    let pts = t.points();
    let first = (pts[0] - s.q0()).norm_sq();
    if first > limit_sq {
        verdict.push(Constraint::FirstStep, math::sqrt(first) - l);
    }
    for (n, w) in pts.windows(2).enumerate() {
        let d = (w[1] - w[0]).norm_sq();
        if d > limit_sq {
            verdict.push(Constraint::Step(n), math::sqrt(d) - l);
        }
    }
    let end_err = pts[pts.len() - 1].dist(s.qf());
    let end_tol = FEASIBILITY_TOL * f64::max(1.0, f64::max(s.qf().norm(), l));
    if end_err > end_tol {
        verdict.push(Constraint::FinalPoint, end_err);
    }
    Ok(verdict)
}

/// Constraint labels for negative, above-peak and above-average powers.
type PowerKinds = (fn(usize) -> Constraint, fn(usize) -> Constraint, Constraint);

fn check_power(verdict: &mut Verdict, p: &[f64], avg: f64, peak: f64, kinds: PowerKinds) {
    let (negative, over_peak, over_avg) = kinds;
    for (n, &x) in p.iter().enumerate() {
        if x.is_nan() || x < -FEASIBILITY_TOL * peak {
            verdict.push(negative(n), if x.is_nan() { f64::INFINITY } else { -x });
        } else if x > peak * (1.0 + FEASIBILITY_TOL) {
            verdict.push(over_peak(n), x - peak);
        }
    }
    let mean = p.iter().sum::<f64>() / p.len() as f64;
    if mean > avg * (1.0 + FEASIBILITY_TOL) {
        verdict.push(over_avg, mean - avg);
    }
}

/// Checks the average and peak power constraints of both transmitters.
pub fn check_schedule(s: &Scenario, p: &PowerSchedule) -> Result<Verdict> {
    check_len("source power", s.n_slots(), p.p_s.len())?;
    check_len("UAV power", s.n_slots(), p.p_u.len())?;
    let mut verdict = Verdict::default();
    check_power(
        &mut verdict,
        &p.p_s,
        s.p_s_avg(),
        s.p_s_peak(),
        (Constraint::SourceNegative, Constraint::SourcePeak, Constraint::SourceAverage),
    );
    check_power(
        &mut verdict,
        &p.p_u,
        s.p_u_avg(),
        s.p_u_peak(),
        (Constraint::UavNegative, Constraint::UavPeak, Constraint::UavAverage),
    );
    Ok(verdict)
}

pub(crate) fn ensure_feasible(s: &Scenario, t: &Trajectory, p: &PowerSchedule) -> Result<()> {
    let vt = check_trajectory(s, t)?;
    if !vt.is_feasible() {
        return Err(Error::InfeasibleTrajectory { worst: vt.worst() });
    }
    let vp = check_schedule(s, p)?;
    if !vp.is_feasible() {
        return Err(Error::InfeasibleSchedule { worst: vp.worst() });
    }
    Ok(())
}

/// Optimized design plus its per-slot rate bounds.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Solution {
    pub trajectory: Trajectory,
    pub schedule: PowerSchedule,
    /// Average of `R_D^lo[n] - R_E^up[n]` over slots, bps/Hz.
    pub objective: f64,
    /// `(R_D^lo[n], R_E^up[n])` per slot.
    pub per_slot_rates: Vec<(f64, f64)>,
    /// Objective after each sweep of the alternating loop.
    pub trace: Vec<f64>,
    /// False when the loop stopped on the iteration cap.
    pub converged: bool,
}

impl Solution {
    pub fn new(
        s: &Scenario,
        trajectory: Trajectory,
        schedule: PowerSchedule,
        trace: Vec<f64>,
        converged: bool,
    ) -> Self {
        let per_slot_rates: Vec<(f64, f64)> = trajectory
            .points()
            .iter()
            .zip(schedule.p_s.iter().zip(&schedule.p_u))
            .map(|(&q, (&ps, &pu))| (channel::rate_lb_dest(s, q, ps, pu), channel::rate_ub_eve(s, q, ps, pu)))
            .collect();
        let objective = per_slot_rates.iter().map(|(d, e)| d - e).sum::<f64>() / per_slot_rates.len() as f64;
        Solution { trajectory, schedule, objective, per_slot_rates, trace, converged }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn reference(period: f64) -> Scenario {
        ScenarioParams::reference(period).build().unwrap()
    }

    #[test]
    fn conversions_match_reference_values() {
        let s = reference(200.0);
        assert!((s.gamma0() - 1e9).abs() <= 1e9 * 1e-14);
        assert!((s.p_u_avg() - 0.01).abs() < 1e-16);
        assert!((s.p_s_avg() - 1.0).abs() < 1e-15);
        assert!((dbm_to_watts(16.0) / dbm_to_watts(10.0) - 3.981).abs() < 1e-3);
        assert_eq!(s.n_slots(), 200);
        assert_eq!(s.step_max(), 3.0);
        assert!(s.step_max() < s.altitude() / 10.0);
        assert!(s.is_minimum_time());
    }

    #[test]
    fn unreachable_endpoint_is_rejected() {
        let err = ScenarioParams::reference(199.0).build().unwrap_err();
        assert!(matches!(err, Error::Unreachable { .. }), "{err:?}");
        assert!(alloc::format!("{err}").contains("`T`"));
    }

    #[test]
    fn invalid_fields_are_named() {
        let mut p = ScenarioParams::reference(300.0);
        p.altitude = 0.0;
        assert_eq!(p.build().unwrap_err(), Error::InvalidField { field: "H", reason: "must be positive" });

        let mut p = ScenarioParams::reference(300.0);
        p.pu_peak_dbm = 5.0;
        assert!(matches!(p.build(), Err(Error::InvalidField { field: "pu_peak_dbm", .. })));

        let mut p = ScenarioParams::reference(300.0);
        p.gamma0_db = f64::NAN;
        assert!(matches!(p.build(), Err(Error::InvalidField { field: "gamma0_db", .. })));

        let mut p = ScenarioParams::reference(300.0);
        p.discretization = Discretization::SlotCount(0);
        assert!(matches!(p.build(), Err(Error::InvalidField { field: "N", .. })));
    }

    #[test]
    fn slot_count_overrides_slot_length() {
        let mut p = ScenarioParams::reference(300.0);
        p.discretization = Discretization::SlotCount(150);
        let s = p.build().unwrap();
        assert_eq!(s.n_slots(), 150);
        assert_eq!(s.slot_len(), 2.0);
        assert_eq!(s.step_max(), 6.0);
    }

    #[test]
    fn straight_line_is_feasible_at_minimum_time() {
        let s = reference(200.0);
        let t = Trajectory::straight_line(&s);
        assert!(check_trajectory(&s, &t).unwrap().is_feasible());
    }

    #[test]
    fn wrong_final_point_is_flagged() {
        let s = reference(300.0);
        let mut t = Trajectory::straight_line(&s);
        let last = t.0.len() - 1;
        t.0[last] = t.0[last - 1];
        let v = check_trajectory(&s, &t).unwrap();
        assert_eq!(v.violations.len(), 1);
        assert_eq!(v.violations[0].constraint, Constraint::FinalPoint);
    }

    #[test]
    fn slightly_long_step_is_flagged() {
        let s = reference(300.0);
        let l = s.step_max();
        // hover at q0 then a single over-long step, then continue at a slower pace
        let mut t = Trajectory::straight_line(&s);
        t.0[0] = s.q0() + Vec2::new(l * (1.0 + 1e-6), 0.0);
        let v = check_trajectory(&s, &t).unwrap();
        assert_eq!(v.violations.len(), 1);
        assert_eq!(v.violations[0].constraint, Constraint::FirstStep);
        assert!((v.worst() - l * 1e-6).abs() < 1e-9);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let s = reference(300.0);
        let t = Trajectory::new(vec![s.qf(); 3]);
        assert!(matches!(check_trajectory(&s, &t), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn schedule_checks() {
        let s = reference(300.0);
        let n = s.n_slots();
        let zeros = PowerSchedule { p_s: vec![0.0; n], p_u: vec![0.0; n] };
        assert!(check_schedule(&s, &zeros).unwrap().is_feasible());

        let at_peak = PowerSchedule { p_s: vec![0.0; n], p_u: vec![s.p_u_peak(); n] };
        let v = check_schedule(&s, &at_peak).unwrap();
        assert_eq!(v.violations.len(), 1);
        assert_eq!(v.violations[0].constraint, Constraint::UavAverage);
        // peak is 16 dBm ~= 3.98x the 10 dBm average
        assert!((at_peak.p_u[0] / s.p_u_avg() - 3.981).abs() < 1e-3);

        let at_avg = PowerSchedule::uniform_average(&s);
        assert!(check_schedule(&s, &at_avg).unwrap().is_feasible());

        let mut neg = zeros.clone();
        neg.p_s[4] = -1e-3;
        let v = check_schedule(&s, &neg).unwrap();
        assert_eq!(v.violations[0].constraint, Constraint::SourceNegative(4));
    }

    #[test]
    fn schedule_with_peak_four_times_average_is_infeasible() {
        let mut p = ScenarioParams::reference(300.0);
        p.pu_peak_dbm = watts_to_dbm(4.0 * dbm_to_watts(p.pu_avg_dbm));
        let s = p.build().unwrap();
        let n = s.n_slots();
        let sched = PowerSchedule { p_s: vec![0.0; n], p_u: vec![s.p_u_peak(); n] };
        let v = check_schedule(&s, &sched).unwrap();
        assert_eq!(v.violations.len(), 1);
        assert!((v.worst() - 3.0 * s.p_u_avg()).abs() < 1e-12);
    }

    proptest::proptest! {
        #[test]
        fn dbm_round_trip(dbm in -60.0f64..60.0) {
            let back = watts_to_dbm(dbm_to_watts(dbm));
            proptest::prop_assert!((back - dbm).abs() <= 1e-12 * dbm.abs().max(1.0));
        }
    }
}
