//! Alternating optimization over source power, jamming power and trajectory.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::baselines::build_ltp_trajectory;
use crate::model::{ensure_feasible, PowerSchedule, Scenario, Solution, Trajectory};
use crate::objective::surrogate_unchecked;
use crate::source_power::{p3_coefficients, solve_p3};
use crate::trajectory::{p7_coefficients, solve_p7};
use crate::uav_power::{p5_coefficients, solve_p5};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum InitTrajectoryMode {
    StraightLine,
    #[default]
    BestEffortLtp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum InitPowerMode {
    #[default]
    UniformAverage,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BcdConfig {
    /// Stop once the fractional objective increase of a sweep drops below this.
    pub epsilon: f64,
    pub max_iters: usize,
    pub init_trajectory_mode: InitTrajectoryMode,
    pub init_power_mode: InitPowerMode,
    /// Convexify-and-solve passes per block and sweep for the jamming power
    /// and trajectory blocks.
    pub sca_inner_iters: usize,
}

impl Default for BcdConfig {
    fn default() -> Self {
        BcdConfig {
            epsilon: crate::model::DEFAULT_EPSILON,
            max_iters: 200,
            init_trajectory_mode: InitTrajectoryMode::default(),
            init_power_mode: InitPowerMode::default(),
            sca_inner_iters: 1,
        }
    }
}

impl BcdConfig {
    /// Default settings with the scenario's stopping threshold.
    pub fn for_scenario(s: &Scenario) -> Self {
        BcdConfig { epsilon: s.epsilon(), ..Default::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::InvalidField { field: "epsilon", reason: "must be positive" });
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidField { field: "max_iters", reason: "must be at least 1" });
        }
        if self.sca_inner_iters == 0 {
            return Err(Error::InvalidField { field: "sca_inner_iters", reason: "must be at least 1" });
        }
        Ok(())
    }
}

/// One entry of the per-sweep trace.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IterationRecord {
    /// One-based sweep index.
    pub iteration: usize,
    pub objective: f64,
}

pub(crate) fn initial_trajectory(s: &Scenario, mode: InitTrajectoryMode) -> Result<Trajectory> {
    match mode {
        InitTrajectoryMode::StraightLine => Ok(Trajectory::straight_line(s)),
        InitTrajectoryMode::BestEffortLtp => build_ltp_trajectory(s),
    }
}

pub(crate) fn initial_schedule(s: &Scenario, mode: InitPowerMode) -> PowerSchedule {
    match mode {
        InitPowerMode::UniformAverage => PowerSchedule::uniform_average(s),
    }
}

/// Relative objective increase used by every stopping rule in the crate.
pub(crate) fn fractional_increase(prev: f64, next: f64) -> f64 {
    (next - prev) / f64::max(prev.abs(), 1e-12)
}

fn solver_error(iteration: usize, block: &'static str, e: Error) -> Error {
    Error::Solver { iteration, block, source: Box::new(e) }
}

/// Mutable design shared by the block updates. Each update is kept only if
/// it does not lower the surrogate objective.
pub(crate) struct Design<'a> {
    pub s: &'a Scenario,
    pub trajectory: Trajectory,
    pub schedule: PowerSchedule,
    pub value: f64,
}

impl<'a> Design<'a> {
    pub fn new(s: &'a Scenario, trajectory: Trajectory, schedule: PowerSchedule) -> Self {
        let value = surrogate_unchecked(s, &trajectory, &schedule);
        Design { s, trajectory, schedule, value }
    }

    pub fn update_source_power(&mut self) -> Result<()> {
        let c = p3_coefficients(self.s, &self.trajectory, &self.schedule.p_u)?;
        let sol = solve_p3(self.s, &c);
        let candidate = PowerSchedule { p_s: sol.p_s, p_u: self.schedule.p_u.clone() };
        let value = surrogate_unchecked(self.s, &self.trajectory, &candidate);
        if value >= self.value {
            self.schedule = candidate;
            self.value = value;
        }
        Ok(())
    }

    pub fn update_uav_power(&mut self) -> Result<()> {
        let c = p5_coefficients(self.s, &self.trajectory, &self.schedule.p_s, &self.schedule.p_u)?;
        let sol = solve_p5(self.s, &c);
        let candidate = PowerSchedule { p_s: self.schedule.p_s.clone(), p_u: sol.p_u };
        let value = surrogate_unchecked(self.s, &self.trajectory, &candidate);
        if value >= self.value {
            self.schedule = candidate;
            self.value = value;
        }
        Ok(())
    }

    pub fn update_trajectory(&mut self) -> Result<()> {
        let c = p7_coefficients(self.s, &self.trajectory, &self.schedule)?;
        let sol = solve_p7(self.s, &c, &self.trajectory)?;
        if sol.trust_clamped {
            log::debug!("trajectory step limited by the linearization trust region");
        }
        let value = surrogate_unchecked(self.s, &sol.trajectory, &self.schedule);
        if value >= self.value {
            self.trajectory = sol.trajectory;
            self.value = value;
        }
        Ok(())
    }

    pub fn check(&self, iteration: usize) -> Result<()> {
        ensure_feasible(self.s, &self.trajectory, &self.schedule).map_err(|e| solver_error(iteration, "feasibility", e))
    }
}

/// Runs sweeps until the fractional increase falls below `epsilon` or
/// `max_iters` sweeps have run; `sweep` performs one round of block updates.
pub(crate) fn run_sweeps<F, O>(
    mut design: Design<'_>,
    cfg: &BcdConfig,
    mut sweep: F,
    mut observer: O,
) -> Result<Solution>
where
    F: FnMut(&mut Design<'_>, usize) -> Result<()>,
    O: FnMut(&IterationRecord),
{
    cfg.validate()?;
    let s = design.s;
    design.check(0)?;
    let mut trace = Vec::new();
    let mut prev = design.value;
    let mut converged = false;
    for iteration in 1..=cfg.max_iters {
        sweep(&mut design, iteration)?;
        design.check(iteration)?;
        trace.push(design.value);
        observer(&IterationRecord { iteration, objective: design.value });
        if fractional_increase(prev, design.value) < cfg.epsilon {
            converged = true;
            break;
        }
        prev = design.value;
    }
    if !converged {
        log::warn!("stopped after {} sweeps without meeting epsilon = {:e}", cfg.max_iters, cfg.epsilon);
    }
    Ok(Solution::new(s, design.trajectory, design.schedule, trace, converged))
}

/// Joint trajectory and power design; `observer` sees every sweep.
pub fn bcd_optimize_with<O: FnMut(&IterationRecord)>(s: &Scenario, cfg: &BcdConfig, observer: O) -> Result<Solution> {
    cfg.validate()?;
    let design =
        Design::new(s, initial_trajectory(s, cfg.init_trajectory_mode)?, initial_schedule(s, cfg.init_power_mode));
    let inner = cfg.sca_inner_iters;
    run_sweeps(
        design,
        cfg,
        |d, k| {
            d.update_source_power().map_err(|e| solver_error(k, "source power", e))?;
            for _ in 0..inner {
                d.update_uav_power().map_err(|e| solver_error(k, "UAV power", e))?;
            }
            for _ in 0..inner {
                d.update_trajectory().map_err(|e| solver_error(k, "trajectory", e))?;
            }
            Ok(())
        },
        observer,
    )
}

/// Joint trajectory and power design.
pub fn bcd_optimize(s: &Scenario, cfg: &BcdConfig) -> Result<Solution> {
    bcd_optimize_with(s, cfg, |_| {})
}
