//! Comparison schemes.
//!
//! | scheme | trajectory                        | powers                          |
//! |--------|-----------------------------------|---------------------------------|
//! | JTP    | optimized                         | optimized                       |
//! | TNP    | optimized                         | fixed at the average budgets    |
//! | LTP    | fly to E, hover, fly to `qf`      | optimized                       |
//! | NJ     | irrelevant (straight line)        | source optimized, UAV silent    |

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::driver::{self, initial_trajectory, BcdConfig, Design, IterationRecord};
use crate::model::{PowerSchedule, Scenario, Solution, Trajectory, Vec2};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum SchemeId {
    /// Joint trajectory and power design.
    Jtp,
    /// Trajectory only, powers at their averages.
    Tnp,
    /// Two-segment trajectory, powers optimized.
    Ltp,
    /// No jammer.
    Nj,
}

impl SchemeId {
    pub const ALL: [SchemeId; 4] = [SchemeId::Jtp, SchemeId::Tnp, SchemeId::Ltp, SchemeId::Nj];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeId::Jtp => "jtp",
            SchemeId::Tnp => "tnp",
            SchemeId::Ltp => "ltp",
            SchemeId::Nj => "nj",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jtp" => Ok(SchemeId::Jtp),
            "tnp" => Ok(SchemeId::Tnp),
            "ltp" => Ok(SchemeId::Ltp),
            "nj" => Ok(SchemeId::Nj),
            _ => Err(Error::InvalidField { field: "scheme", reason: "expected one of jtp, tnp, ltp, nj" }),
        }
    }
}

/// Point at arc length `a` along the polyline `q0 -> turn -> qf`.
fn along(q0: Vec2, turn: Vec2, qf: Vec2, first_len: f64, a: f64) -> Vec2 {
    if a <= first_len {
        if first_len == 0.0 {
            return q0;
        }
        q0 + (turn - q0) * (a / first_len)
    } else {
        let second_len = turn.dist(qf);
        if second_len == 0.0 {
            return qf;
        }
        turn + (qf - turn) * ((a - first_len) / second_len)
    }
}

/// Best-effort two-segment trajectory: head for the point above E at full
/// speed, hover there as long as possible, then reach `qf` at full speed in
/// the last slot. If E cannot be reached in time the turn happens at the
/// farthest point of `q0 -> w_E` from which `qf` is still reachable.
pub fn build_ltp_trajectory(s: &Scenario) -> Result<Trajectory> {
    let n = s.n_slots();
    let l = s.step_max();
    let (q0, qf, we) = (s.q0(), s.qf(), s.we());
    let reach = n as f64 * l;
    let to_eve = q0.dist(we);
    let path_len = |d: f64| -> f64 {
        let turn = if to_eve > 0.0 { q0 + (we - q0) * (d / to_eve) } else { q0 };
        d + turn.dist(qf)
    };

    // path_len is non-decreasing in d, so bisect for the farthest feasible turn
    let turn_dist = if path_len(to_eve) <= reach {
        to_eve
    } else {
        let (mut lo, mut hi) = (0.0, to_eve);
        for _ in 0..200 {
            if hi - lo <= 1e-12 * f64::max(1.0, to_eve) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if path_len(mid) <= reach {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    let turn = if to_eve > 0.0 { q0 + (we - q0) * (turn_dist / to_eve) } else { q0 };
    let total = turn_dist + turn.dist(qf);

    let mut points: Vec<Vec2> = (1..=n)
        .map(|i| {
            let out = i as f64 * l;
            let arc = if out <= turn_dist { out } else { f64::max(turn_dist, total - (n - i) as f64 * l) };
            along(q0, turn, qf, turn_dist, arc)
        })
        .collect();
    points[n - 1] = qf;
    Ok(Trajectory::new(points))
}

/// Trajectory optimization with both powers fixed at their averages.
pub fn run_tnp_with<O: FnMut(&IterationRecord)>(s: &Scenario, cfg: &BcdConfig, observer: O) -> Result<Solution> {
    let design = Design::new(s, initial_trajectory(s, cfg.init_trajectory_mode)?, PowerSchedule::uniform_average(s));
    driver::run_sweeps(design, cfg, |d, k| wrap(k, "trajectory", d.update_trajectory()), observer)
}

pub fn run_tnp(s: &Scenario, cfg: &BcdConfig) -> Result<Solution> {
    run_tnp_with(s, cfg, |_| {})
}

/// Power optimization on the fixed two-segment trajectory.
pub fn run_ltp_with<O: FnMut(&IterationRecord)>(s: &Scenario, cfg: &BcdConfig, observer: O) -> Result<Solution> {
    let design = Design::new(s, build_ltp_trajectory(s)?, PowerSchedule::uniform_average(s));
    driver::run_sweeps(
        design,
        cfg,
        |d, k| {
            wrap(k, "source power", d.update_source_power())?;
            wrap(k, "UAV power", d.update_uav_power())
        },
        observer,
    )
}

pub fn run_ltp(s: &Scenario, cfg: &BcdConfig) -> Result<Solution> {
    run_ltp_with(s, cfg, |_| {})
}

/// No jamming: the UAV is silent and only the source power is optimized.
///
/// The source-power coefficients do not depend on the trajectory when the UAV
/// is silent, so one solve is optimal.
pub fn run_nj(s: &Scenario) -> Result<Solution> {
    let n = s.n_slots();
    let mut design =
        Design::new(s, Trajectory::straight_line(s), PowerSchedule { p_s: vec![s.p_s_avg(); n], p_u: vec![0.0; n] });
    design.update_source_power()?;
    design.check(1)?;
    Ok(Solution::new(s, design.trajectory, design.schedule, vec![design.value], true))
}

fn wrap(iteration: usize, block: &'static str, r: Result<()>) -> Result<()> {
    r.map_err(|e| Error::Solver { iteration, block, source: alloc::boxed::Box::new(e) })
}

/// Runs `scheme` on `s`, reporting each sweep to `observer`.
pub fn run_scheme_with<O: FnMut(&IterationRecord)>(
    s: &Scenario,
    scheme: SchemeId,
    cfg: &BcdConfig,
    mut observer: O,
) -> Result<Solution> {
    match scheme {
        SchemeId::Jtp => driver::bcd_optimize_with(s, cfg, observer),
        SchemeId::Tnp => run_tnp_with(s, cfg, observer),
        SchemeId::Ltp => run_ltp_with(s, cfg, observer),
        SchemeId::Nj => {
            let sol = run_nj(s)?;
            observer(&IterationRecord { iteration: 1, objective: sol.objective });
            Ok(sol)
        }
    }
}

pub fn run_scheme(s: &Scenario, scheme: SchemeId, cfg: &BcdConfig) -> Result<Solution> {
    run_scheme_with(s, scheme, cfg, |_| {})
}
