//! Joint trajectory and power design for a UAV that jams a ground eavesdropper.
//!
//! A source S talks to a destination D over a Rayleigh-faded ground link while
//! an eavesdropper E listens. A UAV flying at fixed altitude radiates jamming
//! noise over line-of-sight links to both D and E. This crate maximizes a
//! closed-form lower bound on the average secrecy rate over a finite flight by
//! alternating between three blocks:
//!
//! - source power ([`source_power`]): closed form with a bisected multiplier,
//! - UAV jamming power ([`uav_power`]): one convexified step solved by dual bisection,
//! - UAV trajectory ([`trajectory`]): one convexified step solved by a barrier method.
//!
//! [`driver`] runs the alternation, [`baselines`] holds the comparison schemes and
//! [`objective`] evaluates both the analytic surrogate and a Monte-Carlo estimate
//! of the true ergodic secrecy rate.
//!
//! The crate is `no_std` (it needs `alloc`). File formats and the command line
//! live in the companion `skyjam` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod baselines;
pub mod channel;
pub mod driver;
mod error;
pub(crate) mod math;
pub mod model;
pub mod objective;
pub mod source_power;
pub mod trajectory;
pub mod uav_power;

pub use baselines::SchemeId;
pub use driver::{bcd_optimize, BcdConfig, InitPowerMode, InitTrajectoryMode, IterationRecord};
pub use error::Error;
pub use model::{PowerSchedule, Scenario, ScenarioParams, Solution, Trajectory, Vec2};
pub use objective::{mc_secrecy_rate, surrogate_objective, SecrecyReport};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub type Result<T, E = Error> = core::result::Result<T, E>;
