use core::fmt;

/// Errors raised by scenario construction, feasibility checks and the solvers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A scenario field is missing, non-finite or out of range.
    InvalidField { field: &'static str, reason: &'static str },
    /// `qf` cannot be reached from `q0` within `n_slots` steps of length `L`.
    Unreachable { distance: f64, reach: f64 },
    /// A sequence does not have one entry per slot.
    LengthMismatch { what: &'static str, expected: usize, found: usize },
    /// Trajectory violates the mobility constraints.
    InfeasibleTrajectory { worst: f64 },
    /// Power schedule violates the power budgets.
    InfeasibleSchedule { worst: f64 },
    /// Rate parameter of an exponential law must be positive.
    NonPositiveRate(f64),
    /// A block solver failed inside the alternating loop.
    Solver { iteration: usize, block: &'static str, source: alloc::boxed::Box<Error> },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidField { field, reason } => write!(f, "invalid scenario field `{field}`: {reason}"),
            Error::Unreachable { distance, reach } => write!(
                f,
                "final location unreachable: distance {distance} m exceeds maximum travel {reach} m (field `T`)"
            ),
            Error::LengthMismatch { what, expected, found } => {
                write!(f, "{what} has {found} entries, expected {expected}")
            }
            Error::InfeasibleTrajectory { worst } => {
                write!(f, "trajectory violates mobility constraints (worst violation {worst:e})")
            }
            Error::InfeasibleSchedule { worst } => {
                write!(f, "power schedule violates power constraints (worst violation {worst:e})")
            }
            Error::NonPositiveRate(l) => write!(f, "exponential rate must be positive, got {l}"),
            Error::Solver { iteration, block, source } => {
                write!(f, "{block} solver failed at iteration {iteration}: {source}")
            }
        }
    }
}

impl core::error::Error for Error {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            Error::Solver { source, .. } => Some(source.as_ref()),
            _ => None,
        }
    }
}
