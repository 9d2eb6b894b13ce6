//! Inverse simulation of a rigid fixed-wing aircraft.
//!
//! Given a prescribed inertial trajectory and roll-angle history, the solver
//! recovers the thrust and the aileron, elevator and rudder deflections that
//! fly it. A forward six-degree-of-freedom simulator replays the computed
//! controls to check closure.

// `!(x > 0.0)` is used on purpose so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod airframe;
pub mod atmosphere;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod forward;
pub mod numdiff;
pub mod output;
pub mod solver;
pub mod trajectory;

pub use airframe::{AeroCoefficients, AirframeParams, InertiaDerived};
pub use error::{Error, Result};
pub use forward::{round_trip, RoundTripReport};
pub use numdiff::{Jet2, Scalar, UniformSeries};
pub use solver::{run, ControlSeries, RunSummary, SimState};
pub use trajectory::{KinematicTables, ManeuverInput};
