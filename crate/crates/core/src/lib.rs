//! Danceability of twisted virtual knot diagrams.
//!
//! A diagram is written as an extended Gauss code (see [`codec`]). Dancers
//! start at initial points placed in the gaps between events, each walks `k`
//! of the paths those points cut the curve into, and their facings flip at
//! every twist bar. The library decides whether the dancers can be scheduled
//! so that every classical crossing is passed on the over-strand before the
//! under-strand ([`scheduler`]), checks the forward and matching facing rules
//! by parity algebra ([`facing`]), and searches for the fewest dancers or
//! laps a diagram needs ([`solver`]).

pub mod codec;
pub mod facing;
pub mod model;
pub mod scheduler;
pub mod solver;

pub use codec::{parse, serialize, trace_to_json, ParseError};
pub use facing::{Facing, FacingAssignment, ParityVector};
pub use model::{CrossingSign, Diagram, Event, Gap, ModelError, PlacementError, Strand};
pub use scheduler::{
    schedule_search, CrossingRule, DancePlan, DanceRule, Infeasible, InfeasibleReason, Schedule,
    Step,
};
pub use solver::{min_dancers, survey, RuleKind, SolveReport};
