//! Coordination mechanisms for scheduling games on unrelated machines.
//!
//! The crate is organised in layers:
//!
//! * [`model`]: instances, profiles, exact k-th-power cost reports.
//! * [`policies`]: SPT, EQUI, BCOORD, CCOORD and Balance as cost functions.
//! * [`analysis`]: Nash checks, equilibrium enumeration, better-response
//!   dynamics, optima, smoothness probes and price of anarchy.
//! * [`lab`]: certificates and randomized exact checks for the smooth
//!   inequalities behind the price-of-anarchy bounds.
//! * [`forge`]: lower-bound and random instance generators plus JSON I/O.
//!
//! All costs are exact rationals. Costs are kept as `c_j^k` so that every
//! comparison made by a player or an objective stays rational.

pub mod analysis;
pub mod error;
pub mod forge;
pub mod lab;
pub mod model;
pub mod policies;
pub mod rational;

pub use error::{Error, Result};
pub use model::{CostReport, Instance, Objective, PowCost, Profile};
pub use policies::{PolicyKind, PolicySpec};
pub use rational::Rational;
