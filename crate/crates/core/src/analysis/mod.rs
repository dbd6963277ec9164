//! Equilibria, dynamics, optima and efficiency measures.

mod dynamics;
mod efficiency;
mod enumerate;
mod nash;
mod smoothness;

pub use dynamics::{
    better_response_step, potential_key, run_dynamics, DynamicsStatus, DynamicsTrace, Move,
    MoveSelector, PotentialKey, SelectionRule, TraceStep,
};
pub use efficiency::{is_m_efficient_profile, m_efficient_transform};
pub use enumerate::{
    enumerate_equilibria, objective_value, optimum_pow, price_of_anarchy, EquilibriumReport,
    PoaReport, ProfileSpace, DEFAULT_BUDGET,
};
pub use nash::{find_deviation, improving_moves, is_nash, DeviationWitness};
pub use smoothness::{smoothness_probe, SmoothnessProbe};
