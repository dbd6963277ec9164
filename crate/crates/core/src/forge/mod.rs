//! Instance generators and the JSON instance format.

mod io;
mod lower_bound;
mod random;

pub use io::{bundle_to_json, instance_from_json, instance_to_json, read_instance, write_instance};
pub use lower_bound::{
    gen_equi_lower_bound, gen_spt_lower_bound, LowerBoundBundle, MAX_LOWER_BOUND_JOBS,
};
pub use random::{gen_random, ValueModel};
