//! The guide's chapters as doc comments, so `cargo test` runs every
//! snippet in book/src against the current library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/model.md")]
pub mod model {}
#[doc = include_str!("../../../book/src/policies.md")]
pub mod policies {}
#[doc = include_str!("../../../book/src/equilibria.md")]
pub mod equilibria {}
#[doc = include_str!("../../../book/src/dynamics.md")]
pub mod dynamics {}
#[doc = include_str!("../../../book/src/lower-bounds.md")]
pub mod lower_bounds {}
#[doc = include_str!("../../../book/src/lab.md")]
pub mod lab {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
