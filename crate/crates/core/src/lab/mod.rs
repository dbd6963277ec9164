//! Exact and numerical checks of the smooth inequalities and their
//! explicit constants.
//!
//! Polynomial inequalities are compared exactly over rationals. The
//! transcendental pieces (the root `z0`, Lambert W, Euler's number) are
//! floating point with stated tolerances; where such a value feeds an exact
//! check it is first rounded up to a rational bound.

mod bell;
mod certificate;
mod checks;
mod lambert;
mod sample;
mod sequences;
mod sweep;

pub use bell::{bell, dobinski_partial_sum, verify_dobinski, DobinskiCheck};
pub use certificate::{
    lambda_equi, lambda_spt, mu_smooth, smooth_certificate, AFamily, Regime, SmoothCertificate,
};
pub use checks::{
    verify_ab_inequality, verify_coor_sum, verify_equi_spt_ratio, verify_lemma_simple,
    verify_smooth_simple, Check, RatioCheck,
};
pub use lambert::{lambert_w, verify_g_bounds, GBounds};
pub use sample::{log_uniform, random_instance, random_profile, random_triple, uniform_rational};
pub use sequences::{
    verify_smooth_equi, verify_smooth_spt, verify_smooth_spt_modif, SequenceTriple,
};
pub use sweep::{psi_properties, run_suite, run_sweep, Suite, SweepReport};
