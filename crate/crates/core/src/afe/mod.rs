//! Gamma factors, the smoothing function `V_{1/2}(y, x)`, central values by the
//! approximate functional equation, dyadic partitions of unity, and lattice counts.

pub mod dyadic;
pub mod gamma;
pub mod lattice;
pub mod lvalue;
pub mod v;

pub use dyadic::{bump_b, smooth_step, u_weight, w, w_a_prime, w_b};
pub use gamma::{gamma_quotient, ln_gamma};
pub use lattice::{in_p_r, lipschitz_bound, lipschitz_count, s_r_count, LatticeRegion, SRCount};
pub use lvalue::{conductor_q_d, l_central, q_infty, AfeResult};
pub use v::{v_half, v_half_on_line, VEvaluator, VInterpolant};
