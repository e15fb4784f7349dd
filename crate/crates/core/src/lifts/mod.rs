//! Arithmetic over `Q(t)` and explicit low-rank lifts of tropical matrices.
//!
//! Rational exponents are handled by a scale `m`: objects store integer
//! exponents of `u = t^(1/m)`.

mod construct;
mod laurent;
mod matrix;

pub use construct::{
    build_rank3_lift, lift_hyperplane, lift_point_in_codim2, seeded_rng, LinearForm, COEFF_MAX,
    DEFAULT_RETRIES,
};
pub use laurent::{leading_sign, val, LaurentPoly, RatFunc};
pub use matrix::{common_scale, rank_over_k, verify_lift, LiftMatrix};
