//! Tropical semiring arithmetic: matrices, determinants, rank, minors and initial forms.

mod det;
pub(crate) mod matrix;
mod poly;

pub use det::{
    is_trop_singular, nonsingular_submatrix, trop_det, trop_det_assignment, trop_det_brute_force,
    tropical_rank, tropical_rank_report, Multiplicity, RankReport, TropDetResult,
    ASSIGNMENT_LIMIT, BRUTE_FORCE_LIMIT, RANK_LIMIT,
};
pub use matrix::TropicalMatrix;
pub use poly::{minor, minors, permutation_is_even, SignedTropPolynomial, Term};
