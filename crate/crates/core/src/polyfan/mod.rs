//! Exact polyhedral geometry: cones, polytopes, fans and common refinements.

pub mod cone;
mod dd;
pub mod fan;
pub mod lp;
pub mod polytope;
pub mod refine;

pub use cone::Cone;
pub use fan::{euler_characteristic, FVector, Fan, FanCone};
pub use lp::{implied, lp_feasible, lp_feasible_with, lp_point, HalfOpenCone, LpBackend};
pub use polytope::{hypersurface_complex, hypersurface_fan, newton_polytope, normal_fan, Facet, Polytope};
pub use refine::{common_refinement, common_refinement_with, RefineOptions};

use crate::num::Rat;

pub fn relative_interior_point(c: &Cone) -> Vec<Rat> {
    c.relative_interior_point()
}

pub fn cone_dim(c: &Cone) -> usize {
    c.dim()
}

pub fn cone_contains(c: &Cone, x: &[Rat]) -> bool {
    c.contains(x)
}
