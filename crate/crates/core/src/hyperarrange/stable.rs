use num_traits::Signed;

use super::{gap, type_of, Hyperplane, TypeSet};
use crate::error::{Error, Result};
use crate::num::Rat;
use crate::polyfan::{common_refinement, hypersurface_complex, Cone};
use crate::trop::SignedTropPolynomial;

fn both_types(w: &[Rat], h: &Hyperplane, h2: &Hyperplane) -> Result<(TypeSet, TypeSet)> {
    let (t, t2) = (type_of(w, h)?, type_of(w, h2)?);
    if t.len() < 2 || t2.len() < 2 {
        return Err(Error::Precondition(format!(
            "point {} is not on both hyperplanes (types {t} and {t2})",
            crate::num::fmt_vec(w)
        )));
    }
    Ok((t, t2))
}

/// Whether `w`, a point on both hyperplanes, lies in their stable intersection:
/// it fails exactly when both types agree and have two elements.
pub fn stable_membership(w: &[Rat], h: &Hyperplane, h2: &Hyperplane) -> Result<bool> {
    let (t, t2) = both_types(w, h, h2)?;
    Ok(!(t == t2 && t.len() == 2))
}

/// Points outside the stable intersection, with their common two-element type.
pub fn witnesses(points: &[Vec<Rat>], h: &Hyperplane, h2: &Hyperplane) -> Result<Vec<(usize, TypeSet)>> {
    let mut out = Vec::new();
    for (k, w) in points.iter().enumerate() {
        let (t, t2) = both_types(w, h, h2)?;
        if t == t2 && t.len() == 2 {
            out.push((k, t));
        }
    }
    Ok(out)
}

/// `(Δ, Δ')`: gap between the smallest and second smallest value of each
/// hyperplane evaluated at `w`; `None` when only one value occurs.
pub fn perturbation_gaps(w: &[Rat], h: &Hyperplane, h2: &Hyperplane) -> Result<(Option<Rat>, Option<Rat>)> {
    if w.len() != h.dim() || w.len() != h2.dim() {
        return Err(Error::arg("dimension mismatch"));
    }
    Ok((gap(&h.values(w)), gap(&h2.values(w))))
}

/// Stable intersection of two hyperplanes as a set of closed cells, each stored
/// homogenized in `R^{d+1}` with last coordinate `s > 0` on its interior.
#[derive(Debug, Clone)]
pub struct StableIntersection {
    dim: usize,
    cells: Vec<Cone>,
}

impl StableIntersection {
    pub fn cells(&self) -> &[Cone] {
        &self.cells
    }

    /// Largest cell dimension in `TP^{d-1}`, i.e. not counting the all-ones direction.
    pub fn dim(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.dim() - 2).max()
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        if x.len() != self.dim {
            return false;
        }
        let mut p = x.to_vec();
        p.push(Rat::from_integer(1.into()));
        self.cells.iter().any(|c| c.contains(&p))
    }
}

pub fn stable_intersection_set(h: &Hyperplane, h2: &Hyperplane) -> Result<StableIntersection> {
    let d = h.dim();
    if h2.dim() != d || d < 2 {
        return Err(Error::arg("hyperplanes must share a dimension of at least 2"));
    }
    let f = hypersurface_complex(&SignedTropPolynomial::linear_form(h.coeffs()))?;
    let f2 = hypersurface_complex(&SignedTropPolynomial::linear_form(h2.coeffs()))?;
    let refined = common_refinement(&[f, f2], None)?;
    let mut cells = Vec::new();
    for c in refined.all_cones() {
        let p = c.relative_interior_point();
        let s = &p[d];
        if !s.is_positive() {
            continue;
        }
        let x: Vec<Rat> = p[..d].iter().map(|v| v / s).collect();
        if stable_membership(&x, h, h2)? {
            cells.push(c);
        }
    }
    Ok(StableIntersection { dim: d, cells })
}
