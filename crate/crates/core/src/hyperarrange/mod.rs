//! Tropical hyperplanes: types of points, hyperplanes through point sets,
//! stable intersections of pairs, rank-3 certificates and tropical convex hulls.

mod certify;
mod hull;
mod stable;
mod through;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Rat;

pub use certify::{kapranov3_certify, Certificate};
pub use hull::{hull_projection, tropical_polytope_complex, HullCell, HullComplex};
pub use stable::{
    perturbation_gaps, stable_intersection_set, stable_membership, witnesses, StableIntersection,
};
pub use through::{coordinate_hyperplane, hyperplane_through_points, minimizing_pair_cell};

/// `min_i (h_i + x_i)`, a point of tropical projective space: equality is up to
/// adding a constant to every coefficient.
#[derive(Debug, Clone, Eq)]
pub struct Hyperplane {
    coeffs: Vec<Rat>,
}

impl PartialEq for Hyperplane {
    fn eq(&self, other: &Self) -> bool {
        self.normalized() == other.normalized()
    }
}

impl Hyperplane {
    pub fn new(coeffs: Vec<Rat>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::arg("a hyperplane needs at least one coefficient"));
        }
        Ok(Hyperplane { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Hyperplane {
            coeffs: crate::num::rat_vec(coeffs),
        }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Representative with first coefficient zero.
    pub fn normalized(&self) -> Vec<Rat> {
        let c = self.coeffs[0].clone();
        self.coeffs.iter().map(|x| x - &c).collect()
    }

    /// The values `h_i + w_i`.
    pub fn values(&self, w: &[Rat]) -> Vec<Rat> {
        self.coeffs.iter().zip(w).map(|(h, x)| h + x).collect()
    }

    pub fn contains(&self, w: &[Rat]) -> Result<bool> {
        Ok(type_of(w, self)?.len() >= 2)
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::num::fmt_vec(&self.coeffs))
    }
}

/// A nonempty set of coordinate indices, stored 0-based and printed 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TypeSet(pub Vec<usize>);

impl TypeSet {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// Parses `{1,2}` (1-based).
    pub fn parse(s: &str) -> Option<TypeSet> {
        let inner = s.trim().strip_prefix('{')?.strip_suffix('}')?;
        let mut v: Vec<usize> = inner
            .split(',')
            .map(|t| t.trim().parse::<usize>().ok().filter(|&x| x >= 1).map(|x| x - 1))
            .collect::<Option<_>>()?;
        v.sort_unstable();
        v.dedup();
        (!v.is_empty()).then_some(TypeSet(v))
    }
}

impl fmt::Display for TypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Indices where `h_i + w_i` is minimal.
pub fn type_of(w: &[Rat], h: &Hyperplane) -> Result<TypeSet> {
    if w.len() != h.dim() {
        return Err(Error::arg(format!(
            "point of length {} against a hyperplane in dimension {}",
            w.len(),
            h.dim()
        )));
    }
    Ok(TypeSet(argmin(&h.values(w))))
}

pub(crate) fn argmin(vals: &[Rat]) -> Vec<usize> {
    let m = vals.iter().min().expect("nonempty");
    (0..vals.len()).filter(|&i| &vals[i] == m).collect()
}

/// Gap between the smallest and the second smallest distinct value, if any.
pub(crate) fn gap(vals: &[Rat]) -> Option<Rat> {
    let m = vals.iter().min()?;
    vals.iter().filter(|v| *v != m).min().map(|s| s - m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat_vec;

    #[test]
    fn types_of_simple_points() {
        let h = Hyperplane::from_i64(&[0, 0, 0, 0, 0]);
        assert_eq!(type_of(&rat_vec(&[0, 0, 1, 2, 3]), &h).unwrap(), TypeSet(vec![0, 1]));
        assert_eq!(type_of(&rat_vec(&[1, 1, 1, 1, 1]), &h).unwrap(), TypeSet(vec![0, 1, 2, 3, 4]));
        assert!(type_of(&rat_vec(&[1, 1]), &h).is_err());
    }

    #[test]
    fn projective_equality() {
        assert_eq!(Hyperplane::from_i64(&[1, 2, 3]), Hyperplane::from_i64(&[0, 1, 2]));
        assert_ne!(Hyperplane::from_i64(&[1, 2, 3]), Hyperplane::from_i64(&[0, 2, 2]));
    }

    #[test]
    fn type_set_text() {
        let t = TypeSet(vec![0, 3]);
        assert_eq!(t.to_string(), "{1,4}");
        assert_eq!(TypeSet::parse("{1,4}"), Some(t));
        assert_eq!(TypeSet::parse("{}"), None);
        assert_eq!(TypeSet::parse("{0}"), None);
    }
}
