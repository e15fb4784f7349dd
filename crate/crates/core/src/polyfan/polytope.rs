use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::cone::{canonical_mod, canonical_subspace, Cone};
use super::dd::double_description;
use super::fan::{Fan, FanCone};
use super::lp::{lp_feasible, HalfOpenCone};
use super::refine::common_refinement;
use crate::error::{Error, Result};
use crate::num::{dot_int, rank_int, to_primitive_int, Echelon, IntVec, Rat};
use crate::trop::SignedTropPolynomial;

/// A polytope given by its vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    ambient_dim: usize,
    vertices: Vec<Vec<Rat>>,
    hom: Vec<IntVec>,
}

/// A facet: inner normal `a` and offset `c` with `<a,v> + c >= 0` on the polytope,
/// and the vertices where equality holds.
#[derive(Debug, Clone)]
pub struct Facet {
    pub normal: IntVec,
    pub offset: BigInt,
    pub vertices: FixedBitSet,
}

impl Polytope {
    /// Convex hull of `points`; points that are not vertices are dropped.
    pub fn new(ambient_dim: usize, points: Vec<Vec<Rat>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::arg("empty point set"));
        }
        if points.iter().any(|p| p.len() != ambient_dim) {
            return Err(Error::arg("point of the wrong dimension"));
        }
        let mut seen = HashSet::new();
        let points: Vec<Vec<Rat>> = points.into_iter().filter(|p| seen.insert(p.clone())).collect();
        let hom: Vec<IntVec> = points.iter().map(|p| homogenize(p)).collect();
        let keep: Vec<usize> = (0..points.len()).filter(|&i| is_vertex(&hom, i)).collect();
        Ok(Polytope {
            ambient_dim,
            vertices: keep.iter().map(|&i| points[i].clone()).collect(),
            hom: keep.iter().map(|&i| hom[i].clone()).collect(),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.face_dim(&all_of(self.vertices.len()))
    }

    /// Affine dimension of the face spanned by the chosen vertices.
    pub fn face_dim(&self, face: &FixedBitSet) -> usize {
        let rows: Vec<IntVec> = face.ones().map(|i| self.hom[i].clone()).collect();
        rank_int(&rows).saturating_sub(1)
    }

    pub fn facets(&self) -> Vec<Facet> {
        let hom = &self.hom;
        let n = self.ambient_dim + 1;
        let g = double_description(n, &[], hom);
        let (ech, _) = canonical_subspace(&g.lineality, n);
        canonical_mod(&g.rays, &ech)
            .into_iter()
            .filter_map(|y| {
                let mut vertices = FixedBitSet::with_capacity(hom.len());
                for (i, h) in hom.iter().enumerate() {
                    if dot_int(&y, h).is_zero() {
                        vertices.insert(i);
                    }
                }
                // a point's only facet is the empty face
                (!vertices.is_clear()).then(|| Facet {
                    offset: y[0].clone(),
                    normal: y[1..].to_vec(),
                    vertices,
                })
            })
            .collect()
    }

    /// All nonempty faces as vertex sets, found by closing the facets under intersection.
    pub fn faces(&self) -> Vec<FixedBitSet> {
        let facets = self.facets();
        let all = all_of(self.vertices.len());
        let mut seen: HashSet<FixedBitSet> = HashSet::new();
        seen.insert(all.clone());
        let mut queue = vec![all];
        let mut out = Vec::new();
        while let Some(f) = queue.pop() {
            for facet in &facets {
                let mut g = f.clone();
                g.intersect_with(&facet.vertices);
                if !g.is_clear() && seen.insert(g.clone()) {
                    queue.push(g);
                }
            }
            out.push(f);
        }
        out
    }
}

fn all_of(n: usize) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(n);
    b.insert_range(..);
    b
}

/// `(1, p)` scaled to a primitive integer vector.
fn homogenize(p: &[Rat]) -> IntVec {
    let mut v = Vec::with_capacity(p.len() + 1);
    v.push(Rat::one());
    v.extend(p.iter().cloned());
    to_primitive_int(&v)
}

/// A point is a vertex iff some affine functional is negative on it and
/// nonnegative on all other points.
fn is_vertex(hom: &[IntVec], i: usize) -> bool {
    if hom.len() == 1 {
        return true;
    }
    let mut c = HalfOpenCone::new(hom[0].len());
    for (j, h) in hom.iter().enumerate() {
        if j != i {
            c.weak.push(h.clone());
        }
    }
    c.strict.push(hom[i].iter().map(|x| -x).collect());
    lp_feasible(&c)
}

pub fn newton_polytope(f: &SignedTropPolynomial) -> Result<Polytope> {
    if f.is_empty() {
        return Err(Error::arg("empty polynomial"));
    }
    let points = f
        .terms()
        .iter()
        .map(|t| t.exponent.iter().map(|&e| Rat::from_integer(e.into())).collect())
        .collect();
    Polytope::new(f.nvars(), points)
}

/// Inner normal fan: the cone of a face `F` is the closure of the set of `w`
/// for which `<w,.>` is minimized on the polytope exactly at `F`.
pub fn normal_fan(p: &Polytope, ambient_dim: usize) -> Result<Fan> {
    if p.ambient_dim() != ambient_dim {
        return Err(Error::arg("polytope and fan dimensions differ"));
    }
    let n = ambient_dim;
    // w is constant on the polytope iff <w, v - v0> = 0 for all vertices
    let v0 = &p.vertices[0];
    let diffs: Vec<IntVec> = p.vertices[1..]
        .iter()
        .map(|v| {
            let d: Vec<Rat> = v.iter().zip(v0).map(|(a, b)| a - b).collect();
            to_primitive_int(&d)
        })
        .collect();
    let lineality = Echelon::from_int(&diffs, n).kernel_basis(n);
    let facets = p.facets();
    let rays: Vec<IntVec> = facets.iter().map(|f| f.normal.clone()).collect();
    let cones: Vec<FanCone> = p
        .faces()
        .into_iter()
        .map(|face| {
            let rays: Vec<usize> = (0..facets.len())
                .filter(|&k| face.is_subset(&facets[k].vertices))
                .collect();
            FanCone {
                dim: n - p.face_dim(&face),
                rays,
            }
        })
        .collect();
    Fan::from_parts(n, &lineality, &rays, cones)
}

/// Codimension-one skeleton of the normal fan of the Newton polytope.
pub fn hypersurface_fan(f: &SignedTropPolynomial) -> Result<Fan> {
    if f.len() < 2 {
        return Err(Error::arg("hypersurface of a monomial is empty"));
    }
    if !f.has_constant_coefficients() {
        return Err(Error::arg(
            "coefficients are not all equal; the hypersurface is not a fan (use hypersurface_complex)",
        ));
    }
    let n = f.nvars();
    let fan = normal_fan(&newton_polytope(f)?, n)?;
    Ok(fan.subfan(|c| c.dim < n))
}

/// Hypersurface of a polynomial with arbitrary coefficients, homogenized: a fan in
/// `R^{N+1}` inside `{s >= 0}` whose slice at `s = 1` (last coordinate) is the
/// polyhedral complex `{w : min_i (c_i + <w, a_i>) attained twice}`, and whose
/// slice at `s = 0` is its recession fan.
pub fn hypersurface_complex(f: &SignedTropPolynomial) -> Result<Fan> {
    if f.len() < 2 {
        return Err(Error::arg("hypersurface of a monomial is empty"));
    }
    let n = f.nvars() + 1;
    let points: Vec<Vec<Rat>> = f
        .terms()
        .iter()
        .map(|t| {
            let mut p: Vec<Rat> = t.exponent.iter().map(|&e| Rat::from_integer(e.into())).collect();
            p.push(t.coeff_val.clone());
            p
        })
        .collect();
    let lifted = Polytope::new(n, points)?;
    let fan = normal_fan(&lifted, n)?.subfan(|c| c.dim < n);
    let mut s = vec![BigInt::zero(); n];
    s[n - 1] = BigInt::one();
    let half = Cone::new(n, &[], &[s]);
    common_refinement(&[fan], Some(&half))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat_vec;
    use crate::trop::minor;

    #[test]
    fn square_has_four_vertices_and_four_chambers() {
        let pts = vec![
            rat_vec(&[0, 0]),
            rat_vec(&[1, 0]),
            rat_vec(&[0, 1]),
            rat_vec(&[1, 1]),
            rat_vec(&[1, 1]),
        ];
        let p = Polytope::new(2, pts).unwrap();
        assert_eq!(p.vertices().len(), 4);
        let f = normal_fan(&p, 2).unwrap();
        assert_eq!(f.lineality_dim(), 0);
        assert_eq!(f.f_vector().counts, vec![1, 4, 4]);
        f.check_intersections().unwrap();
    }

    #[test]
    fn interior_points_are_dropped() {
        let pts = vec![rat_vec(&[0, 0]), rat_vec(&[2, 0]), rat_vec(&[0, 2]), rat_vec(&[1, 1]), rat_vec(&[0, 1])];
        let p = Polytope::new(2, pts).unwrap();
        assert_eq!(p.vertices().len(), 3);
        assert_eq!(p.dim(), 2);
    }

    #[test]
    fn segment_minor() {
        let f = minor(2, 2, &[0, 1], &[0, 1]).unwrap();
        let p = newton_polytope(&f).unwrap();
        assert_eq!(p.vertices().len(), 2);
        let nf = normal_fan(&p, 4).unwrap();
        assert_eq!(nf.lineality_dim(), 3);
        assert_eq!(nf.f_vector().counts, vec![1, 2]);
        let h = hypersurface_fan(&f).unwrap();
        assert_eq!(h.f_vector().counts, vec![1]);
        assert_eq!(h.lineality_dim(), 3);
    }

    #[test]
    fn three_by_three_determinant() {
        let f = minor(3, 3, &[0, 1, 2], &[0, 1, 2]).unwrap();
        let p = newton_polytope(&f).unwrap();
        assert_eq!(p.vertices().len(), 6);
        assert_eq!(p.dim(), 4);
        let nf = normal_fan(&p, 9).unwrap();
        assert_eq!(nf.lineality_dim(), 5);
        assert_eq!(nf.maximal_cones().len(), 6);
    }

    #[test]
    fn monomial_has_no_hypersurface() {
        let f = minor(1, 1, &[0], &[0]).unwrap();
        assert!(hypersurface_fan(&f).is_err());
    }
}
