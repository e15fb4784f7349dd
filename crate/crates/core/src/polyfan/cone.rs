use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::dd::double_description;
use super::lp::HalfOpenCone;
use crate::num::{dot_int, dot_int_rat, int_to_rat, to_primitive_int, Echelon, IntVec, Rat};

/// A closed polyhedral cone `{x : E x = 0, A x >= 0}` held in both representations.
///
/// The H-side is canonical: equations are the primitive rows of the reduced
/// echelon basis of the orthogonal complement of the span, and facets are the
/// irredundant inequalities reduced modulo the equations, primitive and sorted.
/// The V-side is canonical in the same way with respect to the lineality space.
/// Equality, ordering and hashing use the H-side only.
#[derive(Debug, Clone)]
pub struct Cone {
    ambient_dim: usize,
    equations: Vec<IntVec>,
    facets: Vec<IntVec>,
    lineality: Vec<IntVec>,
    rays: Vec<IntVec>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Cone {}

impl Hash for Cone {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cone {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl Cone {
    fn key(&self) -> (usize, &[IntVec], &[IntVec]) {
        (self.ambient_dim, &self.equations, &self.facets)
    }

    /// The cone `{x : <e,x> = 0 for e in eqs, <a,x> >= 0 for a in ineqs}`.
    pub fn new(ambient_dim: usize, eqs: &[IntVec], ineqs: &[IntVec]) -> Self {
        let g = double_description(ambient_dim, eqs, ineqs);
        Self::from_generators(ambient_dim, &g.lineality, &g.rays)
    }

    pub fn from_rat(ambient_dim: usize, eqs: &[Vec<Rat>], ineqs: &[Vec<Rat>]) -> Self {
        let e: Vec<IntVec> = eqs.iter().map(|v| to_primitive_int(v)).collect();
        let a: Vec<IntVec> = ineqs.iter().map(|v| to_primitive_int(v)).collect();
        Self::new(ambient_dim, &e, &a)
    }

    /// The cone `span(lineality) + cone(rays)`. Redundant generators are removed.
    pub fn from_generators(ambient_dim: usize, lineality: &[IntVec], rays: &[IntVec]) -> Self {
        // facets of C are the extreme rays of the dual cone
        let dual = double_description(ambient_dim, lineality, rays);
        let (eq_ech, equations) = canonical_subspace(&dual.lineality, ambient_dim);
        let facets = canonical_mod(&dual.rays, &eq_ech);
        // and back, which drops redundant generators
        let primal = double_description(ambient_dim, &equations, &facets);
        let (lin_ech, lineality) = canonical_subspace(&primal.lineality, ambient_dim);
        let rays = canonical_mod(&primal.rays, &lin_ech);
        Cone {
            ambient_dim,
            equations,
            facets,
            lineality,
            rays,
        }
    }

    /// Re-canonicalizes both representations of an irredundant description, e.g. the
    /// image of a canonical cone under a coordinate permutation. No redundancy removal.
    fn from_parts(
        ambient_dim: usize,
        equations: Vec<IntVec>,
        facets: Vec<IntVec>,
        lineality: Vec<IntVec>,
        rays: Vec<IntVec>,
    ) -> Self {
        let (eq_ech, equations) = canonical_subspace(&equations, ambient_dim);
        let facets = canonical_mod(&facets, &eq_ech);
        let (lin_ech, lineality) = canonical_subspace(&lineality, ambient_dim);
        let rays = canonical_mod(&rays, &lin_ech);
        Cone {
            ambient_dim,
            equations,
            facets,
            lineality,
            rays,
        }
    }

    /// All of `R^n`.
    pub fn full(ambient_dim: usize) -> Self {
        Self::new(ambient_dim, &[], &[])
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.ambient_dim - self.equations.len()
    }

    pub fn lineality_dim(&self) -> usize {
        self.lineality.len()
    }

    pub fn equations(&self) -> &[IntVec] {
        &self.equations
    }

    pub fn facets(&self) -> &[IntVec] {
        &self.facets
    }

    pub fn lineality(&self) -> &[IntVec] {
        &self.lineality
    }

    pub fn rays(&self) -> &[IntVec] {
        &self.rays
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.equations.iter().all(|e| dot_int_rat(e, x).is_zero())
            && self.facets.iter().all(|a| !dot_int_rat(a, x).is_negative())
    }

    pub fn contains_int(&self, x: &IntVec) -> bool {
        self.equations.iter().all(|e| dot_int(e, x).is_zero())
            && self.facets.iter().all(|a| !dot_int(a, x).is_negative())
    }

    /// Whether `x` lies in the relative interior.
    pub fn relint_contains(&self, x: &[Rat]) -> bool {
        self.equations.iter().all(|e| dot_int_rat(e, x).is_zero())
            && self.facets.iter().all(|a| dot_int_rat(a, x).is_positive())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.rays.iter().all(|r| self.contains_int(r))
            && other.lineality.iter().all(|l| {
                let neg: IntVec = l.iter().map(|x| -x).collect();
                self.contains_int(l) && self.contains_int(&neg)
            })
    }

    /// Sum of the rays: strictly inside every facet.
    pub fn relative_interior_point(&self) -> Vec<Rat> {
        let mut s = vec![BigInt::zero(); self.ambient_dim];
        for r in &self.rays {
            for (x, y) in s.iter_mut().zip(r) {
                *x += y;
            }
        }
        int_to_rat(&s)
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        let mut eqs = self.equations.clone();
        eqs.extend(other.equations.iter().cloned());
        let mut ineqs = self.facets.clone();
        ineqs.extend(other.facets.iter().cloned());
        Cone::new(self.ambient_dim, &eqs, &ineqs)
    }

    /// Relative interior as a half-open cone.
    pub fn relint(&self) -> HalfOpenCone {
        HalfOpenCone {
            ambient_dim: self.ambient_dim,
            equalities: self.equations.clone(),
            weak: Vec::new(),
            strict: self.facets.clone(),
        }
    }

    pub fn as_half_open(&self) -> HalfOpenCone {
        HalfOpenCone {
            ambient_dim: self.ambient_dim,
            equalities: self.equations.clone(),
            weak: self.facets.clone(),
            strict: Vec::new(),
        }
    }

    /// Image under the coordinate permutation `x -> y` with `y[perm[i]] = x[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Cone {
        let p = |v: &IntVec| permute_vec(v, perm);
        Cone::from_parts(
            self.ambient_dim,
            self.equations.iter().map(p).collect(),
            self.facets.iter().map(p).collect(),
            self.lineality.iter().map(p).collect(),
            self.rays.iter().map(p).collect(),
        )
    }

    /// Nonempty faces as subsets of `rays()`, with their dimensions. The face
    /// equal to the lineality space has the empty ray set.
    pub fn faces(&self) -> Vec<(FixedBitSet, usize)> {
        let nr = self.rays.len();
        // ray incidence of each facet
        let incid: Vec<FixedBitSet> = self
            .facets
            .iter()
            .map(|a| {
                let mut b = FixedBitSet::with_capacity(nr);
                for (i, r) in self.rays.iter().enumerate() {
                    if dot_int(a, r).is_zero() {
                        b.insert(i);
                    }
                }
                b
            })
            .collect();
        let mut all = FixedBitSet::with_capacity(nr);
        all.insert_range(..);
        let mut seen: std::collections::HashSet<FixedBitSet> = std::collections::HashSet::new();
        let mut queue = vec![all.clone()];
        seen.insert(all);
        let mut out = Vec::new();
        while let Some(f) = queue.pop() {
            for b in &incid {
                let mut g = f.clone();
                g.intersect_with(b);
                if seen.insert(g.clone()) {
                    queue.push(g);
                }
            }
            out.push(f);
        }
        let mut out: Vec<(FixedBitSet, usize)> = out
            .into_iter()
            .map(|f| {
                let d = self.lineality.len() + span_rank_mod(&self.rays, &f, &self.lineality);
                (f, d)
            })
            .collect();
        out.sort_by_key(|a| (a.1, a.0.ones().collect::<Vec<_>>()));
        out
    }

    /// The face spanned by the lineality and the chosen rays.
    pub fn face(&self, rays: &FixedBitSet) -> Cone {
        let chosen: Vec<IntVec> = rays.ones().map(|i| self.rays[i].clone()).collect();
        Cone::from_generators(self.ambient_dim, &self.lineality, &chosen)
    }
}

pub(crate) fn permute_vec<T: Clone + Zero>(v: &[T], perm: &[usize]) -> Vec<T> {
    let mut out = vec![T::zero(); v.len()];
    for (i, x) in v.iter().enumerate() {
        out[perm[i]] = x.clone();
    }
    out
}

/// Reduced echelon basis of `span(vs)`, as primitive integer rows.
pub(crate) fn canonical_subspace(vs: &[IntVec], n: usize) -> (Echelon, Vec<IntVec>) {
    let e = Echelon::from_int(vs, n);
    let rows = e.int_rows();
    (e, rows)
}

/// Each vector reduced modulo the subspace, primitive, sorted and deduplicated.
pub(crate) fn canonical_mod(vs: &[IntVec], sub: &Echelon) -> Vec<IntVec> {
    let mut out: Vec<IntVec> = vs
        .iter()
        .map(|v| {
            if sub.rank() == 0 {
                let mut w = v.clone();
                crate::num::make_primitive(&mut w);
                w
            } else {
                to_primitive_int(&sub.reduce(&int_to_rat(v)))
            }
        })
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Rank of the chosen rays modulo the lineality space.
fn span_rank_mod(rays: &[IntVec], chosen: &FixedBitSet, lineality: &[IntVec]) -> usize {
    let mut rows: Vec<IntVec> = lineality.to_vec();
    rows.extend(chosen.ones().map(|i| rays[i].clone()));
    crate::num::rank_int(&rows) - lineality.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int_vec, rat_vec};

    #[test]
    fn canonical_form_ignores_redundancy_and_scaling() {
        let a = Cone::new(2, &[], &[int_vec(&[1, 0]), int_vec(&[0, 1])]);
        let b = Cone::new(
            2,
            &[],
            &[int_vec(&[2, 0]), int_vec(&[0, 3]), int_vec(&[1, 1]), int_vec(&[0, 1])],
        );
        assert_eq!(a, b);
        assert_eq!(a.rays().len(), 2);
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn relative_interior_of_a_ray_in_the_plane() {
        // {x1 = x2, x1 >= 0}
        let c = Cone::new(2, &[int_vec(&[1, -1])], &[int_vec(&[1, 0])]);
        assert_eq!(c.dim(), 1);
        assert_eq!(c.lineality_dim(), 0);
        let p = c.relative_interior_point();
        assert!(c.contains(&p));
        assert!(c.relint_contains(&p));
        assert_eq!(p, rat_vec(&[1, 1]));
    }

    #[test]
    fn generators_and_inequalities_agree() {
        let c = Cone::from_generators(3, &[int_vec(&[1, 1, 1])], &[int_vec(&[1, 0, 0]), int_vec(&[0, 1, 0])]);
        assert_eq!(c.dim(), 3);
        assert_eq!(c.lineality_dim(), 1);
        let d = Cone::new(3, c.equations(), c.facets());
        assert_eq!(c, d);
        assert_eq!(c.rays(), d.rays());
    }

    #[test]
    fn faces_of_a_quadrant_times_a_line() {
        let c = Cone::from_generators(3, &[int_vec(&[0, 0, 1])], &[int_vec(&[1, 0, 0]), int_vec(&[0, 1, 0])]);
        let dims: Vec<usize> = c.faces().iter().map(|f| f.1).collect();
        assert_eq!(dims, vec![1, 2, 2, 3]);
    }

    #[test]
    fn permutation_acts_on_both_sides() {
        let c = Cone::new(3, &[], &[int_vec(&[1, -1, 0]), int_vec(&[0, 1, -1])]);
        let p = c.permuted(&[2, 1, 0]);
        let q = Cone::new(3, &[], &[int_vec(&[0, -1, 1]), int_vec(&[-1, 1, 0])]);
        assert_eq!(p, q);
        assert_eq!(p.rays(), q.rays());
        assert_eq!(p.lineality(), q.lineality());
    }
}
