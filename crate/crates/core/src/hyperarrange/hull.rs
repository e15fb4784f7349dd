//! Tropical convex hull `{min_i (λ_i + w_i)}` of finitely many points.
//!
//! Point `i` splits space by which `j` maximizes `x_j - w_ij`. Such a region is
//! a normal cone of the simplex on `(1 - e_j, w_ij)` in `R^{d+1}`, so refining
//! those normal fans (with `s >= 0`) yields every type cell, homogenized. The
//! hull is the union of the bounded ones. Adjacent coplanar cells whose union
//! is convex are then merged, which gives the coarsest cell structure.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::num::{dot_int, IntVec, Rat};
use crate::polyfan::{common_refinement, normal_fan, Cone, Fan, Polytope};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HullCell {
    pub dim: usize,
    /// Vertices of the cell, normalized to first coordinate zero.
    #[serde(serialize_with = "ser_points")]
    pub vertices: Vec<Vec<Rat>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HullComplex {
    /// Cell counts by dimension of the coarsest structure, vertices first.
    pub f_vector: Vec<u64>,
    pub cells: Vec<HullCell>,
    /// Cell counts of the finer decomposition by types.
    pub type_f_vector: Vec<u64>,
}

fn ser_points<S: serde::Serializer>(pts: &[Vec<Rat>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Vec<String>> = pts.iter().map(|p| p.iter().map(|x| x.to_string()).collect()).collect();
    serde::Serialize::serialize(&v, s)
}

pub const HULL_MAX_POINTS: usize = 8;
pub const HULL_MAX_DIM: usize = 5;

fn type_fan(w: &[Rat]) -> Result<Fan> {
    let d = w.len();
    let pts: Vec<Vec<Rat>> = (0..d)
        .map(|j| {
            let mut p: Vec<Rat> = (0..d).map(|k| Rat::from_integer(((k != j) as i64).into())).collect();
            p.push(w[j].clone());
            p
        })
        .collect();
    normal_fan(&Polytope::new(d + 1, pts)?, d + 1)
}

pub fn tropical_polytope_complex(points: &[Vec<Rat>]) -> Result<HullComplex> {
    let d = points.first().map_or(0, |p| p.len());
    if points.is_empty() || points.len() > HULL_MAX_POINTS {
        return Err(Error::arg(format!("need between 1 and {HULL_MAX_POINTS} points")));
    }
    if !(2..=HULL_MAX_DIM).contains(&d) || points.iter().any(|p| p.len() != d) {
        return Err(Error::arg(format!("points must share a dimension between 2 and {HULL_MAX_DIM}")));
    }
    let fans = points.iter().map(|w| type_fan(w)).collect::<Result<Vec<_>>>()?;
    let mut s = vec![num_bigint::BigInt::zero(); d + 1];
    s[d] = 1.into();
    let half = Cone::new(d + 1, &[], &[s]);
    let refined = common_refinement(&fans, Some(&half))?;
    let bounded: Vec<Cone> = refined.all_cones().into_iter().filter(|c| is_bounded(c, d)).collect();
    let type_f_vector = f_vector_of(bounded.iter().map(|c| c.dim() - 2));
    let mut cells: Vec<HullCell> = face_closure(&coarsen(maximal(&bounded)))
        .into_iter()
        .map(|c| HullCell {
            dim: c.dim() - 2,
            vertices: c.rays().iter().map(|r| dehomogenize(r, d)).collect(),
        })
        .collect();
    cells.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.vertices.cmp(&b.vertices)));
    let f_vector = f_vector_of(cells.iter().map(|c| c.dim));
    Ok(HullComplex {
        f_vector,
        cells,
        type_f_vector,
    })
}

fn f_vector_of(dims: impl Iterator<Item = usize>) -> Vec<u64> {
    let mut f = Vec::new();
    for k in dims {
        if f.len() <= k {
            f.resize(k + 1, 0);
        }
        f[k] += 1;
    }
    f
}

fn maximal(cells: &[Cone]) -> Vec<Cone> {
    cells
        .iter()
        .filter(|c| !cells.iter().any(|o| o.dim() > c.dim() && o.contains_cone(c)))
        .cloned()
        .collect()
}

fn face_closure(maximal: &[Cone]) -> Vec<Cone> {
    let mut out = BTreeSet::new();
    for m in maximal {
        for (rays, dim) in m.faces() {
            if dim >= 2 {
                out.insert(m.face(&rays));
            }
        }
    }
    out.into_iter().collect()
}

/// Repeatedly merges two maximal cells with the same span that meet in a common
/// facet lying in no other maximal cell, whenever their union is convex.
fn coarsen(mut cells: Vec<Cone>) -> Vec<Cone> {
    'outer: loop {
        for a in 0..cells.len() {
            for b in a + 1..cells.len() {
                let (p, q) = (&cells[a], &cells[b]);
                if p.dim() != q.dim() || p.equations() != q.equations() {
                    continue;
                }
                let f = p.intersect(q);
                if f.dim() + 1 != p.dim() {
                    continue;
                }
                if cells.iter().enumerate().any(|(k, c)| k != a && k != b && c.contains_cone(&f)) {
                    continue;
                }
                if let Some(m) = convex_union(p, q, &f) {
                    cells.swap_remove(b);
                    cells[a] = m;
                    continue 'outer;
                }
            }
        }
        return cells;
    }
}

/// `p ∪ q` as a cone when it is convex. `p` and `q` share the facet `f`; the
/// union is convex exactly when each satisfies the other's remaining facets.
fn convex_union(p: &Cone, q: &Cone, f: &Cone) -> Option<Cone> {
    let rest = |c: &Cone| -> Vec<IntVec> {
        c.facets()
            .iter()
            .filter(|a| !f.rays().iter().chain(f.lineality()).all(|r| dot_int(a, r).is_zero()))
            .cloned()
            .collect()
    };
    let (rp, rq) = (rest(p), rest(q));
    let ok = |facets: &[IntVec], other: &Cone| {
        facets.iter().all(|a| other.rays().iter().all(|r| !dot_int(a, r).is_negative()))
    };
    if !ok(&rp, q) || !ok(&rq, p) {
        return None;
    }
    let ineqs: Vec<IntVec> = rp.into_iter().chain(rq).collect();
    Some(Cone::new(p.ambient_dim(), p.equations(), &ineqs))
}

/// A cell is bounded when it is not at infinity and has no direction at infinity.
fn is_bounded(c: &Cone, d: usize) -> bool {
    c.lineality().iter().all(|l| l[d].is_zero())
        && c.dim() >= 2
        && c.rays().iter().all(|r| r[d].is_positive())
}

fn dehomogenize(r: &[num_bigint::BigInt], d: usize) -> Vec<Rat> {
    let s = Rat::from_integer(r[d].clone());
    let x0 = Rat::from_integer(r[0].clone());
    r[..d].iter().map(|x| (Rat::from_integer(x.clone()) - &x0) / &s).collect()
}

/// `min_i (λ_i + w_i)` with the smallest `λ` keeping every entry `>= x`:
/// equals `x` exactly when `x` lies in the hull.
pub fn hull_projection(points: &[Vec<Rat>], x: &[Rat]) -> Vec<Rat> {
    let lambdas: Vec<Rat> = points
        .iter()
        .map(|w| x.iter().zip(w).map(|(a, b)| a - b).max().expect("nonempty"))
        .collect();
    (0..x.len())
        .map(|j| points.iter().zip(&lambdas).map(|(w, l)| l + &w[j]).min().expect("nonempty"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat_vec;

    fn columns(rows: &[[i64; 5]; 5]) -> Vec<Vec<Rat>> {
        (0..5).map(|j| rat_vec(&rows.iter().map(|r| r[j]).collect::<Vec<_>>())).collect()
    }

    #[test]
    fn published_figure_hull() {
        let w = columns(&[
            [-2, -2, 0, 2, 2],
            [-2, -2, 0, 2, 2],
            [0, 0, 2, -1, -1],
            [2, 2, -1, 1, -4],
            [2, 2, -1, -4, 1],
        ]);
        let h = tropical_polytope_complex(&w).unwrap();
        assert_eq!(h.f_vector, vec![7, 9, 3]);
        // each parallelogram is cut into two triangles by types
        assert_eq!(h.type_f_vector, vec![7, 12, 6]);
    }

    #[test]
    fn one_and_two_points() {
        let h = tropical_polytope_complex(&[rat_vec(&[0, 1, 5])]).unwrap();
        assert_eq!(h.f_vector, vec![1]);
        let h = tropical_polytope_complex(&[rat_vec(&[0, 0, 0]), rat_vec(&[0, 1, 3])]).unwrap();
        assert_eq!(h.f_vector, vec![3, 2]);
    }

    #[test]
    fn cell_interiors_are_in_the_hull() {
        let w = vec![rat_vec(&[0, 0, 0]), rat_vec(&[0, 2, 1]), rat_vec(&[0, -1, 3])];
        let h = tropical_polytope_complex(&w).unwrap();
        for c in &h.cells {
            let n = Rat::from_integer((c.vertices.len() as i64).into());
            let centre: Vec<Rat> = (0..3)
                .map(|k| c.vertices.iter().map(|v| v[k].clone()).sum::<Rat>() / &n)
                .collect();
            assert_eq!(hull_projection(&w, &centre), centre);
        }
    }
}
