//! Coordinate permutation groups acting on matrix space, fundamental domains and orbits.
//!
//! A permutation `p` acts by `(p.x)[p[i]] = x[i]`, the same convention as
//! [`Cone::permuted`].

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::num::{IntVec, Rat};
use crate::polyfan::cone::{canonical_mod, canonical_subspace, permute_vec};
use crate::polyfan::{common_refinement, Cone, Fan};

pub const MAX_GROUP_ORDER: usize = 1_000_000;

pub type Perm = Vec<usize>;

#[derive(Debug, Clone)]
pub struct CoordPermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: OnceLock<std::result::Result<Vec<Perm>, String>>,
}

impl CoordPermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        for g in &generators {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&i| i >= degree || std::mem::replace(&mut seen[i], true)) {
                return Err(Error::arg(format!("{g:?} is not a permutation of {degree} points")));
            }
        }
        Ok(CoordPermGroup {
            degree,
            generators,
            elements: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        Self::new(degree, Vec::new()).expect("no generators")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// All elements in lexicographic order, identity first. Materialized on first use.
    pub fn elements(&self) -> Result<&[Perm]> {
        self.elements
            .get_or_init(|| self.close())
            .as_deref()
            .map_err(|e| Error::arg(e.clone()))
    }

    fn close(&self) -> std::result::Result<Vec<Perm>, String> {
        let id: Perm = (0..self.degree).collect();
        let mut seen: HashSet<Perm> = HashSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in &self.generators {
                let q = compose(g, &p);
                if seen.insert(q.clone()) {
                    if seen.len() > MAX_GROUP_ORDER {
                        return Err(format!("group order exceeds {MAX_GROUP_ORDER}"));
                    }
                    queue.push_back(q);
                }
            }
        }
        let mut out: Vec<Perm> = seen.into_iter().collect();
        out.sort();
        // closure under composition of generators gives a group for finite permutations;
        // check the inverse property on the generators as a sanity test
        let set: HashSet<&Perm> = out.iter().collect();
        if self.generators.iter().any(|g| !set.contains(&inverse(g))) {
            return Err("generated set is not closed under inverses".into());
        }
        Ok(out)
    }

    pub fn order(&self) -> Result<usize> {
        Ok(self.elements()?.len())
    }

    /// The same abstract group acting on the coordinates `positions` of `R^degree`
    /// and fixing every other coordinate.
    pub fn embedded(&self, positions: &[usize], degree: usize) -> Result<Self> {
        if positions.len() != self.degree || positions.iter().any(|&p| p >= degree) {
            return Err(Error::arg("bad embedding"));
        }
        let gens = self
            .generators
            .iter()
            .map(|g| {
                let mut big: Perm = (0..degree).collect();
                for (i, &gi) in g.iter().enumerate() {
                    big[positions[i]] = positions[gi];
                }
                big
            })
            .collect();
        Self::new(degree, gens)
    }
}

/// `(a . b)(i) = a[b[i]]`: apply `b` first.
pub fn compose(a: &[usize], b: &[usize]) -> Perm {
    b.iter().map(|&i| a[i]).collect()
}

pub fn inverse(p: &[usize]) -> Perm {
    let mut q = vec![0; p.len()];
    for (i, &pi) in p.iter().enumerate() {
        q[pi] = i;
    }
    q
}

pub fn apply<T: Clone + Zero>(p: &[usize], v: &[T]) -> Vec<T> {
    permute_vec(v, p)
}

/// Row swaps, column swaps and (for square shapes) transposition acting on
/// row-major coordinates `i*n + j` of `d x n` matrices.
pub fn matrix_symmetry_group(d: usize, n: usize) -> Result<CoordPermGroup> {
    if d == 0 || n == 0 {
        return Err(Error::arg("matrix dimensions must be positive"));
    }
    let idx = |i: usize, j: usize| i * n + j;
    let mut gens = Vec::new();
    for r in 0..d.saturating_sub(1) {
        let mut p: Perm = (0..d * n).collect();
        for j in 0..n {
            p[idx(r, j)] = idx(r + 1, j);
            p[idx(r + 1, j)] = idx(r, j);
        }
        gens.push(p);
    }
    for c in 0..n.saturating_sub(1) {
        let mut p: Perm = (0..d * n).collect();
        for i in 0..d {
            p[idx(i, c)] = idx(i, c + 1);
            p[idx(i, c + 1)] = idx(i, c);
        }
        gens.push(p);
    }
    if d == n {
        let mut p: Perm = (0..d * n).collect();
        for i in 0..d {
            for j in 0..n {
                p[idx(i, j)] = idx(j, i);
            }
        }
        gens.push(p);
    }
    CoordPermGroup::new(d * n, gens)
}

/// The matrix group of a `k x k` block (top-left rows and columns) acting inside
/// `d x n` matrix space.
pub fn block_symmetry_group(k: usize, d: usize, n: usize) -> Result<CoordPermGroup> {
    if k > d || k > n {
        return Err(Error::arg("block larger than the matrix"));
    }
    let positions: Vec<usize> = (0..k).flat_map(|i| (0..k).map(move |j| i * n + j)).collect();
    matrix_symmetry_group(k, k)?.embedded(&positions, d * n)
}

/// `{w : <v, w> <= 0 for every halfspace v}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalDomain {
    pub degree: usize,
    pub halfspaces: Vec<IntVec>,
}

impl FundamentalDomain {
    pub fn contains(&self, w: &[Rat]) -> bool {
        self.halfspaces
            .iter()
            .all(|v| crate::num::dot_int_rat(v, w) <= Rat::zero())
    }

    pub fn cone(&self) -> Cone {
        let ineqs: Vec<IntVec> = self
            .halfspaces
            .iter()
            .map(|v| v.iter().map(|x| -x).collect())
            .collect();
        Cone::new(self.degree, &[], &ineqs)
    }
}

/// One closed halfspace `w_j <= w_{p^-1(j)}` per non-identity element, `j` the
/// smallest moved point. The lexicographically least point of any orbit lies in
/// every one of them. All constraints compare two coordinates with `j < k`, so
/// redundancy removal is a transitive reduction of the comparison graph.
pub fn fundamental_domain(g: &CoordPermGroup) -> Result<FundamentalDomain> {
    let n = g.degree();
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for p in g.elements()? {
        if let Some(j) = (0..n).find(|&i| p[i] != i) {
            let k = inverse(p)[j];
            edges.insert((j, k));
        }
    }
    // reachability over the DAG (all edges point to larger indices)
    let mut reach: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for j in (0..n).rev() {
        let succ: Vec<usize> = edges.range((j, 0)..(j + 1, 0)).map(|&(_, k)| k).collect();
        for k in succ {
            reach[j].insert(k);
            let further: Vec<usize> = reach[k].iter().copied().collect();
            reach[j].extend(further);
        }
    }
    let halfspaces = edges
        .iter()
        .filter(|&&(j, k)| {
            !edges
                .range((j, 0)..(j + 1, 0))
                .any(|&(_, m)| m != k && reach[m].contains(&k))
        })
        .map(|&(j, k)| {
            let mut v = vec![BigInt::zero(); n];
            v[j] = BigInt::from(1);
            v[k] = BigInt::from(-1);
            v
        })
        .collect();
    Ok(FundamentalDomain {
        degree: n,
        halfspaces,
    })
}

pub fn orbit(v: &[Rat], g: &CoordPermGroup) -> Result<BTreeSet<Vec<Rat>>> {
    check_len(v.len(), g)?;
    Ok(g.elements()?.par_iter().map(|p| apply(p, v)).collect::<BTreeSet<_>>())
}

pub fn orbit_size(v: &[Rat], g: &CoordPermGroup) -> Result<usize> {
    Ok(orbit(v, g)?.len())
}

/// Lexicographically least element of the orbit.
pub fn canonical_rep(v: &[Rat], g: &CoordPermGroup) -> Result<Vec<Rat>> {
    check_len(v.len(), g)?;
    Ok(g.elements()?
        .par_iter()
        .map(|p| apply(p, v))
        .min()
        .expect("a group has an identity"))
}

pub fn stabilizer(v: &[Rat], g: &CoordPermGroup) -> Result<Vec<Perm>> {
    check_len(v.len(), g)?;
    Ok(g.elements()?
        .iter()
        .filter(|p| apply(p, v).as_slice() == v)
        .cloned()
        .collect())
}

fn check_len(n: usize, g: &CoordPermGroup) -> Result<()> {
    if n != g.degree() {
        return Err(Error::arg(format!(
            "vector of length {n} for a group of degree {}",
            g.degree()
        )));
    }
    Ok(())
}

/// Canonical H-description of the image of a cone, enough to compare cones.
type ConeKey = (Vec<IntVec>, Vec<IntVec>);

fn permuted_key(c: &Cone, p: &[usize]) -> ConeKey {
    let n = c.ambient_dim();
    let eqs: Vec<IntVec> = c.equations().iter().map(|v| permute_vec(v, p)).collect();
    let (ech, eqs) = canonical_subspace(&eqs, n);
    let facets: Vec<IntVec> = c.facets().iter().map(|v| permute_vec(v, p)).collect();
    (eqs, canonical_mod(&facets, &ech))
}

#[derive(Debug, Clone)]
pub struct OrbitClass {
    /// The orbit member with the least H-description.
    pub representative: Cone,
    /// Size of the whole orbit.
    pub size: usize,
    /// Indices of the input cones in this orbit.
    pub members: Vec<usize>,
}

/// Partitions cones into orbits. Classes are sorted by representative.
pub fn cone_orbits(cones: &[Cone], g: &CoordPermGroup) -> Result<Vec<OrbitClass>> {
    let elements = g.elements()?;
    if let Some(c) = cones.iter().find(|c| c.ambient_dim() != g.degree()) {
        return Err(Error::arg(format!(
            "cone in dimension {} for a group of degree {}",
            c.ambient_dim(),
            g.degree()
        )));
    }
    let keys: Vec<ConeKey> = cones
        .iter()
        .map(|c| (c.equations().to_vec(), c.facets().to_vec()))
        .collect();
    let index: BTreeMap<&ConeKey, Vec<usize>> = keys.iter().enumerate().fold(BTreeMap::new(), |mut m, (i, k)| {
        m.entry(k).or_default().push(i);
        m
    });
    let mut class_of: Vec<Option<usize>> = vec![None; cones.len()];
    let mut classes: Vec<OrbitClass> = Vec::new();
    for i in 0..cones.len() {
        if class_of[i].is_some() {
            continue;
        }
        let images: BTreeSet<ConeKey> = elements.par_iter().map(|p| permuted_key(&cones[i], p)).collect();
        let mut members = Vec::new();
        for k in &images {
            if let Some(ids) = index.get(k) {
                for &m in ids {
                    class_of[m] = Some(classes.len());
                    members.push(m);
                }
            }
        }
        members.sort_unstable();
        let (eqs, facets) = images.iter().next().expect("orbit contains the cone");
        classes.push(OrbitClass {
            representative: Cone::new(cones[i].ambient_dim(), eqs, facets),
            size: images.len(),
            members,
        });
    }
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(classes)
}

/// Refines inside the fundamental domain and expands the result by the group.
/// The fans must be permuted among themselves by the group. The returned cones
/// cover the support of the full refinement; they need not form a fan, since
/// walls of the domain cut through cones.
pub fn symmetric_refinement(fans: &[Fan], g: &CoordPermGroup) -> Result<Vec<Cone>> {
    let domain = fundamental_domain(g)?.cone();
    let reduced = common_refinement(fans, Some(&domain))?;
    let max: Vec<Cone> = reduced.maximal_cones().into_iter().map(|c| reduced.cone(c)).collect();
    expand_orbits(&max, g)
}

/// All images of the cones, deduplicated.
pub fn expand_orbits(cones: &[Cone], g: &CoordPermGroup) -> Result<Vec<Cone>> {
    let elements = g.elements()?;
    let out: BTreeSet<Cone> = cones
        .par_iter()
        .flat_map_iter(|c| elements.iter().map(move |p| c.permuted(p)))
        .collect();
    Ok(out.into_iter().collect())
}
