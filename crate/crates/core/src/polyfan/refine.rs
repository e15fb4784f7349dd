//! Common refinement by depth-first search over relative interiors.
//!
//! Every fan is split into the relative interiors of its cones, which partition
//! its support. A node of the search intersects one relative interior from each
//! of the first `k` fans; it is pruned as soon as that intersection is empty.
//! Each surviving leaf is the relative interior of exactly one cone of the
//! refinement, so the closures of the leaves are all cones, faces included.

use std::collections::BTreeSet;

use rayon::prelude::*;

use super::cone::Cone;
use super::fan::Fan;
use super::lp::{lp_feasible_with, HalfOpenCone, LpBackend};
use crate::error::{Error, Result};
use crate::num::IntVec;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RefineOptions {
    pub lp_backend: Option<LpBackend>,
}

pub fn common_refinement(fans: &[Fan], domain: Option<&Cone>) -> Result<Fan> {
    common_refinement_with(fans, domain, RefineOptions::default())
}

pub fn common_refinement_with(
    fans: &[Fan],
    domain: Option<&Cone>,
    options: RefineOptions,
) -> Result<Fan> {
    let n = match (fans.first(), domain) {
        (Some(f), _) => f.ambient_dim(),
        (None, Some(d)) => d.ambient_dim(),
        (None, None) => return Err(Error::arg("nothing to refine")),
    };
    if fans.iter().any(|f| f.ambient_dim() != n) || domain.is_some_and(|d| d.ambient_dim() != n) {
        return Err(Error::arg("fans live in different ambient dimensions"));
    }
    let mut levels: Vec<Vec<HalfOpenCone>> = Vec::new();
    if let Some(d) = domain {
        levels.push(relints(&Fan::from_cones(n, std::slice::from_ref(d))?));
    }
    for f in fans {
        levels.push(relints(f));
    }
    let cones: BTreeSet<Cone> = levels[0]
        .par_iter()
        .filter(|c| lp_feasible_with(c, options.lp_backend))
        .map(|c| {
            let mut out = BTreeSet::new();
            let mut node = c.clone();
            descend(n, &levels[1..], &mut node, options, &mut out);
            out
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    let cones: Vec<Cone> = cones.into_iter().collect();
    Fan::from_face_closed_cones(n, &cones)
}

fn relints(f: &Fan) -> Vec<HalfOpenCone> {
    f.all_cones().iter().map(Cone::relint).collect()
}

fn descend(
    n: usize,
    levels: &[Vec<HalfOpenCone>],
    node: &mut HalfOpenCone,
    options: RefineOptions,
    out: &mut BTreeSet<Cone>,
) {
    let Some((level, rest)) = levels.split_first() else {
        let ineqs: Vec<IntVec> = node.weak.iter().chain(&node.strict).cloned().collect();
        out.insert(Cone::new(n, &node.equalities, &ineqs));
        return;
    };
    for piece in level {
        let (ne, ns) = (node.equalities.len(), node.strict.len());
        node.equalities.extend(piece.equalities.iter().cloned());
        node.strict.extend(piece.strict.iter().cloned());
        if lp_feasible_with(node, options.lp_backend) {
            descend(n, rest, node, options, out);
        }
        node.equalities.truncate(ne);
        node.strict.truncate(ns);
    }
}
