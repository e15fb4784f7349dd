use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::cone::{canonical_mod, canonical_subspace, Cone};
use crate::error::{Error, Result};
use crate::num::{fmt_vec, IntVec, Rat};
use crate::trop::matrix::tokens;

const SECTIONS: [&str; 6] = ["AMBIENT_DIM", "LINEALITY_DIM", "LINEALITY", "RAYS", "CONES", "F_VECTOR"];

/// A cone of a fan: the lineality space plus the listed rays.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FanCone {
    pub dim: usize,
    pub rays: Vec<usize>,
}

/// A polyhedral fan stored by rays modulo a common lineality space.
///
/// Cones are sorted by dimension, then by ray list. Rays are sorted.
#[derive(Debug, Clone)]
pub struct Fan {
    ambient_dim: usize,
    lineality: Vec<IntVec>,
    rays: Vec<IntVec>,
    cones: Vec<FanCone>,
    h_cache: OnceLock<Vec<Cone>>,
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.lineality == other.lineality
            && self.rays == other.rays
            && self.cones == other.cones
    }
}

impl Eq for Fan {}

/// Cone counts by dimension, starting at the lineality space (whose entry is 1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FVector {
    pub lineality_dim: usize,
    pub counts: Vec<u64>,
}

impl FVector {
    pub fn new(lineality_dim: usize, counts: Vec<u64>) -> Self {
        FVector {
            lineality_dim,
            counts,
        }
    }

    /// Euler characteristic of the spherical complex obtained by intersecting the
    /// fan, modulo lineality, with a sphere. A cone of dimension `lineality_dim + k`
    /// becomes a cell of dimension `k - 1`.
    pub fn euler_characteristic(&self) -> i64 {
        euler_characteristic(&self.counts)
    }

    pub fn top_dim(&self) -> usize {
        self.lineality_dim + self.counts.len().saturating_sub(1)
    }
}

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Alternating sum of `counts[1..]`; `counts[0]` is the lineality entry.
pub fn euler_characteristic(counts: &[u64]) -> i64 {
    counts
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| if i % 2 == 1 { c as i64 } else { -(c as i64) })
        .sum()
}

impl Fan {
    /// Builds a fan from raw parts. Rays are canonicalized and sorted; cone ray
    /// lists are reindexed accordingly. Cones are trusted to form a fan.
    pub fn from_parts(
        ambient_dim: usize,
        lineality: &[IntVec],
        rays: &[IntVec],
        cones: Vec<FanCone>,
    ) -> Result<Self> {
        let (ech, lineality) = canonical_subspace(lineality, ambient_dim);
        let canon: Vec<IntVec> = rays
            .iter()
            .map(|r| {
                canonical_mod(std::slice::from_ref(r), &ech)
                    .pop()
                    .ok_or_else(|| Error::arg("ray lies in the lineality space"))
            })
            .collect::<Result<_>>()?;
        let sorted: BTreeSet<IntVec> = canon.iter().cloned().collect();
        if sorted.len() != canon.len() {
            return Err(Error::arg("duplicate rays"));
        }
        let sorted: Vec<IntVec> = sorted.into_iter().collect();
        let index: BTreeMap<&IntVec, usize> = sorted.iter().enumerate().map(|(i, r)| (r, i)).collect();
        let remap: Vec<usize> = canon.iter().map(|r| index[r]).collect();
        let mut out: BTreeSet<FanCone> = BTreeSet::new();
        for c in cones {
            if let Some(&bad) = c.rays.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::arg(format!("cone refers to ray {bad}")));
            }
            let mut r: Vec<usize> = c.rays.iter().map(|&i| remap[i]).collect();
            r.sort_unstable();
            r.dedup();
            out.insert(FanCone { dim: c.dim, rays: r });
        }
        Ok(Fan {
            ambient_dim,
            lineality,
            rays: sorted,
            cones: out.into_iter().collect(),
            h_cache: OnceLock::new(),
        })
    }

    /// Fan generated by the given cones and all their faces. The cones must share
    /// one lineality space and intersect properly (see [`Fan::check_intersections`]).
    pub fn from_cones(ambient_dim: usize, cones: &[Cone]) -> Result<Self> {
        Self::build(ambient_dim, cones, true)
    }

    /// Fan whose cone list is exactly `cones` (assumed closed under taking faces).
    pub fn from_face_closed_cones(ambient_dim: usize, cones: &[Cone]) -> Result<Self> {
        Self::build(ambient_dim, cones, false)
    }

    fn build(ambient_dim: usize, cones: &[Cone], complete: bool) -> Result<Self> {
        let Some(first) = cones.first() else {
            return Err(Error::arg("a fan needs at least one cone"));
        };
        let lineality = first.lineality().to_vec();
        let mut ray_index: BTreeMap<IntVec, usize> = BTreeMap::new();
        let mut rays: Vec<IntVec> = Vec::new();
        let mut out: Vec<FanCone> = Vec::new();
        for c in cones {
            if c.ambient_dim() != ambient_dim {
                return Err(Error::arg("cone of the wrong ambient dimension"));
            }
            if c.lineality() != lineality.as_slice() {
                return Err(Error::arg("cones have different lineality spaces"));
            }
            let local: Vec<usize> = c
                .rays()
                .iter()
                .map(|r| {
                    *ray_index.entry(r.clone()).or_insert_with(|| {
                        rays.push(r.clone());
                        rays.len() - 1
                    })
                })
                .collect();
            if complete {
                for (face, dim) in c.faces() {
                    out.push(FanCone {
                        dim,
                        rays: face.ones().map(|i| local[i]).collect(),
                    });
                }
            } else {
                out.push(FanCone {
                    dim: c.dim(),
                    rays: local,
                });
            }
        }
        Self::from_parts(ambient_dim, &lineality, &rays, out)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn lineality_dim(&self) -> usize {
        self.lineality.len()
    }

    pub fn lineality(&self) -> &[IntVec] {
        &self.lineality
    }

    pub fn rays(&self) -> &[IntVec] {
        &self.rays
    }

    pub fn cones(&self) -> &[FanCone] {
        &self.cones
    }

    pub fn dim(&self) -> usize {
        self.cones.iter().map(|c| c.dim).max().unwrap_or(0)
    }

    pub fn cones_of_dim(&self, d: usize) -> impl Iterator<Item = &FanCone> {
        self.cones.iter().filter(move |c| c.dim == d)
    }

    /// Cones not properly contained in another cone.
    pub fn maximal_cones(&self) -> Vec<&FanCone> {
        let sets: Vec<FixedBitSet> = self.cones.iter().map(|c| self.bitset(c)).collect();
        self.cones
            .iter()
            .enumerate()
            .filter(|&(i, c)| {
                !self
                    .cones
                    .iter()
                    .enumerate()
                    .any(|(j, d)| d.dim > c.dim && sets[i].is_subset(&sets[j]))
            })
            .map(|(_, c)| c)
            .collect()
    }

    fn bitset(&self, c: &FanCone) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(self.rays.len());
        for &i in &c.rays {
            b.insert(i);
        }
        b
    }

    pub fn is_pure(&self) -> bool {
        let d = self.dim();
        self.maximal_cones().iter().all(|c| c.dim == d)
    }

    /// The cone as a [`Cone`] with both representations.
    pub fn cone(&self, c: &FanCone) -> Cone {
        let rays: Vec<IntVec> = c.rays.iter().map(|&i| self.rays[i].clone()).collect();
        Cone::from_generators(self.ambient_dim, &self.lineality, &rays)
    }

    pub fn all_cones(&self) -> Vec<Cone> {
        self.cones.iter().map(|c| self.cone(c)).collect()
    }

    fn maximal_h(&self) -> &[Cone] {
        self.h_cache
            .get_or_init(|| self.maximal_cones().into_iter().map(|c| self.cone(c)).collect())
    }

    /// Support membership.
    pub fn contains(&self, x: &[Rat]) -> bool {
        self.maximal_h().iter().any(|c| c.contains(x))
    }

    /// Number of maximal cones containing `x`.
    pub fn count_maximal_containing(&self, x: &[Rat]) -> usize {
        self.maximal_h().iter().filter(|c| c.contains(x)).count()
    }

    pub fn f_vector(&self) -> FVector {
        let l = self.lineality_dim();
        let mut counts = vec![0u64; self.dim() + 1 - l];
        for c in &self.cones {
            counts[c.dim - l] += 1;
        }
        FVector::new(l, counts)
    }

    /// Keeps the cones satisfying `keep` and drops rays no longer used.
    pub fn subfan(&self, keep: impl Fn(&FanCone) -> bool) -> Fan {
        let cones: Vec<FanCone> = self.cones.iter().filter(|c| keep(c)).cloned().collect();
        let used: BTreeSet<usize> = cones.iter().flat_map(|c| c.rays.iter().copied()).collect();
        let remap: BTreeMap<usize, usize> = used.iter().enumerate().map(|(n, &o)| (o, n)).collect();
        Fan {
            ambient_dim: self.ambient_dim,
            lineality: self.lineality.clone(),
            rays: used.iter().map(|&i| self.rays[i].clone()).collect(),
            cones: cones
                .into_iter()
                .map(|c| FanCone {
                    dim: c.dim,
                    rays: c.rays.iter().map(|i| remap[i]).collect(),
                })
                .collect(),
            h_cache: OnceLock::new(),
        }
    }

    /// Checks that every face of every cone is listed and that any two maximal
    /// cones meet in a common face. Quadratic in the number of maximal cones.
    pub fn check_intersections(&self) -> Result<()> {
        let listed: BTreeSet<&FanCone> = self.cones.iter().collect();
        for c in &self.cones {
            let h = self.cone(c);
            for (face, dim) in h.faces() {
                let rays: Vec<usize> = face
                    .ones()
                    .map(|i| self.ray_position(&h.rays()[i]))
                    .collect::<Option<_>>()
                    .ok_or_else(|| Error::Internal("face ray missing from fan".into()))?;
                let fc = FanCone { dim, rays };
                if !listed.contains(&fc) {
                    return Err(Error::Internal(format!("face {:?} of {:?} not listed", fc, c)));
                }
            }
        }
        let max: Vec<&FanCone> = self.maximal_cones();
        let hs: Vec<Cone> = max.iter().map(|c| self.cone(c)).collect();
        for i in 0..max.len() {
            for j in i + 1..max.len() {
                let meet = hs[i].intersect(&hs[j]);
                let common: Vec<usize> = max[i]
                    .rays
                    .iter()
                    .filter(|r| max[j].rays.contains(r))
                    .copied()
                    .collect();
                let face = self.cone(&FanCone { dim: 0, rays: common });
                if meet != face {
                    return Err(Error::Internal(format!(
                        "cones {:?} and {:?} do not meet in a common face",
                        max[i], max[j]
                    )));
                }
            }
        }
        Ok(())
    }

    fn ray_position(&self, r: &IntVec) -> Option<usize> {
        self.rays.binary_search(r).ok()
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parses the format written by `Display`. The F_VECTOR section is checked
    /// against the cones.
    pub fn parse(text: &str) -> Result<Self> {
        let mut section = "";
        let mut ambient: Option<usize> = None;
        let mut lin_dim: Option<usize> = None;
        let mut lineality: Vec<IntVec> = Vec::new();
        let mut rays: Vec<IntVec> = Vec::new();
        let mut cones: Vec<FanCone> = Vec::new();
        let mut fv: Option<Vec<u64>> = None;
        for (lno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lno = lno + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(&name) = SECTIONS.iter().find(|&&s| s == line) {
                section = name;
                continue;
            }
            let toks = tokens(raw);
            let ints = |expect: Option<usize>| -> Result<Vec<i128>> {
                let v: Vec<i128> = toks
                    .iter()
                    .map(|(col, t)| {
                        t.parse::<i128>()
                            .map_err(|_| Error::parse(lno, *col, format!("`{t}` is not an integer")))
                    })
                    .collect::<Result<_>>()?;
                if let Some(n) = expect {
                    if v.len() != n {
                        return Err(Error::parse(lno, 1, format!("expected {n} entries, found {}", v.len())));
                    }
                }
                Ok(v)
            };
            let vector = |v: Vec<i128>| -> IntVec { v.into_iter().map(Into::into).collect() };
            match section {
                "AMBIENT_DIM" => ambient = Some(ints(Some(1))?[0] as usize),
                "LINEALITY_DIM" => lin_dim = Some(ints(Some(1))?[0] as usize),
                "LINEALITY" | "RAYS" => {
                    let n = ambient.ok_or_else(|| Error::parse(lno, 1, "AMBIENT_DIM must come first"))?;
                    let v = vector(ints(Some(n))?);
                    if section == "RAYS" {
                        rays.push(v);
                    } else {
                        lineality.push(v);
                    }
                }
                "CONES" => {
                    let v = ints(None)?;
                    let Some((&dim, idx)) = v.split_first() else {
                        return Err(Error::parse(lno, 1, "empty cone line"));
                    };
                    if dim < 0 || idx.iter().any(|&i| i < 0) {
                        return Err(Error::parse(lno, 1, "negative index"));
                    }
                    cones.push(FanCone {
                        dim: dim as usize,
                        rays: idx.iter().map(|&i| i as usize).collect(),
                    });
                }
                "F_VECTOR" => {
                    let v = ints(None)?;
                    if v.iter().any(|&x| x < 0) {
                        return Err(Error::parse(lno, 1, "negative count"));
                    }
                    fv = Some(v.into_iter().map(|x| x as u64).collect());
                }
                _ => return Err(Error::parse(lno, 1, "data before any section header")),
            }
        }
        let ambient = ambient.ok_or_else(|| Error::parse(1, 1, "missing AMBIENT_DIM"))?;
        let fan = Fan::from_parts(ambient, &lineality, &rays, cones)?;
        if let Some(l) = lin_dim {
            if l != fan.lineality_dim() {
                return Err(Error::parse(1, 1, "LINEALITY_DIM disagrees with LINEALITY"));
            }
        }
        if let Some(fv) = fv {
            if fv != fan.f_vector().counts {
                return Err(Error::parse(1, 1, "F_VECTOR disagrees with CONES"));
            }
        }
        Ok(fan)
    }
}

impl fmt::Display for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "AMBIENT_DIM\n{}", self.ambient_dim)?;
        writeln!(f, "LINEALITY_DIM\n{}", self.lineality_dim())?;
        writeln!(f, "LINEALITY")?;
        for l in &self.lineality {
            writeln!(f, "{}", fmt_vec(l))?;
        }
        writeln!(f, "RAYS")?;
        for r in &self.rays {
            writeln!(f, "{}", fmt_vec(r))?;
        }
        writeln!(f, "CONES")?;
        for c in &self.cones {
            if c.rays.is_empty() {
                writeln!(f, "{}", c.dim)?;
            } else {
                writeln!(f, "{} {}", c.dim, fmt_vec(&c.rays))?;
            }
        }
        writeln!(f, "F_VECTOR\n{}", fmt_vec(&self.f_vector().counts))
    }
}
