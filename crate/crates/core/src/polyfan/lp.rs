//! Exact feasibility of homogeneous systems `E x = 0, A x >= 0, B x > 0`.
//!
//! Equalities are eliminated by substitution first. What remains is decided by
//! Fourier-Motzkin elimination when at most [`FM_MAX_DIM`] variables are left,
//! otherwise by a phase-one simplex with Bland's rule. A strict system is
//! feasible iff `A x >= 0, B x >= 1` is, since the system is homogeneous.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::num::{make_primitive, to_primitive_int, Echelon, IntVec, Rat};

pub const FM_MAX_DIM: usize = 6;
/// Fourier-Motzkin gives up (and the automatic policy switches to simplex)
/// beyond this many constraints.
const FM_MAX_ROWS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpBackend {
    FourierMotzkin,
    Simplex,
}

/// `{x : <e,x> = 0, <a,x> >= 0, <b,x> > 0}` for the listed vectors.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HalfOpenCone {
    pub ambient_dim: usize,
    pub equalities: Vec<IntVec>,
    pub weak: Vec<IntVec>,
    pub strict: Vec<IntVec>,
}

impl HalfOpenCone {
    pub fn new(ambient_dim: usize) -> Self {
        HalfOpenCone {
            ambient_dim,
            ..Default::default()
        }
    }

    pub fn from_rat(
        ambient_dim: usize,
        equalities: &[Vec<Rat>],
        weak: &[Vec<Rat>],
        strict: &[Vec<Rat>],
    ) -> Self {
        let conv = |vs: &[Vec<Rat>]| vs.iter().map(|v| to_primitive_int(v)).collect();
        HalfOpenCone {
            ambient_dim,
            equalities: conv(equalities),
            weak: conv(weak),
            strict: conv(strict),
        }
    }

    /// Whether `x` satisfies every constraint.
    pub fn contains(&self, x: &[Rat]) -> bool {
        let ev = |v: &IntVec| crate::num::dot_int_rat(v, x);
        self.equalities.iter().all(|e| ev(e).is_zero())
            && self.weak.iter().all(|a| !ev(a).is_negative())
            && self.strict.iter().all(|b| ev(b).is_positive())
    }

    /// Drops strictness.
    pub fn closure(&self) -> HalfOpenCone {
        let mut weak = self.weak.clone();
        weak.extend(self.strict.iter().cloned());
        HalfOpenCone {
            ambient_dim: self.ambient_dim,
            equalities: self.equalities.clone(),
            weak,
            strict: Vec::new(),
        }
    }
}

/// Feasibility with the automatic backend choice.
pub fn lp_feasible(c: &HalfOpenCone) -> bool {
    lp_feasible_with(c, None)
}

/// Feasibility with an optional forced backend.
pub fn lp_feasible_with(c: &HalfOpenCone, backend: Option<LpBackend>) -> bool {
    let Some(reduced) = Reduced::new(c) else {
        return false;
    };
    if reduced.dim == 0 || reduced.rows.is_empty() {
        return true;
    }
    match backend {
        Some(LpBackend::FourierMotzkin) => fourier_motzkin(&reduced, usize::MAX).expect("unbounded"),
        Some(LpBackend::Simplex) => simplex_point(&reduced).is_some(),
        None if reduced.dim <= FM_MAX_DIM => match fourier_motzkin(&reduced, FM_MAX_ROWS) {
            Some(answer) => answer,
            None => simplex_point(&reduced).is_some(),
        },
        None => simplex_point(&reduced).is_some(),
    }
}

/// A point of the half-open cone, found by the simplex method.
pub fn lp_point(c: &HalfOpenCone) -> Option<Vec<Rat>> {
    let reduced = Reduced::new(c)?;
    let y = if reduced.dim == 0 || reduced.rows.is_empty() {
        vec![Rat::zero(); reduced.dim]
    } else {
        simplex_point(&reduced)?
    };
    Some(reduced.lift(&y))
}

/// Constraints after substituting the equalities away and dropping unused variables.
struct Reduced {
    dim: usize,
    /// (vector over the kept variables, strict?)
    rows: Vec<(IntVec, bool)>,
    echelon: Echelon,
    kept: Vec<usize>,
    ambient: usize,
}

impl Reduced {
    /// `None` when a constraint reduces to `0 > 0`.
    fn new(c: &HalfOpenCone) -> Option<Self> {
        let n = c.ambient_dim;
        let echelon = Echelon::from_int(&c.equalities, n);
        let reduce = |v: &IntVec| -> Vec<Rat> {
            let r: Vec<Rat> = v.iter().map(|x| Rat::from_integer(x.clone())).collect();
            if echelon.rank() == 0 {
                r
            } else {
                echelon.reduce(&r)
            }
        };
        let mut full: Vec<(Vec<Rat>, bool)> = Vec::new();
        for a in &c.weak {
            full.push((reduce(a), false));
        }
        for b in &c.strict {
            full.push((reduce(b), true));
        }
        let kept: Vec<usize> = (0..n)
            .filter(|&j| full.iter().any(|(v, _)| !v[j].is_zero()))
            .collect();
        let mut dedup: HashMap<IntVec, bool> = HashMap::new();
        for (v, strict) in full {
            let w: Vec<Rat> = kept.iter().map(|&j| v[j].clone()).collect();
            let w = to_primitive_int(&w);
            if w.iter().all(Zero::is_zero) {
                if strict {
                    return None;
                }
                continue;
            }
            let e = dedup.entry(w).or_insert(false);
            *e |= strict;
        }
        let mut rows: Vec<(IntVec, bool)> = dedup.into_iter().collect();
        rows.sort();
        Some(Reduced {
            dim: kept.len(),
            rows,
            echelon,
            kept,
            ambient: n,
        })
    }

    /// Maps a point in the reduced variables back to the ambient space.
    fn lift(&self, y: &[Rat]) -> Vec<Rat> {
        let mut x = vec![Rat::zero(); self.ambient];
        for (&j, v) in self.kept.iter().zip(y) {
            x[j] = v.clone();
        }
        // pivot variables are determined by the free ones
        for (row, &p) in self.echelon.rows.iter().zip(&self.echelon.pivots) {
            let mut s = Rat::zero();
            for (j, r) in row.iter().enumerate() {
                if j != p && !r.is_zero() {
                    s -= r * &x[j];
                }
            }
            x[p] = s;
        }
        x
    }
}

/// `Some(feasible)`, or `None` if the row count exceeded `max_rows`.
fn fourier_motzkin(r: &Reduced, max_rows: usize) -> Option<bool> {
    let mut rows: Vec<(IntVec, bool)> = r.rows.clone();
    let mut live: Vec<bool> = vec![true; r.dim];
    for _ in 0..r.dim {
        // eliminate the variable with the fewest generated combinations
        let Some((var, _)) = (0..r.dim)
            .filter(|&j| live[j])
            .map(|j| {
                let p = rows.iter().filter(|(v, _)| v[j].is_positive()).count();
                let n = rows.iter().filter(|(v, _)| v[j].is_negative()).count();
                (j, p * n)
            })
            .min_by_key(|&(_, cost)| cost)
        else {
            break;
        };
        live[var] = false;
        let (mut pos, mut neg, mut next) = (Vec::new(), Vec::new(), Vec::new());
        for row in rows.drain(..) {
            if row.0[var].is_positive() {
                pos.push(row);
            } else if row.0[var].is_negative() {
                neg.push(row);
            } else {
                next.push(row);
            }
        }
        for (p, ps) in &pos {
            for (q, qs) in &neg {
                let cp = -q[var].clone();
                let cq = p[var].clone();
                let mut v: IntVec = p.iter().zip(q).map(|(a, b)| a * &cp + b * &cq).collect();
                make_primitive(&mut v);
                next.push((v, *ps || *qs));
            }
        }
        let mut dedup: HashMap<IntVec, bool> = HashMap::new();
        for (v, strict) in next {
            if v.iter().all(Zero::is_zero) {
                if strict {
                    return Some(false);
                }
                continue;
            }
            *dedup.entry(v).or_insert(false) |= strict;
        }
        if dedup.len() > max_rows {
            return None;
        }
        rows = dedup.into_iter().collect();
        rows.sort();
    }
    Some(true)
}

/// Phase-one simplex on `a.y >= 0` (weak rows), `b.y >= 1` (strict rows), `y` free,
/// with `y = p - q`. Returns a feasible `y`.
fn simplex_point(r: &Reduced) -> Option<Vec<Rat>> {
    let k = r.dim;
    let m = r.rows.len();
    let strict_rows: Vec<usize> = (0..m).filter(|&i| r.rows[i].1).collect();
    let n_art = strict_rows.len();
    // columns: p (k), q (k), slack (m), artificial (n_art)
    let ncols = 2 * k + m + n_art;
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rat> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut art_of_row = vec![usize::MAX; m];
    for (a, &i) in strict_rows.iter().enumerate() {
        art_of_row[i] = a;
    }
    for (i, (v, strict)) in r.rows.iter().enumerate() {
        let mut row = vec![Rat::zero(); ncols];
        if *strict {
            // v.(p - q) - s + art = 1
            for j in 0..k {
                row[j] = Rat::from_integer(v[j].clone());
                row[k + j] = -Rat::from_integer(v[j].clone());
            }
            row[2 * k + i] = -Rat::one();
            let col = 2 * k + m + art_of_row[i];
            row[col] = Rat::one();
            basis.push(col);
            rhs.push(Rat::one());
        } else {
            // -v.(p - q) + s = 0
            for j in 0..k {
                row[j] = -Rat::from_integer(v[j].clone());
                row[k + j] = Rat::from_integer(v[j].clone());
            }
            row[2 * k + i] = Rat::one();
            basis.push(2 * k + i);
            rhs.push(Rat::zero());
        }
        t.push(row);
    }
    // reduced costs of "minimise the sum of artificials"
    let mut cost = vec![Rat::zero(); ncols];
    let mut obj = Rat::zero();
    for c in cost.iter_mut().skip(2 * k + m) {
        *c = Rat::one();
    }
    for (i, row) in t.iter().enumerate() {
        if r.rows[i].1 {
            for (c, x) in cost.iter_mut().zip(row) {
                if !x.is_zero() {
                    *c -= x;
                }
            }
            obj -= &rhs[i];
        }
    }
    // Bland: lowest-index improving column
    while let Some(enter) = (0..ncols).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &rhs[i] / &t[i][enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // phase one is bounded below by zero, so a pivot row always exists
        let (row, _) = leave.expect("phase-one simplex is bounded");
        pivot(&mut t, &mut rhs, &mut cost, &mut obj, row, enter);
        basis[row] = enter;
    }
    // obj holds minus the optimal sum of artificials
    if !obj.is_zero() {
        return None;
    }
    let mut y = vec![Rat::zero(); k];
    for (i, &b) in basis.iter().enumerate() {
        if b < k {
            y[b] += &rhs[i];
        } else if b < 2 * k {
            y[b - k] -= &rhs[i];
        }
    }
    debug_assert!(r.rows.iter().all(|(v, strict)| {
        let val: Rat = v
            .iter()
            .zip(&y)
            .fold(Rat::zero(), |acc, (a, b)| acc + b * Rat::from_integer(a.clone()));
        if *strict {
            val >= Rat::one()
        } else {
            !val.is_negative()
        }
    }));
    Some(y)
}

fn pivot(
    t: &mut [Vec<Rat>],
    rhs: &mut [Rat],
    cost: &mut [Rat],
    obj: &mut Rat,
    row: usize,
    col: usize,
) {
    let inv = t[row][col].recip();
    for x in t[row].iter_mut() {
        if !x.is_zero() {
            *x *= &inv;
        }
    }
    rhs[row] *= &inv;
    let prow = t[row].clone();
    let prhs = rhs[row].clone();
    for i in 0..t.len() {
        if i == row || t[i][col].is_zero() {
            continue;
        }
        let f = t[i][col].clone();
        for (x, p) in t[i].iter_mut().zip(&prow) {
            if !p.is_zero() {
                *x -= &f * p;
            }
        }
        rhs[i] -= &f * &prhs;
    }
    if !cost[col].is_zero() {
        let f = cost[col].clone();
        for (x, p) in cost.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *x -= &f * p;
            }
        }
        *obj -= &f * &prhs;
    }
}

/// Whether `<v, x> >= 0` holds on the closed cone `{E x = 0, A x >= 0}`.
pub fn implied(c: &HalfOpenCone, v: &IntVec) -> bool {
    let mut test = c.closure();
    test.strict = vec![v.iter().map(|x| -x).collect()];
    !lp_feasible(&test)
}
