use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{type_of, Hyperplane};
use crate::error::{Error, Result};
use crate::num::{to_primitive_int, IntVec, Rat};
use crate::polyfan::{lp_feasible, Cone, HalfOpenCone};
use crate::trop::{tropical_rank_report, TropicalMatrix};

/// The closed cone in `(h, t)`-space, `t` last, of hyperplanes `h/t` for which
/// `min_c (h_c + w_c)` is attained at both `a` and `b`. Returns (equalities, inequalities).
pub fn minimizing_pair_cell(w: &[Rat], a: usize, b: usize) -> (IntVec, Vec<IntVec>) {
    let d = w.len();
    let row = |plus: usize, minus: usize| -> IntVec {
        let mut v = vec![Rat::zero(); d + 1];
        v[plus] += Rat::one();
        v[minus] -= Rat::one();
        v[d] = &w[plus] - &w[minus];
        to_primitive_int(&v)
    };
    let ineqs = (0..d).filter(|&c| c != a && c != b).map(|c| row(c, a)).collect();
    (row(a, b), ineqs)
}

fn t_axis(d: usize) -> IntVec {
    let mut v = vec![BigInt::zero(); d + 1];
    v[d] = BigInt::one();
    v
}

fn check_points(points: &[Vec<Rat>]) -> Result<usize> {
    let d = points
        .first()
        .ok_or_else(|| Error::arg("no points given"))?
        .len();
    if d == 0 || points.iter().any(|p| p.len() != d) {
        return Err(Error::arg("points must share a positive dimension"));
    }
    Ok(d)
}

/// A tropical hyperplane containing every point, or `None` if there is none.
///
/// First tries `h = -w` for each given point. Otherwise searches over one
/// minimizing pair per point, points by decreasing spread and pairs in
/// lexicographic order, pruning with exact feasibility tests; the first feasible
/// cell wins and a relative interior point of it is returned.
pub fn hyperplane_through_points(points: &[Vec<Rat>]) -> Result<Option<Hyperplane>> {
    let d = check_points(points)?;
    if d < 2 {
        return Ok(None);
    }
    for w in points {
        let h = Hyperplane::new(w.iter().map(|x| -x).collect())?;
        if points.iter().all(|p| h.contains(p).unwrap_or(false)) {
            return Ok(Some(h));
        }
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    let spread = |p: &Vec<Rat>| p.iter().max().expect("nonempty") - p.iter().min().expect("nonempty");
    order.sort_by(|&i, &j| spread(&points[j]).cmp(&spread(&points[i])).then(i.cmp(&j)));
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|a| (a + 1..d).map(move |b| (a, b))).collect();
    let mut node = HalfOpenCone::new(d + 1);
    node.strict.push(t_axis(d));
    let ordered: Vec<&Vec<Rat>> = order.iter().map(|&i| &points[i]).collect();
    if !search(&ordered, &pairs, &mut node) {
        return Ok(None);
    }
    let mut ineqs = node.weak.clone();
    ineqs.push(t_axis(d));
    let cell = Cone::new(d + 1, &node.equalities, &ineqs);
    let p = cell.relative_interior_point();
    let t = p[d].clone();
    if !t.is_positive() {
        return Err(Error::Internal("hyperplane cell has no point with t > 0".into()));
    }
    let h = Hyperplane::new(p[..d].iter().map(|x| x / &t).collect())?;
    if points.iter().any(|w| !h.contains(w).unwrap_or(false)) {
        return Err(Error::Internal("hyperplane search returned a hyperplane missing a point".into()));
    }
    Ok(Some(h))
}

/// Depth-first search; on success `node` holds the constraints of the chosen cell.
fn search(points: &[&Vec<Rat>], pairs: &[(usize, usize)], node: &mut HalfOpenCone) -> bool {
    let Some((w, rest)) = points.split_first() else {
        return true;
    };
    for &(a, b) in pairs {
        let (eq, ineqs) = minimizing_pair_cell(w, a, b);
        let (ne, nw) = (node.equalities.len(), node.weak.len());
        node.equalities.push(eq);
        node.weak.extend(ineqs);
        if lp_feasible(node) && search(rest, pairs, node) {
            return true;
        }
        node.equalities.truncate(ne);
        node.weak.truncate(nw);
    }
    false
}

/// A hyperplane through all points with coefficient `N` at `i`, large enough
/// that no point has `i` in its type. The other coefficients come from a
/// hyperplane through the points with coordinate `i` deleted.
pub fn coordinate_hyperplane(i: usize, points: &[Vec<Rat>]) -> Result<Hyperplane> {
    let d = check_points(points)?;
    if i >= d || d < 3 {
        return Err(Error::arg(format!("coordinate {} out of range for dimension {d}", i + 1)));
    }
    let deleted: Vec<Vec<Rat>> = points
        .iter()
        .map(|w| w.iter().enumerate().filter(|&(c, _)| c != i).map(|(_, x)| x.clone()).collect())
        .collect();
    let Some(h) = hyperplane_through_points(&deleted)? else {
        let m = TropicalMatrix::from_columns(&deleted)?;
        let report = tropical_rank_report(&m)?;
        let rows: Vec<String> = report
            .rows
            .iter()
            .map(|&r| (if r >= i { r + 2 } else { r + 1 }).to_string())
            .collect();
        let cols: Vec<String> = report.cols.iter().map(|c| (c + 1).to_string()).collect();
        return Err(Error::Precondition(format!(
            "deleting row {} leaves tropical rank {}; nonsingular submatrix on rows {{{}}} and columns {{{}}}",
            i + 1,
            report.rank,
            rows.join(","),
            cols.join(",")
        )));
    };
    let hc = h.coeffs();
    let big = points
        .iter()
        .map(|w| {
            let rest = (0..d)
                .filter(|&c| c != i)
                .map(|c| &hc[if c < i { c } else { c - 1 }] + &w[c])
                .min()
                .expect("d >= 2");
            rest - &w[i]
        })
        .max()
        .expect("points nonempty")
        + Rat::one();
    let mut coeffs = hc.to_vec();
    coeffs.insert(i, big);
    let hyper = Hyperplane::new(coeffs)?;
    for w in points {
        let t = type_of(w, &hyper)?;
        if t.len() < 2 || t.contains(i) {
            return Err(Error::Internal(format!(
                "coordinate hyperplane check failed: type {t} for point {}",
                crate::num::fmt_vec(w)
            )));
        }
    }
    Ok(hyper)
}
