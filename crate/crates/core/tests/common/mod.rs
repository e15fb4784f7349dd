//! Test-only generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use troprank::hyperarrange::{perturbation_gaps, type_of, Hyperplane};
use troprank::num::{rat, ratio, to_primitive_int, IntVec, Rat};
use troprank::polyfan::{lp_feasible, Cone, Fan, HalfOpenCone};
use troprank::trop::TropicalMatrix;

pub const M1: [[i64; 5]; 5] = [
    [16, -4, -4, -4, -4],
    [-4, 1, 1, 1, 1],
    [-4, 1, 1, 1, 1],
    [-4, 1, 1, 1, 1],
    [-4, 1, 1, 1, 1],
];
pub const M2: [[i64; 5]; 5] = [
    [-4, -4, -4, 6, 6],
    [-4, -4, -4, 6, 6],
    [-4, -4, -4, 6, 6],
    [6, 6, 6, -9, -9],
    [6, 6, 6, -9, -9],
];
pub const M3: [[i64; 5]; 5] = [
    [-3, -3, -3, 7, 2],
    [-3, -3, -3, 7, 2],
    [-3, -3, -3, 7, 2],
    [7, 7, 7, -8, -13],
    [2, 2, 2, -13, 7],
];
pub const M4: [[i64; 5]; 5] = [
    [3, 3, -7, -7, 8],
    [3, 3, -7, -7, 8],
    [-7, -7, 8, 8, -2],
    [-7, -7, 8, 8, -2],
    [8, 8, -2, -2, -12],
];
pub const VEC2: [[i64; 5]; 5] = [
    [-2, -2, 0, 2, 2],
    [-2, -2, 0, 2, 2],
    [0, 0, 2, -1, -1],
    [2, 2, -1, 1, -4],
    [2, 2, -1, -4, 1],
];

pub fn mat(rows: &[[i64; 5]; 5]) -> TropicalMatrix {
    TropicalMatrix::from_i64(rows)
}

pub fn neg(m: &TropicalMatrix) -> TropicalMatrix {
    TropicalMatrix::new(m.nrows(), m.ncols(), m.flatten().iter().map(|x| -x).collect()).unwrap()
}

/// The six published ray representatives: ±M1, M2, M3, M4 and the extra ray.
pub fn published_rays() -> Vec<TropicalMatrix> {
    vec![mat(&M1), neg(&mat(&M1)), mat(&M2), mat(&M3), mat(&M4), mat(&VEC2)]
}

/// Uniform in `{-20..20} / {1,2}`.
pub fn small_rat<R: Rng>(rng: &mut R) -> Rat {
    ratio(rng.gen_range(-20..=20), rng.gen_range(1..=2))
}

pub fn random_matrix<R: Rng>(rng: &mut R, d: usize, n: usize) -> TropicalMatrix {
    TropicalMatrix::new(d, n, (0..d * n).map(|_| small_rat(rng)).collect()).unwrap()
}

/// `(5 x 3) ⊙ (3 x n)`, which has tropical rank at most 3.
pub fn product_matrix<R: Rng>(rng: &mut R, n: usize) -> TropicalMatrix {
    random_matrix(rng, 5, 3).tropical_product(&random_matrix(rng, 3, n)).unwrap()
}

/// A published ray varied by operations that keep tropical rank: column subsets,
/// appended tropical combinations of columns, row and column shifts,
/// permutations, positive scaling and transposition.
pub fn varied_ray<R: Rng>(rng: &mut R, n: usize) -> TropicalMatrix {
    let rays = published_rays();
    let mut m = rays[rng.gen_range(0..rays.len())].clone();
    if rng.gen_bool(0.5) {
        m = m.transpose();
    }
    let mut cols = m.columns();
    cols.shuffle(rng);
    cols.truncate(rng.gen_range(3..=5).min(n));
    while cols.len() < n {
        let a = rng.gen_range(0..cols.len());
        let b = rng.gen_range(0..cols.len());
        let (la, lb) = (small_rat(rng), small_rat(rng));
        let c: Vec<Rat> = cols[a].iter().zip(&cols[b]).map(|(x, y)| (x + &la).min(y + &lb)).collect();
        cols.push(c);
    }
    cols.shuffle(rng);
    let mut m = TropicalMatrix::from_columns(&cols).unwrap();
    let scale = ratio(rng.gen_range(1..=3), rng.gen_range(1..=2));
    let row_shift: Vec<Rat> = (0..5).map(|_| small_rat(rng)).collect();
    let col_shift: Vec<Rat> = (0..n).map(|_| small_rat(rng)).collect();
    let mut rows: Vec<usize> = (0..5).collect();
    rows.shuffle(rng);
    let mut out = TropicalMatrix::zeros(5, n);
    for (i, &r) in rows.iter().enumerate() {
        for j in 0..n {
            out.set(i, j, m.get(r, j) * &scale + &row_shift[i] + &col_shift[j]);
        }
    }
    m = out;
    m
}

/// Rank-≤3 generator mixing both families.
pub fn rank3_matrix<R: Rng>(rng: &mut R) -> TropicalMatrix {
    let n = rng.gen_range(4..=8);
    if rng.gen_bool(0.5) {
        product_matrix(rng, n)
    } else {
        varied_ray(rng, n)
    }
}

/// Brute-force tropical determinant: minimum and how many permutations attain it.
pub fn det_oracle(m: &TropicalMatrix) -> (Rat, usize) {
    let k = m.nrows();
    let mut best: Option<Rat> = None;
    let mut count = 0;
    for p in (0..k).permutations(k) {
        let s: Rat = (0..k).map(|i| m.get(i, p[i]).clone()).sum();
        match &best {
            Some(b) if &s > b => {}
            Some(b) if &s == b => count += 1,
            _ => {
                best = Some(s);
                count = 1;
            }
        }
    }
    (best.unwrap(), count)
}

fn unit(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[i] = Rat::one();
    v
}

fn row(v: Vec<Rat>) -> IntVec {
    to_primitive_int(&v)
}

/// Does some `x` with `|x - w|_∞ < eps` lie on `h` and on `h2 + v`? Exhaustive
/// over pairs of minimizing coordinates, each an exact feasibility problem in
/// `(x, s)` homogenized with `s > 0`. With `eps` and `|v|_∞` below the gaps,
/// only pairs inside the types at `w` can attain the minima near `w`.
pub fn near_point_exists(w: &[Rat], h: &Hyperplane, h2: &Hyperplane, v: &[Rat], eps: &Rat) -> bool {
    let d = w.len();
    let b: Vec<Rat> = h2.coeffs().iter().zip(v).map(|(x, y)| x - y).collect();
    let a = h.coeffs();
    let pair_rows = |c: &[Rat], i: usize, j: usize| -> (IntVec, Vec<IntVec>) {
        // c_i + x_i = c_j + x_j, and c_k + x_k >= c_i + x_i, with s as the unit
        let mut eq = unit(d + 1, i);
        eq[j] -= Rat::one();
        eq[d] = &c[i] - &c[j];
        let ineqs = (0..d)
            .filter(|&k| k != i && k != j)
            .map(|k| {
                let mut r = unit(d + 1, k);
                r[i] -= Rat::one();
                r[d] = &c[k] - &c[i];
                row(r)
            })
            .collect();
        (row(eq), ineqs)
    };
    let t = type_of(w, h).unwrap();
    let t2 = type_of(w, h2).unwrap();
    for (&i, &j) in t.indices().iter().tuple_combinations() {
        for (&k, &l) in t2.indices().iter().tuple_combinations() {
            let mut c = HalfOpenCone::new(d + 1);
            let (e1, w1) = pair_rows(a, i, j);
            let (e2, w2) = pair_rows(&b, k, l);
            c.equalities = vec![e1, e2];
            c.weak = w1.into_iter().chain(w2).collect();
            c.strict.push(row(unit(d + 1, d)));
            for m in 0..d {
                // w_m + eps > x_m > w_m - eps
                let mut up = unit(d + 1, m).into_iter().map(|x| -x).collect::<Vec<_>>();
                up[d] = &w[m] + eps;
                let mut lo = unit(d + 1, m);
                lo[d] = eps - &w[m];
                c.strict.push(row(up));
                c.strict.push(row(lo));
            }
            if lp_feasible(&c) {
                return true;
            }
        }
    }
    false
}

/// Perturbation test of stable membership: `trials` random translations with
/// `|v|_∞ < δ`, `δ = ½ min{ε, Δ, Δ'}`; the point is stable iff every one of
/// them has a point of `H ∩ (H' + v)` within `ε`.
pub fn perturbation_oracle<R: Rng>(w: &[Rat], h: &Hyperplane, h2: &Hyperplane, trials: usize, rng: &mut R) -> bool {
    let (g, g2) = perturbation_gaps(w, h, h2).unwrap();
    let gaps: Vec<Rat> = [g, g2].into_iter().flatten().collect();
    let eps = gaps.iter().min().map_or(rat(1), |m| m / rat(4));
    let delta = gaps.iter().chain([&eps]).min().unwrap() / rat(2);
    (0..trials).all(|_| {
        let v: Vec<Rat> = (0..w.len())
            .map(|_| &delta * ratio(rng.gen_range(-999..=999), 1000))
            .collect();
        near_point_exists(w, h, h2, &v, &eps)
    })
}

/// All nonempty intersections of one cone from each fan, faces included.
pub fn all_pairs_refinement(fans: &[Fan]) -> BTreeSet<Cone> {
    let n = fans[0].ambient_dim();
    let mut acc: Vec<Cone> = vec![Cone::full(n)];
    for f in fans {
        let mut next = BTreeSet::new();
        for a in &acc {
            for c in f.all_cones() {
                next.insert(a.intersect(&c));
            }
        }
        acc = next.into_iter().collect();
    }
    acc.into_iter().collect()
}

/// Hyperplane through points by trying every choice of minimizing pair, no pruning.
pub fn exhaustive_hyperplane_exists(points: &[Vec<Rat>]) -> bool {
    let d = points[0].len();
    let pairs: Vec<(usize, usize)> = (0..d).tuple_combinations().collect();
    points
        .iter()
        .map(|_| pairs.iter())
        .multi_cartesian_product()
        .any(|choice| {
            let mut c = HalfOpenCone::new(d + 1);
            for (w, &&(a, b)) in points.iter().zip(&choice) {
                let (eq, ineqs) = troprank::hyperarrange::minimizing_pair_cell(w, a, b);
                c.equalities.push(eq);
                c.weak.extend(ineqs);
            }
            c.strict.push(row(unit(d + 1, d)));
            lp_feasible(&c)
        })
}

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}
