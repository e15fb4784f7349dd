//! Tropical (min-plus) determinants and tropical rank.
//!
//! Entries are scaled by the lcm of their denominators before any
//! comparison, so all optimality tests are exact integer comparisons.

use std::ops::{Add, Sub};

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::num::Rat;
use crate::trop::TropicalMatrix;

/// Largest size for which optimal permutations are counted exactly.
pub const BRUTE_FORCE_LIMIT: usize = 6;
/// Largest size accepted by the assignment solver.
pub const ASSIGNMENT_LIMIT: usize = 12;
/// Largest `min(d, n)` accepted by [`tropical_rank`].
pub const RANK_LIMIT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Multiplicity {
    /// Exact number of optimal permutations.
    Exact(usize),
    /// At least two optimal permutations; the count was not enumerated.
    Multiple,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropDetResult {
    pub value: Rat,
    pub multiplicity: Multiplicity,
    /// Optimal permutations in lexicographic order (`perm[i]` is the column of row `i`).
    /// Populated only for `k <= BRUTE_FORCE_LIMIT`.
    pub optimal_permutations: Vec<Vec<usize>>,
}

impl TropDetResult {
    pub fn optimal_count(&self) -> Option<usize> {
        match self.multiplicity {
            Multiplicity::Exact(n) => Some(n),
            Multiplicity::Multiple => None,
        }
    }

    pub fn is_unique(&self) -> bool {
        self.multiplicity == Multiplicity::Exact(1)
    }
}

/// Integer cost matrix, narrow when the scaled entries allow it.
pub(crate) enum Costs {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

pub(crate) struct ScaledMatrix {
    pub costs: Costs,
    pub cols: usize,
    pub scale: BigInt,
}

impl ScaledMatrix {
    pub fn new(m: &TropicalMatrix) -> Self {
        let scale = m
            .flatten()
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let big: Vec<BigInt> = m
            .flatten()
            .iter()
            .map(|x| (x * &scale).to_integer())
            .collect();
        // i64-sized entries keep every sum of up to 2^64 terms inside i128
        let small: Option<Vec<i128>> = big
            .iter()
            .map(|x| x.to_i64().map(i128::from))
            .collect();
        let costs = match small {
            Some(s) => Costs::Small(s),
            None => Costs::Big(big),
        };
        ScaledMatrix {
            costs,
            cols: m.ncols(),
            scale,
        }
    }

    fn unscale(&self, v: BigInt) -> Rat {
        BigRational::new(v, self.scale.clone())
    }

    /// Brute-force determinant of the submatrix on `rows x cols`.
    pub fn brute(&self, rows: &[usize], cols: &[usize], collect: bool) -> (Rat, usize, Vec<Vec<usize>>) {
        match &self.costs {
            Costs::Small(c) => {
                let (v, n, p) = brute_force(c, self.cols, rows, cols, collect);
                (self.unscale(BigInt::from(v)), n, p)
            }
            Costs::Big(c) => {
                let (v, n, p) = brute_force(c, self.cols, rows, cols, collect);
                (self.unscale(v), n, p)
            }
        }
    }

    pub fn assignment(&self, rows: &[usize], cols: &[usize]) -> (Rat, Vec<usize>, bool) {
        match &self.costs {
            Costs::Small(c) => {
                let (v, p, u) = assignment(c, self.cols, rows, cols);
                (self.unscale(BigInt::from(v)), p, u)
            }
            Costs::Big(c) => {
                let (v, p, u) = assignment(c, self.cols, rows, cols);
                (self.unscale(v), p, u)
            }
        }
    }

    /// Whether the square submatrix has a unique optimal permutation.
    pub fn nonsingular(&self, rows: &[usize], cols: &[usize]) -> bool {
        if rows.len() <= BRUTE_FORCE_LIMIT {
            self.brute(rows, cols, false).1 == 1
        } else {
            self.assignment(rows, cols).2
        }
    }
}

fn brute_force<T>(
    costs: &[T],
    ncols: usize,
    rows: &[usize],
    cols: &[usize],
    collect: bool,
) -> (T, usize, Vec<Vec<usize>>)
where
    T: Clone + Ord + Zero + for<'a> Add<&'a T, Output = T>,
{
    struct Search<'a, T> {
        costs: &'a [T],
        ncols: usize,
        rows: &'a [usize],
        cols: &'a [usize],
        collect: bool,
        best: Option<T>,
        count: usize,
        perms: Vec<Vec<usize>>,
        perm: Vec<usize>,
        used: Vec<bool>,
    }
    impl<T: Clone + Ord + Zero + for<'a> Add<&'a T, Output = T>> Search<'_, T> {
        fn go(&mut self, depth: usize, acc: T) {
            let k = self.rows.len();
            if depth == k {
                match &self.best {
                    Some(b) if acc > *b => {}
                    Some(b) if acc == *b => {
                        self.count += 1;
                        if self.collect {
                            self.perms.push(self.perm.clone());
                        }
                    }
                    _ => {
                        self.best = Some(acc);
                        self.count = 1;
                        self.perms.clear();
                        if self.collect {
                            self.perms.push(self.perm.clone());
                        }
                    }
                }
                return;
            }
            let r = self.rows[depth];
            for j in 0..k {
                if self.used[j] {
                    continue;
                }
                self.used[j] = true;
                self.perm.push(j);
                let next = acc.clone() + &self.costs[r * self.ncols + self.cols[j]];
                self.go(depth + 1, next);
                self.perm.pop();
                self.used[j] = false;
            }
        }
    }
    let mut s = Search {
        costs,
        ncols,
        rows,
        cols,
        collect,
        best: None,
        count: 0,
        perms: Vec::new(),
        perm: Vec::with_capacity(rows.len()),
        used: vec![false; rows.len()],
    };
    s.go(0, T::zero());
    (s.best.expect("k >= 1"), s.count, s.perms)
}

/// Shortest augmenting path assignment with dual potentials. Returns the optimal
/// value, an optimal permutation and whether it is the only optimal one.
fn assignment<T>(costs: &[T], ncols: usize, rows: &[usize], cols: &[usize]) -> (T, Vec<usize>, bool)
where
    T: Clone + Ord + Zero + Add<Output = T> + Sub<Output = T>,
{
    let n = rows.len();
    let a = |i: usize, j: usize| costs[rows[i - 1] * ncols + cols[j - 1]].clone();
    let mut u = vec![T::zero(); n + 1];
    let mut v = vec![T::zero(); n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv: Vec<Option<T>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta: Option<T> = None;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = a(i0, j) - u[i0].clone() - v[j].clone();
                if minv[j].as_ref().is_none_or(|m| cur < *m) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                let mj = minv[j].as_ref().expect("just set");
                if delta.as_ref().is_none_or(|d| mj < d) {
                    delta = Some(mj.clone());
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column remains");
            for j in 0..=n {
                if used[j] {
                    u[p[j]] = u[p[j]].clone() + delta.clone();
                    v[j] = v[j].clone() - delta.clone();
                } else if let Some(m) = minv[j].take() {
                    minv[j] = Some(m - delta.clone());
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut perm = vec![0usize; n];
    for j in 1..=n {
        perm[p[j] - 1] = j - 1;
    }
    let value = (0..n).fold(T::zero(), |acc, i| acc + a(i + 1, perm[i] + 1));

    // Every optimal permutation uses only tight edges; the optimum is unique iff the
    // tight-edge graph, oriented row->column off the matching and column->row on it,
    // has no directed cycle.
    let tight = |i: usize, j: usize| a(i + 1, j + 1) - u[i + 1].clone() - v[j + 1].clone() == T::zero();
    let mut row_of_col = vec![0usize; n];
    for (i, &j) in perm.iter().enumerate() {
        row_of_col[j] = i;
    }
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != perm[i] && tight(i, j))
                .map(|j| row_of_col[j])
                .collect()
        })
        .collect();
    let unique = !has_cycle(&succ);
    (value, perm, unique)
}

fn has_cycle(succ: &[Vec<usize>]) -> bool {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; succ.len()];
    fn visit(v: usize, succ: &[Vec<usize>], state: &mut [u8]) -> bool {
        state[v] = 1;
        for &w in &succ[v] {
            if state[w] == 1 || (state[w] == 0 && visit(w, succ, state)) {
                return true;
            }
        }
        state[v] = 2;
        false
    }
    (0..succ.len()).any(|v| state[v] == 0 && visit(v, succ, &mut state))
}

fn square_check(m: &TropicalMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::arg(format!(
            "tropical determinant needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// Tropical determinant by enumeration of all permutations.
pub fn trop_det_brute_force(m: &TropicalMatrix) -> Result<TropDetResult> {
    square_check(m)?;
    if m.nrows() > BRUTE_FORCE_LIMIT + 2 {
        return Err(Error::arg("brute force determinant limited to 8x8"));
    }
    let idx: Vec<usize> = (0..m.nrows()).collect();
    let (value, count, perms) = ScaledMatrix::new(m).brute(&idx, &idx, true);
    Ok(TropDetResult {
        value,
        multiplicity: Multiplicity::Exact(count),
        optimal_permutations: perms,
    })
}

/// Tropical determinant by the assignment solver; multiplicity is only unique / not unique.
pub fn trop_det_assignment(m: &TropicalMatrix) -> Result<TropDetResult> {
    square_check(m)?;
    if m.nrows() > ASSIGNMENT_LIMIT {
        return Err(Error::arg(format!(
            "tropical determinant limited to {ASSIGNMENT_LIMIT}x{ASSIGNMENT_LIMIT}"
        )));
    }
    let idx: Vec<usize> = (0..m.nrows()).collect();
    let (value, perm, unique) = ScaledMatrix::new(m).assignment(&idx, &idx);
    Ok(TropDetResult {
        value,
        multiplicity: if unique {
            Multiplicity::Exact(1)
        } else {
            Multiplicity::Multiple
        },
        optimal_permutations: if unique { vec![perm] } else { Vec::new() },
    })
}

pub fn trop_det(m: &TropicalMatrix) -> Result<TropDetResult> {
    square_check(m)?;
    if m.nrows() <= BRUTE_FORCE_LIMIT {
        trop_det_brute_force(m)
    } else {
        trop_det_assignment(m)
    }
}

pub fn is_trop_singular(m: &TropicalMatrix) -> Result<bool> {
    Ok(!trop_det(m)?.is_unique())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub rank: usize,
    /// Lexicographically first `rank x rank` tropically nonsingular submatrix.
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// Lexicographically first tropically nonsingular `k x k` submatrix, if any.
pub fn nonsingular_submatrix(m: &TropicalMatrix, k: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    if k == 0 || k > m.nrows().min(m.ncols()) {
        return None;
    }
    let scaled = ScaledMatrix::new(m);
    first_nonsingular(&scaled, m, k)
}

fn first_nonsingular(
    scaled: &ScaledMatrix,
    m: &TropicalMatrix,
    k: usize,
) -> Option<(Vec<usize>, Vec<usize>)> {
    for rows in (0..m.nrows()).combinations(k) {
        for cols in (0..m.ncols()).combinations(k) {
            if scaled.nonsingular(&rows, &cols) {
                return Some((rows, cols));
            }
        }
    }
    None
}

/// Largest `r` such that some `r x r` submatrix is tropically nonsingular.
pub fn tropical_rank_report(m: &TropicalMatrix) -> Result<RankReport> {
    let limit = m.nrows().min(m.ncols());
    if limit > RANK_LIMIT {
        return Err(Error::arg(format!(
            "tropical rank is computed by exhaustive minor search, limited to min(d, n) <= {RANK_LIMIT}"
        )));
    }
    let scaled = ScaledMatrix::new(m);
    // every 1x1 submatrix is nonsingular
    let mut best = (1, vec![0], vec![0]);
    for k in 2..=limit {
        match first_nonsingular(&scaled, m, k) {
            Some((r, c)) => best = (k, r, c),
            None => break,
        }
    }
    Ok(RankReport {
        rank: best.0,
        rows: best.1,
        cols: best.2,
    })
}

pub fn tropical_rank(m: &TropicalMatrix) -> Result<usize> {
    Ok(tropical_rank_report(m)?.rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    fn example_a() -> TropicalMatrix {
        TropicalMatrix::from_i64(&[[0, 1, 2], [1, 1, 1], [0, 1, 1]])
    }

    #[test]
    fn worked_example_determinant() {
        let r = trop_det(&example_a()).unwrap();
        assert_eq!(r.value, rat(2));
        assert_eq!(r.optimal_count(), Some(3));
        assert_eq!(
            r.optimal_permutations,
            vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 2, 0]]
        );
        assert!(is_trop_singular(&example_a()).unwrap());
        let sub = example_a().submatrix(&[0, 1], &[0, 1]);
        assert!(!is_trop_singular(&sub).unwrap());
        assert_eq!(tropical_rank(&example_a()).unwrap(), 2);
    }

    #[test]
    fn zero_matrices() {
        let r = trop_det(&TropicalMatrix::zeros(2, 2)).unwrap();
        assert_eq!((r.value.clone(), r.optimal_count()), (rat(0), Some(2)));
        assert_eq!(tropical_rank(&TropicalMatrix::zeros(5, 5)).unwrap(), 1);
        assert_eq!(tropical_rank(&TropicalMatrix::zeros(1, 1)).unwrap(), 1);
    }

    #[test]
    fn equal_rows_are_singular() {
        let m = TropicalMatrix::from_i64(&[[3, 1, 4], [3, 1, 4], [1, 5, 9]]);
        assert!(is_trop_singular(&m).unwrap());
    }

    #[test]
    fn non_square_is_an_argument_error() {
        let m = TropicalMatrix::zeros(2, 3);
        assert!(matches!(trop_det(&m), Err(Error::Argument(_))));
    }

    #[test]
    fn assignment_detects_uniqueness_on_large_matrices() {
        // strictly dominant diagonal: unique optimum
        let mut rows = vec![vec![10i64; 9]; 9];
        for (i, r) in rows.iter_mut().enumerate() {
            r[i] = 0;
        }
        let m = TropicalMatrix::from_i64(&rows);
        let r = trop_det(&m).unwrap();
        assert_eq!(r.value, rat(0));
        assert!(r.is_unique());
        assert!(matches!(tropical_rank(&m), Err(Error::Argument(_))));
        // a tie between two diagonals
        rows[0][1] = 0;
        rows[1][0] = 0;
        let m = TropicalMatrix::from_i64(&rows);
        assert!(!trop_det(&m).unwrap().is_unique());
    }

    #[test]
    fn rank_report_names_a_nonsingular_submatrix() {
        let r = tropical_rank_report(&example_a()).unwrap();
        assert_eq!(r.rank, 2);
        let sub = example_a().submatrix(&r.rows, &r.cols);
        assert!(!is_trop_singular(&sub).unwrap());
    }
}
