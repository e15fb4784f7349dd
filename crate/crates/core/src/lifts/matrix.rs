use std::fmt::Write as _;

use num_bigint::BigInt;

use super::laurent::{val, LaurentPoly, RatFunc};
use crate::error::{Error, Result};
use crate::num::Rat;
use crate::trop::matrix::tokens;
use crate::trop::TropicalMatrix;

/// A matrix over `Q(t)`, stored in the variable `u = t^(1/scale)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftMatrix {
    rows: usize,
    cols: usize,
    scale: i64,
    entries: Vec<RatFunc>,
}

impl LiftMatrix {
    pub fn new(rows: usize, cols: usize, scale: i64, entries: Vec<RatFunc>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::arg(format!("{} entries do not fill a {rows}x{cols} matrix", entries.len())));
        }
        if scale < 1 {
            return Err(Error::arg("exponent scale must be positive"));
        }
        Ok(LiftMatrix { rows, cols, scale, entries })
    }

    /// Matrix with integer exponents of `t`, entries given row by row.
    pub fn from_polys(rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let (r, c) = (rows.len(), rows.first().map_or(0, |x| x.len()));
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::arg("ragged rows"));
        }
        let entries = rows.into_iter().flatten().map(RatFunc::from_poly).collect();
        LiftMatrix::new(r, c, 1, entries)
    }

    pub fn from_columns(scale: i64, columns: &[Vec<RatFunc>]) -> Result<Self> {
        let rows = columns.first().map_or(0, |c| c.len());
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::arg("columns of different lengths"));
        }
        let entries = (0..rows)
            .flat_map(|i| columns.iter().map(move |c| c[i].clone()))
            .collect();
        LiftMatrix::new(rows, columns.len(), scale, entries)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.entries[i * self.cols + j]
    }

    /// Valuation of an entry in units of `t`.
    pub fn valuation(&self, i: usize, j: usize) -> Result<Rat> {
        Ok(Rat::new(val(self.get(i, j))?.into(), self.scale.into()))
    }

    /// Matrix of valuations; fails on a zero entry.
    pub fn valuations(&self) -> Result<TropicalMatrix> {
        let mut v = Vec::with_capacity(self.entries.len());
        for i in 0..self.rows {
            for j in 0..self.cols {
                v.push(self.valuation(i, j)?);
            }
        }
        TropicalMatrix::new(self.rows, self.cols, v)
    }

    /// The same matrix in `u' = t^(1/(k * scale))`.
    pub fn rescaled(&self, k: i64) -> LiftMatrix {
        LiftMatrix {
            rows: self.rows,
            cols: self.cols,
            scale: self.scale * k,
            entries: self.entries.iter().map(|e| e.stretch(k)).collect(),
        }
    }

    /// Header `LIFT d n m`, then one `numerator / denominator` line per entry,
    /// row by row, exponents written in units of `t`.
    pub fn to_text(&self) -> String {
        let mut s = format!("LIFT {} {} {}\n", self.rows, self.cols, self.scale);
        for e in &self.entries {
            let _ = writeln!(s, "{} / {}", e.num().to_text(self.scale), e.den().to_text(self.scale));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (ln, head) = lines.next().ok_or_else(|| Error::parse(1, 1, "empty lift file"))?;
        let t = tokens(head);
        if t.len() != 4 || t[0].1 != "LIFT" {
            return Err(Error::parse(ln, 1, "expected 'LIFT d n m'"));
        }
        let num = |(col, tok): (usize, &str)| {
            tok.parse::<usize>()
                .ok()
                .filter(|&x| x > 0)
                .ok_or_else(|| Error::parse(ln, col, format!("expected a positive integer, got '{tok}'")))
        };
        let (r, c, m) = (num(t[1])?, num(t[2])?, num(t[3])? as i64);
        let mut entries = Vec::with_capacity(r * c);
        for _ in 0..r * c {
            let (ln, line) = lines.next().ok_or_else(|| Error::parse(ln, 1, "too few entries"))?;
            let (a, b) = line
                .split_once(" / ")
                .ok_or_else(|| Error::parse(ln, 1, "expected 'numerator / denominator'"))?;
            let wrap = |e: Error| Error::parse(ln, 1, e.to_string());
            let num = LaurentPoly::parse(a, m).map_err(wrap)?;
            let den = LaurentPoly::parse(b, m).map_err(wrap)?;
            entries.push(RatFunc::new(num, den).map_err(wrap)?);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::parse(ln, 1, "trailing content after the lift"));
        }
        LiftMatrix::new(r, c, m, entries)
    }
}

/// Rank over `Q(t)` by fraction-free elimination. Each column is first
/// multiplied by the product of its distinct denominators, so the elimination
/// runs over Laurent polynomials.
pub fn rank_over_k(m: &LiftMatrix) -> usize {
    let mut cols: Vec<Vec<LaurentPoly>> = Vec::with_capacity(m.cols);
    for j in 0..m.cols {
        let mut dens: Vec<&LaurentPoly> = Vec::new();
        for i in 0..m.rows {
            let d = m.get(i, j).den();
            if !dens.contains(&d) {
                dens.push(d);
            }
        }
        cols.push(
            (0..m.rows)
                .map(|i| {
                    let e = m.get(i, j);
                    dens.iter()
                        .filter(|&&d| d != e.den())
                        .fold(e.num().clone(), |acc, d| &acc * d)
                })
                .collect(),
        );
    }
    let mut a: Vec<Vec<LaurentPoly>> = (0..m.rows)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    // full pivoting on the sparsest entry keeps intermediate polynomials small
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = LaurentPoly::one();
    for r in 0..rows.min(cols) {
        let pivot = (r..rows)
            .flat_map(|i| (r..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by_key(|&(i, j)| a[i][j].len());
        let Some((pi, pj)) = pivot else {
            return r;
        };
        a.swap(r, pi);
        for row in a.iter_mut() {
            row.swap(r, pj);
        }
        for i in r + 1..rows {
            for j in r + 1..cols {
                let x = &(&a[r][r] * &a[i][j]) - &(&a[i][r] * &a[r][j]);
                a[i][j] = x.div_exact(&prev).expect("fraction-free elimination divides exactly");
            }
            a[i][r] = LaurentPoly::zero();
        }
        prev = a[r][r].clone();
    }
    rows.min(cols)
}

/// Whether `lift` has valuations `target` and rank at most `r`.
pub fn verify_lift(lift: &LiftMatrix, target: &TropicalMatrix, r: usize) -> bool {
    if lift.rows != target.nrows() || lift.cols != target.ncols() {
        return false;
    }
    for i in 0..lift.rows {
        for j in 0..lift.cols {
            match lift.valuation(i, j) {
                Ok(v) if &v == target.get(i, j) => {}
                _ => return false,
            }
        }
    }
    rank_over_k(lift) <= r
}

/// Smallest positive `m` with `m * x` integral for every `x`.
pub fn common_scale<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> Result<i64> {
    let l: BigInt = crate::num::lcm_denominators(xs);
    i64::try_from(l).map_err(|_| Error::arg("denominators too large for an exponent scale"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    fn p(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, rat(c))))
    }

    pub(crate) fn example_lift() -> LiftMatrix {
        LiftMatrix::from_polys(vec![
            vec![p(&[(0, 1)]), p(&[(1, 1)]), p(&[(2, 1)])],
            vec![p(&[(1, 2)]), p(&[(1, 3)]), p(&[(1, 5)])],
            vec![p(&[(0, 1), (1, 2)]), p(&[(1, 4)]), p(&[(1, 5), (2, 1)])],
        ])
        .unwrap()
    }

    #[test]
    fn worked_example_has_rank_two() {
        let lift = example_lift();
        assert_eq!(rank_over_k(&lift), 2);
        let a = TropicalMatrix::from_i64(&[[0, 1, 2], [1, 1, 1], [0, 1, 1]]);
        assert!(verify_lift(&lift, &a, 2));
        assert!(!verify_lift(&lift, &a, 1));
    }

    #[test]
    fn identity() {
        let one = || p(&[(0, 1)]);
        let zero = LaurentPoly::zero;
        let id = LiftMatrix::from_polys(vec![
            vec![one(), zero(), zero()],
            vec![zero(), one(), zero()],
            vec![zero(), zero(), one()],
        ])
        .unwrap();
        assert_eq!(rank_over_k(&id), 3);
        assert!(!verify_lift(&id, &TropicalMatrix::zeros(3, 3), 3));
    }

    #[test]
    fn text_round_trip() {
        let lift = example_lift().rescaled(3);
        let back = LiftMatrix::parse(&lift.to_text()).unwrap();
        assert_eq!(back, lift);
        assert_eq!(back.valuation(0, 2).unwrap(), rat(2));
    }
}
