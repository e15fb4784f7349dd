use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::num::{parse_rat, rat, Rat};

/// A `d x n` matrix of finite tropical numbers, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TropicalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl TropicalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rat>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::arg("matrix dimensions must be positive"));
        }
        if entries.len() != rows * cols {
            return Err(Error::arg(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(TropicalMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let d = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::arg("ragged matrix rows"));
        }
        Self::new(d, n, rows.into_iter().flatten().collect())
    }

    /// Integer matrix literal. Panics on ragged or empty input, so keep it to tests and constants.
    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows: Vec<Vec<Rat>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| rat(x)).collect())
            .collect();
        Self::from_rows(rows).expect("well-formed literal")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        TropicalMatrix {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rat) {
        self.entries[i * self.cols + j] = value;
    }

    /// Row-major entries; this is the point of R^{d*n} the matrix represents.
    pub fn flatten(&self) -> &[Rat] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> Vec<Rat> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rat>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn from_columns(cols: &[Vec<Rat>]) -> Result<Self> {
        let n = cols.len();
        let d = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != d) {
            return Err(Error::arg("columns of different lengths"));
        }
        let mut entries = Vec::with_capacity(d * n);
        for i in 0..d {
            for c in cols {
                entries.push(c[i].clone());
            }
        }
        Self::new(d, n, entries)
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        TropicalMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        TropicalMatrix {
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    pub fn delete_row(&self, i: usize) -> Self {
        let rows: Vec<usize> = (0..self.rows).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..self.cols).collect();
        self.submatrix(&rows, &cols)
    }

    /// Min-plus product `self ⊙ other`.
    pub fn tropical_product(&self, other: &TropicalMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::arg("inner dimensions differ"));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let v = (0..self.cols)
                    .map(|k| self.get(i, k) + other.get(k, j))
                    .min()
                    .expect("nonempty inner dimension");
                entries.push(v);
            }
        }
        Self::new(self.rows, other.cols, entries)
    }

    /// Parses the text format: a header line `d n` followed by `d` rows of `n` rationals.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, 1, "missing header line `d n`"))?;
        let dims = tokens(header);
        if dims.len() != 2 {
            return Err(Error::parse(hline + 1, 1, "header must be `d n`"));
        }
        let parse_dim = |(col, tok): &(usize, &str)| -> Result<usize> {
            tok.parse::<usize>()
                .ok()
                .filter(|&x| x > 0)
                .ok_or_else(|| Error::parse(hline + 1, *col, format!("bad dimension `{tok}`")))
        };
        let d = parse_dim(&dims[0])?;
        let n = parse_dim(&dims[1])?;
        let mut entries = Vec::with_capacity(d * n);
        for r in 0..d {
            let (lno, line) = lines
                .next()
                .ok_or_else(|| Error::parse(hline + 2 + r, 1, format!("expected {d} rows")))?;
            let toks = tokens(line);
            if toks.len() != n {
                return Err(Error::parse(
                    lno + 1,
                    1,
                    format!("expected {n} entries, found {}", toks.len()),
                ));
            }
            for (col, tok) in toks {
                let v = parse_rat(tok).ok_or_else(|| {
                    Error::parse(lno + 1, col, format!("`{tok}` is not a rational number"))
                })?;
                entries.push(v);
            }
        }
        if let Some((lno, _)) = lines.next() {
            return Err(Error::parse(lno + 1, 1, "trailing data after matrix"));
        }
        Self::new(d, n, entries)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

/// Whitespace tokens with their 1-based column.
pub(crate) fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

impl fmt::Display for TropicalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::ratio;

    #[test]
    fn parse_round_trip() {
        let m = TropicalMatrix::parse("2 3\n0 1/2 -3\n# comment\n4 5 6/4\n").unwrap();
        assert_eq!(m.get(0, 1), &ratio(1, 2));
        assert_eq!(m.get(1, 2), &ratio(3, 2));
        assert_eq!(TropicalMatrix::parse(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = TropicalMatrix::parse("2 2\n0 1\n0 x\n").unwrap_err();
        assert_eq!(err, Error::parse(3, 3, "`x` is not a rational number"));
        let err = TropicalMatrix::parse("2 2\n0 1 2\n0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(TropicalMatrix::parse("2 2\n0 1\n").is_err());
        assert!(TropicalMatrix::parse("0 2\n").is_err());
    }

    #[test]
    fn tropical_product_is_min_plus() {
        let a = TropicalMatrix::from_i64(&[[0, 3], [1, 0]]);
        let b = TropicalMatrix::from_i64(&[[2], [0]]);
        let c = a.tropical_product(&b).unwrap();
        assert_eq!(c, TropicalMatrix::from_i64(&[[2], [0]]));
    }

    #[test]
    fn columns_round_trip() {
        let a = TropicalMatrix::from_i64(&[[0, 3, 4], [1, 0, 7]]);
        assert_eq!(TropicalMatrix::from_columns(&a.columns()).unwrap(), a);
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.delete_row(0), TropicalMatrix::from_i64(&[[1, 0, 7]]));
    }
}
