use std::collections::HashSet;
use std::fmt;

use itertools::Itertools;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::num::{parse_rat, Rat};
use crate::trop::matrix::tokens;

/// One term `± t^coeff_val x^exponent` of a polynomial over the valued field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub positive: bool,
    pub coeff_val: Rat,
    pub exponent: Vec<u32>,
}

impl Term {
    /// The omega-degree `val(c) + <omega, a>`.
    pub fn degree(&self, omega: &[Rat]) -> Rat {
        self.exponent
            .iter()
            .zip(omega)
            .filter(|(&e, _)| e != 0)
            .fold(self.coeff_val.clone(), |acc, (&e, w)| acc + w * Rat::from_integer(e.into()))
    }
}

/// A polynomial recorded by the signs and valuations of its coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedTropPolynomial {
    nvars: usize,
    terms: Vec<Term>,
}

impl SignedTropPolynomial {
    pub fn new(nvars: usize, terms: Vec<Term>) -> Result<Self> {
        let mut seen = HashSet::new();
        for t in &terms {
            if t.exponent.len() != nvars {
                return Err(Error::arg(format!(
                    "exponent of length {} in a polynomial with {nvars} variables",
                    t.exponent.len()
                )));
            }
            if !seen.insert(&t.exponent) {
                return Err(Error::arg("two terms share an exponent vector"));
            }
        }
        Ok(SignedTropPolynomial { nvars, terms })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Tropical linear form `min_i (coeffs[i] + x_i)`.
    pub fn linear_form(coeffs: &[Rat]) -> Self {
        let n = coeffs.len();
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                Term {
                    positive: true,
                    coeff_val: c.clone(),
                    exponent: e,
                }
            })
            .collect();
        SignedTropPolynomial { nvars: n, terms }
    }

    pub fn has_constant_coefficients(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.coeff_val == self.terms[0].coeff_val)
    }

    fn check_weight(&self, omega: &[Rat]) -> Result<()> {
        if self.terms.is_empty() {
            return Err(Error::arg("empty polynomial"));
        }
        if omega.len() != self.nvars {
            return Err(Error::arg(format!(
                "weight of length {} for a polynomial in {} variables",
                omega.len(),
                self.nvars
            )));
        }
        Ok(())
    }

    /// Indices of the terms of minimal omega-degree.
    pub fn minimizing_terms(&self, omega: &[Rat]) -> Result<Vec<usize>> {
        self.check_weight(omega)?;
        let degrees: Vec<Rat> = self.terms.iter().map(|t| t.degree(omega)).collect();
        let min = degrees.iter().min().expect("nonempty").clone();
        Ok(degrees
            .iter()
            .positions(|d| *d == min)
            .collect())
    }

    /// Tropical evaluation: the minimal omega-degree.
    pub fn evaluate(&self, omega: &[Rat]) -> Result<Rat> {
        self.check_weight(omega)?;
        Ok(self.terms.iter().map(|t| t.degree(omega)).min().expect("nonempty"))
    }

    /// Whether `omega` lies on the tropical hypersurface (minimum attained at least twice).
    pub fn vanishes_at(&self, omega: &[Rat]) -> Result<bool> {
        Ok(self.minimizing_terms(omega)?.len() >= 2)
    }

    /// The initial form: the terms of minimal omega-degree with `t = 1`.
    pub fn initial_form(&self, omega: &[Rat]) -> Result<SignedTropPolynomial> {
        let keep = self.minimizing_terms(omega)?;
        let terms = keep
            .into_iter()
            .map(|i| Term {
                coeff_val: Rat::zero(),
                ..self.terms[i].clone()
            })
            .collect();
        Ok(SignedTropPolynomial {
            nvars: self.nvars,
            terms,
        })
    }

    /// Text form: one line per term, `sign coeff_val e_1 ... e_N`.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for t in &self.terms {
            out.push(if t.positive { '+' } else { '-' });
            out.push(' ');
            out.push_str(&t.coeff_val.to_string());
            for e in &t.exponent {
                out.push(' ');
                out.push_str(&e.to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_lines(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut nvars = None;
        for (lno, line) in text.lines().enumerate() {
            let toks = tokens(line);
            if toks.is_empty() || toks[0].1.starts_with('#') {
                continue;
            }
            if toks.len() < 2 {
                return Err(Error::parse(lno + 1, 1, "expected `sign coeff_val exponents...`"));
            }
            let positive = match toks[0].1 {
                "+" | "+1" | "1" => true,
                "-" | "-1" => false,
                s => return Err(Error::parse(lno + 1, toks[0].0, format!("bad sign `{s}`"))),
            };
            let coeff_val = parse_rat(toks[1].1).ok_or_else(|| {
                Error::parse(lno + 1, toks[1].0, format!("bad coefficient `{}`", toks[1].1))
            })?;
            let exponent = toks[2..]
                .iter()
                .map(|(col, s)| {
                    s.parse::<u32>()
                        .map_err(|_| Error::parse(lno + 1, *col, format!("bad exponent `{s}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            match nvars {
                None => nvars = Some(exponent.len()),
                Some(n) if n != exponent.len() => {
                    return Err(Error::parse(lno + 1, 1, "exponent vectors of different lengths"))
                }
                _ => {}
            }
            terms.push(Term {
                positive,
                coeff_val,
                exponent,
            });
        }
        Self::new(nvars.unwrap_or(0), terms)
    }

    /// Human-readable form naming variables `x_ij` of a matrix with `cols` columns.
    pub fn display_matrix_vars(&self, cols: usize) -> String {
        self.display_with(|v| format!("x{}{}", v / cols + 1, v % cols + 1))
    }

    fn display_with(&self, name: impl Fn(usize) -> String) -> String {
        let mut out = String::new();
        for (k, t) in self.terms.iter().enumerate() {
            let sign = if t.positive { "+" } else { "-" };
            if k == 0 {
                if !t.positive {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            if !t.coeff_val.is_zero() {
                out.push_str(&format!("t^({})", t.coeff_val));
            }
            let mono: Vec<String> = t
                .exponent
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| if e == 1 { name(v) } else { format!("{}^{e}", name(v)) })
                .collect();
            if mono.is_empty() && t.coeff_val.is_zero() {
                out.push('1');
            }
            out.push_str(&mono.join(""));
        }
        out
    }
}

impl fmt::Display for SignedTropPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(|v| format!("x{}", v + 1)))
    }
}

/// Parity of a permutation given as images of `0..k`.
pub fn permutation_is_even(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0;
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 0
}

/// The minor on `rows x cols` of the `d x n` matrix of variables `x_ij`
/// (variable index `i * n + j`). Terms follow the lexicographic order of permutations.
pub fn minor(d: usize, n: usize, rows: &[usize], cols: &[usize]) -> Result<SignedTropPolynomial> {
    if rows.len() != cols.len() || rows.is_empty() {
        return Err(Error::arg("a minor needs equally many rows and columns"));
    }
    if rows.iter().any(|&r| r >= d) || cols.iter().any(|&c| c >= n) {
        return Err(Error::arg("minor index out of range"));
    }
    let k = rows.len();
    let terms = (0..k)
        .permutations(k)
        .map(|perm| {
            let mut e = vec![0u32; d * n];
            for (a, &p) in perm.iter().enumerate() {
                e[rows[a] * n + cols[p]] = 1;
            }
            Term {
                positive: permutation_is_even(&perm),
                coeff_val: Rat::zero(),
                exponent: e,
            }
        })
        .collect();
    SignedTropPolynomial::new(d * n, terms)
}

/// All `k x k` minors of the `d x n` matrix of variables, row subsets outermost,
/// both in lexicographic order.
pub fn minors(d: usize, n: usize, k: usize) -> Result<Vec<SignedTropPolynomial>> {
    if d == 0 || n == 0 || k == 0 || k > d.min(n) {
        return Err(Error::arg(format!("need 1 <= k <= min(d, n), got d={d} n={n} k={k}")));
    }
    let mut out = Vec::new();
    for rows in (0..d).combinations(k) {
        for cols in (0..n).combinations(k) {
            out.push(minor(d, n, &rows, &cols)?);
        }
    }
    Ok(out)
}
