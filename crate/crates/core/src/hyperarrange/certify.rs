use std::fmt::Write as _;

use super::{coordinate_hyperplane, stable_membership, type_of, witnesses, Hyperplane, TypeSet};
use crate::error::{Error, Result};
use crate::num::{fmt_vec, parse_rat};
use crate::trop::matrix::tokens;
use crate::trop::{tropical_rank_report, TropicalMatrix};

/// Evidence that a `5 x n` matrix has Kapranov rank at most 3: five coordinate
/// hyperplanes through its columns and a pair of them meeting stably at every column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub hyperplanes: Vec<Hyperplane>,
    /// 0-based, `i < j`.
    pub stable_pair: (usize, usize),
    /// For each column, its types against the two hyperplanes of the pair.
    pub types: Vec<(TypeSet, TypeSet)>,
}

const D: usize = 5;

pub fn kapranov3_certify(a: &TropicalMatrix) -> Result<Certificate> {
    if a.nrows() != D {
        return Err(Error::arg(format!("certification needs 5 rows, got {}", a.nrows())));
    }
    let report = tropical_rank_report(a)?;
    if report.rank > 3 {
        let rows: Vec<usize> = report.rows.iter().map(|r| r + 1).collect();
        let cols: Vec<usize> = report.cols.iter().map(|c| c + 1).collect();
        return Err(Error::Precondition(format!(
            "tropical rank {} > 3; nonsingular submatrix on rows {} and columns {}",
            report.rank,
            fmt_vec(&rows),
            fmt_vec(&cols)
        )));
    }
    let cols = a.columns();
    let hyperplanes: Vec<Hyperplane> = (0..D)
        .map(|i| {
            coordinate_hyperplane(i, &cols).map_err(|e| match e {
                Error::Precondition(m) => Error::Internal(format!("theorem-violated: {m}")),
                other => other,
            })
        })
        .collect::<Result<_>>()?;
    for i in 0..D {
        for j in i + 1..D {
            let found = witnesses(&cols, &hyperplanes[i], &hyperplanes[j])?;
            if let Some((k, t)) = found.iter().find(|(_, t)| t.contains(i) || t.contains(j)) {
                return Err(Error::Internal(format!(
                    "theorem-violated: witness column {} of type {t} meets {{{},{}}}",
                    k + 1,
                    i + 1,
                    j + 1
                )));
            }
            if found.is_empty() {
                let types = cols
                    .iter()
                    .map(|w| Ok((type_of(w, &hyperplanes[i])?, type_of(w, &hyperplanes[j])?)))
                    .collect::<Result<_>>()?;
                let cert = Certificate {
                    hyperplanes,
                    stable_pair: (i, j),
                    types,
                };
                cert.verify(a).map_err(|e| Error::Internal(format!("certificate self-check: {e}")))?;
                return Ok(cert);
            }
        }
    }
    Err(Error::Internal(
        "theorem-violated: every pair of coordinate hyperplanes has a witness".into(),
    ))
}

impl Certificate {
    /// Re-checks every claim against `a` using only types and stable membership.
    pub fn verify(&self, a: &TropicalMatrix) -> Result<()> {
        let bad = |m: String| Err(Error::Precondition(m));
        if a.nrows() != D || self.hyperplanes.len() != D {
            return bad("certificate and matrix must both have 5 rows".into());
        }
        if self.hyperplanes.iter().any(|h| h.dim() != D) {
            return bad("hyperplanes must have 5 coefficients".into());
        }
        if self.types.len() != a.ncols() {
            return bad(format!("{} column types for {} columns", self.types.len(), a.ncols()));
        }
        let (i, j) = self.stable_pair;
        if !(i < j && j < D) {
            return bad("stable pair must be two distinct indices in 1..5".into());
        }
        for (k, w) in a.columns().iter().enumerate() {
            for (c, h) in self.hyperplanes.iter().enumerate() {
                let t = type_of(w, h)?;
                if t.len() < 2 {
                    return bad(format!("column {} is not on H{}", k + 1, c + 1));
                }
                if t.contains(c) {
                    return bad(format!("column {} has type {t} against H{}, which contains {}", k + 1, c + 1, c + 1));
                }
            }
            let (ti, tj) = (type_of(w, &self.hyperplanes[i])?, type_of(w, &self.hyperplanes[j])?);
            if self.types[k] != (ti, tj) {
                return bad(format!("recorded types of column {} do not match", k + 1));
            }
            if !stable_membership(w, &self.hyperplanes[i], &self.hyperplanes[j])? {
                return bad(format!("column {} is a witness for the pair", k + 1));
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("CERTIFICATE {} {}\n", D, self.types.len());
        for (c, h) in self.hyperplanes.iter().enumerate() {
            let coeffs: Vec<String> = h.coeffs().iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "H{} {}", c + 1, coeffs.join(" "));
        }
        let _ = writeln!(s, "STABLE_PAIR {} {}", self.stable_pair.0 + 1, self.stable_pair.1 + 1);
        for (k, (ti, tj)) in self.types.iter().enumerate() {
            let _ = writeln!(s, "COLUMN {} {ti} {tj}", k + 1);
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| Error::parse(0, 0, format!("unexpected end of input, expected {what}")))
        };
        let (ln, line) = next("header")?;
        let head = tokens(line);
        if head.len() != 3 || head[0].1 != "CERTIFICATE" {
            return Err(Error::parse(ln, 1, "expected 'CERTIFICATE 5 n'"));
        }
        let num = |(col, tok): (usize, &str), ln: usize| {
            tok.parse::<usize>()
                .map_err(|_| Error::parse(ln, col, format!("expected a nonnegative integer, got '{tok}'")))
        };
        if num(head[1], ln)? != D {
            return Err(Error::parse(ln, head[1].0, "only 5-row certificates exist"));
        }
        let n = num(head[2], ln)?;
        let mut hyperplanes = Vec::new();
        for c in 0..D {
            let (ln, line) = next("hyperplane")?;
            let t = tokens(line);
            let tag = format!("H{}", c + 1);
            if t.len() != D + 1 || t[0].1 != tag {
                return Err(Error::parse(ln, 1, format!("expected '{tag}' and 5 coefficients")));
            }
            let coeffs = t[1..]
                .iter()
                .map(|&(col, tok)| parse_rat(tok).ok_or_else(|| Error::parse(ln, col, format!("bad rational '{tok}'"))))
                .collect::<Result<Vec<_>>>()?;
            hyperplanes.push(Hyperplane::new(coeffs)?);
        }
        let (ln, line) = next("stable pair")?;
        let t = tokens(line);
        if t.len() != 3 || t[0].1 != "STABLE_PAIR" {
            return Err(Error::parse(ln, 1, "expected 'STABLE_PAIR i j'"));
        }
        let (i, j) = (num(t[1], ln)?, num(t[2], ln)?);
        if !(1 <= i && i < j && j <= D) {
            return Err(Error::parse(ln, t[1].0, "stable pair must satisfy 1 <= i < j <= 5"));
        }
        let mut types = Vec::with_capacity(n);
        for k in 0..n {
            let (ln, line) = next("column types")?;
            let t = tokens(line);
            if t.len() != 4 || t[0].1 != "COLUMN" || num(t[1], ln)? != k + 1 {
                return Err(Error::parse(ln, 1, format!("expected 'COLUMN {} {{..}} {{..}}'", k + 1)));
            }
            let ty = |(col, tok): (usize, &str)| {
                TypeSet::parse(tok)
                    .filter(|s| s.indices().iter().all(|&x| x < D))
                    .ok_or_else(|| Error::parse(ln, col, format!("bad type set '{tok}'")))
            };
            types.push((ty(t[2])?, ty(t[3])?));
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::parse(ln, 1, "trailing content after the certificate"));
        }
        Ok(Certificate {
            hyperplanes,
            stable_pair: (i - 1, j - 1),
            types,
        })
    }
}
