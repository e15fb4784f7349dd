use itertools::Itertools;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::laurent::{val, LaurentPoly, RatFunc};
use super::matrix::{common_scale, verify_lift, LiftMatrix};
use crate::error::{Error, Result};
use crate::hyperarrange::{stable_membership, Certificate, Hyperplane};
use crate::num::Rat;
use crate::trop::TropicalMatrix;

/// Residue coefficients are drawn from `1..=COEFF_MAX`.
pub const COEFF_MAX: u32 = 10_000;
pub const DEFAULT_RETRIES: usize = 8;

/// Generator for stream `k` of a seed; streams are independent, so per-column
/// draws do not depend on scheduling.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// `sum_i c_i u^(e_i) x_i` with `u = t^(1/scale)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    scale: i64,
    coeffs: Vec<(Rat, i64)>,
}

impl LinearForm {
    pub fn new(scale: i64, coeffs: Vec<(Rat, i64)>) -> Result<Self> {
        if scale < 1 || coeffs.is_empty() || coeffs.iter().any(|(c, _)| c.is_zero()) {
            return Err(Error::arg("a linear form needs nonzero coefficients and a positive scale"));
        }
        Ok(LinearForm { scale, coeffs })
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[(Rat, i64)] {
        &self.coeffs
    }

    fn term(&self, i: usize) -> LaurentPoly {
        LaurentPoly::monomial(self.coeffs[i].0.clone(), self.coeffs[i].1)
    }

    pub fn eval(&self, x: &[RatFunc]) -> RatFunc {
        (0..self.dim()).fold(RatFunc::zero(), |acc, i| {
            acc.add(&RatFunc::from_poly(self.term(i)).mul(&x[i]))
        })
    }

    /// The tropical hyperplane of the zero set.
    pub fn tropicalization(&self) -> Hyperplane {
        let m = Rat::from_integer(self.scale.into());
        Hyperplane::new(self.coeffs.iter().map(|(_, e)| Rat::from_integer((*e).into()) / &m).collect())
            .expect("nonempty form")
    }

    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, (c, e))| format!("({})*x{}", LaurentPoly::monomial(c.clone(), *e).to_text(self.scale), i + 1))
            .collect();
        parts.join(" + ")
    }
}

fn scaled_exponents(xs: &[Rat], scale: i64) -> Result<Vec<i64>> {
    let m = Rat::from_integer(scale.into());
    xs.iter()
        .map(|x| {
            let y = x * &m;
            if !y.is_integer() {
                return Err(Error::arg(format!("{x} is not a multiple of 1/{scale}")));
            }
            i64::try_from(y.to_integer()).map_err(|_| Error::arg("exponent too large"))
        })
        .collect()
}

/// Lifts `h` to `sum_i c_i t^(h_i) x_i` with random `c_i`.
pub fn lift_hyperplane<R: Rng>(h: &Hyperplane, scale: i64, rng: &mut R) -> Result<LinearForm> {
    let exps = scaled_exponents(h.coeffs(), scale)?;
    let coeffs = exps
        .into_iter()
        .map(|e| (Rat::from_integer(rng.gen_range(1..=COEFF_MAX).into()), e))
        .collect();
    LinearForm::new(scale, coeffs)
}

/// A point `x` of the common zero set of `l1` and `l2` with `val(x_i) = w_i`.
///
/// All but two coordinates are fixed to `c_i t^(w_i)` with random `c_i` and the
/// remaining 2x2 system is solved exactly. Each choice of the two free
/// coordinates gets `retries` draws.
pub fn lift_point_in_codim2<R: Rng>(
    w: &[Rat],
    l1: &LinearForm,
    l2: &LinearForm,
    retries: usize,
    rng: &mut R,
) -> Result<Vec<RatFunc>> {
    let d = w.len();
    if l1.dim() != d || l2.dim() != d || l1.scale != l2.scale || d < 3 {
        return Err(Error::arg("point and forms must share a dimension of at least 3 and a scale"));
    }
    let (h1, h2) = (l1.tropicalization(), l2.tropicalization());
    if !stable_membership(w, &h1, &h2)? {
        return Err(Error::Precondition(format!(
            "{} is not in the stable intersection of the two hyperplanes",
            crate::num::fmt_vec(w)
        )));
    }
    let exps = scaled_exponents(w, l1.scale)?;
    for fixed in (0..d).combinations(d - 2) {
        let free: Vec<usize> = (0..d).filter(|i| !fixed.contains(i)).collect();
        let (p, q) = (free[0], free[1]);
        let det = &(&l1.term(p) * &l2.term(q)) - &(&l1.term(q) * &l2.term(p));
        for _ in 0..retries {
            let mut x: Vec<LaurentPoly> = vec![LaurentPoly::zero(); d];
            for &i in &fixed {
                x[i] = LaurentPoly::monomial(Rat::from_integer(rng.gen_range(1..=COEFF_MAX).into()), exps[i]);
            }
            if det.is_zero() {
                continue;
            }
            let rhs = |l: &LinearForm| {
                fixed.iter().fold(LaurentPoly::zero(), |acc, &i| &acc - &(&l.term(i) * &x[i]))
            };
            let (r1, r2) = (rhs(l1), rhs(l2));
            let xp = &(&r1 * &l2.term(q)) - &(&r2 * &l1.term(q));
            let xq = &(&l1.term(p) * &r2) - &(&l2.term(p) * &r1);
            let (xp, xq) = (RatFunc::new(xp, det.clone())?, RatFunc::new(xq, det.clone())?);
            if xp.is_zero() || xq.is_zero() || val(&xp)? != exps[p] || val(&xq)? != exps[q] {
                continue;
            }
            let mut out: Vec<RatFunc> = x.into_iter().map(RatFunc::from_poly).collect();
            out[p] = xp;
            out[q] = xq;
            if !l1.eval(&out).is_zero() || !l2.eval(&out).is_zero() {
                return Err(Error::Internal("solved point is not on both lifted hyperplanes".into()));
            }
            return Ok(out);
        }
    }
    Err(Error::Genericity(format!(
        "no lift of {} found after {retries} draws per coordinate choice; try another seed",
        crate::num::fmt_vec(w)
    )))
}

/// A lift of rank at most 3 of a certified `5 x n` matrix: every column is
/// lifted into the codimension-2 space cut out by the lifted stable pair.
pub fn build_rank3_lift(a: &TropicalMatrix, cert: &Certificate, seed: u64, retries: usize) -> Result<LiftMatrix> {
    cert.verify(a)?;
    let (i, j) = cert.stable_pair;
    let (hi, hj) = (&cert.hyperplanes[i], &cert.hyperplanes[j]);
    let scale = common_scale(a.flatten().iter().chain(hi.coeffs()).chain(hj.coeffs()))?;
    let l1 = lift_hyperplane(hi, scale, &mut seeded_rng(seed, 0))?;
    let l2 = lift_hyperplane(hj, scale, &mut seeded_rng(seed, 1))?;
    let columns = a
        .columns()
        .par_iter()
        .enumerate()
        .map(|(k, w)| lift_point_in_codim2(w, &l1, &l2, retries, &mut seeded_rng(seed, 2 + k as u64)))
        .collect::<Result<Vec<_>>>()?;
    let lift = LiftMatrix::from_columns(scale, &columns)?;
    if !verify_lift(&lift, a, 3) {
        return Err(Error::Internal("assembled lift failed verification".into()));
    }
    Ok(lift)
}
