use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::num::{parse_rat, Rat};

/// Finite sum of `c_e u^e` over integer `e`, where `u = t^(1/m)` for the scale
/// `m` of the surrounding object. No zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rat>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rat::one(), 0)
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Rat, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Rat)>) -> Self {
        let mut p = LaurentPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: i64, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of terms.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rat)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Least exponent.
    pub fn val(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Coefficient of the least exponent.
    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.terms.values().next()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, x)| (e + k, x.clone())).collect(),
        }
    }

    /// Replaces `u` by `u^k`, for moving to a finer scale.
    pub fn stretch(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, x)| (e * k, x.clone())).collect(),
        }
    }

    pub fn eval(&self, u: &Rat) -> Rat {
        self.terms
            .iter()
            .map(|(e, c)| c * pow(u, *e))
            .fold(Rat::zero(), |a, b| a + b)
    }

    /// `self / other` when the division is exact, else `None`.
    pub fn div_exact(&self, other: &LaurentPoly) -> Option<LaurentPoly> {
        let (Some(lo), Some(hi)) = (other.val(), other.max_exp()) else {
            return None;
        };
        let lead = other.terms[&hi].clone();
        let mut rem = self.clone();
        let mut q = LaurentPoly::zero();
        while let Some(top) = rem.max_exp() {
            if top - hi < rem.val().expect("nonzero") - lo {
                return None;
            }
            let c = &rem.terms[&top] / &lead;
            let k = top - hi;
            for (f, d) in &other.terms {
                rem.add_term(f + k, -(&c * d));
            }
            q.add_term(k, c);
        }
        Some(q)
    }

    /// Text like `3*t^2 + -1/2*t^(1/3)` with exponents divided by `m`.
    pub fn to_text(&self, m: i64) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let ex = Rat::new(BigInt::from(*e), BigInt::from(m));
                if ex.is_zero() {
                    c.to_string()
                } else if ex.is_integer() {
                    format!("{c}*t^{ex}")
                } else {
                    format!("{c}*t^({ex})")
                }
            })
            .collect();
        parts.join(" + ")
    }

    /// Inverse of [`LaurentPoly::to_text`]; exponents must be multiples of `1/m`.
    pub fn parse(s: &str, m: i64) -> Result<Self> {
        let mut p = LaurentPoly::zero();
        let bad = |msg: String| Error::arg(format!("bad Laurent polynomial '{s}': {msg}"));
        for tok in s.split_whitespace().filter(|t| *t != "+") {
            let (c, e) = match tok.split_once("*t^") {
                Some((c, e)) => (c, e.trim_start_matches('(').trim_end_matches(')')),
                None => (tok, "0"),
            };
            let c = parse_rat(c).ok_or_else(|| bad(format!("coefficient '{c}'")))?;
            let e = parse_rat(e).ok_or_else(|| bad(format!("exponent '{e}'")))? * Rat::from_integer(m.into());
            if !e.is_integer() {
                return Err(bad(format!("exponent not a multiple of 1/{m}")));
            }
            let e: i64 = e.to_integer().try_into().map_err(|_| bad("exponent too large".into()))?;
            p.add_term(e, c);
        }
        Ok(p)
    }
}

fn pow(u: &Rat, e: i64) -> Rat {
    let mut r = Rat::one();
    let base = if e < 0 { u.recip() } else { u.clone() };
    for _ in 0..e.unsigned_abs() {
        r *= &base;
    }
    r
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c.clone());
        }
        r
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, -c.clone());
        }
        r
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = LaurentPoly::zero();
        for (e, c) in &self.terms {
            for (f, d) in &o.terms {
                r.add_term(e + f, c * d);
            }
        }
        r
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-Rat::one())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text(1))
    }
}

/// Element `num / den` of the rational function field.
#[derive(Debug, Clone)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFunc {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::arg("zero denominator"));
        }
        Ok(RatFunc { num, den }.normalized())
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RatFunc {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Makes the denominator's lowest term `1 * u^0`; the value is unchanged.
    fn normalized(self) -> Self {
        let e = self.den.val().expect("nonzero denominator");
        let c = self.den.leading_coeff().expect("nonzero").recip();
        RatFunc {
            num: self.num.shift(-e).scale(&c),
            den: self.den.shift(-e).scale(&c),
        }
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc {
                num: &self.num + &o.num,
                den: self.den.clone(),
            };
        }
        RatFunc {
            num: &(&self.num * &o.den) + &(&o.num * &self.den),
            den: &self.den * &o.den,
        }
        .normalized()
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc {
            num: &self.num * &o.num,
            den: &self.den * &o.den,
        }
        .normalized()
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        if o.is_zero() {
            return Err(Error::arg("division by zero in K"));
        }
        Ok(RatFunc {
            num: &self.num * &o.den,
            den: &self.den * &o.num,
        }
        .normalized())
    }

    /// Value at `t = u^m`, or `None` at a pole.
    pub fn eval(&self, u: &Rat) -> Option<Rat> {
        let d = self.den.eval(u);
        (!d.is_zero()).then(|| self.num.eval(u) / d)
    }

    pub fn stretch(&self, k: i64) -> RatFunc {
        RatFunc {
            num: self.num.stretch(k),
            den: self.den.stretch(k),
        }
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, o: &Self) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

impl Eq for RatFunc {}

/// Valuation in units of `u`: the exponent of the lowest order term.
pub fn val(f: &RatFunc) -> Result<i64> {
    match (f.num.val(), f.den.val()) {
        (Some(a), Some(b)) => Ok(a - b),
        _ => Err(Error::arg("the valuation of zero is undefined")),
    }
}

/// Sign of the leading coefficient, used by tests of initial forms.
pub fn leading_sign(f: &RatFunc) -> i32 {
    match (f.num.leading_coeff(), f.den.leading_coeff()) {
        (Some(a), Some(b)) if a.is_positive() == b.is_positive() => 1,
        (Some(_), Some(_)) => -1,
        _ => 0,
    }
}
