//! Large-`n` behaviour of the refined bounds, as sums of terms
//! `coef · n^exponent` with exact coefficients.

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::krawtchouk::Space;
use crate::levenshtein::Surd;
use crate::numkit::{int, rat, to_f64, BigInt, Rational};

/// `coef · n^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub coef: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub exponent: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime3 {
    /// `α ∈ [0, 1/5)`: every term of the main part survives.
    Small,
    /// `α ∈ [1/5, 1/2)`: terms of order below `n` dropped.
    Middle,
    /// `α = 1/2`: two leading terms.
    Sqrt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AsymptoticEstimate {
    pub regime: Option<Regime3>,
    /// Sorted by decreasing exponent, equal exponents merged, zero
    /// coefficients dropped.
    pub terms: Vec<Term>,
}

impl AsymptoticEstimate {
    fn from_terms(regime: Option<Regime3>, raw: Vec<Term>) -> Self {
        let mut merged: BTreeMap<Rational, Rational> = BTreeMap::new();
        for t in raw {
            *merged.entry(t.exponent).or_insert_with(Rational::zero) += t.coef;
        }
        let terms = merged
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exponent, coef)| Term { coef, exponent })
            .collect();
        Self { regime, terms }
    }

    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn second(&self) -> Option<&Term> {
        self.terms.get(1)
    }

    pub fn eval(&self, n: f64) -> f64 {
        self.terms.iter().map(|t| to_f64(&t.coef) * n.powf(to_f64(&t.exponent))).sum()
    }

    /// Exact value when every exponent is a non-negative integer.
    pub fn eval_exact(&self, n: i64) -> Option<Rational> {
        let mut acc = Rational::zero();
        for t in &self.terms {
            if !t.exponent.is_integer() || t.exponent.is_negative() {
                return None;
            }
            let e = t.exponent.to_integer().to_u32()?;
            acc += &t.coef * Rational::from_integer(BigInt::from(n).pow(e));
        }
        Some(acc)
    }
}

/// Main terms of the refined `m = 3` bound for `j = c·n^α`.
pub fn asympt3(q: u32, alpha: &Rational, c: &Rational) -> Result<AsymptoticEstimate> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("q = {q} must be at least 2")));
    }
    if alpha.is_negative() || alpha > &rat(1, 2) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} must lie in [0, 1/2]")));
    }
    if !c.is_positive() {
        return Err(Error::InvalidParameter(format!("c = {c} must be positive")));
    }
    let qr = int(q as i64);
    let q1 = int(q as i64 - 1);
    let term = |coef: Rational, exponent: Rational| Term { coef, exponent };
    let c2 = c * c;
    let c3 = &c2 * c;
    if alpha < &rat(1, 5) {
        // [(q−1)n − (j+q−2)](j+q) + j(j+q−1)² expanded in j = c n^α
        let raw = vec![
            term(c3.clone(), alpha * int(3)),
            term(&c2 * (&qr * int(2) - int(3)), alpha * int(2)),
            term(c * &q1 * (&qr - int(3)), alpha.clone()),
            term(c * &q1, alpha + int(1)),
            term(&qr * &q1, int(1)),
            term(-(&qr * (&qr - int(2))), int(0)),
        ];
        return Ok(AsymptoticEstimate::from_terms(Some(Regime3::Small), raw));
    }
    if alpha < &rat(1, 2) {
        let c5 = &c3 * &c2;
        let raw = vec![
            term(&q1 * &qr, int(1)),
            term(&q1 * c, alpha + int(1)),
            term(c3, alpha * int(3)),
            term(c5 / &q1, alpha * int(5) - int(1)),
        ];
        return Ok(AsymptoticEstimate::from_terms(Some(Regime3::Middle), raw));
    }
    let gap = &q1 - &c2;
    if !gap.is_positive() {
        return Err(Error::InvalidParameter(format!("c^2 = {c2} must be below q - 1 = {q1} when alpha = 1/2")));
    }
    let lead = c * &q1 * &q1 / &gap;
    let c4 = &c2 * &c2;
    let second = &q1 * (c4 - &q1 * (&c2 * int(3) - &qr * &qr + &qr)) / (&gap * &gap);
    let raw = vec![term(lead, rat(3, 2)), term(second, int(1))];
    Ok(AsymptoticEstimate::from_terms(Some(Regime3::Sqrt), raw))
}

fn surd(x: BigInt) -> Surd {
    Surd::new(x)
}

/// Whether `c` lies in `[0, (q−1)(1 − 2/(S_1+S_2)))` at this `n`, decided
/// exactly.
pub fn j4_offset_admissible(space: &Space, c: &Rational) -> bool {
    let (n, q) = (space.n() as i64, space.q() as i64);
    if c.is_negative() || n < 3 {
        return false;
    }
    let gap = int(q - 1) - c;
    if !gap.is_positive() {
        return false;
    }
    // S_1 + S_2 > X with X = 2(q−1)/(q−1−c)
    let x = int(2 * (q - 1)) / gap;
    let r1 = int(q * q + 4 * (q - 1) * (n - 2));
    let r2 = int(q * q + 4 * (q - 1) * (n - 3));
    // 2·sqrt(R_1 R_2) > X² − R_1 − R_2 =: Y
    let y = &x * &x - &r1 - &r2;
    if y.is_negative() {
        return true;
    }
    r1 * r2 * int(4) > &y * &y
}

/// Upper end of the admissible `c` interval as a float.
pub fn j4_offset_max(space: &Space) -> f64 {
    let (n, q) = (space.n() as i64, space.q() as i64);
    let s1 = surd(BigInt::from(q * q + 4 * (q - 1) * (n - 2))).to_f64();
    let s2 = surd(BigInt::from(q * q + 4 * (q - 1) * (n - 3))).to_f64();
    (q - 1) as f64 * (1.0 - 2.0 / (s1 + s2))
}

/// Grid distance for `j = (S_1 − q)/2 + c`, i.e. `d = n − 1 − (n−2+j)/q`
/// rounded to the nearest integer.
pub fn j4_offset_distance(space: &Space, c: &Rational) -> Result<i64> {
    if !j4_offset_admissible(space, c) {
        return Err(Error::InvalidParameter(format!(
            "c = {c} is outside [0, {:.6}) at n = {}",
            j4_offset_max(space),
            space.n()
        )));
    }
    let (n, q) = (space.n() as f64, space.q() as f64);
    let s1 = surd(BigInt::from(space.q() as i64 * space.q() as i64 + 4 * (space.q() as i64 - 1) * (space.n() as i64 - 2))).to_f64();
    let j = (s1 - q) / 2.0 + to_f64(c);
    Ok((n - 1.0 - (n - 2.0 + j) / q).round() as i64)
}

/// The `m = 4` estimate `q(q−1)²n²/(2(q−c))`, valid for admissible `c`.
pub fn asympt4(space: &Space, c: &Rational) -> Result<AsymptoticEstimate> {
    if !j4_offset_admissible(space, c) {
        return Err(Error::InvalidParameter(format!(
            "c = {c} is outside [0, {:.6}) at n = {}",
            j4_offset_max(space),
            space.n()
        )));
    }
    let q = space.q() as i64;
    let coef = int(q * (q - 1) * (q - 1)) / ((int(q) - c) * int(2));
    Ok(AsymptoticEstimate::from_terms(None, vec![Term { coef, exponent: int(2) }]))
}
