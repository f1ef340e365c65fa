//! Closed forms of the refined bound for `m = 3` and `m = 4`, written
//! directly in terms of `j`, `e` and the auxiliary constants. They share no
//! code with the generic pipeline, which makes them a cross-check for it.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{build, check_distance, levenshtein_report, BoundReport, BoundValue, Feasibility, Method, Options, SnapPlan};
use crate::error::{Error, Result};
use crate::krawtchouk::{KrawtchoukTable, Space};
use crate::levenshtein::{j_of_d, RangeParams};
use crate::numkit::{int, BigInt, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedForm3 {
    pub d: i64,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub j: Rational,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub r: BigInt,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub e: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub d0: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub a: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub big_a: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub big_b: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub big_c: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub big_d: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub big_e: Rational,
    /// `f_0, f_1, f_2, f_3`.
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub coeffs: Vec<Rational>,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub value: Rational,
}

fn integral_j(space: &Space, d: i64) -> Result<BigInt> {
    let j = j_of_d(space, d);
    if !j.is_integer() {
        return Err(Error::Internal(format!("j = {j} is not integral for a grid distance")));
    }
    Ok(j.to_integer())
}

/// Three-point plan `{⌊d_0⌋+1, ⌊d_0⌋, d}` with `d_0 = n − j(n−1)/(q(j+q−1))`,
/// for any `j ≥ 0`, not only `j ∈ J_3`. `None` when `j < 0` or the snapped
/// distances do not lie above `d`. Feasibility is left to `build`.
pub fn three_point_plan(space: &Space, d: i64) -> Result<Option<SnapPlan>> {
    check_distance(space, d)?;
    let (n, q) = (space.n() as i64, space.q() as i64);
    let jj = integral_j(space, d)?;
    if jj.is_negative() {
        return Ok(None);
    }
    let big_m = BigInt::from(q) * (&jj + q - 1);
    let top: BigInt = BigInt::from(n) * &big_m - &jj * (n - 1);
    let lower = top.div_floor(&big_m);
    let Some(lower) = num_traits::ToPrimitive::to_i64(&lower) else {
        return Ok(None);
    };
    if lower <= d {
        return Ok(None);
    }
    let distances = vec![lower + 1, lower, d];
    let gammas = distances.iter().map(|&x| space.t_of_d(x)).collect();
    Ok(Some(SnapPlan { gammas, distances, eps: 0, ties: Vec::new() }))
}

/// The refined bound for `m = 3` from the closed formula.
pub fn closed3(space: &Space, d: i64) -> Result<ClosedForm3> {
    check_distance(space, d)?;
    let (n, q) = (space.n() as i64, space.q() as i64);
    if n < q {
        return Err(Error::InvalidParameter(format!("closed form for m = 3 needs n >= q, got n = {n}, q = {q}")));
    }
    let jj = integral_j(space, d)?;
    let j = Rational::from_integer(jj.clone());
    if !RangeParams::new(space).in_j3(&j) {
        return Err(Error::OutsideRange { j: j.to_string(), range: "J_3" });
    }
    let big_m = BigInt::from(q) * (&jj + q - 1);
    let mut r = (&jj * (n - 1)).mod_floor(&big_m);
    if r.is_zero() {
        r = big_m.clone();
    }
    let e = Rational::new(r.clone(), big_m.clone());
    let d0 = int(n) - Rational::new(&jj * (n - 1), big_m);
    let (qr, nr) = (int(q), int(n));
    let eq = &e * &qr;
    let jq1 = &j + int(q - 1);
    let a = int((n - 1) * (q - 1)) * (&j + &qr) / &jq1 + &eq;
    let big_a = -(&j * &j) + (&eq * int(2) - int(1)) * &j + int(q - 1) * (int(2 * n + q - 4) + &eq * int(2));
    let big_b = (&j * (&j - int(2)) - int(n * (q - 1)) + rat_half(q) * (&j * int(3) + int(q - 1))) / &jq1;
    let big_c = -(&j * &j) + int(2 - q) * &j + int((3 * n - 2) * (q - 1)) - Rational::new((q * q).into(), 4.into());
    let big_d = &jq1 * int(2 * n * (q - 1) - q) + &qr;
    let big_e = -int(n * (n - 1) * (q - 1) * (q - 1)) * (&j + &qr);
    let denom = &a * &a * (int(2 - q) - &j) + &big_d * &a + &big_e;
    let value = &a * (&a + &qr) * int(d * q) / &denom;
    let q3 = int(q * q * q);
    let f3 = int(8 * (q - 1).pow(3) * (n - 2) * (n - 1)) / (&q3 * &nr * &nr);
    let f2 = int(8 * (q - 1).pow(2) * (n - 1)) * &big_a / (&q3 * &nr * &nr * &jq1);
    let f1 = int(8 * (q - 1)) * ((&eq - &big_b) * (&eq - &big_b) + &big_c) / (&q3 * &nr * &nr);
    let f0 = int(8) * &denom / (&q3 * &nr * &nr * &nr);
    Ok(ClosedForm3 {
        d,
        j,
        r,
        e,
        d0,
        a,
        big_a,
        big_b,
        big_c,
        big_d,
        big_e,
        coeffs: vec![f0, f1, f2, f3],
        value,
    })
}

fn rat_half(q: i64) -> Rational {
    Rational::new(q.into(), 2.into())
}

impl ClosedForm3 {
    pub fn report(&self, space: &Space) -> Result<BoundReport> {
        let mut report = levenshtein_report(space, self.d)?;
        report.method = Method::Closed3;
        report.value = BoundValue::Exact(self.value.clone());
        Ok(report)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedForm4 {
    pub d: i64,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub j: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub d0: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub e: Rational,
    pub b: i64,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub c1: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub c2: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub value: Rational,
    /// Verdict for the polynomial `(t+1)(t − t_b)(t − t_{b−1})(t − s)`; the
    /// formula is a bound only when it is feasible.
    pub feasibility: Feasibility,
}

/// The refined bound for `m = 4` from the closed formula, with the
/// feasibility of the underlying polynomial.
pub fn closed4(space: &Space, d: i64) -> Result<ClosedForm4> {
    check_distance(space, d)?;
    let (n, q) = (space.n() as i64, space.q() as i64);
    let jj = integral_j(space, d)?;
    let j = Rational::from_integer(jj);
    if !RangeParams::new(space).in_j4(&j) {
        return Err(Error::OutsideRange { j: j.to_string(), range: "J_4" });
    }
    let d0 = int(n - 1) - (&j - int(q - 1)) * int(n - 2) / (int(q) * &j);
    let b_int = d0.floor().to_integer() + BigInt::one();
    let b_rat = Rational::from_integer(b_int.clone());
    let e = &b_rat - &d0;
    let b: i64 = b_int.try_into().map_err(|_| Error::Internal("b overflows".into()))?;
    let c1 = &j * int((q - 1) * (2 * n - 1)) + &j - int(q);
    let c2 = int((q - 1) * (n - 1)) * ((&j + int(1)) * int((q - 1) * n) + (&j - int(q - 1)) * int(2));
    let num = int(q * q * q * b * (b - 1)) * (int(n * (q - 1) - q + 2) - &j);
    let den = (int(1) - &j) * int(q * q * b * b) + &c1 * int(q * b) - &c2;
    if den.is_zero() {
        return Err(Error::Internal("vanishing denominator".into()));
    }
    let value = num / den;

    let t = |dist: i64| space.t_of_d(dist);
    let plan = SnapPlan {
        gammas: vec![t(b), t(b - 1), t(d)],
        distances: vec![b, b - 1, d],
        eps: 1,
        ties: Vec::new(),
    };
    let table = KrawtchoukTable::new(*space);
    let built = build(&plan, space, d, &table, &Options::default())?;
    Ok(ClosedForm4 { d, j, d0, e, b, c1, c2, value, feasibility: built.feasibility })
}

impl ClosedForm4 {
    pub fn is_feasible(&self) -> bool {
        self.feasibility == Feasibility::Feasible && self.value.is_positive()
    }

    pub fn report(&self, space: &Space) -> Result<BoundReport> {
        let mut report = levenshtein_report(space, self.d)?;
        report.method = Method::Closed4;
        if self.is_feasible() {
            report.value = BoundValue::Exact(self.value.clone());
        } else {
            report.fell_back = true;
            report.diagnostics.push(format!(
                "closed form for m = 4 gives {} but its polynomial is infeasible; reporting the Levenshtein bound",
                self.value
            ));
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::rat;

    #[test]
    fn worked_example() {
        let space = Space::new(11, 4).unwrap();
        let c = closed3(&space, 7).unwrap();
        assert_eq!(c.j, int(3));
        assert_eq!(c.e, rat(1, 4));
        assert_eq!(c.d0, rat(39, 4));
        assert_eq!(c.a, int(36));
        assert_eq!(c.big_d, int(376));
        assert_eq!(c.big_e, int(-6930));
        assert_eq!(c.value, int(320));
        assert_eq!(c.coeffs, vec![rat(63, 5324), rat(117, 484), rat(45, 44), rat(1215, 484)]);
    }

    #[test]
    fn small_table_values() {
        assert_eq!(closed3(&Space::new(12, 2).unwrap(), 5).unwrap().value, int(60));
        assert_eq!(closed3(&Space::new(20, 3).unwrap(), 12).unwrap().value, int(306));
    }

    #[test]
    fn outside_ranges() {
        let space = Space::new(11, 4).unwrap();
        assert!(matches!(closed3(&space, 3), Err(Error::OutsideRange { .. })));
        assert!(matches!(closed4(&space, 7), Err(Error::OutsideRange { .. })));
    }

    #[test]
    fn b_is_the_next_integer() {
        for (n, q) in [(16, 2), (20, 3), (30, 4)] {
            let space = Space::new(n, q).unwrap();
            for d in 1..=n as i64 {
                if let Ok(c) = closed4(&space, d) {
                    assert!(c.e.is_positive() && c.e <= int(1));
                    assert_eq!(&c.d0 + &c.e, int(c.b));
                }
            }
        }
    }
}
