//! Optimality certificates for refined bounds. The polynomial's roots fix
//! the multipliers `μ_i`; the bound is the best the linear program can give
//! when every `μ_i` and every `λ_l = 1 + Σ μ_i K_l(i)/r_l` is non-negative.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::krawtchouk::{kraw_column, KrawtchoukTable, Space};
use crate::levenshtein::{j_of_d, RangeParams};
use crate::numkit::{int, BigInt, Rational};
use crate::refine::{closed3, refined_bound_with, BoundReport, BoundValue, Feasibility, Options};

/// Solves `M x = b` exactly by Gaussian elimination with row swaps.
pub fn solve_linear(mut m: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Result<Vec<Rational>> {
    let size = b.len();
    for col in 0..size {
        let pivot = (col..size)
            .find(|&r| !m[r][col].is_zero())
            .ok_or_else(|| Error::SingularSystem(format!("no pivot in column {col}")))?;
        m.swap(col, pivot);
        b.swap(col, pivot);
        let inv = m[col][col].recip();
        for r in 0..size {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            #[allow(clippy::needless_range_loop)] // rows r and col are both read
            for c in col..size {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    Ok((0..size).map(|i| &b[i] / &m[i][i]).collect())
}

/// The multipliers for the roots of an `m = 3` polynomial, in closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightParams {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub a: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub b: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub c: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub d: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub e: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Weights3 {
    pub params: WeightParams,
    /// `(distance, μ)` for `d`, `d_0+e−1`, `d_0+e`.
    #[serde(serialize_with = "ser_weights")]
    pub weights: [(i64, Rational); 3],
}

fn ser_weights<S: serde::Serializer>(w: &[(i64, Rational); 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(3))?;
    for (dist, mu) in w {
        map.serialize_entry(&dist.to_string(), &mu.to_string())?;
    }
    map.end()
}

pub fn weights3_closed(space: &Space, d: i64) -> Result<Weights3> {
    let cf = closed3(space, d)?;
    let (n, q) = (space.n() as i64, space.q() as i64);
    let (j, e) = (&cf.j, &cf.e);
    let jq1 = j + int(q - 1);
    let eqj = e * int(q) * &jq1;
    let nq1 = int(n * (q - 1));
    let a = -(j + int(q - 2)) * &eqj * &eqj
        + int((n - 1) * (q - 1)) * (j + int(q)) * (&nq1 - j * (j + int(q - 2)))
        + &eqj * ((int(q * q - q) + j * int(q) - j * int(2)) * (j + int(q - 2)) + int(2 * n * (q - 1)));
    let b = (j + int(n - 2)) * int(q - 1) + j * (j - int(1)) + &eqj;
    let c = int((n - 1) * (q - 1)) * (j + int(q)) + &eqj;
    let half = (e * int(2) - int(1)) * &jq1 * Rational::new(q.into(), 2.into()) + int((n - 1) * (q - 1));
    let dd = &half * &half + &jq1 * &jq1 * (int((n - 1) * (q - 1)) - Rational::new((q * q).into(), 4.into()));
    let ee = &jq1 * &jq1 * &jq1 * (int((n - 1) * (q - 2) + n) - j);
    if b.is_zero() {
        return Err(Error::SingularSystem("B vanishes (n = q = 2, j = e = 0)".into()));
    }
    let qj = int(q) * &jq1;
    let mu_d = &nq1 * &c * &dd * (&c + &qj) / (&a * &b * (&b + &qj));
    let mu_lo = e * &nq1 * &ee * (&c + &qj) / (&a * &b);
    let mu_hi = (int(1) - e) * &nq1 * &c * &ee / (&a * (&b + &qj));
    let d_hi: i64 = (&cf.d0 + e).to_integer().try_into().map_err(|_| Error::Internal("distance overflow".into()))?;
    Ok(Weights3 {
        params: WeightParams { a, b, c, d: dd, e: ee },
        weights: [(d, mu_d), (d_hi - 1, mu_lo), (d_hi, mu_hi)],
    })
}

/// The unique `μ` with `Σ_i μ_i K_l(i)/r_l = −1` for `l = 1..=m`, where `m`
/// is the number of roots. `K_l` is taken as a polynomial, so a root just
/// past `n` (a snapped node below `−1`) is accepted.
pub fn weights_solve(space: &Space, roots: &[i64]) -> Result<BTreeMap<i64, Rational>> {
    let m = roots.len();
    let n = space.n() as i64;
    if roots.iter().any(|&i| i < 0) {
        return Err(Error::InvalidParameter(format!("roots {roots:?} must be non-negative")));
    }
    let cols: Vec<Vec<BigInt>> = roots.iter().map(|&i| kraw_column(n, space.q(), i, m)).collect();
    let matrix = (1..=m)
        .map(|l| {
            let r = Rational::from_integer(space.r(l as u32));
            cols.iter().map(|col| Rational::from_integer(col[l].clone()) / &r).collect()
        })
        .collect();
    let mu = solve_linear(matrix, vec![int(-1); m])?;
    Ok(roots.iter().copied().zip(mu).collect())
}

/// `λ_l = 1 + Σ_i μ_i K_l(i)/r_l` for `l = 1..=n`.
pub fn lambdas(space: &Space, mu: &BTreeMap<i64, Rational>) -> Vec<Rational> {
    let n = space.n() as i64;
    let cols: Vec<(Vec<BigInt>, &Rational)> =
        mu.iter().map(|(&i, m)| (kraw_column(n, space.q(), i, n as usize), m)).collect();
    let weights = space.weights();
    (1..=n as usize)
        .map(|l| {
            let r = Rational::from_integer(weights[l].clone());
            let mut acc = Rational::zero();
            for (col, m) in &cols {
                acc += *m * Rational::from_integer(col[l].clone());
            }
            Rational::one() + acc / r
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    LpOptimal,
    NotOptimal { negative_mu: Vec<i64>, negative_lambda: Vec<usize> },
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub q: u32,
    pub n: u32,
    pub d: i64,
    pub m: usize,
    /// Non-zero multipliers by distance.
    #[serde(serialize_with = "ser_mu")]
    pub mu: BTreeMap<i64, Rational>,
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub lambda: Vec<Rational>,
    pub verdict: Verdict,
    pub bound: Option<BoundValue>,
}

fn ser_mu<S: serde::Serializer>(mu: &BTreeMap<i64, Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(mu.len()))?;
    for (dist, m) in mu {
        map.serialize_entry(&dist.to_string(), &m.to_string())?;
    }
    map.end()
}

impl Certificate {
    pub fn is_optimal(&self) -> bool {
        self.verdict == Verdict::LpOptimal
    }

    fn inconclusive(report: &BoundReport, m: usize, reason: impl Into<String>) -> Self {
        Self {
            q: report.q,
            n: report.n,
            d: report.d,
            m,
            mu: BTreeMap::new(),
            lambda: Vec::new(),
            verdict: Verdict::Inconclusive { reason: reason.into() },
            bound: Some(report.value.clone()),
        }
    }
}

/// Certifies the refined bound at distance `d`.
pub fn certify(space: &Space, d: i64) -> Result<Certificate> {
    let table = KrawtchoukTable::new(*space);
    let report = refined_bound_with(space, d, &table, &Options::default())?;
    certify_report(space, &report)
}

/// Certifies an already computed refined report.
pub fn certify_report(space: &Space, report: &BoundReport) -> Result<Certificate> {
    let n = space.n() as i64;
    let Some(poly) = report.polynomial.as_ref().filter(|_| !report.fell_back) else {
        return Ok(Certificate::inconclusive(report, 0, "no feasible refined polynomial"));
    };
    let m = poly.plan.degree();
    if poly.feasibility != Feasibility::Feasible {
        return Ok(Certificate::inconclusive(report, m, "feasibility not certified"));
    }
    let Some(expansion) = poly.expansion.as_ref() else {
        return Ok(Certificate::inconclusive(report, m, "no exact expansion"));
    };
    if poly.reduced || expansion.degree() != m {
        return Ok(Certificate::inconclusive(report, m, "polynomial degree exceeds the code length"));
    }
    if (1..=m).any(|i| !expansion.coeff(i).is_positive()) {
        return Ok(Certificate::inconclusive(report, m, "some f_i with 1 <= i <= m vanishes"));
    }
    let mut roots: Vec<i64> = poly.plan.distances.clone();
    if poly.plan.eps == 1 {
        roots.push(n);
    }
    roots.sort_unstable();
    if roots.windows(2).any(|w| w[0] == w[1]) {
        return Ok(Certificate::inconclusive(report, m, "repeated root"));
    }
    if roots.iter().any(|&i| i < report.d) {
        return Ok(Certificate::inconclusive(report, m, format!("roots {roots:?} lie below d")));
    }
    let mut mu = weights_solve(space, &roots)?;
    // a snapped node past −1 is harmless when its multiplier vanishes
    let outside: Vec<i64> = mu.range(n + 1..).map(|(&i, _)| i).collect();
    for i in outside {
        if !mu[&i].is_zero() {
            return Ok(Certificate::inconclusive(report, m, format!("root at {i} past n carries a nonzero multiplier")));
        }
        mu.remove(&i);
    }
    let lambda = lambdas(space, &mu);
    if let Some(l) = (0..m).find(|&l| !lambda[l].is_zero()) {
        return Err(Error::Internal(format!("lambda_{} = {} should vanish", l + 1, lambda[l])));
    }
    let negative_mu: Vec<i64> = mu.iter().filter(|(_, v)| v.is_negative()).map(|(&i, _)| i).collect();
    let negative_lambda: Vec<usize> = (0..lambda.len()).filter(|&l| lambda[l].is_negative()).map(|l| l + 1).collect();
    let verdict = if negative_mu.is_empty() && negative_lambda.is_empty() {
        Verdict::LpOptimal
    } else {
        Verdict::NotOptimal { negative_mu, negative_lambda }
    };
    Ok(Certificate { q: report.q, n: report.n, d: report.d, m, mu, lambda, verdict, bound: Some(report.value.clone()) })
}

/// Distances whose `j` lies in the `m = 3` range.
pub fn j3_distances(space: &Space) -> Vec<i64> {
    let params = RangeParams::new(space);
    (1..=space.n() as i64).filter(|&d| params.in_j3(&j_of_d(space, d))).collect()
}
