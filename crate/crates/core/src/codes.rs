//! Codes that would attain a refined bound: their distance distribution is
//! forced by the design identities, and a non-integral distribution rules
//! such a code out.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kkt::solve_linear;
use crate::krawtchouk::{kraw_column, KrawtchoukTable, Space};
use crate::numkit::{fmt_rational, int, parse_rational, to_f64, BigInt, Rational};
use crate::levenshtein::{j_of_d, RangeParams};
use crate::refine::{build, levenshtein_report, refined_bound_with, three_point_plan, BoundValue, Feasibility, Options};

/// Solves `Σ_δ A_δ K_l(δ) = −K_l(0)` for `l = 1..=m`, `m` the number of
/// distances. Returned in the order given.
pub fn distance_distribution(space: &Space, distances: &[i64]) -> Result<Vec<Rational>> {
    let m = distances.len();
    let n = space.n() as i64;
    let cols: Vec<Vec<BigInt>> = distances.iter().map(|&i| kraw_column(n, space.q(), i, m)).collect();
    let at_zero = kraw_column(n, space.q(), 0, m);
    let matrix = (1..=m)
        .map(|l| cols.iter().map(|c| Rational::from_integer(c[l].clone())).collect())
        .collect();
    let rhs = (1..=m).map(|l| -Rational::from_integer(at_zero[l].clone())).collect();
    solve_linear(matrix, rhs).map_err(|e| match e {
        Error::SingularSystem(msg) => Error::SingularSystem(format!("moment system for {distances:?}: {msg}")),
        other => other,
    })
}

pub fn integrality_test(values: &[Rational]) -> bool {
    values.iter().all(|v| v.is_integer() && !v.is_negative())
}

/// Note from the embedded reference list of best known bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BrouwerNote {
    /// The refined value repeats the best known upper bound.
    pub repeats_upper: bool,
    pub lower_bound: Option<u64>,
}

/// Embedded reference values: rows whose refined bound equals the best known
/// upper bound, and known lower bounds.
const BEST_KNOWN_REPEATS: &[(u32, u32, i64)] = &[(3, 4, 2), (4, 5, 3), (4, 11, 7), (5, 4, 2), (5, 5, 3), (5, 6, 4), (5, 11, 8)];
const LOWER_BOUNDS: &[(u32, u32, i64, u64)] = &[(4, 11, 7, 128)];

pub fn brouwer_cross_note(q: u32, n: u32, d: i64) -> Option<BrouwerNote> {
    let repeats_upper = BEST_KNOWN_REPEATS.contains(&(q, n, d));
    let lower_bound = LOWER_BOUNDS.iter().find(|r| (r.0, r.1, r.2) == (q, n, d)).map(|r| r.3);
    (repeats_upper || lower_bound.is_some()).then_some(BrouwerNote { repeats_upper, lower_bound })
}

/// A three-point bound that is an integer below Levenshtein, with the
/// distribution a code of that size would have.
#[derive(Clone, Debug, Serialize)]
pub struct Table2Row {
    pub q: u32,
    pub n: u32,
    pub d: i64,
    /// Degree of the Levenshtein frame at `s`; 3 inside `J_3`, larger just
    /// past it for short lengths.
    pub levenshtein_degree: usize,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub levenshtein: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub refined: Rational,
    /// Ascending.
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub inner_products: Vec<Rational>,
    /// Matching `inner_products`.
    pub distances: Vec<i64>,
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub distribution: Vec<Rational>,
    pub nonnegative: bool,
    pub integrality_pass: bool,
    /// `Σ A_δ = M − 1`.
    pub sum_check: bool,
    pub brouwer: Option<BrouwerNote>,
}

/// The candidate at `(q, n, d)`: the three-point polynomial from the
/// closed-form root (any `j ≥ 0`) is feasible, its value is an integer, and
/// that value is strictly below the Levenshtein bound and, outside `J_3`,
/// strictly below the refined bound. Inside `J_3` the polynomial is the
/// refined one; exact hits (`e = 1`) reproduce the Levenshtein value and so
/// never qualify.
pub fn candidate(space: &Space, d: i64, table: &KrawtchoukTable) -> Result<Option<Table2Row>> {
    let Some(plan) = three_point_plan(space, d)? else {
        return Ok(None);
    };
    let built = build(&plan, space, d, table, &Options::default())?;
    if built.feasibility != Feasibility::Feasible {
        return Ok(None);
    }
    let Some(value) = built.value.as_ref().and_then(BoundValue::exact).cloned() else {
        return Ok(None);
    };
    if !value.is_integer() {
        return Ok(None);
    }
    let lev = levenshtein_report(space, d)?;
    let Some(levenshtein) = lev.value.exact().cloned() else {
        return Ok(None);
    };
    if value >= levenshtein {
        return Ok(None);
    }
    let levenshtein_degree = lev.frame.as_ref().map_or(0, |f| f.m);
    // Past J_3 the refinement proper has higher degree; the three-point
    // polynomial only names new parameters where it does strictly better.
    if !RangeParams::new(space).in_j3(&j_of_d(space, d)) {
        let refined = refined_bound_with(space, d, table, &Options::default())?;
        if refined.value.exact().is_none_or(|r| value >= *r) {
            return Ok(None);
        }
    }
    let mut pairs: Vec<(Rational, i64)> = plan.gammas.iter().cloned().zip(plan.distances.iter().copied()).collect();
    pairs.sort();
    let inner_products: Vec<Rational> = pairs.iter().map(|p| p.0.clone()).collect();
    let distances: Vec<i64> = pairs.iter().map(|p| p.1).collect();
    let distribution = distance_distribution(space, &distances)?;
    let total: Rational = distribution.iter().sum();
    Ok(Some(Table2Row {
        q: space.q(),
        n: space.n(),
        d,
        levenshtein_degree,
        levenshtein,
        sum_check: total == &value - int(1),
        refined: value,
        nonnegative: distribution.iter().all(|v| !v.is_negative()),
        integrality_pass: integrality_test(&distribution) && distances.iter().all(|&x| x >= 1 && x <= space.n() as i64),
        inner_products,
        distances,
        distribution,
        brouwer: brouwer_cross_note(space.q(), space.n(), d),
    }))
}

/// Every candidate with `q` in `qs` and `2 ≤ n ≤ n_max`, sorted by
/// `(q, n, d)`.
pub fn enumerate_candidates(qs: &[u32], n_max: u32) -> Result<Vec<Table2Row>> {
    let jobs: Vec<(u32, u32)> = qs.iter().flat_map(|&q| (2..=n_max).map(move |n| (q, n))).collect();
    let chunks: Vec<Result<Vec<Table2Row>>> = jobs
        .par_iter()
        .map(|&(q, n)| {
            let space = Space::new(n, q)?;
            let table = KrawtchoukTable::new(space);
            let mut rows = Vec::new();
            for d in 1..=n as i64 {
                if let Some(row) = candidate(&space, d, &table)? {
                    rows.push(row);
                }
            }
            Ok(rows)
        })
        .collect();
    let mut rows = Vec::new();
    for c in chunks {
        rows.extend(c?);
    }
    rows.sort_by_key(|r| (r.q, r.n, r.d));
    Ok(rows)
}

/// `(passing, candidates)` per alphabet size.
pub fn integrality_counts(rows: &[Table2Row]) -> BTreeMap<u32, (usize, usize)> {
    let mut out = BTreeMap::new();
    for r in rows {
        let e = out.entry(r.q).or_insert((0, 0));
        e.1 += 1;
        if r.integrality_pass {
            e.0 += 1;
        }
    }
    out
}

/// One row of the reference table, as printed.
#[derive(Clone, Copy, Debug)]
pub struct ReferenceRow {
    pub asterisk: bool,
    pub q: u32,
    pub n: u32,
    pub d: i64,
    pub levenshtein: &'static str,
    pub refined: i64,
    pub inner_products: [&'static str; 3],
    pub distribution: [i64; 3],
}

#[allow(clippy::too_many_arguments)]
const fn row(asterisk: bool, q: u32, n: u32, d: i64, levenshtein: &'static str, refined: i64, inner_products: [&'static str; 3], distribution: [i64; 3]) -> ReferenceRow {
    ReferenceRow { asterisk, q, n, d, levenshtein, refined, inner_products, distribution }
}

/// The reference list of integral candidates for `2 ≤ q ≤ 5`, `n ≤ 100`.
pub const REFERENCE_TABLE2: &[ReferenceRow] = &[
    row(false, 2, 12, 5, "62.50", 60, ["-1/2", "-1/3", "-1/6"], [5, 15, 39]),
    row(false, 2, 56, 25, "1135", 1100, ["-5/28", "-1/7", "3/28"], [175, 275, 649]),
    row(false, 2, 90, 41, "2863.69", 2788, ["-2/15", "-1/9", "4/45"], [492, 697, 1598]),
    row(false, 2, 96, 45, "1161", 1155, ["-1/6", "-7/48", "1/16"], [90, 252, 812]),
    row(true, 3, 4, 2, "33", 27, ["-1", "-1/2", "0"], [6, 8, 12]),
    row(false, 3, 7, 4, "57", 54, ["-1", "-5/7", "-1/7"], [4, 14, 35]),
    row(false, 3, 20, 12, "312.429", 306, ["-7/10", "-3/5", "-1/5"], [16, 85, 204]),
    row(false, 3, 25, 15, "531", 513, ["-3/5", "-13/25", "-1/5"], [114, 75, 323]),
    row(false, 3, 27, 16, "874", 840, ["-5/9", "-13/27", "-5/27"], [272, 84, 483]),
    row(false, 3, 40, 24, "2421", 2349, ["-1/2", "-9/20", "-1/5"], [928, 144, 1276]),
    row(false, 3, 52, 32, "2094", 2052, ["-1/2", "-6/13", "-3/13"], [608, 208, 1235]),
    row(false, 3, 88, 55, "5745", 5670, ["-5/11", "-19/44", "-1/4"], [1925, 440, 3304]),
    row(false, 4, 4, 2, "83.20", 64, ["-1", "-1/2", "0"], [21, 24, 18]),
    row(true, 4, 5, 3, "76", 64, ["-1", "-3/5", "-1/5"], [18, 15, 30]),
    row(false, 4, 8, 5, "182.50", 160, ["-1", "-3/4", "-1/4"], [15, 60, 84]),
    row(false, 4, 9, 6, "136", 128, ["-1", "-7/9", "-1/3"], [16, 27, 84]),
    row(true, 4, 11, 7, "364", 320, ["-9/11", "-7/11", "-3/11"], [99, 55, 165]),
    row(false, 4, 13, 9, "196", 192, ["-1", "-11/13", "-5/13"], [9, 39, 143]),
    row(false, 4, 18, 12, "697.6", 640, ["-7/9", "-2/3", "-1/3"], [135, 144, 360]),
    row(false, 4, 42, 30, "1190.59", 1184, ["-16/21", "-5/7", "-1/7"], [36, 259, 888]),
    row(false, 4, 49, 35, "1660", 1640, ["-5/7", "-33/49", "-1/7"], [205, 245, 1189]),
    row(false, 4, 56, 39, "7676.5", 7176, ["-9/14", "-17/28", "-11/28"], [1287, 2093, 3795]),
    row(true, 5, 4, 2, "167.86", 125, ["-1", "-1/2", "0"], [52, 48, 24]),
    row(true, 5, 5, 3, "191.67", 125, ["-1", "-3/5", "-1/5"], [44, 40, 40]),
    row(true, 5, 6, 4, "145", 125, ["-1", "-2/3", "-1/3"], [44, 24, 60]),
    row(false, 5, 9, 6, "485", 375, ["-1", "-7/9", "-1/3"], [44, 162, 168]),
    row(true, 5, 11, 8, "265", 250, ["-1", "-9/11", "-5/11"], [40, 44, 165]),
    row(false, 5, 16, 12, "385", 375, ["-1/", "-7/8", "-1/2"], [30, 64, 280]),
    row(false, 5, 21, 16, "505", 500, ["-1", "-19/21", "-11/21"], [16, 84, 399]),
    row(false, 5, 25, 18, "3621", 3645, ["-19/25", "-17/25", "-11/25"], [1638, 132, 1694]),
    row(false, 5, 45, 34, "3649", 3250, ["-7/9", "-11/15", "-23/45"], [429, 792, 2028]),
    row(false, 5, 55, 42, "3705.8", 3675, ["-43/55", "-41/55", "-29/55"], [132, 1078, 2464]),
    row(false, 5, 72, 56, "3257.26", 3250, ["-29/36", "-7/9", "-5/9"], [64, 585, 2600]),
    row(false, 5, 75, 57, "12141", 11970, ["-53/75", "-17/25", "-39/75"], [4617, 608, 6744]),
    row(false, 5, 91, 70, "9725", 9625, ["-5/7", "-9/13", "-49/91"], [2695, 780, 6149]),
    row(false, 5, 92, 70, "26339.3", 25025, ["-16/23", "-31/46", "-12/23"], [7084, 4784, 13156]),
    row(false, 5, 100, 76, "55841", 55195, ["-17/25", "-33/50", "-13/25"], [26809, 912, 27473]),
];

/// Published integral-candidate counts for `n ≤ 300`: `(q, passing, candidates)`.
pub const REFERENCE_COUNTS: &[(u32, usize, usize)] = &[(2, 7, 38), (3, 14, 54), (4, 20, 47), (5, 18, 39)];

/// Ways a printed row contradicts itself, detectable without computing any
/// bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Anomaly {
    /// The printed `s` is `−(1 − 2d/n)`.
    SignOfS,
    /// The printed `s` is neither `1 − 2d/n` nor its negative.
    WrongS,
    /// The printed refinement exceeds the printed Levenshtein value.
    DominanceViolation,
    /// The printed distribution does not sum to `M − 1`.
    DistributionSum,
    /// An inner product does not parse.
    MalformedEntry,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RowCheck {
    Match,
    /// The printed row contradicts itself, and every field where it differs
    /// from ours is covered by one of `kinds`.
    Anomaly { kinds: Vec<Anomaly>, detail: String },
    Mismatch { detail: String },
    /// No integral candidate at these parameters.
    Missing,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReferenceCheck {
    pub q: u32,
    pub n: u32,
    pub d: i64,
    pub check: RowCheck,
    /// The printed Levenshtein value agrees with ours to its printed
    /// precision. Kept apart from `check`, which covers the code parameters.
    pub levenshtein_agrees: bool,
    pub levenshtein_detail: Option<String>,
}

fn levenshtein_close(printed: &str, ours: &Rational) -> bool {
    let digits = printed.split('.').nth(1).map_or(0, str::len) as i32;
    let Ok(value) = printed.parse::<f64>() else { return false };
    (value - to_f64(ours)).abs() <= 0.5 * 10f64.powi(-digits) + 1e-9
}

/// Compares computed passing rows against the reference ones. The second
/// result lists passing rows in the reference range that are not printed.
pub fn check_reference(rows: &[Table2Row]) -> (Vec<ReferenceCheck>, Vec<(u32, u32, i64)>) {
    let mut checks = Vec::new();
    for r in REFERENCE_TABLE2 {
        let ours = rows.iter().find(|x| (x.q, x.n, x.d) == (r.q, r.n, r.d) && x.integrality_pass);
        let check = ours.map_or(RowCheck::Missing, |o| compare_row(r, o));
        let levenshtein_agrees = ours.is_some_and(|o| levenshtein_close(r.levenshtein, &o.levenshtein));
        let levenshtein_detail = ours
            .filter(|_| !levenshtein_agrees)
            .map(|o| format!("printed Levenshtein {} vs computed {} ({:.3})", r.levenshtein, fmt_rational(&o.levenshtein), to_f64(&o.levenshtein)));
        checks.push(ReferenceCheck { q: r.q, n: r.n, d: r.d, check, levenshtein_agrees, levenshtein_detail });
    }
    let n_max = REFERENCE_TABLE2.iter().map(|r| r.n).max().unwrap_or(0);
    let extra = rows
        .iter()
        .filter(|x| x.integrality_pass && x.n <= n_max && (2..=5).contains(&x.q))
        .filter(|x| !REFERENCE_TABLE2.iter().any(|r| (r.q, r.n, r.d) == (x.q, x.n, x.d)))
        .map(|x| (x.q, x.n, x.d))
        .collect();
    (checks, extra)
}

/// The row's own inconsistencies, judged from the printed numbers and
/// `s = 1 − 2d/n` alone.
fn self_inconsistencies(r: &ReferenceRow) -> Vec<Anomaly> {
    let mut kinds = Vec::new();
    let printed: Vec<Option<Rational>> = r.inner_products.iter().map(|s| parse_rational(s)).collect();
    if printed.iter().any(Option::is_none) {
        kinds.push(Anomaly::MalformedEntry);
    }
    if let Some(Some(last)) = printed.last() {
        let s = int(1) - Rational::new(BigInt::from(2 * r.d), BigInt::from(r.n));
        if *last == -&s && !s.is_zero() {
            kinds.push(Anomaly::SignOfS);
        } else if *last != s {
            kinds.push(Anomaly::WrongS);
        }
    }
    if r.refined as f64 > r.levenshtein.parse::<f64>().unwrap_or(f64::INFINITY) {
        kinds.push(Anomaly::DominanceViolation);
    }
    if r.distribution.iter().sum::<i64>() != r.refined - 1 {
        kinds.push(Anomaly::DistributionSum);
    }
    kinds
}

fn compare_row(r: &ReferenceRow, ours: &Table2Row) -> RowCheck {
    let kinds = self_inconsistencies(r);
    let has = |k: Anomaly| kinds.contains(&k);
    let mut unexplained = Vec::new();
    let mut explained = Vec::new();

    let printed: Vec<Option<Rational>> = r.inner_products.iter().map(|s| parse_rational(s)).collect();
    let ip_differs = printed.len() != ours.inner_products.len()
        || printed.iter().zip(&ours.inner_products).any(|(p, o)| p.as_ref() != Some(o));
    if ip_differs {
        // Only entries the row itself shows to be wrong may differ.
        let covered = printed.iter().zip(&ours.inner_products).enumerate().all(|(i, (p, o))| match p {
            None => has(Anomaly::MalformedEntry),
            Some(p) if p == o => true,
            Some(_) => i == 2 && (has(Anomaly::SignOfS) || has(Anomaly::WrongS)),
        });
        let line = format!("inner products {:?} vs computed {}", r.inner_products, join(&ours.inner_products));
        if covered { explained.push(line) } else { unexplained.push(line) }
    }
    if ours.refined != int(r.refined) {
        let line = format!("refinement {} vs computed {}", r.refined, fmt_rational(&ours.refined));
        if has(Anomaly::DominanceViolation) && ours.refined <= ours.levenshtein {
            explained.push(line);
        } else {
            unexplained.push(line);
        }
    }
    let printed_dist: Vec<Rational> = r.distribution.iter().map(|&v| int(v)).collect();
    if printed_dist != ours.distribution {
        let line = format!("distribution {:?} vs computed {}", r.distribution, join(&ours.distribution));
        if has(Anomaly::DistributionSum) { explained.push(line) } else { unexplained.push(line) }
    }
    if r.asterisk != ours.brouwer.as_ref().is_some_and(|b| b.repeats_upper) {
        unexplained.push("asterisk differs".into());
    }
    if !unexplained.is_empty() {
        return RowCheck::Mismatch { detail: unexplained.join("; ") };
    }
    if kinds.is_empty() {
        return RowCheck::Match;
    }
    let mut detail = kinds.iter().map(|k| describe(k, r)).collect::<Vec<_>>();
    detail.extend(explained);
    RowCheck::Anomaly { kinds, detail: detail.join("; ") }
}

fn describe(kind: &Anomaly, r: &ReferenceRow) -> String {
    let s = int(1) - Rational::new(BigInt::from(2 * r.d), BigInt::from(r.n));
    match kind {
        Anomaly::SignOfS | Anomaly::WrongS => format!("printed s = {} but 1 - 2d/n = {}", r.inner_products[2], fmt_rational(&s)),
        Anomaly::DominanceViolation => format!("printed refinement {} exceeds printed Levenshtein {}", r.refined, r.levenshtein),
        Anomaly::DistributionSum => format!(
            "printed distribution sums to {}, not M - 1 = {}",
            r.distribution.iter().sum::<i64>(),
            r.refined - 1
        ),
        Anomaly::MalformedEntry => format!("unparsable inner products {:?}", r.inner_products),
    }
}

fn join(xs: &[Rational]) -> String {
    xs.iter().map(fmt_rational).collect::<Vec<_>>().join(", ")
}

/// How a computed row relates to the reference table: `match`,
/// `anomaly:<kinds>`, `mismatch`, or `unlisted`.
pub fn reference_status(row: &Table2Row) -> String {
    let Some(r) = REFERENCE_TABLE2.iter().find(|r| (r.q, r.n, r.d) == (row.q, row.n, row.d)) else {
        return "unlisted".into();
    };
    match compare_row(r, row) {
        RowCheck::Match => "match".into(),
        RowCheck::Anomaly { kinds, .. } => {
            let names: Vec<String> = kinds.iter().map(|k| serde_json::to_value(k).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()).collect();
            format!("anomaly:{}", names.join("+"))
        }
        RowCheck::Mismatch { .. } => "mismatch".into(),
        RowCheck::Missing => "missing".into(),
    }
}

/// CSV with exact `p/q` fields; list fields joined by `;`.
pub fn to_csv(rows: &[Table2Row]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Internal(format!("csv: {e}"));
    w.write_record([
        "q", "n", "d", "levenshtein", "refined", "inner_products", "distances", "distribution", "nonnegative", "integrality_pass", "best_known_repeated", "lower_bound", "reference",
    ])
    .map_err(io)?;
    for r in rows {
        w.write_record([
            r.q.to_string(),
            r.n.to_string(),
            r.d.to_string(),
            fmt_rational(&r.levenshtein),
            fmt_rational(&r.refined),
            r.inner_products.iter().map(fmt_rational).collect::<Vec<_>>().join(";"),
            r.distances.iter().map(i64::to_string).collect::<Vec<_>>().join(";"),
            r.distribution.iter().map(fmt_rational).collect::<Vec<_>>().join(";"),
            r.nonnegative.to_string(),
            r.integrality_pass.to_string(),
            r.brouwer.as_ref().is_some_and(|b| b.repeats_upper).to_string(),
            r.brouwer.as_ref().and_then(|b| b.lower_bound).map_or(String::new(), |v| v.to_string()),
            reference_status(r),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}
