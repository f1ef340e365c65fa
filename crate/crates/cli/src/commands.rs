use std::fmt;

use levref_core::codes::{check_reference, enumerate_candidates, integrality_counts, to_csv, RowCheck, REFERENCE_COUNTS};
use levref_core::delsarte_lp::{compare as lp_compare, lp_bound, sq_scan, Comparison};
use levref_core::kkt::{certify as kkt_certify, Certificate, Verdict};
use levref_core::krawtchouk::{KrawtchoukTable, Space};
use levref_core::levenshtein::{distance_range, j_of_d, levenshtein, RangeParams};
use levref_core::numkit::{fmt_rational, parse_rational, Rational};
use levref_core::refine::{
    closed3, closed4, levenshtein_report, rate_table, refined_bound_with, BoundReport, BoundValue, Feasibility, NumericMode, Options,
};
use levref_core::Error;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::output::{csv_doc, fmt_value, join, json_doc, to_json, value_cell};
use crate::{Format, MethodSel, ModeSel, NumericArgs};

/// Failures, split by exit code: 2 for bad input, 3 for results that
/// contradict each other.
#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Internal(m) => write!(f, "internal inconsistency: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::OutOfRange(_) | Error::OutsideRange { .. } => CliError::Invalid(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

type Res<T> = Result<T, CliError>;

fn space(n: u32, q: u32) -> Res<Space> {
    Ok(Space::new(n, q)?)
}

/// `a`, `a..b` or `a..=b`, inclusive. A reversed range is empty.
pub fn parse_range(text: &str) -> Res<Vec<u32>> {
    let bad = || CliError::Invalid(format!("cannot read range {text:?}; expected a or a..b"));
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            (a.trim().parse::<u32>().map_err(|_| bad())?, b.trim().parse::<u32>().map_err(|_| bad())?)
        }
        None => {
            let v = text.trim().parse::<u32>().map_err(|_| bad())?;
            (v, v)
        }
    };
    Ok((lo..=hi).collect())
}

fn options(numeric: &NumericArgs, n: u32) -> Options {
    let mode = match numeric.mode {
        Some(ModeSel::Exact) => NumericMode::Exact,
        Some(ModeSel::Bigfloat) => NumericMode::BigFloat { bits: numeric.bits },
        None if n <= 400 => NumericMode::Exact,
        None => NumericMode::BigFloat { bits: numeric.bits },
    };
    Options { mode, ..Options::default() }
}

fn feasibility_str(f: &Feasibility) -> String {
    match f {
        Feasibility::Feasible => "feasible".into(),
        Feasibility::Uncertified => "uncertified".into(),
        Feasibility::Infeasible { negative, f0_nonpositive, grid_violations } => {
            format!("infeasible (negative f_i at {negative:?}, f_0 <= 0: {f0_nonpositive}, positive at distances {grid_violations:?})")
        }
    }
}

fn verdict_str(v: &Verdict) -> (&'static str, String) {
    match v {
        Verdict::LpOptimal => ("lp_optimal", String::new()),
        Verdict::NotOptimal { negative_mu, negative_lambda } => {
            ("not_optimal", format!("negative mu at {negative_mu:?}, negative lambda at {negative_lambda:?}"))
        }
        Verdict::Inconclusive { reason } => ("inconclusive", reason.clone()),
    }
}

/// Refinement must never exceed the Levenshtein bound it starts from.
fn check_dominance(report: &BoundReport) -> Res<()> {
    if let (Some(v), Some(lev)) = (report.value.exact(), report.levenshtein.as_ref()) {
        if v > lev {
            return Err(CliError::Internal(format!("refined {v} exceeds Levenshtein {lev} at (q, n, d) = ({}, {}, {})", report.q, report.n, report.d)));
        }
    }
    Ok(())
}

struct MethodResult {
    method: &'static str,
    value: BoundValue,
    detail: Value,
    lines: Vec<String>,
    /// An independent route whose value must equal the pipeline's.
    cross_check: bool,
}

fn report_lines(report: &BoundReport, space: &Space) -> Vec<String> {
    let mut lines = Vec::new();
    if let Some(p) = &report.polynomial {
        lines.push(format!("distances      {}", join(&p.plan.distances, " ")));
        lines.push(format!("inner products {}", join(&p.plan.gammas, " ")));
        if p.plan.eps == 1 {
            lines.push("factor (t + 1) included".into());
        }
        if space.n() <= 64 {
            lines.push(format!("polynomial     {}", p.polynomial(space)));
        }
        if let Some(e) = &p.expansion {
            lines.push(format!("expansion      {}", join(e.coeffs(), " ")));
        } else if let Some(a) = &p.approx_expansion {
            lines.push(format!("expansion      {} ({} bits)", a.coeffs.iter().map(|c| format!("{c:.6e}")).collect::<Vec<_>>().join(" "), a.bits));
        }
        lines.push(format!("feasibility    {}", feasibility_str(&p.feasibility)));
    }
    if report.fell_back {
        lines.push("fell back to the Levenshtein bound".into());
    }
    lines.extend(report.diagnostics.iter().map(|d| format!("note: {d}")));
    lines
}

/// The grid distance of `s`, or `None` when `s` is off the grid.
fn distance_of_s(space: &Space, s: &Rational) -> Option<i64> {
    let d = space.d_of_t(s);
    d.is_integer().then(|| d.to_integer().try_into().ok()).flatten()
}

#[allow(clippy::too_many_arguments)]
pub fn bound(format: Format, q: u32, n: u32, d: Option<i64>, s: Option<&str>, allow_offgrid: bool, method: MethodSel, numeric: &NumericArgs, lp_cap: u32) -> Res<String> {
    let space = space(n, q)?;
    let d = match (d, s) {
        (Some(d), _) => d,
        (None, Some(text)) => {
            let s = parse_rational(text).ok_or_else(|| CliError::Invalid(format!("cannot read s = {text:?}")))?;
            if s < Rational::from_integer((-1).into()) || s >= Rational::from_integer(1.into()) {
                return Err(CliError::Invalid(format!("s = {s} must lie in [-1, 1)")));
            }
            match distance_of_s(&space, &s) {
                Some(d) => d,
                None if allow_offgrid => return offgrid(format, &space, &s, method),
                None => return Err(CliError::Invalid(format!("s = {s} is not of the form 1 - 2d/{n}; pass --allow-offgrid for the Levenshtein bound there"))),
            }
        }
        (None, None) => return Err(CliError::Invalid("one of --d or --s is required".into())),
    };
    if d < 1 || d > n as i64 {
        return Err(CliError::Invalid(format!("distance d = {d} must lie in [1, {n}]")));
    }
    let opts = options(numeric, n);
    let table = KrawtchoukTable::new(space);
    let range = RangeParams::new(&space);
    let j = j_of_d(&space, d);
    let methods: Vec<MethodSel> = match method {
        MethodSel::All => {
            let mut m = vec![MethodSel::Levenshtein, MethodSel::Refined];
            if range.in_j3(&j) && n >= q {
                m.push(MethodSel::Closed3);
            }
            if range.in_j4(&j) {
                m.push(MethodSel::Closed4);
            }
            if n <= lp_cap {
                m.push(MethodSel::Lp);
            }
            m
        }
        MethodSel::Lp if n > lp_cap => return Err(CliError::Invalid(format!("n = {n} exceeds --lp-cap {lp_cap}"))),
        other => vec![other],
    };
    let mut results = Vec::new();
    let mut refined: Option<BoundReport> = None;
    for m in methods {
        let r = match m {
            MethodSel::Levenshtein => {
                let report = levenshtein_report(&space, d)?;
                let frame = report.frame.as_ref().expect("Levenshtein reports carry their frame");
                let lines = vec![format!("degree m = {} (k = {}, eps = {})", frame.m, frame.k, frame.eps)];
                MethodResult { method: "levenshtein", value: report.value.clone(), detail: to_json(&report)?, lines, cross_check: false }
            }
            MethodSel::Refined => {
                let report = refined_bound_with(&space, d, &table, &opts)?;
                check_dominance(&report)?;
                let lines = report_lines(&report, &space);
                let r = MethodResult { method: "refined", value: report.value.clone(), detail: to_json(&report)?, lines, cross_check: false };
                refined = Some(report);
                r
            }
            MethodSel::Closed3 => {
                let c = closed3(&space, d)?;
                let lines = vec![format!("j = {}, e = {}, f = {}", c.j, c.e, join(&c.coeffs, " "))];
                MethodResult { method: "closed3", value: BoundValue::Exact(c.value.clone()), detail: to_json(&c)?, lines, cross_check: true }
            }
            MethodSel::Closed4 => {
                let c = closed4(&space, d)?;
                let report = c.report(&space)?;
                let mut lines = vec![format!("j = {}, b = {}, formula value {}", c.j, c.b, c.value)];
                lines.extend(report.diagnostics.iter().map(|d| format!("note: {d}")));
                MethodResult { method: "closed4", value: report.value.clone(), detail: to_json(&c)?, lines, cross_check: c.is_feasible() }
            }
            MethodSel::Lp => {
                let sol = lp_bound(&space, d)?;
                let lines = vec![format!("x = {}", join(&sol.x, " ")), format!("pivots {}", sol.pivots)];
                MethodResult { method: "lp", value: BoundValue::Exact(sol.bound.clone()), detail: to_json(&sol)?, lines, cross_check: false }
            }
            MethodSel::All => unreachable!("expanded above"),
        };
        results.push(r);
    }
    // the closed forms are an independent route to the same numbers
    if let Some(rep) = &refined {
        if let Some(v) = rep.value.exact() {
            for r in results.iter().filter(|r| r.cross_check) {
                if r.value.exact().is_some_and(|c| c != v) {
                    return Err(CliError::Internal(format!("{} gives {} but the pipeline gives {v}", r.method, fmt_value(&r.value))));
                }
            }
        }
    }
    let s = space.t_of_d(d);
    match format {
        Format::Json => {
            let body: Vec<Value> = results.iter().map(|r| json!({ "method": r.method, "value": r.value, "detail": r.detail })).collect();
            json_doc("bound", json!({ "q": q, "n": n, "d": d, "s": fmt_rational(&s), "methods": body }))
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = results
                .iter()
                .map(|r| {
                    vec![q.to_string(), n.to_string(), d.to_string(), fmt_rational(&s), r.method.to_string(), value_cell(&r.value), r.value.floor().to_string(), r.value.is_certified().to_string()]
                })
                .collect();
            csv_doc(&["q", "n", "d", "s", "method", "value", "floor", "certified"], &rows)
        }
        Format::Text => {
            let mut out = format!("q = {q}, n = {n}, d = {d}, s = {s}\n");
            for r in &results {
                out.push_str(&format!("{:<12} {}\n", r.method, fmt_value(&r.value)));
                for l in &r.lines {
                    out.push_str(&format!("    {l}\n"));
                }
            }
            Ok(out)
        }
    }
}

fn offgrid(format: Format, space: &Space, s: &Rational, method: MethodSel) -> Res<String> {
    if !matches!(method, MethodSel::Levenshtein | MethodSel::All) {
        return Err(CliError::Invalid("off the grid only the Levenshtein bound is defined".into()));
    }
    let (frame, value) = levenshtein(space, s)?;
    let value = BoundValue::Exact(value);
    let (q, n) = (space.q(), space.n());
    match format {
        Format::Json => json_doc(
            "bound",
            json!({ "q": q, "n": n, "d": null, "s": fmt_rational(s), "methods": [{ "method": "levenshtein", "value": value, "detail": to_json(&frame)? }] }),
        ),
        Format::Csv => csv_doc(
            &["q", "n", "d", "s", "method", "value", "floor", "certified"],
            &[vec![q.to_string(), n.to_string(), String::new(), fmt_rational(s), "levenshtein".into(), value_cell(&value), value.floor().to_string(), "true".into()]],
        ),
        Format::Text => Ok(format!("q = {q}, n = {n}, s = {s} (off the grid)\nlevenshtein  {}\n    degree m = {}\n", fmt_value(&value), frame.m)),
    }
}

struct ScanRow {
    q: u32,
    n: u32,
    d: i64,
    s: Rational,
    m: usize,
    levenshtein: Rational,
    value: BoundValue,
    fell_back: bool,
}

fn scan_one(space: &Space, d: i64, table: &KrawtchoukTable, method: MethodSel, opts: &Options) -> Res<ScanRow> {
    let report = match method {
        MethodSel::Levenshtein => levenshtein_report(space, d)?,
        _ => refined_bound_with(space, d, table, opts)?,
    };
    check_dominance(&report)?;
    Ok(ScanRow {
        q: space.q(),
        n: space.n(),
        d,
        s: report.s.clone(),
        m: report.frame.as_ref().map_or(0, |f| f.m),
        levenshtein: report.levenshtein.clone().expect("reports carry the Levenshtein value"),
        value: report.value,
        fell_back: report.fell_back,
    })
}

fn distances(space: &Space, d: Option<&str>, m: Option<usize>) -> Res<Vec<i64>> {
    let n = space.n() as i64;
    let mut ds: Vec<i64> = match d {
        Some(text) => parse_range(text)?.into_iter().map(i64::from).filter(|&d| d >= 1 && d <= n).collect(),
        None => (1..=n).collect(),
    };
    if let Some(m) = m {
        match distance_range(space, m)? {
            Some((lo, hi)) => ds.retain(|&d| d >= lo && d <= hi),
            None => ds.clear(),
        }
    }
    Ok(ds)
}

pub fn scan(format: Format, q: u32, n: &str, d: Option<&str>, m: Option<usize>, method: MethodSel, numeric: &NumericArgs) -> Res<String> {
    if !matches!(method, MethodSel::Refined | MethodSel::Levenshtein) {
        return Err(CliError::Invalid("scan supports --method refined or levenshtein".into()));
    }
    let ns = parse_range(n)?;
    let spaces: Vec<Space> = ns.iter().map(|&n| space(n, q)).collect::<Res<_>>()?;
    let rows: Vec<ScanRow> = if spaces.len() == 1 {
        let sp = spaces[0];
        let table = KrawtchoukTable::new(sp);
        let opts = options(numeric, sp.n());
        distances(&sp, d, m)?.par_iter().map(|&d| scan_one(&sp, d, &table, method, &opts)).collect::<Res<_>>()?
    } else {
        let per_n: Vec<Vec<ScanRow>> = spaces
            .par_iter()
            .map(|sp| {
                let table = KrawtchoukTable::new(*sp);
                let opts = options(numeric, sp.n());
                distances(sp, d, m)?.iter().map(|&d| scan_one(sp, d, &table, method, &opts)).collect::<Res<Vec<_>>>()
            })
            .collect::<Res<_>>()?;
        per_n.into_iter().flatten().collect()
    };
    match format {
        Format::Json => {
            let body: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({ "q": r.q, "n": r.n, "d": r.d, "s": fmt_rational(&r.s), "m": r.m, "levenshtein": fmt_rational(&r.levenshtein),
                            "value": r.value, "fell_back": r.fell_back })
                })
                .collect();
            json_doc("scan", Value::Array(body))
        }
        Format::Csv | Format::Text => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.q.to_string(),
                        r.n.to_string(),
                        r.d.to_string(),
                        fmt_rational(&r.s),
                        r.m.to_string(),
                        fmt_rational(&r.levenshtein),
                        value_cell(&r.value),
                        r.value.floor().to_string(),
                        r.value.is_certified().to_string(),
                        r.fell_back.to_string(),
                    ]
                })
                .collect();
            let header = ["q", "n", "d", "s", "m", "levenshtein", "value", "floor", "certified", "fell_back"];
            if format == Format::Csv {
                csv_doc(&header, &table)
            } else {
                Ok(text_table(&header, &table))
            }
        }
    }
}

fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

pub fn rate(format: Format, q: u32, n: u32, ratios: &[f64], numeric: &NumericArgs) -> Res<String> {
    let space = space(n, q)?;
    let rows = rate_table(&space, ratios, &options(numeric, n))?;
    match format {
        Format::Json => json_doc("rate", to_json(&rows)?),
        Format::Csv | Format::Text => {
            let opt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:.3}"));
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        format!("{:.3}", r.ratio),
                        r.d.to_string(),
                        format!("{:.3}", r.levenshtein_rate),
                        format!("{:.3}", r.refined_rate),
                        opt(r.reference_levenshtein),
                        opt(r.reference_refined),
                        r.certified.to_string(),
                        r.flags.join("; "),
                    ]
                })
                .collect();
            let header = ["d_over_n", "d", "levenshtein_rate", "refined_rate", "printed_levenshtein", "printed_refined", "certified", "flags"];
            if format == Format::Csv {
                csv_doc(&header, &table)
            } else {
                Ok(text_table(&header, &table))
            }
        }
    }
}

fn instances(q: u32, n: &str, d: Option<i64>) -> Res<Vec<(Space, i64)>> {
    let mut out = Vec::new();
    for n in parse_range(n)? {
        let sp = space(n, q)?;
        match d {
            Some(d) => {
                if d < 1 || d > n as i64 {
                    return Err(CliError::Invalid(format!("distance d = {d} must lie in [1, {n}]")));
                }
                out.push((sp, d));
            }
            None => out.extend((1..=n as i64).map(|d| (sp, d))),
        }
    }
    Ok(out)
}

pub fn certify(format: Format, q: u32, n: &str, d: Option<i64>, _all_d: bool) -> Res<String> {
    let certs: Vec<Certificate> = instances(q, n, d)?.par_iter().map(|(sp, d)| kkt_certify(sp, *d).map_err(CliError::from)).collect::<Res<_>>()?;
    match format {
        Format::Json => json_doc("certify", to_json(&certs)?),
        Format::Csv | Format::Text => {
            let table: Vec<Vec<String>> = certs
                .iter()
                .map(|c| {
                    let (v, why) = verdict_str(&c.verdict);
                    let bound = c.bound.as_ref().map_or(String::new(), value_cell);
                    vec![c.q.to_string(), c.n.to_string(), c.d.to_string(), c.m.to_string(), bound, v.to_string(), why]
                })
                .collect();
            let header = ["q", "n", "d", "m", "bound", "verdict", "detail"];
            if format == Format::Csv {
                csv_doc(&header, &table)
            } else {
                Ok(text_table(&header, &table))
            }
        }
    }
}

pub fn table2(format: Format, q: &str, n_max: u32) -> Res<String> {
    let qs = parse_range(q)?;
    if qs.iter().any(|&q| q < 2) {
        return Err(CliError::Invalid("q must be at least 2".into()));
    }
    let rows = enumerate_candidates(&qs, n_max)?;
    match format {
        Format::Csv => Ok(to_csv(&rows)?),
        Format::Json => {
            let (checks, extra) = check_reference(&rows);
            let counts: Vec<Value> = integrality_counts(&rows).iter().map(|(q, (pass, total))| json!({ "q": q, "pass": pass, "candidates": total })).collect();
            json_doc("table2", json!({ "n_max": n_max, "rows": to_json(&rows)?, "counts": counts, "reference": to_json(&checks)?, "unlisted_passing": extra }))
        }
        Format::Text => {
            let mut out = String::new();
            for r in rows.iter().filter(|r| r.integrality_pass) {
                out.push_str(&format!(
                    "({}, {}, {})  refined {}  Levenshtein {:.2}  s {}  distribution {}\n",
                    r.q,
                    r.n,
                    r.d,
                    r.refined,
                    levref_core::numkit::to_f64(&r.levenshtein),
                    join(&r.inner_products, ", "),
                    join(&r.distribution, ", ")
                ));
            }
            for (q, (pass, total)) in integrality_counts(&rows) {
                let printed = REFERENCE_COUNTS.iter().find(|c| c.0 == q).map_or(String::new(), |c| format!(" (reference, n <= 300: {} of {})", c.1, c.2));
                out.push_str(&format!("q = {q}: {pass} of {total} candidates pass the integrality test{printed}\n"));
            }
            let (checks, _) = check_reference(&rows);
            for c in checks.iter().filter(|c| c.n <= n_max && qs.contains(&c.q)) {
                match &c.check {
                    RowCheck::Match => {}
                    RowCheck::Anomaly { detail, .. } => out.push_str(&format!("reference row ({}, {}, {}): {detail}\n", c.q, c.n, c.d)),
                    RowCheck::Mismatch { detail } => out.push_str(&format!("reference row ({}, {}, {}) differs: {detail}\n", c.q, c.n, c.d)),
                    RowCheck::Missing => out.push_str(&format!("reference row ({}, {}, {}) not reproduced\n", c.q, c.n, c.d)),
                }
                if let Some(detail) = &c.levenshtein_detail {
                    out.push_str(&format!("reference row ({}, {}, {}): {detail}\n", c.q, c.n, c.d));
                }
            }
            Ok(out)
        }
    }
}

pub fn compare(format: Format, q: u32, n: &str, d: Option<i64>, _all_d: bool, lp_cap: u32) -> Res<String> {
    let list = instances(q, n, d)?;
    let rows: Vec<Comparison> = list
        .par_iter()
        .map(|(sp, d)| {
            let table = KrawtchoukTable::new(*sp);
            lp_compare(sp, *d, &table, lp_cap).map_err(CliError::from)
        })
        .collect::<Res<_>>()?;
    for c in &rows {
        if let (Some(lp), Some(r)) = (&c.lp, c.refined.exact()) {
            if lp > r {
                return Err(CliError::Internal(format!("LP optimum {lp} exceeds the feasible refined value {r} at ({}, {}, {})", c.q, c.n, c.d)));
            }
        }
    }
    match format {
        Format::Json => json_doc("compare", to_json(&rows)?),
        Format::Csv | Format::Text => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|c| {
                    vec![
                        c.q.to_string(),
                        c.n.to_string(),
                        c.d.to_string(),
                        c.m.to_string(),
                        value_cell(&c.refined),
                        c.lp.as_ref().map_or(String::new(), fmt_rational),
                        c.equal.map_or(String::new(), |e| e.to_string()),
                        verdict_str(&c.certificate).0.to_string(),
                    ]
                })
                .collect();
            let header = ["q", "n", "d", "m", "refined", "lp", "equal", "certificate"];
            if format == Format::Csv {
                csv_doc(&header, &table)
            } else {
                Ok(text_table(&header, &table))
            }
        }
    }
}

pub fn sq(format: Format, q: u32, n: &str, lp_cap: u32) -> Res<String> {
    let spaces: Vec<Space> = parse_range(n)?.into_iter().map(|n| space(n, q)).collect::<Res<_>>()?;
    let scans: Vec<_> = spaces.par_iter().map(|sp| sq_scan(sp, lp_cap).map_err(CliError::from)).collect::<Res<_>>()?;
    match format {
        Format::Json => json_doc("sq", to_json(&scans)?),
        Format::Csv | Format::Text => {
            let table: Vec<Vec<String>> = scans
                .iter()
                .map(|s| {
                    vec![
                        s.q.to_string(),
                        s.n.to_string(),
                        fmt_rational(&s.sigma),
                        format!("{:.6}", levref_core::numkit::to_f64(&s.sigma)),
                        s.failure_found.to_string(),
                        s.certificate_only.to_string(),
                        s.scanned.to_string(),
                    ]
                })
                .collect();
            let header = ["q", "n", "sigma", "sigma_approx", "failure_found", "certificate_only", "scanned"];
            if format == Format::Csv {
                csv_doc(&header, &table)
            } else {
                Ok(text_table(&header, &table))
            }
        }
    }
}
