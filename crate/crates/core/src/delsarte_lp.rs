//! The full Delsarte linear program, solved exactly. Used as ground truth for
//! the refined bounds on small lengths.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kkt::certify_report;
use crate::krawtchouk::{kraw_column, KrawtchoukTable, Space};
use crate::numkit::{fmt_rational, int, BigInt, Rational};
use crate::refine::{check_distance, refined_bound_with, BoundValue, Options};

/// Lengths above this are not solved exactly unless asked for.
pub const DEFAULT_LP_CAP: u32 = 64;

/// minimize `Σ x_l` subject to `Σ_l K_l(i)/r_l x_l ≤ −1` for `i = d..=n`,
/// `x ≥ 0`.
#[derive(Clone, Debug)]
pub struct LpInstance {
    pub space: Space,
    pub d: i64,
    /// `K_l(i)` for rows `i = d..=n` and `l = 0..=n`.
    columns: Vec<Vec<BigInt>>,
    weights: Vec<BigInt>,
}

impl LpInstance {
    pub fn new(space: &Space, d: i64) -> Result<Self> {
        check_distance(space, d)?;
        let n = space.n() as i64;
        let columns = (d..=n).map(|i| kraw_column(n, space.q(), i, n as usize)).collect();
        let weights = space.weights();
        Ok(Self { space: *space, d, columns, weights })
    }

    pub fn rows(&self) -> usize {
        self.columns.len()
    }

    pub fn variables(&self) -> usize {
        self.space.n() as usize
    }

    /// `K_l(i)/r_l` for row distance `i` and variable `l ≥ 1`.
    pub fn coefficient(&self, i: i64, l: usize) -> Rational {
        Rational::new(self.columns[(i - self.d) as usize][l].clone(), self.weights[l].clone())
    }

    /// CPLEX-style text with exact `p/q` coefficients.
    pub fn to_lp_text(&self) -> String {
        let n = self.variables();
        let mut out = format!(
            "\\ Delsarte LP q={} n={} d={}\nMinimize\n obj: {}\nSubject To\n",
            self.space.q(),
            self.space.n(),
            self.d,
            (1..=n).map(|l| format!("x{l}")).collect::<Vec<_>>().join(" + ")
        );
        for i in self.d..=self.space.n() as i64 {
            let mut row = String::new();
            for l in 1..=n {
                let c = self.coefficient(i, l);
                if c.is_zero() {
                    continue;
                }
                let sign = if c.is_negative() { "-" } else { "+" };
                if row.is_empty() {
                    if c.is_negative() {
                        row.push_str("- ");
                    }
                } else {
                    row.push_str(&format!(" {sign} "));
                }
                row.push_str(&format!("{} x{l}", fmt_rational(&c.abs())));
            }
            if row.is_empty() {
                row.push_str("0 x1");
            }
            out.push_str(&format!(" c{i}: {row} <= -1\n"));
        }
        out.push_str("Bounds\n");
        for l in 1..=n {
            out.push_str(&format!(" x{l} >= 0\n"));
        }
        out.push_str("End\n");
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LpSolution {
    pub q: u32,
    pub n: u32,
    pub d: i64,
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub x: Vec<Rational>,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub objective: Rational,
    /// `1 + Σ x_l`.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub bound: Rational,
    /// Multipliers of the rows `i = d..=n`.
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub duals: Vec<Rational>,
    pub pivots: usize,
}

/// Dense tableau for `max c·y` subject to `A y ≤ b`, `y ≥ 0`, `b ≥ 0`,
/// started from the slack basis and pivoted with the least-index rule.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    /// Reduced costs `z_j − c_j`; optimal when none is negative.
    cost: Vec<Rational>,
    value: Rational,
    basis: Vec<usize>,
}

impl Tableau {
    fn new(a: Vec<Vec<Rational>>, b: Vec<Rational>, c: Vec<Rational>) -> Self {
        let (m, k) = (a.len(), c.len());
        let rows = a
            .into_iter()
            .enumerate()
            .map(|(r, mut row)| {
                row.extend((0..m).map(|s| if s == r { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        let mut cost: Vec<Rational> = c.into_iter().map(|x| -x).collect();
        cost.extend((0..m).map(|_| Rational::zero()));
        Self { rows, rhs: b, cost, value: Rational::zero(), basis: (k..k + m).collect() }
    }

    fn run(&mut self) -> Result<usize> {
        let mut pivots = 0;
        loop {
            let Some(col) = (0..self.cost.len()).find(|&j| self.cost[j].is_negative()) else {
                return Ok(pivots);
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[col].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / &row[col];
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let (r, _) = leave.ok_or_else(|| Error::Internal("Delsarte dual program is unbounded".into()))?;
            self.pivot(r, col);
            pivots += 1;
        }
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let inv = self.rows[r][col].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        self.rhs[r] *= &inv;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for (k, row) in self.rows.iter_mut().enumerate() {
            if k == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
            self.rhs[k] -= &f * &pivot_rhs;
        }
        let f = self.cost[col].clone();
        for (x, p) in self.cost.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *x -= &f * p;
            }
        }
        self.value -= &f * &pivot_rhs;
        self.basis[r] = col;
    }
}

/// Solves the program through its dual
/// `max Σ μ_i` subject to `−Σ_i μ_i K_l(i) ≤ r_l` (`l = 1..=n`), `μ ≥ 0`,
/// whose slack basis is feasible. The primal optimum is read off the
/// reduced costs and then checked by substitution.
pub fn solve(instance: &LpInstance) -> Result<LpSolution> {
    let n = instance.variables();
    let rows_i = instance.rows();
    let a: Vec<Vec<Rational>> = (1..=n)
        .map(|l| (0..rows_i).map(|r| Rational::from_integer(-instance.columns[r][l].clone())).collect())
        .collect();
    let b: Vec<Rational> = (1..=n).map(|l| Rational::from_integer(instance.weights[l].clone())).collect();
    let c = vec![Rational::one(); rows_i];
    let mut tab = Tableau::new(a, b, c);
    let pivots = tab.run()?;

    let mut duals = vec![Rational::zero(); rows_i];
    for (r, &var) in tab.basis.iter().enumerate() {
        if var < rows_i {
            duals[var] = tab.rhs[r].clone();
        }
    }
    // slack of row l has reduced cost y_l; x_l = r_l y_l
    let x: Vec<Rational> = (0..n)
        .map(|l| &tab.cost[rows_i + l] * Rational::from_integer(instance.weights[l + 1].clone()))
        .collect();
    let objective: Rational = x.iter().sum();
    let dual_objective: Rational = duals.iter().sum();
    if objective != dual_objective || objective != tab.value {
        return Err(Error::Internal(format!("duality gap: primal {objective}, dual {dual_objective}")));
    }
    for i in instance.d..=instance.space.n() as i64 {
        let lhs: Rational = (1..=n).map(|l| instance.coefficient(i, l) * &x[l - 1]).sum();
        if lhs > int(-1) {
            return Err(Error::Internal(format!("row {i} violated: {lhs}")));
        }
    }
    if x.iter().any(Signed::is_negative) || duals.iter().any(Signed::is_negative) {
        return Err(Error::Internal("negative LP solution component".into()));
    }
    let space = instance.space;
    Ok(LpSolution {
        q: space.q(),
        n: space.n(),
        d: instance.d,
        bound: &objective + int(1),
        x,
        objective,
        duals,
        pivots,
    })
}

pub fn lp_bound(space: &Space, d: i64) -> Result<LpSolution> {
    solve(&LpInstance::new(space, d)?)
}

/// `g(z) = 1 + Σ x_l K_l(z)/r_l` at every distance.
pub fn g_values(space: &Space, x: &[Rational]) -> Vec<Rational> {
    let n = space.n() as i64;
    let weights = space.weights();
    (0..=n)
        .map(|z| {
            let col = kraw_column(n, space.q(), z, n as usize);
            let mut acc = Rational::one();
            for (l, xl) in x.iter().enumerate() {
                if !xl.is_zero() {
                    acc += xl * Rational::new(col[l + 1].clone(), weights[l + 1].clone());
                }
            }
            acc
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub q: u32,
    pub n: u32,
    pub d: i64,
    pub m: usize,
    pub refined: BoundValue,
    #[serde(serialize_with = "crate::report::ser_opt_rational")]
    pub lp: Option<Rational>,
    /// `None` when the LP was skipped above the cap.
    pub equal: Option<bool>,
    pub certificate: crate::kkt::Verdict,
    pub lp_skipped: bool,
}

pub fn compare(space: &Space, d: i64, table: &KrawtchoukTable, lp_cap: u32) -> Result<Comparison> {
    let report = refined_bound_with(space, d, table, &Options::default())?;
    let cert = certify_report(space, &report)?;
    let m = report.frame.as_ref().map_or(0, |f| f.m);
    let (lp, equal, skipped) = if space.n() <= lp_cap {
        let sol = lp_bound(space, d)?;
        let equal = report.value.exact().map(|v| *v == sol.bound);
        (Some(sol.bound), equal, false)
    } else {
        (None, None, true)
    };
    Ok(Comparison { q: space.q(), n: space.n(), d, m, refined: report.value, lp, equal, certificate: cert.verdict, lp_skipped: skipped })
}

#[derive(Clone, Debug, Serialize)]
pub struct SqScan {
    pub q: u32,
    pub n: u32,
    /// First grid `s` (scanning upward from `−1`) where the refined bound
    /// differs from the LP optimum, or the last scanned `s`.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub sigma: Rational,
    pub failure_found: bool,
    /// Comparison by certificate only (length above the LP cap).
    pub certificate_only: bool,
    pub scanned: usize,
}

pub fn sq_scan(space: &Space, lp_cap: u32) -> Result<SqScan> {
    let table = KrawtchoukTable::new(*space);
    let n = space.n() as i64;
    let mut scanned = 0;
    let certificate_only = space.n() > lp_cap;
    for d in (1..=n).rev() {
        let cmp = compare(space, d, &table, lp_cap)?;
        scanned += 1;
        let ok = match cmp.equal {
            Some(e) => e,
            None => cmp.certificate == crate::kkt::Verdict::LpOptimal,
        };
        if !ok {
            return Ok(SqScan { q: space.q(), n: space.n(), sigma: space.t_of_d(d), failure_found: true, certificate_only, scanned });
        }
    }
    Ok(SqScan { q: space.q(), n: space.n(), sigma: space.t_of_d(1), failure_found: false, certificate_only, scanned })
}
