//! The refinement: Levenshtein's double roots are replaced by the two grid
//! nodes around them, the resulting polynomial is checked against the
//! Delsarte conditions and `f(1)/f_0` becomes the new bound.

mod asymptotic;
mod closed;
mod rate;

pub use asymptotic::{
    asympt3, asympt4, j4_offset_admissible, j4_offset_max, j4_offset_distance, AsymptoticEstimate, Regime3, Term,
};
pub use closed::{closed3, closed4, three_point_plan, ClosedForm3, ClosedForm4};
pub use rate::{rate_table, RateRow, REFERENCE_RATES};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::krawtchouk::{reduce_mod_grid, Expansion, KrawtchoukTable, Space};
use crate::levenshtein::{classify, lev_bound, lev_roots, Frame, RootProfile};
use crate::numkit::{int, pow_big, BigFloat, BigInt, DensePoly, GridCell, Rational, RootLocation};

/// Which side of an exact grid hit a plan snaps to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Lower,
    Upper,
}

/// An interior root that landed exactly on the node `t_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TieBreak {
    pub root: usize,
    pub node: usize,
    pub side: Side,
}

/// The snapped roots `γ_1 ≤ … ≤ γ_{2k−1} = s`, as inner products and as
/// distances `n(1 − γ)/2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SnapPlan {
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub gammas: Vec<Rational>,
    pub distances: Vec<i64>,
    pub eps: u8,
    pub ties: Vec<TieBreak>,
}

impl SnapPlan {
    pub fn degree(&self) -> usize {
        self.gammas.len() + self.eps as usize
    }

    /// `(t + 1)^ε Π (t − γ_i)`.
    pub fn polynomial(&self) -> DensePoly {
        let mut f = DensePoly::from_roots(&self.gammas);
        if self.eps == 1 {
            f = f.mul_linear(&int(1));
        }
        f
    }

    /// `V(z) = (n − z)^ε Π (d_i − z)`, so that `f(t_z) = 2^m V(z) / n^m`.
    fn scaled_value(&self, n: i64, z: i64) -> BigInt {
        let mut v = BigInt::one();
        for &d in &self.distances {
            v *= d - z;
        }
        if self.eps == 1 {
            v *= n - z;
        }
        v
    }
}

/// Above this many exact node hits only the all-lower and all-upper plans are
/// built instead of every combination.
pub const MAX_TIE_ENUMERATION: usize = 6;

/// Replaces every interior root by the nodes of its cell. A root sitting
/// exactly on a node gives two choices; all combinations are returned (up to
/// [`MAX_TIE_ENUMERATION`] hits), the all-lower plan first.
pub fn snap(profile: &RootProfile, frame: &Frame, space: &Space) -> Result<Vec<SnapPlan>> {
    let n = space.n() as i64;
    let grid = space.grid();
    let node_value = |i: i64| -> Rational {
        // i = −1 is the point below −1 at the same spacing
        int(-1) + Rational::new(BigInt::from(2 * i), BigInt::from(n))
    };
    let mut fixed: Vec<i64> = Vec::new();
    let mut hits: Vec<(usize, usize)> = Vec::new();
    for (idx, root) in profile.interior().enumerate() {
        match (root.cell, &root.value) {
            (GridCell::Cell(j), _) => {
                fixed.push(j as i64 - 1);
                fixed.push(j as i64);
            }
            (GridCell::Node(j), RootLocation::Exact(x)) if x == grid.node(j) => hits.push((idx, j)),
            (cell, value) => {
                return Err(Error::Uncertified(format!("root {value:?} with cell {cell:?}")));
            }
        }
    }
    let s_index = match space.cell_of(&frame.s) {
        Some(GridCell::Node(i)) => i as i64,
        _ => return Err(Error::InvalidParameter(format!("s = {} is not a grid node", frame.s))),
    };
    let masks: Vec<u64> = if hits.len() <= MAX_TIE_ENUMERATION {
        (0..1u64 << hits.len()).collect()
    } else {
        vec![0, u64::MAX]
    };
    let mut plans = Vec::new();
    for mask in masks {
        let mut indices = fixed.clone();
        let mut ties = Vec::new();
        for (bit, &(root, node)) in hits.iter().enumerate() {
            let side = if (mask >> bit.min(63)) & 1 == 0 { Side::Lower } else { Side::Upper };
            let j = node as i64;
            match side {
                Side::Lower => indices.extend([j - 1, j]),
                Side::Upper => indices.extend([j, j + 1]),
            }
            ties.push(TieBreak { root, node, side });
        }
        indices.push(s_index);
        indices.sort_unstable();
        let gammas = indices.iter().map(|&i| node_value(i)).collect();
        let distances = indices.iter().map(|&i| n - i).collect();
        plans.push(SnapPlan { gammas, distances, eps: frame.eps, ties });
    }
    Ok(plans)
}

/// How Krawtchouk coefficients are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionRoute {
    /// Descending-degree elimination against the `Q_i` polynomials.
    Triangular,
    /// Orthogonality sums over the grid in integer arithmetic.
    GridSum,
    /// Triangular for `m ≤ 5` and `n ≤ 64`, grid sums otherwise (the
    /// triangular route slows down sharply with the degree).
    Auto,
}

/// Arithmetic used for the expansion and the final ratio.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum NumericMode {
    Exact,
    BigFloat { bits: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Options {
    pub route: ExpansionRoute,
    pub mode: NumericMode,
}

impl Default for Options {
    fn default() -> Self {
        Self { route: ExpansionRoute::Auto, mode: NumericMode::Exact }
    }
}

/// Outcome of the Delsarte conditions for one built polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Feasibility {
    Feasible,
    Infeasible {
        /// Degrees `i ≥ 1` with `f_i < 0`.
        negative: Vec<usize>,
        f0_nonpositive: bool,
        /// Distances `z ≥ d` with `f(t_z) > 0`.
        grid_violations: Vec<i64>,
    },
    /// Signs were obtained in floating arithmetic.
    Uncertified,
}

/// Approximate expansion from the floating route.
#[derive(Clone, Debug, Serialize)]
pub struct ApproxExpansion {
    pub coeffs: Vec<f64>,
    pub bits: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct ImprovedPolynomial {
    pub plan: SnapPlan,
    /// The polynomial, reduced modulo the grid annihilator when its degree
    /// exceeds `n`. Only formed on the triangular route; see
    /// [`ImprovedPolynomial::polynomial`].
    #[serde(serialize_with = "ser_poly", skip_serializing_if = "Option::is_none")]
    pub poly: Option<DensePoly>,
    pub reduced: bool,
    pub expansion: Option<Expansion>,
    pub approx_expansion: Option<ApproxExpansion>,
    pub feasibility: Feasibility,
    pub value: Option<BoundValue>,
}

fn ser_poly<S: serde::Serializer>(p: &Option<DensePoly>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match p {
        Some(p) => s.serialize_str(&p.to_string()),
        None => s.serialize_none(),
    }
}

impl ImprovedPolynomial {
    pub fn polynomial(&self, space: &Space) -> DensePoly {
        match &self.poly {
            Some(p) => p.clone(),
            None => reduced_polynomial(&self.plan, space),
        }
    }
}

fn reduced_polynomial(plan: &SnapPlan, space: &Space) -> DensePoly {
    let raw = plan.polynomial();
    if plan.degree() > space.n() as usize {
        reduce_mod_grid(space, &raw)
    } else {
        raw
    }
}

/// A bound value, exact or from the floating route.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundValue {
    Exact(Rational),
    Approx { value: BigFloat, certified: bool },
}

impl BoundValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            BoundValue::Exact(r) => crate::numkit::to_f64(r),
            BoundValue::Approx { value, .. } => value.to_f64(),
        }
    }

    pub fn log2(&self) -> f64 {
        match self {
            BoundValue::Exact(r) => {
                let num = BigFloat::from_bigint(r.numer(), 64).log2();
                let den = BigFloat::from_bigint(r.denom(), 64).log2();
                num - den
            }
            BoundValue::Approx { value, .. } => value.log2(),
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            BoundValue::Exact(r) => Some(r),
            BoundValue::Approx { .. } => None,
        }
    }

    /// `⌊value⌋`: code sizes are integers, so this is the usable bound.
    pub fn floor(&self) -> BigInt {
        match self {
            BoundValue::Exact(r) => r.floor().to_integer(),
            BoundValue::Approx { value, .. } => value.to_rational().floor().to_integer(),
        }
    }

    pub fn is_certified(&self) -> bool {
        match self {
            BoundValue::Exact(_) => true,
            BoundValue::Approx { certified, .. } => *certified,
        }
    }

    fn as_rational(&self) -> Rational {
        match self {
            BoundValue::Exact(r) => r.clone(),
            BoundValue::Approx { value, .. } => value.to_rational(),
        }
    }
}

impl Serialize for BoundValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("BoundValue", 5)?;
        st.serialize_field("floor", &self.floor().to_string())?;
        match self {
            BoundValue::Exact(r) => {
                st.serialize_field("exact", &r.to_string())?;
                st.serialize_field("approx", &self.to_f64())?;
                st.serialize_field("log2", &self.log2())?;
                st.serialize_field("certified", &true)?;
            }
            BoundValue::Approx { certified, .. } => {
                st.serialize_field("exact", &Option::<String>::None)?;
                st.serialize_field("approx", &self.to_f64())?;
                st.serialize_field("log2", &self.log2())?;
                st.serialize_field("certified", certified)?;
            }
        }
        st.end()
    }
}

fn resolve_route(route: ExpansionRoute, space: &Space, m: usize) -> ExpansionRoute {
    match route {
        ExpansionRoute::Auto if space.n() <= 64 && m <= 5 => ExpansionRoute::Triangular,
        ExpansionRoute::Auto => ExpansionRoute::GridSum,
        other => other,
    }
}

/// Builds the polynomial of a plan, expands it and checks the Delsarte
/// conditions: `f ≤ 0` on the grid from `s` down and `f_i ≥ 0`.
pub fn build(plan: &SnapPlan, space: &Space, d: i64, table: &KrawtchoukTable, options: &Options) -> Result<ImprovedPolynomial> {
    let n = space.n() as i64;
    let m = plan.degree();
    let reduced = m > n as usize;
    // f(t_z) ≤ 0 for every node t_z ≤ s, i.e. z ≥ d
    let grid_violations: Vec<i64> =
        (d..=n).filter(|&z| plan.scaled_value(n, z).is_positive()).collect();
    let top = m.min(n as usize);

    if let NumericMode::BigFloat { bits } = options.mode {
        let (coeffs, ratio) = approx_expansion(plan, space, table, top, bits);
        let negative: Vec<usize> = (1..coeffs.len()).filter(|&i| coeffs[i].signum() < 0).collect();
        let f0_nonpositive = coeffs[0].signum() <= 0;
        let feasibility = if grid_violations.is_empty() && negative.is_empty() && !f0_nonpositive {
            Feasibility::Uncertified
        } else {
            Feasibility::Infeasible { negative, f0_nonpositive, grid_violations }
        };
        let value = (!f0_nonpositive).then_some(BoundValue::Approx { value: ratio, certified: false });
        return Ok(ImprovedPolynomial {
            plan: plan.clone(),
            poly: None,
            reduced,
            expansion: None,
            approx_expansion: Some(ApproxExpansion { coeffs: coeffs.iter().map(BigFloat::to_f64).collect(), bits }),
            feasibility,
            value,
        });
    }

    let mut poly = None;
    let (expansion, f1) = match resolve_route(options.route, space, m) {
        ExpansionRoute::Triangular => {
            let p = reduced_polynomial(plan, space);
            let out = (table.expand(&p)?, p.eval(&Rational::one()));
            poly = Some(p);
            out
        }
        _ => {
            let values: Vec<BigInt> = (0..=n).map(|z| plan.scaled_value(n, z)).collect();
            let sums = table.grid_sums(&values, top);
            // f_i = 2^m S_i / (n^m q^n)
            let scale = Rational::new(
                pow_big(2, m as u64),
                pow_big(n, m as u64) * pow_big(space.q() as i64, n as u64),
            );
            let coeffs = sums.into_iter().map(|s| Rational::from_integer(s) * &scale).collect();
            let f1 = Rational::new(pow_big(2, m as u64) * &values[0], pow_big(n, m as u64));
            (Expansion::new(coeffs), f1)
        }
    };
    let negative = expansion.negative_degrees();
    let f0 = expansion.coeff(0);
    let f0_nonpositive = !f0.is_positive();
    let feasibility = if grid_violations.is_empty() && negative.is_empty() && !f0_nonpositive {
        Feasibility::Feasible
    } else {
        Feasibility::Infeasible { negative, f0_nonpositive, grid_violations }
    };
    let value = (!f0_nonpositive).then(|| BoundValue::Exact(f1 / f0));
    Ok(ImprovedPolynomial { plan: plan.clone(), poly, reduced, expansion: Some(expansion), approx_expansion: None, feasibility, value })
}

fn kraw_column_bigfloat(len: i64, q: u32, x: i64, max_degree: usize, bits: u32) -> Vec<BigFloat> {
    let q = q as i64;
    let c = |v: i64| BigFloat::from_bigint(&BigInt::from(v), bits);
    let mut out = vec![c(1)];
    if max_degree == 0 {
        return out;
    }
    out.push(c(len * (q - 1) - q * x));
    for a in 1..max_degree as i64 {
        let t1 = c(a + (q - 1) * (len - a) - q * x).mul(&out[a as usize]);
        let t2 = c((q - 1) * (len - a + 1)).mul(&out[a as usize - 1]);
        out.push(t1.sub(&t2).div(&c(a + 1)));
    }
    out
}

/// Floating counterpart of the grid sums: returns `S_i` scaled by
/// `2^m/(n^m q^n)` and the ratio `f(1)/f_0`.
fn approx_expansion(plan: &SnapPlan, space: &Space, table: &KrawtchoukTable, top: usize, bits: u32) -> (Vec<BigFloat>, BigFloat) {
    use rayon::prelude::*;
    let n = space.n() as i64;
    let m = plan.degree() as u64;
    let weights = table.weights();
    let zero = || vec![BigFloat::zero(bits); top + 1];
    let sums = (0..=n)
        .into_par_iter()
        .map(|z| {
            let v = plan.scaled_value(n, z);
            if v.is_zero() {
                return zero();
            }
            let w = BigFloat::from_bigint(&(&weights[z as usize] * v), bits);
            kraw_column_bigfloat(n, space.q(), z, top, bits).iter().map(|k| k.mul(&w)).collect()
        })
        .reduce(zero, |acc, v| acc.iter().zip(&v).map(|(a, b)| a.add(b)).collect());
    let scale = BigFloat::from_rational(
        &Rational::new(pow_big(2, m), pow_big(n, m) * pow_big(space.q() as i64, n as u64)),
        bits,
    );
    let coeffs: Vec<BigFloat> = sums.iter().map(|s| s.mul(&scale)).collect();
    let qn = BigFloat::from_bigint(&pow_big(space.q() as i64, n as u64), bits);
    let v0 = BigFloat::from_bigint(&plan.scaled_value(n, 0), bits);
    let ratio = if sums[0].is_zero() { BigFloat::zero(bits) } else { qn.mul(&v0).div(&sums[0]) };
    (coeffs, ratio)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Levenshtein,
    Refined,
    Closed3,
    Closed4,
    Lp,
}

/// A computed bound on `A_q(n, s)` with the evidence behind it.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub q: u32,
    pub n: u32,
    pub d: i64,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub s: Rational,
    pub method: Method,
    pub value: BoundValue,
    pub frame: Option<Frame>,
    #[serde(serialize_with = "crate::report::ser_opt_rational")]
    pub levenshtein: Option<Rational>,
    /// The polynomial that produced `value`, when it came from a snap plan.
    pub polynomial: Option<ImprovedPolynomial>,
    /// Every plan that was built (two or more only on exact grid hits).
    pub plans_built: usize,
    /// The refinement was abandoned and the Levenshtein value reported.
    pub fell_back: bool,
    pub diagnostics: Vec<String>,
}

pub(crate) fn check_distance(space: &Space, d: i64) -> Result<()> {
    if d < 1 || d > space.n() as i64 {
        return Err(Error::InvalidParameter(format!("distance d = {d} must lie in [1, {}]", space.n())));
    }
    Ok(())
}

/// The Levenshtein bound at distance `d` as a report.
pub fn levenshtein_report(space: &Space, d: i64) -> Result<BoundReport> {
    check_distance(space, d)?;
    let s = space.t_of_d(d);
    let frame = classify(space, &s)?;
    let value = lev_bound(&frame, space, &s)?;
    Ok(BoundReport {
        q: space.q(),
        n: space.n(),
        d,
        s,
        method: Method::Levenshtein,
        value: BoundValue::Exact(value.clone()),
        frame: Some(frame),
        levenshtein: Some(value),
        polynomial: None,
        plans_built: 0,
        fell_back: false,
        diagnostics: Vec::new(),
    })
}

/// Full pipeline: classify, locate roots, snap, build, and take the best
/// feasible `f(1)/f_0`. Falls back to the Levenshtein value when no plan is
/// feasible or when every feasible plan is worse.
pub fn refined_bound(space: &Space, d: i64) -> Result<BoundReport> {
    let table = KrawtchoukTable::new(*space);
    refined_bound_with(space, d, &table, &Options::default())
}

pub fn refined_bound_with(space: &Space, d: i64, table: &KrawtchoukTable, options: &Options) -> Result<BoundReport> {
    check_distance(space, d)?;
    let s = space.t_of_d(d);
    let frame = classify(space, &s)?;
    let lev = lev_bound(&frame, space, &s)?;
    let profile = lev_roots(&frame, space)?;
    let plans = snap(&profile, &frame, space)?;
    let mut diagnostics = Vec::new();
    let hits = plans.first().map_or(0, |p| p.ties.len());
    if hits > MAX_TIE_ENUMERATION {
        diagnostics.push(format!("{hits} interior roots lie on grid nodes; only the all-lower and all-upper plans were built"));
    }
    let mut best: Option<ImprovedPolynomial> = None;
    for plan in &plans {
        let built = build(plan, space, d, table, options)?;
        match &built.feasibility {
            Feasibility::Infeasible { negative, f0_nonpositive, grid_violations } => {
                diagnostics.push(format!(
                    "plan {:?} infeasible: negative f_i at {negative:?}, f_0 <= 0: {f0_nonpositive}, f > 0 at distances {grid_violations:?}",
                    plan.distances
                ));
                continue;
            }
            Feasibility::Feasible | Feasibility::Uncertified => {}
        }
        let better = match (&best, &built.value) {
            (None, Some(_)) => true,
            (Some(b), Some(v)) => v.as_rational() < b.value.as_ref().expect("kept plans have values").as_rational(),
            _ => false,
        };
        if better {
            best = Some(built);
        }
    }
    let mut report = BoundReport {
        q: space.q(),
        n: space.n(),
        d,
        s: s.clone(),
        method: Method::Refined,
        value: BoundValue::Exact(lev.clone()),
        frame: Some(frame),
        levenshtein: Some(lev.clone()),
        polynomial: None,
        plans_built: plans.len(),
        fell_back: true,
        diagnostics,
    };
    match best {
        None => report.diagnostics.push("no feasible snapped polynomial; reporting the Levenshtein bound".into()),
        Some(p) => {
            let value = p.value.clone().expect("kept plans have values");
            if value.as_rational() > lev {
                report.diagnostics.push(format!(
                    "best snapped polynomial gives {} above the Levenshtein bound; reporting the Levenshtein bound",
                    value.to_f64()
                ));
                report.polynomial = Some(p);
            } else {
                report.value = value;
                report.polynomial = Some(p);
                report.fell_back = false;
            }
        }
    }
    Ok(report)
}
