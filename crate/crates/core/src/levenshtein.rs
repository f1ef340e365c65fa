//! Levenshtein's universal bound: interval classification of `s`, the bound
//! `L_m(n, s; q)` and the grid-located roots of the extremal polynomial.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::krawtchouk::{
    adjacent_polys, kraw_column, kraw_column_rational, prefix_variations, sign_of,
    AdjacentKind, Space,
};
use crate::numkit::{
    binomial, greatest_root, int, pow_big, rat, BigInt, DensePoly, GridCell, Rational,
    RootBracket, RootLocation, SturmSequence,
};

/// One end of a Levenshtein interval `I_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Endpoint {
    /// `t_0^{1,1} = −1`.
    MinusOne,
    /// The sentinel `t_n^{1,0} = 1`.
    One,
    /// Greatest root of the adjacent polynomial of the given kind and
    /// degree. `roots_above_s` is the certified number of its roots strictly
    /// greater than `s`: zero for a left end, positive for a right end.
    GreatestRoot { kind: AdjacentKind, degree: usize, roots_above_s: usize },
}

impl Endpoint {
    /// Certified bracket around the endpoint value.
    pub fn bracket(&self, space: &Space) -> Result<RootBracket> {
        match *self {
            Endpoint::MinusOne => Ok(RootBracket { lo: int(-2), hi: int(-1), count: 1 }),
            Endpoint::One => Ok(RootBracket { lo: int(0), hi: int(1), count: 1 }),
            Endpoint::GreatestRoot { kind, degree, .. } => {
                let p = family_poly(space, kind, degree);
                greatest_root(&p, &int(1))
            }
        }
    }
}

/// The Levenshtein regime of `s`: `s ∈ I_m`, `m = 2k − 1 + ε`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Frame {
    pub m: usize,
    pub k: usize,
    pub eps: u8,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub s: Rational,
    /// `s` is a node of the inner-product grid.
    pub on_grid: bool,
    /// Every endpoint comparison was decided in exact arithmetic.
    pub certified: bool,
    pub left: Endpoint,
    pub right: Endpoint,
}

impl Frame {
    /// The adjacent family `(1, ε)` whose members define the root equation.
    pub fn root_family(&self) -> AdjacentKind {
        if self.eps == 0 {
            AdjacentKind::OneZero
        } else {
            AdjacentKind::OneOne
        }
    }
}

/// Normalized family member without the validity check of
/// [`crate::krawtchouk::adjacent_eval`]; classification needs the length-0
/// `(1,1)` system at `n = 2`.
fn family_value(space: &Space, kind: AdjacentKind, i: usize, t: &Rational) -> Rational {
    let x = space.d_of_t(t) + int(kind.shift());
    let col = kraw_column_rational(kind.length(space), space.q(), &x, i);
    &col[i] / Rational::from_integer(kind.norm(space, i))
}

fn family_poly(space: &Space, kind: AdjacentKind, i: usize) -> DensePoly {
    adjacent_polys(space, kind, i).pop().expect("degree i computed")
}

fn check_range(s: &Rational) -> Result<()> {
    if s < &int(-1) || s >= &int(1) {
        return Err(Error::OutOfRange(s.to_string()));
    }
    Ok(())
}

/// Locates `s ∈ [−1, 1)` in its Levenshtein interval.
///
/// Walks `k` upward. Whether `s` lies above the greatest root of an
/// adjacent polynomial is read off the sign variations of the family's
/// values at `s` (the families are orthogonal with positive leading
/// coefficients), so every decision is exact.
pub fn classify(space: &Space, s: &Rational) -> Result<Frame> {
    check_range(s)?;
    let n = space.n() as usize;
    let on_grid = matches!(space.cell_of(s), Some(GridCell::Node(_)));
    let v10 = prefix_variations(AdjacentKind::OneZero.signs_at(space, s, n));
    let v11 = prefix_variations(AdjacentKind::OneOne.signs_at(space, s, n - 1));
    let root = |kind, degree: usize, counts: &Vec<usize>| Endpoint::GreatestRoot {
        kind,
        degree,
        roots_above_s: counts[degree],
    };
    for k in 1..=n {
        let left = if k == 1 { Endpoint::MinusOne } else { root(AdjacentKind::OneOne, k - 1, &v11) };
        if k == n || v10[k] >= 1 {
            let right = if k == n { Endpoint::One } else { root(AdjacentKind::OneZero, k, &v10) };
            return Ok(Frame { m: 2 * k - 1, k, eps: 0, s: s.clone(), on_grid, certified: true, left, right });
        }
        if v11[k] >= 1 {
            return Ok(Frame {
                m: 2 * k,
                k,
                eps: 1,
                s: s.clone(),
                on_grid,
                certified: true,
                left: root(AdjacentKind::OneZero, k, &v10),
                right: root(AdjacentKind::OneOne, k, &v11),
            });
        }
    }
    Err(Error::Internal(format!("no Levenshtein interval contains {s}")))
}

/// `Σ_{j=0}^{k} C(len, j)(q−1)^j`.
pub fn ball_sum(len: u32, q: u32, k: usize) -> BigInt {
    (0..=k as u64).map(|j| binomial(len as u64, j) * pow_big(q as i64 - 1, j)).sum()
}

/// `L_m(n, s; q) = q^ε (1 − Q_{k−1}^{(1,ε)}(s) / Q_k^{(0,ε)}(s)) Σ_{j<k} C(n−ε, j)(q−1)^j`.
pub fn lev_bound(frame: &Frame, space: &Space, s: &Rational) -> Result<Rational> {
    let k = frame.k;
    let (top, low) = if frame.eps == 0 {
        (AdjacentKind::Plain, AdjacentKind::OneZero)
    } else {
        (AdjacentKind::ZeroOne, AdjacentKind::OneOne)
    };
    let denom = family_value(space, top, k, s);
    if denom.is_zero() {
        return Err(Error::Boundary(format!(
            "Q_{k}^{{(0,{})}}({s}) vanishes at the end of I_{}",
            frame.eps, frame.m
        )));
    }
    let numer = family_value(space, low, k - 1, s);
    let sum = ball_sum(space.n() - frame.eps as u32, space.q(), k - 1);
    let factor = pow_big(space.q() as i64, frame.eps as u64);
    Ok((int(1) - numer / denom) * Rational::from_integer(sum * factor))
}

/// Classifies and evaluates in one step.
pub fn levenshtein(space: &Space, s: &Rational) -> Result<(Frame, Rational)> {
    let frame = classify(space, s)?;
    let value = lev_bound(&frame, space, s)?;
    Ok((frame, value))
}

/// `j = q(n − 1 − d) − (n − 2)`, the parametrization `d = n − 1 − (n − 2 + j)/q`.
pub fn j_of_d(space: &Space, d: i64) -> Rational {
    let (n, q) = (space.n() as i64, space.q() as i64);
    int(q * (n - 1 - d) - (n - 2))
}

/// The same parametrization for an arbitrary inner product.
pub fn j_of_s(space: &Space, s: &Rational) -> Rational {
    let (n, q) = (space.n() as i64, space.q() as i64);
    (int(n - 1) - space.d_of_t(s)) * int(q) - int(n - 2)
}

/// Bracket around `√radicand` between consecutive integers (degenerate when
/// the radicand is a perfect square).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Surd {
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub radicand: BigInt,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub floor: BigInt,
    pub exact: bool,
}

impl Surd {
    pub fn new(radicand: BigInt) -> Self {
        let floor = radicand.sqrt();
        let exact = &floor * &floor == radicand;
        Self { radicand, floor, exact }
    }

    pub fn to_f64(&self) -> f64 {
        crate::numkit::to_f64(&Rational::from_integer(self.radicand.clone())).sqrt()
    }

    /// `√radicand > x`, decided by squaring.
    pub fn exceeds(&self, x: &Rational) -> bool {
        x.is_negative() || Rational::from_integer(self.radicand.clone()) > x * x
    }
}

/// The surds `S_1 = √(q² + 4(q−1)(n−2))`, `S_2 = √(q² + 4(q−1)(n−3))` and the
/// `j`-ranges `J_3 = [0, (S_1 − q)/2)`, `J_4 = [(S_1 − q)/2, (S_2 + q)/2 − 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RangeParams {
    pub s1: Surd,
    pub s2: Surd,
    q: u32,
}

impl RangeParams {
    pub fn new(space: &Space) -> Self {
        let (n, q) = (space.n() as i64, space.q() as i64);
        let s1 = Surd::new(BigInt::from(q * q + 4 * (q - 1) * (n - 2)));
        let s2 = Surd::new(BigInt::from(q * q + 4 * (q - 1) * (n - 3)));
        Self { s1, s2, q: space.q() }
    }

    /// `j ∈ J_3`.
    pub fn in_j3(&self, j: &Rational) -> bool {
        let q = int(self.q as i64);
        !j.is_negative() && self.s1.exceeds(&(j * int(2) + &q))
    }

    /// `j ∈ J_4`.
    pub fn in_j4(&self, j: &Rational) -> bool {
        let q = int(self.q as i64);
        !self.s1.exceeds(&(j * int(2) + &q)) && self.s2.exceeds(&(j * int(2) + int(2) - &q))
    }

    pub fn j3_upper(&self) -> f64 {
        (self.s1.to_f64() - self.q as f64) / 2.0
    }

    pub fn j4_upper(&self) -> f64 {
        (self.s2.to_f64() + self.q as f64) / 2.0 - 1.0
    }
}

/// A root of the extremal polynomial together with its grid position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocatedRoot {
    pub value: RootLocation,
    pub cell: GridCell,
    /// 2 for the interior roots, 1 for `s` and for `−1` when `ε = 1`.
    pub multiplicity: u8,
}

/// The roots `α_0 < … < α_{k−1+ε} = s` of Levenshtein's polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootProfile {
    pub alphas: Vec<LocatedRoot>,
}

impl RootProfile {
    /// The roots of multiplicity two.
    pub fn interior(&self) -> impl Iterator<Item = &LocatedRoot> {
        self.alphas.iter().filter(|r| r.multiplicity == 2)
    }
}

fn cell_or_internal(space: &Space, x: &Rational) -> Result<GridCell> {
    space.cell_of(x).ok_or_else(|| Error::RootAnomaly(format!("root {x} lies outside [-1, 1]")))
}

/// Root of the linear factor for `m = 3`: `α_0 = −1 + 2j(n−1)/(nq(j+q−1))`.
pub fn alpha0_m3(space: &Space, j: &Rational) -> Rational {
    let (n, q) = (space.n() as i64, space.q() as i64);
    int(-1) + j * int(2 * (n - 1)) / ((j + int(q - 1)) * int(n * q))
}

/// Interior root for `m = 4`: `α_1 = −(n−2)(j(q−2) + 2(q−1))/(nqj)`.
pub fn alpha1_m4(space: &Space, j: &Rational) -> Rational {
    let (n, q) = (space.n() as i64, space.q() as i64);
    -(j * int(q - 2) + int(2 * (q - 1))) * int(n - 2) / (j * int(n * q))
}

/// `A(t) = [P_k(t)P_{k−1}(s) − P_k(s)P_{k−1}(t)] / (t − s)` with
/// `P_i = Q_i^{(1,ε)}`; its roots are the interior `α_i`.
pub fn interior_factor(frame: &Frame, space: &Space) -> Result<DensePoly> {
    let polys = adjacent_polys(space, frame.root_family(), frame.k);
    let s = &frame.s;
    let pk = &polys[frame.k];
    let pk1 = &polys[frame.k - 1];
    let r = &pk.scale(&pk1.eval(s)) - &pk1.scale(&pk.eval(s));
    let (a, rem) = r.divmod(&DensePoly::linear(-s.clone(), int(1)))?;
    if !rem.is_zero() {
        return Err(Error::Internal("s is not a root of the root equation".into()));
    }
    Ok(a)
}

/// Levenshtein's polynomial `(t − s)(t + 1)^ε A(t)²`.
pub fn lev_polynomial(frame: &Frame, space: &Space) -> Result<DensePoly> {
    let a = interior_factor(frame, space)?;
    let mut f = &a * &a;
    f = f.mul_linear(&-frame.s.clone());
    if frame.eps == 1 {
        f = f.mul_linear(&int(1));
    }
    Ok(f)
}

/// Signs of `A` at grid nodes below `s`. For `t_z < s`,
/// `sign A(t_z) = −sign W(z)` with `W(z) = K_k(z')K_{k−1}(d') − K_k(d')K_{k−1}(z')`
/// taken in the `(1,ε)` system, primes marking the shifted arguments of the
/// node and of `s`.
struct NodeSigns<'a> {
    space: &'a Space,
    kind: AdjacentKind,
    k: usize,
    at_s: (Rational, Rational),
}

impl<'a> NodeSigns<'a> {
    fn new(space: &'a Space, frame: &Frame) -> Self {
        let kind = frame.root_family();
        let x = space.d_of_t(&frame.s) + int(kind.shift());
        let col = kraw_column_rational(kind.length(space), space.q(), &x, frame.k);
        let at_s = (col[frame.k].clone(), col[frame.k - 1].clone());
        Self { space, kind, k: frame.k, at_s }
    }

    fn sign_a(&self, z: i64) -> i32 {
        let col = kraw_column(self.kind.length(self.space), self.space.q(), z + self.kind.shift(), self.k);
        let kk = Rational::from_integer(col[self.k].clone());
        let kk1 = Rational::from_integer(col[self.k - 1].clone());
        let w = kk * &self.at_s.1 - &self.at_s.0 * kk1;
        -sign_of(&w)
    }
}

/// The roots of Levenshtein's polynomial, each placed in its grid cell.
pub fn lev_roots(frame: &Frame, space: &Space) -> Result<RootProfile> {
    let s = &frame.s;
    let mut alphas = Vec::new();
    if frame.eps == 1 {
        alphas.push(LocatedRoot {
            value: RootLocation::Exact(int(-1)),
            cell: GridCell::Node(0),
            multiplicity: 1,
        });
    }
    let interior = match frame.k {
        1 => Vec::new(),
        2 => {
            let j = j_of_s(space, s);
            let alpha = if frame.eps == 0 { alpha0_m3(space, &j) } else { alpha1_m4(space, &j) };
            vec![(RootLocation::Exact(alpha.clone()), cell_or_internal(space, &alpha)?)]
        }
        _ => scan_interior(frame, space)?,
    };
    for (value, cell) in interior {
        if frame.eps == 1 && value == RootLocation::Exact(int(-1)) {
            return Err(Error::RootAnomaly("interior root coincides with -1".into()));
        }
        alphas.push(LocatedRoot { value, cell, multiplicity: 2 });
    }
    alphas.push(LocatedRoot {
        value: RootLocation::Exact(s.clone()),
        cell: cell_or_internal(space, s)?,
        multiplicity: 1,
    });
    Ok(RootProfile { alphas })
}

/// Interior roots for `k ≥ 3`: exact sign scan of `A` over the grid nodes
/// below `s`, with a Sturm-sequence fallback when the scan cannot account for
/// all `k − 1` roots (several roots in one cell).
fn scan_interior(frame: &Frame, space: &Space) -> Result<Vec<(RootLocation, GridCell)>> {
    let grid = space.grid();
    let s = &frame.s;
    let below: Vec<usize> = (0..grid.len()).filter(|&i| grid.node(i) < s).collect();
    let signs_at = NodeSigns::new(space, frame);
    let signs: Vec<i32> = {
        use rayon::prelude::*;
        below.par_iter().map(|&i| signs_at.sign_a(space.distance_of_index(i))).collect()
    };
    let mut found = Vec::new();
    for (pos, &i) in below.iter().enumerate() {
        if signs[pos] == 0 {
            found.push((RootLocation::Exact(grid.node(i).clone()), GridCell::Node(i)));
            continue;
        }
        if pos > 0 && signs[pos - 1] != 0 && signs[pos - 1] != signs[pos] {
            let lo = grid.node(below[pos - 1]).clone();
            let hi = grid.node(i).clone();
            found.push((RootLocation::Bracket(RootBracket { lo, hi, count: 1 }), GridCell::Cell(i)));
        }
    }
    // A(s) > 0 by the Christoffel–Darboux identity
    if let (Some(&top), Some(&last)) = (below.last(), signs.last()) {
        if last < 0 {
            let cell = match space.cell_of(s) {
                Some(GridCell::Node(i)) | Some(GridCell::Cell(i)) => GridCell::Cell(i),
                None => return Err(Error::OutOfRange(s.to_string())),
            };
            let lo = grid.node(top).clone();
            found.push((RootLocation::Bracket(RootBracket { lo, hi: s.clone(), count: 1 }), cell));
        }
    }
    if found.len() == frame.k - 1 {
        return Ok(found);
    }
    sturm_interior(frame, space)
}

fn sturm_interior(frame: &Frame, space: &Space) -> Result<Vec<(RootLocation, GridCell)>> {
    let a = interior_factor(frame, space)?;
    let sf = a.squarefree_part();
    if sf.degree() != a.degree() {
        return Err(Error::RootAnomaly(format!(
            "interior factor of degree {} has a repeated root",
            frame.k - 1
        )));
    }
    let seq = SturmSequence::new(&a);
    let grid = space.grid();
    let mut out = Vec::new();
    let lo0 = int(-1) - rat(1, space.n() as i64);
    let mut stack = vec![(lo0, frame.s.clone())];
    let mut brackets = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        let c = seq.count(&lo, &hi);
        if c == 0 {
            continue;
        }
        if c == 1 {
            brackets.push(RootBracket { lo, hi, count: 1 });
            continue;
        }
        let mid = (&lo + &hi) / int(2);
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    brackets.sort_by(|a, b| a.lo.cmp(&b.lo));
    if brackets.len() != frame.k - 1 {
        return Err(Error::RootAnomaly(format!(
            "expected {} interior roots below s, isolated {}",
            frame.k - 1,
            brackets.len()
        )));
    }
    for b in brackets {
        let cell = crate::numkit::locate_in_grid(&a, &b, &grid)?;
        let value = match cell {
            GridCell::Node(i) => RootLocation::Exact(grid.node(i).clone()),
            GridCell::Cell(i) => {
                let lo = if b.lo > *grid.node(i - 1) { b.lo.clone() } else { grid.node(i - 1).clone() };
                let hi = if b.hi < *grid.node(i) { b.hi.clone() } else { grid.node(i).clone() };
                RootLocation::Bracket(RootBracket { lo, hi, count: 1 })
            }
        };
        if value == RootLocation::Exact(int(-1)) && frame.eps == 1 {
            return Err(Error::RootAnomaly("interior root coincides with -1".into()));
        }
        out.push((value, cell));
    }
    Ok(out)
}

/// Grid indices `i` (with `t_i < 1`) whose node lies in `I_m`, as an
/// inclusive range. Uses that the degree is non-decreasing in `s`.
pub fn grid_range(space: &Space, m: usize) -> Result<Option<(usize, usize)>> {
    let n = space.n() as usize;
    let grid = space.grid();
    let degree = |i: usize| classify(space, grid.node(i)).map(|f| f.m);
    // first index with degree ≥ target
    let first_at_least = |target: usize| -> Result<usize> {
        let (mut lo, mut hi) = (0usize, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if degree(mid)? >= target {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(lo)
    };
    let start = first_at_least(m)?;
    let end = first_at_least(m + 1)?;
    if start >= end {
        return Ok(None);
    }
    Ok(Some((start, end - 1)))
}

/// Distances `d` whose inner product `1 − 2d/n` lies in `I_m`, ascending.
pub fn distance_range(space: &Space, m: usize) -> Result<Option<(i64, i64)>> {
    Ok(grid_range(space, m)?.map(|(a, b)| (space.distance_of_index(b), space.distance_of_index(a))))
}

/// Value of the alternative one-line formula, used as a cross-check: the
/// ratio `f(1)/f_0` for Levenshtein's polynomial.
pub fn bound_from_polynomial(frame: &Frame, space: &Space) -> Result<Rational> {
    let f = lev_polynomial(frame, space)?;
    let reduced = crate::krawtchouk::reduce_mod_grid(space, &f);
    let table = crate::krawtchouk::KrawtchoukTable::new(*space);
    let e = table.expand(&reduced)?;
    let f0 = e.coeff(0);
    if !f0.is_positive() {
        return Err(Error::Infeasible(vec![0]));
    }
    Ok(reduced.eval(&Rational::one()) / f0)
}
