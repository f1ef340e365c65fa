use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::poly::DensePoly;
use super::rational::{int, Rational};
use crate::error::{Error, Result};
use crate::krawtchouk::Grid;

/// Half-open interval `(lo, hi]` holding exactly `count` distinct real roots
/// of the polynomial it was computed for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootBracket {
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub lo: Rational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub hi: Rational,
    pub count: usize,
}

/// Either a rational root found exactly or a bracket around an irrational
/// (or not yet resolved) one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootLocation {
    Exact(#[serde(serialize_with = "crate::report::ser_rational")] Rational),
    Bracket(RootBracket),
}

impl RootBracket {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// One bisection step for a bracket holding a single root of `p`.
    /// The returned bracket is nested in `self` and half as wide.
    pub fn bisect(&self, p: &DensePoly) -> RootLocation {
        debug_assert_eq!(self.count, 1);
        let sf = p.squarefree_part();
        bisect_squarefree(&sf, self)
    }

    /// Bisects until the width is at most `width`. Stops early on an exact
    /// rational hit.
    pub fn refine(&self, p: &DensePoly, width: &Rational) -> RootLocation {
        let sf = p.squarefree_part();
        if sf.sign_at(&self.hi) == 0 {
            return RootLocation::Exact(self.hi.clone());
        }
        let mut current = self.clone();
        while &current.width() > width {
            match bisect_squarefree(&sf, &current) {
                RootLocation::Bracket(b) => current = b,
                exact => return exact,
            }
        }
        RootLocation::Bracket(current)
    }
}

fn bisect_squarefree(sf: &DensePoly, b: &RootBracket) -> RootLocation {
    let s_hi = sf.sign_at(&b.hi);
    if s_hi == 0 {
        return RootLocation::Exact(b.hi.clone());
    }
    let mid = (&b.lo + &b.hi) / int(2);
    let s_mid = sf.sign_at(&mid);
    if s_mid == 0 {
        return RootLocation::Exact(mid);
    }
    if s_mid == s_hi {
        RootLocation::Bracket(RootBracket { lo: b.lo.clone(), hi: mid, count: 1 })
    } else {
        RootLocation::Bracket(RootBracket { lo: mid, hi: b.hi.clone(), count: 1 })
    }
}

/// Canonical Sturm chain of the squarefree part of a polynomial.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    chain: Vec<DensePoly>,
}

impl SturmSequence {
    pub fn new(p: &DensePoly) -> Self {
        let sf = p.squarefree_part();
        let mut chain = vec![sf.clone()];
        if sf.degree().unwrap_or(0) >= 1 {
            chain.push(sf.derivative());
            loop {
                let len = chain.len();
                let (_, r) = chain[len - 2]
                    .divmod(&chain[len - 1])
                    .expect("chain members are nonzero");
                if r.is_zero() {
                    break;
                }
                // scaling by a positive constant keeps every sign intact
                let lead = r.leading().expect("nonzero").abs();
                chain.push((-&r).scale(&lead.recip()));
            }
        }
        Self { chain }
    }

    pub fn squarefree(&self) -> &DensePoly {
        &self.chain[0]
    }

    /// Sign variations of the chain at `x`, zeros dropped.
    pub fn variations(&self, x: &Rational) -> usize {
        count_variations(self.chain.iter().map(|p| p.sign_at(x)))
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        count_variations(self.chain.iter().map(|p| {
            let lead = p.leading().map_or(0, |c| if c.is_positive() { 1 } else { -1 });
            let deg = p.degree().unwrap_or(0);
            if positive || deg % 2 == 0 {
                lead
            } else {
                -lead
            }
        }))
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &Rational, hi: &Rational) -> usize {
        if lo >= hi {
            return 0;
        }
        self.variations(lo).saturating_sub(self.variations(hi))
    }

    pub fn total_real_roots(&self) -> usize {
        self.variations_at_infinity(false)
            .saturating_sub(self.variations_at_infinity(true))
    }
}

fn count_variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut changes = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Number of distinct real roots of `p` in `(lo, hi]`.
pub fn sturm_count(p: &DensePoly, lo: &Rational, hi: &Rational) -> usize {
    SturmSequence::new(p).count(lo, hi)
}

/// Bracket around the greatest real root of `p` not exceeding `hint_hi`.
pub fn greatest_root(p: &DensePoly, hint_hi: &Rational) -> Result<RootBracket> {
    if p.degree().unwrap_or(0) < 1 {
        return Err(Error::NoRealRoot);
    }
    let seq = SturmSequence::new(p);
    let bound = p.cauchy_bound();
    let mut lo = -bound.clone();
    let mut hi = if hint_hi > &bound { bound } else { hint_hi.clone() };
    if seq.count(&lo, &hi) == 0 {
        return Err(Error::NoRealRoot);
    }
    loop {
        if seq.count(&lo, &hi) == 1 {
            return Ok(RootBracket { lo, hi, count: 1 });
        }
        let mid = (&lo + &hi) / int(2);
        if seq.count(&mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Position of a root relative to the inner-product grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GridCell {
    /// Strictly inside `(t_{j-1}, t_j)`.
    Cell(usize),
    /// Exactly on the node `t_j`.
    Node(usize),
}

impl GridCell {
    /// Index `j` of the upper end of the cell, or of the node itself.
    pub fn index(&self) -> usize {
        match *self {
            GridCell::Cell(j) | GridCell::Node(j) => j,
        }
    }
}

/// Locates the single root held by `bracket` relative to the nodes of `grid`.
pub fn locate_in_grid(p: &DensePoly, bracket: &RootBracket, grid: &Grid) -> Result<GridCell> {
    if bracket.count != 1 {
        return Err(Error::Uncertified(format!(
            "bracket holds {} roots, expected exactly one",
            bracket.count
        )));
    }
    let seq = SturmSequence::new(p);
    let sf = seq.squarefree();
    let inside: Vec<usize> = (0..grid.len())
        .filter(|&i| grid.node(i) > &bracket.lo && grid.node(i) <= &bracket.hi)
        .collect();
    for &i in &inside {
        if sf.eval(grid.node(i)).is_zero() {
            return Ok(GridCell::Node(i));
        }
    }
    let mut cuts = vec![bracket.lo.clone()];
    cuts.extend(inside.iter().map(|&i| grid.node(i).clone()));
    if cuts.last() != Some(&bracket.hi) {
        cuts.push(bracket.hi.clone());
    }
    for w in cuts.windows(2) {
        if seq.count(&w[0], &w[1]) == 1 {
            let upper = &w[1];
            let j = (0..grid.len()).find(|&i| grid.node(i) >= upper).ok_or_else(|| {
                Error::Uncertified("root lies above the grid".into())
            })?;
            if j == 0 {
                return Err(Error::Uncertified("root lies below the grid".into()));
            }
            return Ok(GridCell::Cell(j));
        }
    }
    Err(Error::Uncertified("root not found inside the bracket".into()))
}

impl RootLocation {
    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            RootLocation::Exact(r) => r == x,
            RootLocation::Bracket(b) => &b.lo < x && x <= &b.hi,
        }
    }

    pub fn midpoint(&self) -> Rational {
        match self {
            RootLocation::Exact(r) => r.clone(),
            RootLocation::Bracket(b) => (&b.lo + &b.hi) / (Rational::one() + Rational::one()),
        }
    }
}
