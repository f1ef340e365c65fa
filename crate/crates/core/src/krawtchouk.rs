//! Krawtchouk polynomials of the Hamming scheme, Levenshtein's adjacent
//! systems, the inner-product grid and exact expansions in the Krawtchouk
//! basis.
//!
//! Polynomials are kept in the inner-product variable `t`; the distance
//! `d = n(1 − t)/2` only appears where values are taken at integer distances.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Signed, Zero};
use parking_lot::RwLock;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkit::{binomial, int, pow_big, rat, BigInt, DensePoly, GridCell, Rational};

/// The Hamming space `H(n, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Space {
    n: u32,
    q: u32,
}

impl Space {
    pub fn new(n: u32, q: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("code length n = {n} must be at least 2")));
        }
        if q < 2 {
            return Err(Error::InvalidParameter(format!("alphabet size q = {q} must be at least 2")));
        }
        Ok(Self { n, q })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Inner product `1 − 2d/n` of distance `d`.
    pub fn t_of_d(&self, d: i64) -> Rational {
        int(1) - rat(2 * d, self.n as i64)
    }

    /// Distance `n(1 − t)/2`; integral exactly on the grid.
    pub fn d_of_t(&self, t: &Rational) -> Rational {
        (int(1) - t) * rat(self.n as i64, 2)
    }

    /// `r_i = (q − 1)^i C(n, i)`, also the weight of distance `i`.
    pub fn r(&self, i: u32) -> BigInt {
        pow_big(self.q as i64 - 1, i as u64) * binomial(self.n as u64, i as u64)
    }

    /// `r_0, …, r_n`, built incrementally.
    pub fn weights(&self) -> Vec<BigInt> {
        let (n, q1) = (self.n as u64, self.q as u64 - 1);
        let mut out = Vec::with_capacity(n as usize + 1);
        let mut r = BigInt::one();
        for z in 0..=n {
            out.push(r.clone());
            r = r * (q1 * (n - z)) / (z + 1);
        }
        out
    }

    pub fn grid(&self) -> Grid {
        Grid::new(*self)
    }

    /// Distance of the grid node `t_i`.
    pub fn distance_of_index(&self, i: usize) -> i64 {
        self.n as i64 - i as i64
    }

    pub fn index_of_distance(&self, d: i64) -> usize {
        (self.n as i64 - d) as usize
    }

    /// Grid cell of a rational inner product in `[-1, 1]`.
    pub fn cell_of(&self, x: &Rational) -> Option<GridCell> {
        let pos = (x + int(1)) * rat(self.n as i64, 2);
        if pos.is_negative() || pos > int(self.n as i64) {
            return None;
        }
        let floor = pos.floor().to_integer();
        let i: usize = floor.try_into().ok()?;
        if pos.is_integer() {
            Some(GridCell::Node(i))
        } else {
            Some(GridCell::Cell(i + 1))
        }
    }
}

/// The inner products `t_i = −1 + 2i/n`, `i = 0..=n`.
#[derive(Clone, Debug)]
pub struct Grid {
    space: Space,
    nodes: Vec<Rational>,
}

impl Grid {
    fn new(space: Space) -> Self {
        let n = space.n as i64;
        let nodes = (0..=n).map(|i| int(-1) + rat(2 * i, n)).collect();
        Self { space, nodes }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, i: usize) -> &Rational {
        &self.nodes[i]
    }

    pub fn nodes(&self) -> &[Rational] {
        &self.nodes
    }

    pub fn index_of(&self, t: &Rational) -> Option<usize> {
        match self.space.cell_of(t)? {
            GridCell::Node(i) => Some(i),
            GridCell::Cell(_) => None,
        }
    }

    /// `g(t) = Π (t − t_i)`, vanishing on the whole grid.
    pub fn annihilator(&self) -> DensePoly {
        DensePoly::from_roots(&self.nodes)
    }
}

/// `K_0(x), …, K_{max_degree}(x)` for length `len`, alphabet `q` and an
/// integer argument, via the three-term recurrence. All values are integers.
pub fn kraw_column(len: i64, q: u32, x: i64, max_degree: usize) -> Vec<BigInt> {
    let q = q as i64;
    let mut out = Vec::with_capacity(max_degree + 1);
    out.push(BigInt::one());
    if max_degree == 0 {
        return out;
    }
    out.push(BigInt::from(len * (q - 1) - q * x));
    for i in 1..max_degree as i64 {
        let a = BigInt::from(i + (q - 1) * (len - i) - q * x);
        let b = BigInt::from((q - 1) * (len - i + 1));
        let next = (a * &out[i as usize] - b * &out[i as usize - 1]) / (i + 1);
        out.push(next);
    }
    out
}

/// `K_0(x), …, K_{max_degree}(x)` for a rational argument.
pub fn kraw_column_rational(len: i64, q: u32, x: &Rational, max_degree: usize) -> Vec<Rational> {
    let q = q as i64;
    let mut out = Vec::with_capacity(max_degree + 1);
    out.push(Rational::one());
    if max_degree == 0 {
        return out;
    }
    out.push(int(len * (q - 1)) - x * int(q));
    for a in 1..max_degree as i64 {
        let next = ((int(a + (q - 1) * (len - a)) - x * int(q)) * &out[a as usize]
            - int((q - 1) * (len - a + 1)) * &out[a as usize - 1])
            / int(a + 1);
        out.push(next);
    }
    out
}

/// Sign changes along a sequence of signs, zeros skipped.
pub fn sign_variations(signs: impl IntoIterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut changes = 0;
    for s in signs.into_iter().filter(|&s| s != 0) {
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Running sign-variation counts: entry `i` counts the changes among the
/// first `i + 1` signs.
pub fn prefix_variations(signs: impl IntoIterator<Item = i32>) -> Vec<usize> {
    let mut last = 0;
    let mut changes = 0;
    let mut out = Vec::new();
    for s in signs {
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
        out.push(changes);
    }
    out
}

pub(crate) fn sign_of_int(v: &BigInt) -> i32 {
    match v.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

pub(crate) fn sign_of(v: &Rational) -> i32 {
    sign_of_int(v.numer())
}

/// `K_i(x)` for a rational argument.
pub fn kraw_rational(len: i64, q: u32, i: usize, x: &Rational) -> Rational {
    let q = q as i64;
    let mut prev = Rational::one();
    if i == 0 {
        return prev;
    }
    let mut cur = int(len * (q - 1)) - x * int(q);
    for a in 1..i as i64 {
        let next = ((int(a + (q - 1) * (len - a)) - x * int(q)) * &cur
            - int((q - 1) * (len - a + 1)) * &prev)
            / int(a + 1);
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `K_0, …, K_{max_degree}` as polynomials in `t`, where the Krawtchouk
/// argument is the linear form `x = c0 + c1 t`.
fn kraw_polys(len: i64, q: u32, argument: &DensePoly, max_degree: usize) -> Vec<DensePoly> {
    let qi = q as i64;
    let mut out = vec![DensePoly::one()];
    if max_degree == 0 {
        return out;
    }
    out.push(&DensePoly::constant(int(len * (qi - 1))) - &argument.scale(&int(qi)));
    for a in 1..max_degree as i64 {
        let factor = &DensePoly::constant(int(a + (qi - 1) * (len - a))) - &argument.scale(&int(qi));
        let next = (&(&factor * &out[a as usize])
            - &out[a as usize - 1].scale(&int((qi - 1) * (len - a + 1))))
            .scale(&rat(1, a + 1));
        out.push(next);
    }
    out
}

/// Which normalized family: the plain Krawtchouk system or one of
/// Levenshtein's adjacent systems `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum AdjacentKind {
    /// `(0,0)`: `K_i^{(n,q)}(d) / r_i`.
    Plain,
    /// `(1,0)`: `K_i^{(n−1,q)}(d−1) / Σ_{j≤i} C(n,j)(q−1)^j`.
    OneZero,
    /// `(1,1)`: `K_i^{(n−2,q)}(d−1) / Σ_{j≤i} C(n−1,j)(q−1)^j`.
    OneOne,
    /// `(0,1)`: `K_i^{(n−1,q)}(d) / (C(n−1,i)(q−1)^i)`.
    ZeroOne,
}

impl AdjacentKind {
    /// Length of the underlying Krawtchouk system.
    pub fn length(self, space: &Space) -> i64 {
        let n = space.n as i64;
        match self {
            AdjacentKind::Plain => n,
            AdjacentKind::OneZero | AdjacentKind::ZeroOne => n - 1,
            AdjacentKind::OneOne => n - 2,
        }
    }

    /// Offset added to the distance before evaluating.
    pub fn shift(self) -> i64 {
        match self {
            AdjacentKind::OneZero | AdjacentKind::OneOne => -1,
            AdjacentKind::Plain | AdjacentKind::ZeroOne => 0,
        }
    }

    /// Positive normalizer making the value at `t = 1` equal to one.
    pub fn norm(self, space: &Space, i: usize) -> BigInt {
        let n = space.n as u64;
        let q = space.q as i64;
        let i = i as u64;
        match self {
            AdjacentKind::Plain => pow_big(q - 1, i) * binomial(n, i),
            AdjacentKind::ZeroOne => pow_big(q - 1, i) * binomial(n - 1, i),
            AdjacentKind::OneZero => (0..=i).map(|j| binomial(n, j) * pow_big(q - 1, j)).sum(),
            AdjacentKind::OneOne => (0..=i).map(|j| binomial(n - 1, j) * pow_big(q - 1, j)).sum(),
        }
    }

    fn check(self, space: &Space, i: usize) -> Result<()> {
        if self == AdjacentKind::OneOne && space.n < 3 {
            return Err(Error::InvalidParameter("the (1,1) system needs n >= 3".into()));
        }
        if self.norm(space, i).is_zero() {
            return Err(Error::InvalidParameter(format!(
                "degree {i} is undefined for the {self:?} system at n = {}",
                space.n
            )));
        }
        Ok(())
    }

    /// Unnormalized values `K_0..K_{max_degree}` at integer distance `d`.
    pub fn column_at_distance(self, space: &Space, d: i64, max_degree: usize) -> Vec<BigInt> {
        kraw_column(self.length(space), space.q, d + self.shift(), max_degree)
    }

    /// Number of roots in `t` of the degree-`k` member that lie strictly
    /// above the grid node at distance `d`.
    ///
    /// Every family here satisfies a three-term recurrence in `t` with
    /// positive leading coefficients and positive recurrence weights as long
    /// as `k ≤ length + 1`, so the sign variations of `P_0(s), …, P_k(s)`
    /// count the zeros of `P_k` above `s`.
    pub fn roots_above(self, space: &Space, k: usize, d: i64) -> usize {
        debug_assert!(k as i64 <= self.length(space) + 1);
        sign_variations(self.column_at_distance(space, d, k).iter().map(sign_of_int))
    }

    /// Same count at an arbitrary rational inner product `t`.
    pub fn roots_above_t(self, space: &Space, k: usize, t: &Rational) -> usize {
        let x = space.d_of_t(t) + int(self.shift());
        let col = kraw_column_rational(self.length(space), space.q, &x, k);
        sign_variations(col.iter().map(sign_of))
    }

    /// Signs of `P_0(t), …, P_{max_degree}(t)`; the normalizers are positive
    /// so these are the signs of the unnormalized values.
    pub fn signs_at(self, space: &Space, t: &Rational, max_degree: usize) -> Vec<i32> {
        let d = space.d_of_t(t);
        if d.is_integer() {
            let d: i64 = d.to_integer().try_into().expect("distance fits in i64");
            self.column_at_distance(space, d, max_degree).iter().map(sign_of_int).collect()
        } else {
            let x = d + int(self.shift());
            kraw_column_rational(self.length(space), space.q, &x, max_degree)
                .iter()
                .map(sign_of)
                .collect()
        }
    }
}

/// Exact value of an adjacent (or plain) normalized polynomial at `t`.
pub fn adjacent_eval(space: &Space, kind: AdjacentKind, i: usize, t: &Rational) -> Result<Rational> {
    kind.check(space, i)?;
    let x = space.d_of_t(t) + int(kind.shift());
    let k = kraw_rational(kind.length(space), space.q, i, &x);
    Ok(k / Rational::from_integer(kind.norm(space, i)))
}

/// The adjacent (or plain) normalized polynomial of degree `i` in `t`.
pub fn adjacent_poly(space: &Space, kind: AdjacentKind, i: usize) -> Result<DensePoly> {
    kind.check(space, i)?;
    let polys = adjacent_polys(space, kind, i);
    Ok(polys.into_iter().nth(i).expect("degree i computed"))
}

/// All members of degrees `0..=max_degree`, normalized.
pub fn adjacent_polys(space: &Space, kind: AdjacentKind, max_degree: usize) -> Vec<DensePoly> {
    let n = space.n as i64;
    // x = n(1 − t)/2 + shift
    let argument = DensePoly::linear(rat(n, 2) + int(kind.shift()), rat(-n, 2));
    kraw_polys(kind.length(space), space.q, &argument, max_degree)
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.scale(&Rational::from_integer(kind.norm(space, i)).recip()))
        .collect()
}

/// Coefficients `f_0..f_m` of `f(t) = Σ f_i Q_i^{(n,q)}(t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expansion {
    #[serde(serialize_with = "crate::report::ser_rationals")]
    coeffs: Vec<Rational>,
}

impl Expansion {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Degrees `i ≥ 1` with `f_i < 0`.
    pub fn negative_degrees(&self) -> Vec<usize> {
        (1..self.coeffs.len()).filter(|&i| self.coeffs[i].is_negative()).collect()
    }
}

#[derive(Default)]
struct PolyCache {
    k: Vec<DensePoly>,
    q: Vec<DensePoly>,
}

/// Cached Krawtchouk data for one space: integer values at integer
/// distances and the normalized polynomials `Q_i` in `t`.
///
/// Shared freely between threads; caches grow under a lock.
pub struct KrawtchoukTable {
    space: Space,
    columns: RwLock<HashMap<i64, Arc<Vec<BigInt>>>>,
    polys: RwLock<PolyCache>,
    weights: OnceLock<Arc<Vec<BigInt>>>,
}

impl KrawtchoukTable {
    pub fn new(space: Space) -> Self {
        Self {
            space,
            columns: RwLock::new(HashMap::new()),
            polys: RwLock::new(PolyCache::default()),
            weights: OnceLock::new(),
        }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    /// `K_0(d), …, K_{max_degree}(d)` (at least that many), cached.
    pub fn column(&self, d: i64, max_degree: usize) -> Arc<Vec<BigInt>> {
        if let Some(col) = self.columns.read().get(&d) {
            if col.len() > max_degree {
                return Arc::clone(col);
            }
        }
        let col = Arc::new(kraw_column(self.space.n as i64, self.space.q, d, max_degree));
        let mut w = self.columns.write();
        let entry = w.entry(d).or_insert_with(|| Arc::clone(&col));
        if entry.len() < col.len() {
            *entry = Arc::clone(&col);
        }
        Arc::clone(entry)
    }

    pub fn k_eval(&self, i: usize, d: i64) -> BigInt {
        self.column(d, i)[i].clone()
    }

    pub fn k_eval_rational(&self, i: usize, d: &Rational) -> Rational {
        kraw_rational(self.space.n as i64, self.space.q, i, d)
    }

    pub fn r(&self, i: usize) -> BigInt {
        match self.weights().get(i) {
            Some(r) => r.clone(),
            None => BigInt::zero(),
        }
    }

    /// `Q_i(t) = K_i(d)/r_i` with `d = n(1 − t)/2`.
    pub fn q_eval(&self, i: usize, t: &Rational) -> Result<Rational> {
        if i > self.space.n as usize {
            return Err(Error::DegreeExceedsLength { degree: i, n: self.space.n });
        }
        let d = self.space.d_of_t(t);
        Ok(self.k_eval_rational(i, &d) / Rational::from_integer(self.r(i)))
    }

    /// `Q_i` as a polynomial in `t`.
    pub fn q_poly(&self, i: usize) -> Result<DensePoly> {
        if i > self.space.n as usize {
            return Err(Error::DegreeExceedsLength { degree: i, n: self.space.n });
        }
        if let Some(p) = self.polys.read().q.get(i) {
            return Ok(p.clone());
        }
        let mut cache = self.polys.write();
        let n = self.space.n as i64;
        let qi = self.space.q as i64;
        let argument = DensePoly::linear(rat(n, 2), rat(-n, 2));
        while cache.k.len() <= i {
            let a = cache.k.len() as i64;
            let next = match a {
                0 => DensePoly::one(),
                1 => &DensePoly::constant(int(n * (qi - 1))) - &argument.scale(&int(qi)),
                _ => {
                    let a = a - 1;
                    let factor = &DensePoly::constant(int(a + (qi - 1) * (n - a)))
                        - &argument.scale(&int(qi));
                    (&(&factor * &cache.k[a as usize])
                        - &cache.k[a as usize - 1].scale(&int((qi - 1) * (n - a + 1))))
                        .scale(&rat(1, a + 1))
                }
            };
            let idx = cache.k.len();
            let normalized = next.scale(&Rational::from_integer(self.r(idx)).recip());
            cache.k.push(next);
            cache.q.push(normalized);
        }
        Ok(cache.q[i].clone())
    }

    /// Krawtchouk expansion by descending-degree triangular elimination.
    pub fn expand(&self, p: &DensePoly) -> Result<Expansion> {
        let Some(deg) = p.degree() else {
            return Ok(Expansion::new(vec![Rational::zero()]));
        };
        if deg > self.space.n as usize {
            return Err(Error::DegreeExceedsLength { degree: deg, n: self.space.n });
        }
        self.q_poly(deg)?;
        let cache = self.polys.read();
        let mut rem = p.coeffs().to_vec();
        let mut out = vec![Rational::zero(); deg + 1];
        for i in (0..=deg).rev() {
            let basis = &cache.q[i];
            let c = &rem[i] / basis.leading().expect("Q_i has degree i");
            if !c.is_zero() {
                for (j, b) in basis.coeffs().iter().enumerate() {
                    rem[j] -= &c * b;
                }
            }
            out[i] = c;
        }
        Ok(Expansion::new(out))
    }

    /// Krawtchouk expansion from the orthogonality relation
    /// `f_i = q^{−n} Σ_z C(n,z)(q−1)^z p(t_z) K_i(z)`. Only grid values of
    /// `p` enter, so for `deg p > n` this expands the remainder modulo the
    /// grid annihilator.
    pub fn expand_by_orthogonality(&self, p: &DensePoly) -> Expansion {
        let n = self.space.n as usize;
        let values: Vec<Rational> =
            (0..=n as i64).map(|z| p.eval(&self.space.t_of_d(z))).collect();
        let scale = Rational::from_integer(pow_big(self.space.q as i64, n as u64)).recip();
        let columns: Vec<Arc<Vec<BigInt>>> = (0..=n as i64).map(|z| self.column(z, n)).collect();
        let coeffs = (0..=n)
            .map(|i| {
                let sum: Rational = (0..=n)
                    .map(|z| {
                        let w = self.r(z) * &columns[z][i];
                        &values[z] * Rational::from_integer(w)
                    })
                    .sum();
                sum * &scale
            })
            .collect();
        Expansion::new(coeffs)
    }

    /// `S_i = Σ_{z=0}^{n} r_z V(z) K_i(z)` for `i = 0..=max_degree`, from
    /// integer values `V(z)` at every distance. For `V(z) = c·p(t_z)` this is
    /// `c·q^n` times the `i`-th Krawtchouk coefficient of `p` (orthogonality).
    pub fn grid_sums(&self, values: &[BigInt], max_degree: usize) -> Vec<BigInt> {
        use rayon::prelude::*;
        let n = self.space.n as usize;
        assert_eq!(values.len(), n + 1, "one value per distance");
        let weights = self.weights();
        (0..=n)
            .into_par_iter()
            .filter(|&z| !values[z].is_zero())
            .map(|z| {
                let col = self.column(z as i64, max_degree);
                let w = &weights[z] * &values[z];
                col[..=max_degree].iter().map(|k| k * &w).collect::<Vec<BigInt>>()
            })
            .reduce(
                || vec![BigInt::zero(); max_degree + 1],
                |mut acc, v| {
                    for (a, b) in acc.iter_mut().zip(v) {
                        *a += b;
                    }
                    acc
                },
            )
    }

    /// `r_z = (q−1)^z C(n,z)` for every distance.
    pub fn weights(&self) -> Arc<Vec<BigInt>> {
        Arc::clone(self.weights.get_or_init(|| {
            Arc::new(self.space.weights())
        }))
    }

    /// `Σ f_i Q_i(t)`.
    pub fn reconstruct(&self, expansion: &Expansion, t: &Rational) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (i, f) in expansion.coeffs().iter().enumerate() {
            if !f.is_zero() {
                acc += f * self.q_eval(i, t)?;
            }
        }
        Ok(acc)
    }
}

/// Convenience wrapper building a fresh table.
pub fn expand(space: &Space, p: &DensePoly) -> Result<Expansion> {
    KrawtchoukTable::new(*space).expand(p)
}

/// Remainder of `p` modulo `Π_{i=0}^{n} (t − t_i)`; agrees with `p` on the grid.
pub fn reduce_mod_grid(space: &Space, p: &DensePoly) -> DensePoly {
    if p.degree().unwrap_or(0) <= space.n as usize {
        return p.clone();
    }
    let (_, r) = p.divmod(&space.grid().annihilator()).expect("annihilator is nonzero");
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(n: u32, q: u32) -> Space {
        Space::new(n, q).unwrap()
    }

    #[test]
    fn k_eval_examples() {
        let t = KrawtchoukTable::new(sp(11, 4));
        assert_eq!(t.k_eval(0, 7), BigInt::one());
        let t12 = KrawtchoukTable::new(sp(12, 2));
        assert_eq!(t12.k_eval(1, 5), BigInt::from(2));
        assert_eq!(t.k_eval(2, 7), BigInt::from(-9));
    }

    #[test]
    fn q_eval_examples() {
        let t = KrawtchoukTable::new(sp(11, 4));
        for i in 0..=11 {
            assert_eq!(t.q_eval(i, &int(1)).unwrap(), int(1));
        }
        assert_eq!(t.q_eval(2, &rat(-3, 11)).unwrap(), rat(-1, 55));
        assert!(matches!(t.q_eval(12, &int(0)), Err(Error::DegreeExceedsLength { .. })));
        let t12 = KrawtchoukTable::new(sp(12, 2));
        assert_eq!(t12.q_eval(1, &rat(1, 6)).unwrap(), rat(1, 6));
    }

    #[test]
    fn adjacent_examples() {
        let s = sp(11, 4);
        assert_eq!(adjacent_eval(&s, AdjacentKind::ZeroOne, 1, &rat(-3, 11)).unwrap(), rat(1, 15));
        for kind in [AdjacentKind::OneZero, AdjacentKind::OneOne, AdjacentKind::ZeroOne] {
            for i in 0..=4 {
                assert_eq!(adjacent_eval(&s, kind, i, &int(1)).unwrap(), int(1), "{kind:?} {i}");
            }
            assert_eq!(adjacent_eval(&s, kind, 0, &rat(2, 7)).unwrap(), int(1));
        }
        assert!(adjacent_eval(&sp(2, 2), AdjacentKind::OneOne, 1, &int(0)).is_err());
        assert!(adjacent_eval(&s, AdjacentKind::ZeroOne, 11, &int(0)).is_err());
    }

    #[test]
    fn adjacent_poly_matches_eval() {
        let s = sp(9, 3);
        for kind in [AdjacentKind::Plain, AdjacentKind::OneZero, AdjacentKind::OneOne, AdjacentKind::ZeroOne] {
            let polys = adjacent_polys(&s, kind, 5);
            for (i, p) in polys.iter().enumerate() {
                assert_eq!(p.degree(), Some(i));
                for x in [rat(-1, 3), rat(5, 7), int(-1)] {
                    assert_eq!(p.eval(&x), adjacent_eval(&s, kind, i, &x).unwrap());
                }
            }
        }
    }

    #[test]
    fn expand_examples() {
        let s = sp(11, 4);
        let table = KrawtchoukTable::new(s);
        let f = DensePoly::from_roots(&[rat(-9, 11), rat(-7, 11), rat(-3, 11)]);
        let e = table.expand(&f).unwrap();
        assert_eq!(e.coeffs(), &[rat(63, 5324), rat(117, 484), rat(45, 44), rat(1215, 484)]);
        assert_eq!(table.expand_by_orthogonality(&f), e);
        let q2 = table.q_poly(2).unwrap();
        assert_eq!(table.expand(&q2).unwrap().coeffs(), &[int(0), int(0), int(1)]);
        assert_eq!(table.expand(&DensePoly::one()).unwrap().coeffs(), &[int(1)]);
        assert!(table.expand(&DensePoly::from_roots(&vec![int(0); 12])).is_err());
    }

    #[test]
    fn reduction_modulo_grid() {
        let s = sp(4, 2);
        let low = DensePoly::from_roots(&[int(0), rat(1, 3)]);
        assert_eq!(reduce_mod_grid(&s, &low), low);
        assert!(reduce_mod_grid(&s, &s.grid().annihilator()).is_zero());
        let t5 = DensePoly::from_roots(&vec![int(0); 5]);
        let r = reduce_mod_grid(&s, &t5);
        assert!(r.degree().unwrap() <= 4);
        for x in s.grid().nodes() {
            assert_eq!(r.eval(x), t5.eval(x));
        }
    }

    #[test]
    fn roots_above_counts_agree_with_sturm() {
        use crate::numkit::SturmSequence;
        for (n, q) in [(9u32, 2u32), (11, 4), (14, 3)] {
            let s = sp(n, q);
            for kind in [AdjacentKind::OneZero, AdjacentKind::OneOne] {
                for k in 1..=4 {
                    let p = adjacent_poly(&s, kind, k).unwrap();
                    let seq = SturmSequence::new(&p);
                    for d in 1..=n as i64 {
                        let t = s.t_of_d(d);
                        let sturm = seq.count(&t, &int(2));
                        assert_eq!(kind.roots_above(&s, k, d), sturm, "{kind:?} n={n} k={k} d={d}");
                    }
                }
            }
        }
    }

    #[test]
    fn cells() {
        let s = sp(11, 4);
        assert_eq!(s.cell_of(&rat(-17, 22)), Some(GridCell::Cell(2)));
        assert_eq!(s.cell_of(&rat(-3, 11)), Some(GridCell::Node(4)));
        assert_eq!(s.cell_of(&int(-1)), Some(GridCell::Node(0)));
        assert_eq!(s.cell_of(&int(2)), None);
    }
}
