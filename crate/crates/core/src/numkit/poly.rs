use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::bigfloat::BigFloat;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Univariate polynomial with exact rational coefficients, stored in
/// ascending powers. The coefficient vector never ends in a zero, so the
/// zero polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DensePoly {
    coeffs: Vec<Rational>,
}

impl DensePoly {
    fn normalize(mut self) -> Self {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self { coeffs: vec![c] }.normalize()
    }

    /// The indeterminate `t`.
    pub fn x() -> Self {
        Self::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    /// `c0 + c1 t`.
    pub fn linear(c0: Rational, c1: Rational) -> Self {
        Self::from_coeffs(vec![c0, c1])
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        Self { coeffs }.normalize()
    }

    /// Monic polynomial `Π (t − r)`.
    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a Rational>) -> Self {
        roots.into_iter().fold(Self::one(), |acc, r| {
            acc.mul_linear(&-r.clone())
        })
    }

    /// Multiplies by `(t + c)` in place of a full product.
    pub fn mul_linear(&self, c: &Rational) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            out[i + 1] += a;
            out[i] += a * c;
        }
        Self::from_coeffs(out)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Horner evaluation; exact.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_bigfloat(&self, x: &BigFloat) -> BigFloat {
        let prec = x.precision();
        let mut acc = BigFloat::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&BigFloat::from_rational(c, prec));
        }
        acc
    }

    /// Sign of `p(x)` as −1, 0 or 1.
    pub fn sign_at(&self, x: &Rational) -> i32 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rational::from_integer(i.into()))
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lead) => {
                let inv = lead.recip();
                self.scale(&inv)
            }
            None => Self::zero(),
        }
    }

    /// Euclidean division: returns `(quotient, remainder)` with
    /// `self = quotient · divisor + remainder` and `deg remainder < deg divisor`.
    pub fn divmod(&self, divisor: &DensePoly) -> Result<(DensePoly, DensePoly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZeroPolynomial)?;
        let lead_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * b;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(a: &DensePoly, b: &DensePoly) -> DensePoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.divmod(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `p / gcd(p, p')`: same distinct roots, all simple.
    pub fn squarefree_part(&self) -> DensePoly {
        if self.degree().unwrap_or(0) < 1 {
            return self.clone();
        }
        let g = Self::gcd(self, &self.derivative());
        if g.degree() == Some(0) {
            return self.clone();
        }
        self.divmod(&g).expect("nonzero gcd").0
    }

    /// `p(a t + b)`.
    pub fn compose_linear(&self, a: &Rational, b: &Rational) -> DensePoly {
        let inner = DensePoly::linear(b.clone(), a.clone());
        let mut acc = DensePoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &inner) + &DensePoly::constant(c.clone());
        }
        acc
    }

    /// Upper bound on the absolute value of every real root.
    pub fn cauchy_bound(&self) -> Rational {
        let Some(lead) = self.leading() else {
            return Rational::zero();
        };
        let lead = lead.abs();
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / &lead)
            .fold(Rational::zero(), |m, v| if v > m { v } else { m });
        max + Rational::one()
    }
}

impl fmt::Display for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}t", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}t^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl Add for &DensePoly {
    type Output = DensePoly;
    fn add(self, rhs: &DensePoly) -> DensePoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        DensePoly::from_coeffs(coeffs)
    }
}

impl Sub for &DensePoly {
    type Output = DensePoly;
    fn sub(self, rhs: &DensePoly) -> DensePoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        DensePoly::from_coeffs(coeffs)
    }
}

impl Mul for &DensePoly {
    type Output = DensePoly;
    fn mul(self, rhs: &DensePoly) -> DensePoly {
        if self.is_zero() || rhs.is_zero() {
            return DensePoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        DensePoly::from_coeffs(out)
    }
}

impl Neg for &DensePoly {
    type Output = DensePoly;
    fn neg(self) -> DensePoly {
        DensePoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for DensePoly {
            type Output = DensePoly;
            fn $method(self, rhs: DensePoly) -> DensePoly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{int, rat};

    fn p(cs: &[i64]) -> DensePoly {
        DensePoly::from_coeffs(cs.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p(&[1, 1]).eval(&int(-1)), int(0));
        let f = DensePoly::from_roots(&[rat(-9, 11), rat(-7, 11), rat(-3, 11)]);
        // (20/11)(18/11)(14/11)
        assert_eq!(f.eval(&int(1)), rat(5040, 1331));
        assert_eq!(p(&[-2, 0, 1]).eval(&rat(3, 2)), rat(1, 4));
    }

    #[test]
    fn divmod_examples() {
        let (q, r) = p(&[-1, 0, 1]).divmod(&p(&[-1, 1])).unwrap();
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());
        let (q, r) = p(&[0, 0, 0, 1]).divmod(&p(&[0, 0, 1])).unwrap();
        assert_eq!(q, p(&[0, 1]));
        assert!(r.is_zero());
        assert!(matches!(
            p(&[1, 2]).divmod(&DensePoly::zero()),
            Err(Error::DivisionByZeroPolynomial)
        ));
    }

    #[test]
    fn squarefree_and_gcd() {
        // (t-1)^2 (t+2)
        let f = DensePoly::from_roots(&[int(1), int(1), int(-2)]);
        let sf = f.squarefree_part();
        assert_eq!(sf.monic(), DensePoly::from_roots(&[int(1), int(-2)]));
        let g = DensePoly::gcd(&f, &DensePoly::from_roots(&[int(1), int(5)]));
        assert_eq!(g, p(&[-1, 1]));
    }

    #[test]
    fn compose_and_display() {
        let f = p(&[-2, 0, 1]);
        // f(2t + 1) = 4t^2 + 4t - 1
        assert_eq!(f.compose_linear(&int(2), &int(1)), p(&[-1, 4, 4]));
        assert_eq!(p(&[-1, 4, 4]).to_string(), "4*t^2 + 4*t - 1");
        assert_eq!(DensePoly::from_roots(&[rat(1, 3)]).to_string(), "t - 1/3");
    }
}
