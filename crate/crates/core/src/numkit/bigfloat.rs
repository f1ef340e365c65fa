use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::rational::{BigInt, Rational};

pub const DEFAULT_PRECISION: u32 = 256;

/// Binary floating value `mantissa · 2^exponent` with an explicit mantissa
/// width. Every operation rounds to nearest at the precision of its left
/// operand.
#[derive(Clone, Debug)]
pub struct BigFloat {
    mantissa: BigInt,
    exponent: i64,
    precision: u32,
}

fn round_shift(value: &BigInt, shift: u64) -> BigInt {
    if shift == 0 {
        return value.clone();
    }
    let negative = value.is_negative();
    let mag = value.abs();
    let half = BigInt::from(1) << (shift - 1);
    let rounded = (mag + half) >> shift;
    if negative {
        -rounded
    } else {
        rounded
    }
}

impl BigFloat {
    pub fn zero(precision: u32) -> Self {
        Self { mantissa: BigInt::zero(), exponent: 0, precision: precision.max(2) }
    }

    fn normalized(mut self) -> Self {
        let bits = self.mantissa.bits();
        if bits > self.precision as u64 {
            let shift = bits - self.precision as u64;
            self.mantissa = round_shift(&self.mantissa, shift);
            self.exponent += shift as i64;
            // rounding may carry into one more bit
            if self.mantissa.bits() > self.precision as u64 {
                self.mantissa >>= 1;
                self.exponent += 1;
            }
        }
        if self.mantissa.is_zero() {
            self.exponent = 0;
        }
        self
    }

    pub fn from_bigint(value: &BigInt, precision: u32) -> Self {
        Self { mantissa: value.clone(), exponent: 0, precision: precision.max(2) }.normalized()
    }

    pub fn from_rational(value: &Rational, precision: u32) -> Self {
        let precision = precision.max(2);
        if value.is_zero() {
            return Self::zero(precision);
        }
        let num = value.numer();
        let den = value.denom();
        let shift = precision as i64 + den.bits() as i64 - num.bits() as i64 + 2;
        let scaled = if shift >= 0 {
            (num << shift as usize, den.clone())
        } else {
            (num.clone(), den << (-shift) as usize)
        };
        // round to nearest: floor((2a + b) / 2b)
        let two_b = &scaled.1 << 1;
        let twice: BigInt = (scaled.0 << 1usize) + &scaled.1;
        let q = twice.div_floor(&two_b);
        Self { mantissa: q, exponent: -shift, precision }.normalized()
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    pub fn neg(&self) -> Self {
        Self { mantissa: -&self.mantissa, ..self.clone() }
    }

    pub fn abs(&self) -> Self {
        Self { mantissa: self.mantissa.abs(), ..self.clone() }
    }

    /// Exact value of this float as a rational.
    pub fn to_rational(&self) -> Rational {
        if self.exponent >= 0 {
            Rational::from_integer(&self.mantissa << self.exponent as usize)
        } else {
            Rational::new(self.mantissa.clone(), BigInt::from(1) << (-self.exponent) as usize)
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if rhs.is_zero() {
            return self.clone().normalized();
        }
        if self.is_zero() {
            return Self { precision: self.precision, ..rhs.clone() }.normalized();
        }
        let top_self = self.exponent + self.mantissa.bits() as i64;
        let top_rhs = rhs.exponent + rhs.mantissa.bits() as i64;
        let guard = self.precision as i64 + 4;
        // an operand entirely below the rounding window cannot change the result
        if top_rhs < top_self - guard {
            return self.clone().normalized();
        }
        if top_self < top_rhs - guard {
            return Self { precision: self.precision, ..rhs.clone() }.normalized();
        }
        let exponent = self.exponent.min(rhs.exponent);
        let a = &self.mantissa << (self.exponent - exponent) as usize;
        let b = &rhs.mantissa << (rhs.exponent - exponent) as usize;
        Self { mantissa: a + b, exponent, precision: self.precision }.normalized()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            mantissa: &self.mantissa * &rhs.mantissa,
            exponent: self.exponent + rhs.exponent,
            precision: self.precision,
        }
        .normalized()
    }

    /// Quotient; panics on division by zero like the integer types do.
    pub fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "BigFloat division by zero");
        let shift = self.precision as i64 + rhs.mantissa.bits() as i64
            - self.mantissa.bits() as i64
            + 2;
        let shift = shift.max(0);
        let num = &self.mantissa << shift as usize;
        let q = Rational::new(num, rhs.mantissa.clone());
        let twice: BigInt = q.numer() * 2 + q.denom();
        let rounded = twice.div_floor(&(q.denom() * 2));
        Self {
            mantissa: rounded,
            exponent: self.exponent - rhs.exponent - shift,
            precision: self.precision,
        }
        .normalized()
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits() as i64;
        let drop = (bits - 60).max(0);
        let top = (&self.mantissa >> drop as usize).to_f64().unwrap_or(0.0);
        let e = self.exponent + drop;
        if e > 2000 {
            return top.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        top * 2f64.powi(e as i32)
    }

    /// Binary logarithm of the absolute value, accurate to `f64` precision
    /// even when the value itself is far outside the `f64` range.
    pub fn log2(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mantissa.bits() as i64;
        let drop = (bits - 60).max(0);
        let top = (&self.mantissa.abs() >> drop as usize).to_f64().unwrap_or(1.0);
        top.log2() + (self.exponent + drop) as f64
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for BigFloat {}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_rational().cmp(&other.to_rational())
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_f64();
        if v.is_finite() && v != 0.0 || self.is_zero() {
            write!(f, "{v}")
        } else {
            write!(f, "2^{:.6}", self.log2())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::rat;

    #[test]
    fn rational_roundtrip_error_is_bounded() {
        for prec in [8u32, 53, 256] {
            let x = rat(-17, 22);
            let bf = BigFloat::from_rational(&x, prec);
            let err = (bf.to_rational() - &x).abs();
            let bound = Rational::new(BigInt::from(1), BigInt::from(1) << (prec as usize - 1));
            assert!(err <= bound, "prec {prec}");
        }
    }

    #[test]
    fn arithmetic_matches_f64() {
        let a = BigFloat::from_rational(&rat(1, 3), 128);
        let b = BigFloat::from_rational(&rat(-2, 7), 128);
        assert!((a.add(&b).to_f64() - (1.0 / 3.0 - 2.0 / 7.0)).abs() < 1e-15);
        assert!((a.mul(&b).to_f64() - (-2.0 / 21.0)).abs() < 1e-15);
        assert!((a.div(&b).to_f64() - (-7.0 / 6.0)).abs() < 1e-15);
        assert!((a.sub(&a)).is_zero());
    }

    #[test]
    fn log2_of_huge_value() {
        let big = BigFloat::from_bigint(&(BigInt::from(3) << 5000usize), 64);
        assert!((big.log2() - (5000.0 + 3f64.log2())).abs() < 1e-9);
    }
}
