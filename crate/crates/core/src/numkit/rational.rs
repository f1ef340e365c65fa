use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_bigint::BigInt;

/// Exact rational scalar, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn is_integral(x: &Rational) -> bool {
    x.denom().is_one()
}

/// `C(n, k)` for nonnegative `n`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn pow_big(base: i64, exp: u64) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// Nearest `f64`, computed from the leading bits so huge numerators and
/// denominators do not overflow to infinity prematurely.
pub fn to_f64(x: &Rational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    let num = x.numer().abs();
    let den = x.denom();
    let shift = num.bits() as i64 - den.bits() as i64;
    // bring the quotient into [2^62, 2^64)
    let scale = 63 - shift;
    let q = if scale >= 0 {
        (num << scale as usize).div_floor(den)
    } else {
        num.div_floor(&(den << (-scale) as usize))
    };
    sign * q.to_f64().unwrap_or(f64::INFINITY) * 2f64.powi(-scale as i32)
}

/// `p/q` text form; integers print without a denominator.
pub fn fmt_rational(x: &Rational) -> String {
    x.to_string()
}

/// Parses `p`, `p/q` or a finite decimal such as `-0.25`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let value: BigInt = digits.parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(value, scale);
        return Some(if negative { -r } else { r });
    }
    text.parse::<BigInt>().ok().map(Rational::from_integer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(11, 2), BigInt::from(55));
        assert_eq!(binomial(5, 7), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn huge_to_f64() {
        let big = Rational::new(pow_big(3, 900), pow_big(2, 1400));
        let expected = (900.0 * 3f64.log2() - 1400.0).exp2();
        assert!((to_f64(&big) / expected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("-3/11"), Some(rat(-3, 11)));
        assert_eq!(parse_rational("-0.25"), Some(rat(-1, 4)));
        assert_eq!(parse_rational("7"), Some(int(7)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
