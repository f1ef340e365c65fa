//! Numeric kernel: exact rationals, dense polynomials over them, certified
//! real-root location and a small arbitrary-precision binary float.

mod bigfloat;
mod poly;
mod rational;
mod roots;

pub use bigfloat::{BigFloat, DEFAULT_PRECISION};
pub use poly::DensePoly;
pub use rational::{
    binomial, fmt_rational, int, is_integral, parse_rational, pow_big, rat, to_f64, BigInt,
    Rational,
};
pub use roots::{
    greatest_root, locate_in_grid, sturm_count, GridCell, RootBracket, RootLocation,
    SturmSequence,
};
