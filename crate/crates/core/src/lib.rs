//! Exact Delsarte linear-programming bounds for q-ary codes: Levenshtein's
//! universal bound and its refinement by snapping the optimal polynomial's
//! roots to the inner-product grid.

pub mod codes;
pub mod delsarte_lp;
pub mod error;
pub mod kkt;
pub mod krawtchouk;
pub mod levenshtein;
pub mod numkit;
pub mod refine;
pub mod report;

pub use error::{Error, Result};
pub use krawtchouk::{AdjacentKind, Expansion, Grid, KrawtchoukTable, Space};
pub use numkit::{BigFloat, BigInt, DensePoly, Rational};
