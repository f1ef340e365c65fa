//! Instances shared by the benchmarks.

use levref_core::Space;

/// `(q, n, d)` for the three headline bounds.
pub const HEADLINE: [(u32, u32, i64); 3] = [(3, 14, 8), (4, 11, 7), (5, 11, 8)];

pub fn space(q: u32, n: u32) -> Space {
    Space::new(n, q).expect("benchmark parameters are valid")
}
