//! Shared fixtures for the benchmarks.

use simplex_steiner::geometry::Point;

/// Deterministic pseudo-random triangle in the given dimension.
pub fn triangle(dim: usize, seed: u64) -> [Point; 3] {
    let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15) | 1;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let mut point = |_: usize| Point::new((0..dim).map(|_| next()).collect());
    [point(0), point(1), point(2)]
}
