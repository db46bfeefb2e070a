//! Fixed inputs shared by the inversion benchmarks.

use jacinv_core::generators::{random_bcw, random_tame, LinearKind, TameParams};
use jacinv_core::PolyMap;

/// Tame maps in `n` variables with `deg F, deg G <= max_degree`.
pub fn tame_maps(n: usize, max_degree: u32, count: u64) -> Vec<PolyMap> {
    let mut params = TameParams::new(n);
    params.max_degree = Some(max_degree);
    params.linear = LinearKind::General;
    (0..count)
        .map(|seed| random_tame(&params, seed).expect("valid program").map)
        .collect()
}

/// Rank-one cubic maps in `n` variables.
pub fn bcw_maps(n: usize, count: u64) -> Vec<PolyMap> {
    (0..count)
        .map(|seed| random_bcw(n, seed).expect("n >= 2").map)
        .collect()
}
