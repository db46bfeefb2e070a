use std::collections::BTreeMap;

use super::{default_cap, Certifier, InversionResult, InversionStatus, InvertOptions, Method};
use crate::error::Result;
use crate::jacobi::require_unit_jacobian;
use crate::poly::{PolyMap, Polynomial};

pub fn invert_oracle(map: &PolyMap, cap: u32) -> Result<InversionResult> {
    invert_oracle_with(map, &InvertOptions::with_cap(cap))
}

/// Formal inversion by composition: with `G_1 = L^{-1}` and `H` the
/// degree-`d` part of `(G_1 + ... + G_{d-1}) ∘ F`, the next block is
/// `G_d = -H ∘ L^{-1}`. Only `cap` is read from the options.
pub fn invert_oracle_with(map: &PolyMap, options: &InvertOptions) -> Result<InversionResult> {
    let m = require_unit_jacobian(map)?;
    let n = map.num_vars();
    let cap = options.cap.unwrap_or_else(|| default_cap(map)).max(1);
    let linear_inv = PolyMap::from_linear(&map.linear_part().inverse()?)?;

    let mut partial: Vec<Polynomial> = linear_inv.components().to_vec();
    let mut blocks = vec![linear_inv.clone()];
    let mut certifier = Certifier::new();
    let mut status = None;

    for d in 2..=cap {
        let mut next = Vec::with_capacity(n);
        for g in &partial {
            let h = g.substitute_truncated(map.components(), Some(d))?.homogeneous_part(d);
            next.push(-&h.compose(&linear_inv)?);
        }
        let block = PolyMap::new(next)?;
        for (acc, p) in partial.iter_mut().zip(block.components()) {
            *acc = &*acc + p;
        }
        blocks.push(block);
        if let Some(degree) = certifier.after_block(map, &blocks) {
            status = Some(InversionStatus::PolynomialInverseCertified { degree });
            break;
        }
    }

    let status = match status {
        Some(s) => s,
        None => match certifier.at_cap(map, &blocks) {
            Some(degree) => InversionStatus::PolynomialInverseCertified { degree },
            None => InversionStatus::CapReached { cap },
        },
    };
    Ok(InversionResult {
        source: map.clone(),
        method: Method::Oracle,
        jacobian_constant: m,
        certificate: status.is_certified(),
        inverse_blocks: blocks,
        residuum: BTreeMap::new(),
        status,
        checked_blocks: Vec::new(),
    })
}
