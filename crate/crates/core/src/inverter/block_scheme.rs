use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::power_cache::PowerCache;
use super::{
    default_cap, Certifier, InversionResult, InversionStatus, InvertOptions, Method, ResiduumBlock, SolveRoute,
};
use crate::blocks::BlockMatrix;
use crate::error::{Error, Result};
use crate::jacobi::require_unit_jacobian;
use crate::jacobian::cofactor_matrix;
use crate::poly::{Exponent, PolyMap, Polynomial};

pub fn invert_block_scheme(map: &PolyMap, cap: u32) -> Result<InversionResult> {
    invert_block_scheme_with(map, &InvertOptions::with_cap(cap))
}

/// Solution of one `(i, j)` system at block degree `d`.
struct SystemSolution {
    component: usize,
    variable: usize,
    residuum: Vec<BigRational>,
    /// `w[k] = (m'_j + 1) * b^i_{m' + e_j}` for the `k`-th degree-`d` exponent `m'`.
    scaled: Vec<BigRational>,
}

pub fn invert_block_scheme_with(map: &PolyMap, options: &InvertOptions) -> Result<InversionResult> {
    let m = require_unit_jacobian(map)?;
    let n = map.num_vars();
    let cap = options.cap.unwrap_or_else(|| default_cap(map)).max(1);
    let m_inv = BigRational::one() / &m;

    let linear = map.linear_part();
    let linear_inv = linear.inverse()?;

    // adjugate entries split by homogeneous degree
    let cofactors = cofactor_matrix(map);
    let cof_parts: Vec<Vec<BTreeMap<u32, Polynomial>>> = cofactors
        .entries()
        .iter()
        .map(|row| row.iter().map(Polynomial::homogeneous_components).collect())
        .collect();

    // degree-0 equations: the linear block is adj(L) / M
    let first: Vec<Polynomial> = cofactors
        .constant_terms()
        .iter()
        .map(|row| Polynomial::linear_form(&row.iter().map(|c| c * &m_inv).collect::<Vec<_>>()))
        .collect();
    let first = PolyMap::new(first)?;
    if first.linear_part() != linear_inv {
        return Err(Error::InternalInconsistency(
            "linear block differs from the inverse of the linear part".into(),
        ));
    }

    let mut inverse: Vec<Polynomial> = first.components().to_vec();
    let mut blocks = vec![first];
    let mut residuum = BTreeMap::new();
    let mut checked_blocks = Vec::new();
    let mut cache = PowerCache::new(map);
    let mut certifier = Certifier::new();
    let mut status = None;

    for d in 1..cap {
        let monomials = Exponent::all_of_degree(n, d);
        let index: HashMap<&Exponent, usize> = monomials.iter().enumerate().map(|(k, e)| (e, k)).collect();

        let v_block = BlockMatrix::symmetric_power(&linear_inv, d)?;
        let u_block = if options.check_blocks || options.route == SolveRoute::Elimination {
            Some(BlockMatrix::symmetric_power(&linear, d)?)
        } else {
            None
        };
        if options.check_blocks {
            let u = u_block.as_ref().expect("built above");
            if !u.entries().mul(v_block.entries())?.is_identity() {
                return Err(Error::InternalInconsistency(format!("U*V != I at block degree {d}")));
            }
            checked_blocks.push(d);
        }
        let u_transposed = u_block.map(|u| u.entries().transpose());
        let v_transposed = v_block.entries().transpose();

        // warm the power cache for every [F^(m - e_j)]_d the residua need
        for g in &inverse {
            for (e, _) in g.terms().filter(|(e, _)| e.degree() >= 2) {
                for j in 0..n {
                    if let Some(lower) = e.decrement(j) {
                        cache.ensure(&lower, d);
                    }
                }
            }
        }

        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        let solutions: Vec<SystemSolution> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let residuum = residuum_vector(&inverse[i], j, d, &cache, &index, monomials.len());
                let adjugate = cof_parts[i][j].get(&d);
                let rhs: Vec<BigRational> = monomials
                    .iter()
                    .zip(&residuum)
                    .map(|(s, y)| adjugate.map_or_else(BigRational::zero, |p| p.coeff(s)) * &m_inv - y)
                    .collect();
                let scaled = match &u_transposed {
                    Some(ut) if options.route == SolveRoute::Elimination => ut.solve(&rhs)?,
                    _ => v_transposed.mul_vec(&rhs)?,
                };
                Ok(SystemSolution {
                    component: i,
                    variable: j,
                    residuum,
                    scaled,
                })
            })
            .collect::<Result<_>>()?;

        let merged = match merge_solutions(n, d, &monomials, &solutions) {
            Ok(block) => block,
            Err(detail) => {
                status = Some(InversionStatus::InternalInconsistency { detail });
                break;
            }
        };

        let mut vectors = vec![vec![Vec::new(); n]; n];
        for s in solutions {
            vectors[s.component][s.variable] = s.residuum;
        }
        residuum.insert(d, ResiduumBlock {
            degree: d,
            monomials,
            vectors,
        });

        for (acc, p) in inverse.iter_mut().zip(merged.components()) {
            *acc = &*acc + p;
        }
        blocks.push(merged);
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
        method: Method::BlockScheme,
        jacobian_constant: m,
        certificate: status.is_certified(),
        inverse_blocks: blocks,
        residuum,
        status,
        checked_blocks,
    })
}

/// Degree-`d` coefficients of `sum_{|m| >= 2} b_m m_j F^(m - e_j)`, i.e. the
/// part of `(dG_i/du_j) ∘ F` that involves the nonlinear part of `F`.
fn residuum_vector(
    g: &Polynomial,
    j: usize,
    d: u32,
    cache: &PowerCache,
    index: &HashMap<&Exponent, usize>,
    size: usize,
) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); size];
    for (e, b) in g.terms().filter(|(e, _)| e.degree() >= 2) {
        let Some(lower) = e.decrement(j) else { continue };
        let factor = b * BigRational::from_integer(e.entries()[j].into());
        for (s, c) in cache.get(&lower, d).terms() {
            out[index[s]] += &factor * c;
        }
    }
    out
}

/// Unscales the `(i, j)` solutions into degree-`d+1` coefficients, checking
/// that every coefficient reached from several `j` agrees.
fn merge_solutions(
    n: usize,
    d: u32,
    monomials: &[Exponent],
    solutions: &[SystemSolution],
) -> std::result::Result<PolyMap, String> {
    let mut coeffs: Vec<BTreeMap<Exponent, BigRational>> = vec![BTreeMap::new(); n];
    for s in solutions {
        for (lower, w) in monomials.iter().zip(&s.scaled) {
            let scale = BigRational::from_integer((lower.entries()[s.variable] + 1).into());
            let value = w / scale;
            let target = lower.increment(s.variable);
            match coeffs[s.component].get(&target) {
                Some(existing) if *existing != value => {
                    return Err(format!(
                        "block degree {d}: coefficient of {} in component {} is {existing} from one system and {value} from u{}",
                        target.fmt_monomial("u"),
                        s.component + 1,
                        s.variable + 1
                    ));
                }
                Some(_) => {}
                None => {
                    coeffs[s.component].insert(target, value);
                }
            }
        }
    }
    let comps = coeffs
        .into_iter()
        .map(|c| Polynomial::from_terms(n, c).expect("exponents sized to n"))
        .collect();
    Ok(PolyMap::new(comps).expect("no constant terms at degree >= 2"))
}
