//! Degree-by-degree inversion of maps with constant Jacobian.
//!
//! Two independent routes produce the homogeneous blocks of the formal
//! inverse `G`:
//!
//! * [`invert_block_scheme`] matches coefficients in `DG(F(x)) = J_F(x)^{-1}`
//!   one homogeneous degree at a time. At degree `d` every pair
//!   `(component i, variable j)` gives a linear system `U^(d)^T w = r` whose
//!   matrix is the transposed block of the linear part and whose solution
//!   holds the degree-`d+1` coefficients of `G_i` scaled by powers of `u_j`.
//!   The right side splits into the adjugate entry and the *residuum*, the
//!   part fed by lower inverse blocks through the nonlinear part of `F`.
//! * [`invert_oracle`] is plain formal-series inversion by composition.
//!
//! Both stop as soon as an exact composition `G ∘ F = id` certifies a
//! polynomial inverse, or at the degree cap.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Exponent, PolyMap, Polynomial};

mod block_scheme;
mod closed_form;
mod oracle;
mod power_cache;

pub use block_scheme::{invert_block_scheme, invert_block_scheme_with};
pub use closed_form::invert_special_42;
pub use oracle::{invert_oracle, invert_oracle_with};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum SolveRoute {
    /// Multiply by the transposed block of `L^{-1}`.
    #[default]
    BlockInverse,
    /// Gaussian elimination on `U^(d)^T`; kept as a cross-check.
    Elimination,
}

#[derive(Clone, Debug, Default)]
pub struct InvertOptions {
    /// Largest inverse degree to compute; defaults to [`default_cap`].
    pub cap: Option<u32>,
    pub route: SolveRoute,
    /// Verify `U^(d) V^(d) = I` exactly for every block used.
    pub check_blocks: bool,
}

impl InvertOptions {
    pub fn with_cap(cap: u32) -> Self {
        Self {
            cap: Some(cap),
            ..Self::default()
        }
    }
}

/// `(deg F)^(n-1)`, the classical degree bound for an automorphism inverse.
pub fn default_cap(map: &PolyMap) -> u32 {
    let deg = map.degree().unwrap_or(1).max(1);
    deg.saturating_pow(map.num_vars() as u32 - 1).max(1)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Method {
    BlockScheme,
    Oracle,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum InversionStatus {
    /// `G ∘ F = id` holds exactly; `degree` is the total degree of `G`.
    PolynomialInverseCertified { degree: u32 },
    /// Blocks up to `cap` computed without a certified inverse.
    CapReached { cap: u32 },
    /// Two systems determined the same coefficient differently.
    InternalInconsistency { detail: String },
}

impl InversionStatus {
    pub fn is_certified(&self) -> bool {
        matches!(self, Self::PolynomialInverseCertified { .. })
    }
}

/// Residuum vectors of one block degree `d`, indexed by the canonical
/// degree-`d` monomials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResiduumBlock {
    pub degree: u32,
    pub monomials: Vec<Exponent>,
    /// `vectors[i][j]` belongs to inverse component `i` and variable `u_j`.
    pub vectors: Vec<Vec<Vec<BigRational>>>,
}

impl ResiduumBlock {
    pub fn vector(&self, component: usize, variable: usize) -> &[BigRational] {
        &self.vectors[component][variable]
    }

    pub fn is_zero(&self) -> bool {
        self.vectors.iter().flatten().flatten().all(Zero::is_zero)
    }

    /// `(i, j)` pairs with a nonzero residuum.
    pub fn nonzero_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, row) in self.vectors.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if v.iter().any(|c| !c.is_zero()) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InversionResult {
    pub source: PolyMap,
    pub method: Method,
    /// The Jacobian constant `M`.
    pub jacobian_constant: BigRational,
    /// `inverse_blocks[k]` is the homogeneous degree-`k+1` part of `G`.
    pub inverse_blocks: Vec<PolyMap>,
    /// Keyed by the degree of the right-hand side (the step that produces
    /// inverse degree `d + 1`). Empty for the oracle.
    pub residuum: BTreeMap<u32, ResiduumBlock>,
    pub status: InversionStatus,
    /// `G ∘ F = id` verified exactly.
    pub certificate: bool,
    /// Block degrees for which `U^(d) V^(d) = I` was checked.
    pub checked_blocks: Vec<u32>,
}

impl InversionResult {
    /// Sum of the computed blocks.
    pub fn inverse(&self) -> PolyMap {
        sum_blocks(self.source.num_vars(), &self.inverse_blocks)
    }

    /// Highest block degree computed.
    pub fn computed_degree(&self) -> u32 {
        self.inverse_blocks.len() as u32
    }
}

pub(crate) fn sum_blocks(n: usize, blocks: &[PolyMap]) -> PolyMap {
    let mut comps = vec![Polynomial::zero(n); n];
    for b in blocks {
        for (acc, p) in comps.iter_mut().zip(b.components()) {
            *acc = &*acc + p;
        }
    }
    PolyMap::new(comps).expect("blocks have no constant terms")
}

/// `G ∘ F = id`.
pub(crate) fn left_inverse_holds(f: &PolyMap, g: &PolyMap) -> bool {
    g.compose(f).map(|c| c.is_identity()).unwrap_or(false)
}

/// True iff `G ∘ F` and `F ∘ G` are both exactly the identity.
pub fn verify_inverse(f: &PolyMap, g: &PolyMap) -> bool {
    f.num_vars() == g.num_vars() && left_inverse_holds(f, g) && left_inverse_holds(g, f)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResiduumEntry {
    pub component: usize,
    pub variable: usize,
    pub values: Vec<BigRational>,
    pub is_zero: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResiduumReport {
    pub degree: u32,
    pub monomials: Vec<Exponent>,
    pub entries: Vec<ResiduumEntry>,
}

impl ResiduumReport {
    pub fn all_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero)
    }
}

pub fn residuum_report(result: &InversionResult, degree: u32) -> Result<ResiduumReport> {
    let block = result
        .residuum
        .get(&degree)
        .ok_or(Error::DegreeNotComputed(degree))?;
    let mut entries = Vec::new();
    for (i, row) in block.vectors.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            entries.push(ResiduumEntry {
                component: i,
                variable: j,
                is_zero: v.iter().all(Zero::is_zero),
                values: v.clone(),
            });
        }
    }
    Ok(ResiduumReport {
        degree,
        monomials: block.monomials.clone(),
        entries,
    })
}

/// Drives certification: a zero block after a nonzero one, or the cap,
/// triggers an exact composition check. Shared by both inversion routes.
pub(crate) struct Certifier {
    prev_nonzero: bool,
    attempted_at: Option<usize>,
}

impl Certifier {
    pub fn new() -> Self {
        Self {
            prev_nonzero: true,
            attempted_at: None,
        }
    }

    /// Called after each new block; returns the certified degree if this
    /// block completes a polynomial inverse.
    pub fn after_block(&mut self, f: &PolyMap, blocks: &[PolyMap]) -> Option<u32> {
        let zero = blocks.last().is_some_and(PolyMap::is_zero);
        let attempt = zero && self.prev_nonzero;
        self.prev_nonzero = !zero;
        if attempt {
            return self.attempt(f, blocks);
        }
        None
    }

    pub fn at_cap(&mut self, f: &PolyMap, blocks: &[PolyMap]) -> Option<u32> {
        if self.attempted_at == Some(blocks.len()) {
            return None;
        }
        self.attempt(f, blocks)
    }

    fn attempt(&mut self, f: &PolyMap, blocks: &[PolyMap]) -> Option<u32> {
        self.attempted_at = Some(blocks.len());
        let g = sum_blocks(f.num_vars(), blocks);
        left_inverse_holds(f, &g).then(|| g.degree().unwrap_or(0))
    }
}
