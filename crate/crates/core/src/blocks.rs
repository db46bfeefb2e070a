//! Homogeneous-block matrices of a linear map.
//!
//! For an invertible `n x n` matrix `L` and a degree `d`, the block matrix
//! `U^(d)` expresses the degree-`d` monomials of `L x` in terms of the
//! degree-`d` monomials of `x`: row `r` holds the coefficients of
//! `prod_j (L_j x)^{m_j}` where `m` is the `r`-th exponent in canonical
//! order. This is the `d`-th symmetric power of `L`, so
//! `U^(d)(L1 L2) = U^(d)(L1) U^(d)(L2)` and the inverse block is the block of
//! `L^{-1}`. Its determinant is `det(L)^C(d+n-1, n)`.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Pow};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::poly::{Exponent, Polynomial};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlockMatrix {
    num_vars: usize,
    degree: u32,
    monomials: Vec<Exponent>,
    entries: RationalMatrix,
}

impl BlockMatrix {
    /// The degree-`d` symmetric power of any square `L` (singular allowed).
    pub fn symmetric_power(l: &RationalMatrix, degree: u32) -> Result<Self> {
        if !l.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "block construction needs a square matrix, got {}x{}",
                l.rows(),
                l.cols()
            )));
        }
        let n = l.rows();
        let forms: Vec<Polynomial> = (0..n).map(|i| Polynomial::linear_form(l.row(i))).collect();

        // products of degree k, built one level at a time
        let mut level: HashMap<Exponent, Polynomial> = HashMap::new();
        level.insert(Exponent::zero(n), Polynomial::one(n));
        for k in 1..=degree {
            let next: Vec<(Exponent, Polynomial)> = Exponent::all_of_degree(n, k)
                .into_par_iter()
                .map(|m| {
                    let t = m.entries().iter().position(|&e| e > 0).expect("degree >= 1");
                    let lower = m.decrement(t).expect("entry is positive");
                    let p = &level[&lower] * &forms[t];
                    (m, p)
                })
                .collect();
            level = next.into_iter().collect();
        }

        let monomials = Exponent::all_of_degree(n, degree);
        let size = monomials.len();
        let data: Vec<BigRational> = monomials
            .par_iter()
            .flat_map_iter(|row| {
                let p = &level[row];
                monomials.iter().map(move |col| p.coeff(col))
            })
            .collect();
        Ok(Self {
            num_vars: n,
            degree,
            entries: RationalMatrix::new(size, size, data)?,
            monomials,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Row and column labels, in canonical order.
    pub fn monomials(&self) -> &[Exponent] {
        &self.monomials
    }

    pub fn entries(&self) -> &RationalMatrix {
        &self.entries
    }

    pub fn size(&self) -> usize {
        self.monomials.len()
    }
}

/// `U^(d)` for an invertible `L`.
pub fn build_block(l: &RationalMatrix, degree: u32) -> Result<BlockMatrix> {
    if l.is_square() && l.determinant()? == BigRational::from_integer(0.into()) {
        return Err(Error::SingularLinearPart);
    }
    BlockMatrix::symmetric_power(l, degree)
}

/// `V^(d) = (U^(d))^{-1}`, obtained as the block of `L^{-1}` and checked
/// against `U` by an exact product.
pub fn block_inverse(u: &BlockMatrix, l: &RationalMatrix) -> Result<BlockMatrix> {
    let v = build_block(&l.inverse()?, u.degree())?;
    if v.num_vars != u.num_vars {
        return Err(Error::DimensionMismatch("block built from a different linear map size".into()));
    }
    if !u.entries.mul(&v.entries)?.is_identity() {
        return Err(Error::InternalInconsistency(format!(
            "U*V != I for the degree-{} block",
            u.degree()
        )));
    }
    Ok(v)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of degree-`d` monomials in `n` variables, `C(d+n-1, n-1)`.
pub fn block_size(n: usize, degree: u32) -> u64 {
    binomial(degree as u64 + n as u64 - 1, n as u64 - 1)
}

/// Power of `det L` in `det U^(d)`, `C(d+n-1, n)`.
pub fn det_exponent(n: usize, degree: u32) -> u64 {
    binomial(degree as u64 + n as u64 - 1, n as u64)
}

/// `det U^(d)` computed directly from the materialized block.
pub fn det_block(l: &RationalMatrix, degree: u32) -> Result<BigRational> {
    BlockMatrix::symmetric_power(l, degree)?.entries.determinant()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DetLawCheck {
    pub num_vars: usize,
    pub degree: u32,
    pub size: u64,
    pub exponent: u64,
    pub det_linear: BigRational,
    pub det_block: BigRational,
    pub holds: bool,
}

/// Compares the brute-force block determinant with `det(L)^C(d+n-1, n)`.
pub fn check_det_law(l: &RationalMatrix, degree: u32) -> Result<DetLawCheck> {
    let n = l.rows();
    let det_linear = l.determinant()?;
    let det_block = det_block(l, degree)?;
    let exponent = det_exponent(n, degree);
    let expected = if exponent == 0 {
        BigRational::one()
    } else {
        Pow::pow(&det_linear, exponent)
    };
    Ok(DetLawCheck {
        num_vars: n,
        degree,
        size: block_size(n, degree),
        exponent,
        holds: det_block == expected,
        det_linear,
        det_block,
    })
}

/// Rows `(degree, block size, determinant exponent)` for `d = 1..=max_degree`.
pub fn det_pattern(n: usize, max_degree: u32) -> Vec<(u32, u64, u64)> {
    (1..=max_degree)
        .map(|d| (d, block_size(n, d), det_exponent(n, d)))
        .collect()
}
