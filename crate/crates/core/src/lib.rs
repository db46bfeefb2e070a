//! Exact inversion of polynomial maps with constant Jacobian.
//!
//! Polynomials have rational coefficients ([`BigRational`]) and are stored
//! sparsely. A map `F: Q^n -> Q^n` with `F(0) = 0` is a [`PolyMap`]; its
//! formal inverse is computed block by block in [`inverter`].

pub mod blocks;
pub mod error;
pub mod generators;
mod intpoly;
pub mod inverter;
pub mod jacobi;
pub mod jacobian;
pub mod matrix;
pub mod poly;
pub mod text;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub use blocks::{block_inverse, build_block, check_det_law, det_block, det_pattern, BlockMatrix, DetLawCheck};
pub use error::{Error, Result};
pub use inverter::{
    default_cap, invert_block_scheme, invert_block_scheme_with, invert_oracle, invert_oracle_with,
    invert_special_42, residuum_report, verify_inverse, InversionResult, InversionStatus, InvertOptions, Method,
    ResiduumBlock, ResiduumReport, SolveRoute,
};
pub use jacobi::{check_jacobi, require_unit_jacobian, JacobiReport};
pub use jacobian::{cofactor_matrix, jacobian_det, CofactorMatrix};
pub use matrix::RationalMatrix;
pub use poly::{Exponent, PolyMap, Polynomial};
pub use text::{parse_map, parse_polynomial, MapDocument, ParseError, ParseErrorKind};

#[cfg(test)]
pub(crate) mod testutil {
    use num_bigint::BigInt;
    use num_rational::BigRational;

    use crate::poly::{PolyMap, Polynomial};

    pub fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn poly(num_vars: usize, text: &str) -> Polynomial {
        crate::text::parse_polynomial(text, num_vars, 'x').unwrap()
    }

    pub fn map(text: &str) -> PolyMap {
        crate::text::parse_map(text).unwrap().map
    }
}
