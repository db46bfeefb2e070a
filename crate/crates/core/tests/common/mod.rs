#![allow(dead_code)]

use jacinv_core::generators::{random_tame, LinearKind, TameParams};
use jacinv_core::{BigInt, BigRational, Exponent, PolyMap, Polynomial, RationalMatrix};
use proptest::prelude::*;

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn poly(n: usize, text: &str) -> Polynomial {
    jacinv_core::parse_polynomial(text, n, 'x').unwrap()
}

pub fn map(text: &str) -> PolyMap {
    jacinv_core::parse_map(text).unwrap().map
}

pub fn rational() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

/// Polynomials in `n` variables with up to `max_terms` terms of degree at most `max_degree`.
pub fn polynomial(n: usize, max_degree: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0..=max_degree, n), rational()), 0..=max_terms).prop_map(
        move |terms| {
            let terms = terms.into_iter().map(|(mut e, c)| {
                // scale the exponent down into the degree bound
                while e.iter().sum::<u32>() > max_degree {
                    let i = e.iter().position(|&k| k > 0).unwrap();
                    e[i] -= 1;
                }
                (Exponent::new(e), c)
            });
            Polynomial::from_terms(n, terms).unwrap()
        },
    )
}

/// Maps with no constant terms.
pub fn poly_map(n: usize, max_degree: u32, max_terms: usize) -> impl Strategy<Value = PolyMap> {
    prop::collection::vec(polynomial(n, max_degree, max_terms), n).prop_map(move |comps| {
        let comps = comps
            .into_iter()
            .map(|p| &p - &Polynomial::constant(n, p.constant_term()))
            .collect();
        PolyMap::new(comps).unwrap()
    })
}

pub fn int_matrix(n: usize, bound: i64) -> impl Strategy<Value = RationalMatrix> {
    prop::collection::vec(prop::collection::vec(-bound..=bound, n), n).prop_map(|rows| {
        RationalMatrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(|v| q(v, 1)).collect())
                .collect(),
        )
        .unwrap()
    })
}

/// Tame automorphisms with `deg F, deg G <= max_degree`.
pub fn tame(n: usize, max_degree: u32, seed: u64) -> jacinv_core::generators::KnownInverse {
    let mut params = TameParams::new(n);
    params.max_degree = Some(max_degree);
    params.linear = LinearKind::General;
    random_tame(&params, seed).unwrap()
}
