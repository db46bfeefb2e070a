mod common;

use common::{int_matrix, q};
use jacinv_core::blocks::{binomial, det_exponent};
use jacinv_core::{build_block, det_block, BigRational, BlockMatrix, RationalMatrix};
use num_traits::{One, Pow, Zero};
use proptest::prelude::*;

/// Determinant by plain Gaussian elimination over the rationals, independent
/// of the fraction-free routine in the library.
fn gauss_det(m: &RationalMatrix) -> BigRational {
    let n = m.rows();
    let mut a = m.row_vecs();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det *= &a[col][col];
        for r in col + 1..n {
            let f = &a[r][col] / &a[col][col];
            let pivot_row = a[col].clone();
            for (target, source) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                *target -= &f * source;
            }
        }
    }
    det
}

fn multinomial(e: &[u32]) -> BigRational {
    let fact = |k: u32| (1..=k).fold(BigRational::one(), |acc, i| acc * q(i as i64, 1));
    let d: u32 = e.iter().sum();
    e.iter().fold(fact(d), |acc, &k| acc / fact(k))
}

#[test]
fn determinant_tables() {
    let l = RationalMatrix::from_i64_rows(&[&[2, 1], &[1, 3]]).unwrap();
    let m = q(5, 1);
    let powers: Vec<u64> = (1..=5).map(|d| det_exponent(2, d)).collect();
    assert_eq!(powers, vec![1, 3, 6, 10, 15]);
    for d in 1..=5 {
        assert_eq!(build_block(&l, d).unwrap().size(), d as usize + 1);
        assert_eq!(det_block(&l, d).unwrap(), Pow::pow(&m, det_exponent(2, d)));
    }
    let sizes: Vec<u64> = (1..=5).map(|d| binomial(d + 2, 2)).collect();
    assert_eq!(sizes, vec![3, 6, 10, 15, 21]);
    let powers: Vec<u64> = (1..=5).map(|d| det_exponent(3, d)).collect();
    assert_eq!(powers, vec![1, 4, 10, 20, 35]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn blocks_are_multiplicative(a in int_matrix(3, 4), b in int_matrix(3, 4), d in 1u32..=3) {
        let ab = a.mul(&b).unwrap();
        let lhs = BlockMatrix::symmetric_power(&ab, d).unwrap();
        let sa = BlockMatrix::symmetric_power(&a, d).unwrap();
        let sb = BlockMatrix::symmetric_power(&b, d).unwrap();
        prop_assert_eq!(lhs.entries(), &sa.entries().mul(sb.entries()).unwrap());
    }

    #[test]
    fn transpose_relation(a in int_matrix(3, 4), d in 1u32..=3) {
        // Sym(A^T) = W^{-1} Sym(A)^T W with W the multinomial weights
        let s = BlockMatrix::symmetric_power(&a, d).unwrap();
        let st = BlockMatrix::symmetric_power(&a.transpose(), d).unwrap();
        let w: Vec<BigRational> = s.monomials().iter().map(|e| multinomial(e.entries())).collect();
        for r in 0..s.size() {
            for c in 0..s.size() {
                prop_assert_eq!(st.entries().get(r, c), &(&w[c] * s.entries().get(c, r) / &w[r]));
            }
        }
    }

    #[test]
    fn det_law_by_elimination(a in int_matrix(3, 3), d in 1u32..=4) {
        let block = BlockMatrix::symmetric_power(&a, d).unwrap();
        let det_l = gauss_det(&a);
        prop_assert_eq!(gauss_det(block.entries()), Pow::pow(&det_l, det_exponent(3, d)));
        prop_assert_eq!(block.entries().determinant().unwrap(), gauss_det(block.entries()));
    }

    #[test]
    fn inverse_block_is_block_of_inverse(a in int_matrix(2, 5), d in 1u32..=5) {
        prop_assume!(!a.determinant().unwrap().is_zero());
        let u = BlockMatrix::symmetric_power(&a, d).unwrap();
        let v = BlockMatrix::symmetric_power(&a.inverse().unwrap(), d).unwrap();
        prop_assert!(u.entries().mul(v.entries()).unwrap().is_identity());
        prop_assert_eq!(u.entries().inverse().unwrap(), v.entries().clone());
    }
}
