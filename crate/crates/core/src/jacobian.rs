//! Jacobian determinants and adjugates of polynomial maps.

use std::collections::HashMap;

use num_rational::BigRational;

use crate::poly::{PolyMap, Polynomial};

/// Determinant of a square matrix of polynomials by cofactor expansion
/// along the rows, memoizing each minor by its column set.
pub fn polynomial_determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    assert!((1..64).contains(&n), "unsupported matrix size {n}");
    assert!(m.iter().all(|row| row.len() == n), "matrix must be square");
    let num_vars = m[0][0].num_vars();

    fn minor(
        m: &[Vec<Polynomial>],
        cols: u64,
        num_vars: usize,
        memo: &mut HashMap<u64, Polynomial>,
    ) -> Polynomial {
        if cols == 0 {
            return Polynomial::one(num_vars);
        }
        if let Some(p) = memo.get(&cols) {
            return p.clone();
        }
        let n = m.len();
        let row = n - cols.count_ones() as usize;
        let mut acc = Polynomial::zero(num_vars);
        let mut position = 0;
        for c in 0..n {
            if cols & (1 << c) == 0 {
                continue;
            }
            let entry = &m[row][c];
            if !entry.is_zero() {
                let sub = minor(m, cols & !(1 << c), num_vars, memo);
                let term = entry * &sub;
                acc = if position % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            position += 1;
        }
        memo.insert(cols, acc.clone());
        acc
    }

    let mut memo = HashMap::new();
    minor(m, (1u64 << n) - 1, num_vars, &mut memo)
}

/// `det(d u_i / d x_j)` as an exact polynomial.
pub fn jacobian_det(map: &PolyMap) -> Polynomial {
    polynomial_determinant(&map.jacobian_matrix())
}

/// The adjugate of the Jacobian matrix: entry `(i, j)` is
/// `(-1)^{i+j} det(J with row j and column i removed)`, so that
/// `J * C = det(J) * I`. Dividing by the Jacobian constant gives the
/// derivative of the inverse map evaluated along the map.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CofactorMatrix {
    entries: Vec<Vec<Polynomial>>,
}

impl CofactorMatrix {
    pub fn entries(&self) -> &[Vec<Polynomial>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i][j]
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// Constant terms, i.e. the adjugate of the linear part.
    pub fn constant_terms(&self) -> Vec<Vec<BigRational>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(Polynomial::constant_term).collect())
            .collect()
    }
}

pub fn cofactor_matrix(map: &PolyMap) -> CofactorMatrix {
    let n = map.num_vars();
    let jac = map.jacobian_matrix();
    if n == 1 {
        return CofactorMatrix {
            entries: vec![vec![Polynomial::one(1)]],
        };
    }
    let mut entries = vec![vec![Polynomial::zero(n); n]; n];
    for (i, row) in entries.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let sub: Vec<Vec<Polynomial>> = jac
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != j)
                .map(|(_, r)| {
                    r.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != i)
                        .map(|(_, p)| p.clone())
                        .collect()
                })
                .collect();
            let d = polynomial_determinant(&sub);
            *slot = if (i + j) % 2 == 0 { d } else { -&d };
        }
    }
    CofactorMatrix { entries }
}

/// Product of two square polynomial matrices.
pub fn polynomial_matrix_product(a: &[Vec<Polynomial>], b: &[Vec<Polynomial>]) -> Vec<Vec<Polynomial>> {
    let n = a.len();
    let num_vars = a[0][0].num_vars();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(Polynomial::zero(num_vars), |acc, k| &acc + &(&a[i][k] * &b[k][j]))
                })
                .collect()
        })
        .collect()
}
