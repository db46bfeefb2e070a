//! Principle and derived Jacobi conditions.
//!
//! The principle condition is the constant term `M` of `det J_F` (which is
//! also the determinant of the linear part). Every other coefficient of
//! `det J_F` is one derived condition; for a map with constant Jacobian all
//! of them vanish. A report lists the ones that do not.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::jacobian::jacobian_det;
use crate::poly::{Exponent, PolyMap, Polynomial};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JacobiReport {
    pub principle_value: BigRational,
    pub is_constant: bool,
    /// Nonzero coefficients of `det J_F - M`, in graded order.
    pub violations: Vec<(Exponent, BigRational)>,
}

impl JacobiReport {
    /// Rebuilds `det J_F` from the principle value and the violations.
    pub fn determinant(&self, num_vars: usize) -> Polynomial {
        let mut terms = self.violations.clone();
        terms.push((Exponent::zero(num_vars), self.principle_value.clone()));
        Polynomial::from_terms(num_vars, terms).expect("exponents carry num_vars entries")
    }
}

pub fn check_jacobi(map: &PolyMap) -> JacobiReport {
    let det = jacobian_det(map);
    let principle_value = det.constant_term();
    let violations: Vec<(Exponent, BigRational)> = det
        .terms()
        .filter(|(e, _)| !e.is_zero())
        .map(|(e, c)| (e.clone(), c.clone()))
        .collect();
    JacobiReport {
        principle_value,
        is_constant: violations.is_empty(),
        violations,
    }
}

/// Returns `M` when `det J_F` is the nonzero constant `M`.
pub fn require_unit_jacobian(map: &PolyMap) -> Result<BigRational> {
    let report = check_jacobi(map);
    if !report.is_constant {
        return Err(Error::NonConstantJacobian {
            principle_value: report.principle_value,
            violations: report.violations,
        });
    }
    if report.principle_value.is_zero() {
        return Err(Error::SingularLinearPart);
    }
    Ok(report.principle_value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{map, q};

    #[test]
    fn examples() {
        let r = check_jacobi(&map("u1 = x1 + x2^2\nu2 = x2"));
        assert_eq!(r.principle_value, q(1, 1));
        assert!(r.is_constant && r.violations.is_empty());

        let r = check_jacobi(&map("u1 = x1 + x1^2\nu2 = x2"));
        assert_eq!(r.principle_value, q(1, 1));
        assert_eq!(r.violations, vec![(Exponent::new(vec![1, 0]), q(2, 1))]);

        let r = check_jacobi(&map("u1 = x1^2\nu2 = x2"));
        assert!(r.principle_value.is_zero());
        assert!(!r.is_constant);
    }

    /// The coefficient of `x` in `det J` for a general pair, written out
    /// term by term: `(2 a20 b01 + a10 b11) - (2 b20 a01 + b10 a11)`.
    #[test]
    fn coefficient_of_x_matches_written_out_condition() {
        let (a10, a01, a20, a11) = (q(3, 1), q(-2, 1), q(5, 2), q(7, 1));
        let (b10, b01, b20, b11) = (q(1, 3), q(4, 1), q(-1, 1), q(2, 5));
        let f = format!("u1 = {a10} x1 - 2 x2 + 5/2 x1^2 + 7 x1*x2\nu2 = 1/3 x1 + 4 x2 - x1^2 + 2/5 x1*x2");
        let report = check_jacobi(&map(&f));
        let expected = (q(2, 1) * &a20 * &b01 + &a10 * &b11) - (q(2, 1) * &b20 * &a01 + &b10 * &a11);
        let got = report
            .violations
            .iter()
            .find(|(e, _)| e.entries() == [1, 0])
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero);
        assert_eq!(got, expected);
        assert_eq!(report.principle_value, &a10 * &b01 - &a01 * &b10);
    }

    #[test]
    fn gate() {
        assert_eq!(require_unit_jacobian(&map("u1 = x1 + x2^2\nu2 = x2")), Ok(q(1, 1)));
        assert_eq!(require_unit_jacobian(&map("u1 = 2 x1\nu2 = 1/2 x2")), Ok(q(1, 1)));
        match require_unit_jacobian(&map("u1 = x1 + x1^2\nu2 = x2")) {
            Err(Error::NonConstantJacobian { violations, .. }) => {
                assert_eq!(violations, vec![(Exponent::new(vec![1, 0]), q(2, 1))])
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            require_unit_jacobian(&map("u1 = x1 + x2\nu2 = 2 x1 + 2 x2")),
            Err(Error::SingularLinearPart)
        );
    }

    #[test]
    fn report_reconstructs_determinant() {
        let f = map("u1 = x1 + x2^2 + x1^3\nu2 = x2 - x1*x2");
        let report = check_jacobi(&f);
        assert_eq!(report.determinant(2), jacobian_det(&f));
    }
}
