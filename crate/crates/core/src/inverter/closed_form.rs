use num_rational::BigRational;
use num_traits::{Pow, Zero};

use super::verify_inverse;
use crate::error::{Error, Result};
use crate::jacobi::require_unit_jacobian;
use crate::poly::{Exponent, PolyMap, Polynomial};

/// Closed-form inverse of a plane pair `(f, g)` with `g` linear.
///
/// With `g = b10 x + b01 y` and constant Jacobian `M`:
///
/// ```text
/// x = (b01 f - a01 g - sum_{j>=2} a0j / b01^(j-1) g^j) / M
/// y = (-b10 f + a10 g + sum_{j>=2} a1(j-1) / (j b01^(j-1)) g^j) / M
/// ```
///
/// The result is certified by exact composition before it is returned.
pub fn invert_special_42(f: &Polynomial, g: &Polynomial) -> Result<PolyMap> {
    for p in [f, g] {
        if p.num_vars() != 2 {
            return Err(Error::VariableCountMismatch {
                expected: 2,
                found: p.num_vars(),
            });
        }
    }
    if g.degree().is_some_and(|d| d > 1) {
        return Err(Error::UnexpectedShape {
            expected: "a linear second component",
            detail: format!("g = {g} has degree {}", g.degree().unwrap_or(0)),
        });
    }
    let map = PolyMap::new(vec![f.clone(), g.clone()])?;
    let m = require_unit_jacobian(&map)?;

    let coeff = |p: &Polynomial, a: u32, b: u32| p.coeff(&Exponent::new(vec![a, b]));
    let (b10, b01) = (coeff(g, 1, 0), coeff(g, 0, 1));
    if b01.is_zero() {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let (a10, a01) = (coeff(f, 1, 0), coeff(f, 0, 1));
    let k = f.degree().unwrap_or(1);

    let u1 = Polynomial::var(2, 0);
    let u2 = Polynomial::var(2, 1);
    let mut x = &u1.scale(&b01) - &u2.scale(&a01);
    let mut y = &u2.scale(&a10) - &u1.scale(&b10);
    for j in 2..=k {
        let g_power = u2.pow(j);
        let b01_power: BigRational = Pow::pow(&b01, j - 1);
        let a0j = coeff(f, 0, j);
        let a1 = coeff(f, 1, j - 1);
        x = &x - &g_power.scale(&(a0j / &b01_power));
        y = &y + &g_power.scale(&(a1 / (b01_power * BigRational::from_integer(j.into()))));
    }
    let inv_m = BigRational::from_integer(1.into()) / m;
    let inverse = PolyMap::new(vec![x.scale(&inv_m), y.scale(&inv_m)])?;
    if !verify_inverse(&map, &inverse) {
        return Err(Error::InternalInconsistency(format!(
            "closed-form inverse {inverse} does not invert {map}"
        )));
    }
    Ok(inverse)
}
