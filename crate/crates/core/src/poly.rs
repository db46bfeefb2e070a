//! Sparse multivariate polynomials with exact rational coefficients, and
//! polynomial maps `F = (u_1, ..., u_n)` in `n` variables.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Exponent`], whose ordering is
//! graded: ascending total degree, and inside one degree lexicographically
//! descending (`x^2, xy, y^2` for two variables). Every iteration, printout
//! and report in the crate uses this order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intpoly::IntPoly;
use crate::matrix::RationalMatrix;

/// Multi-index of a monomial; entry `i` is the power of `x_{i+1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zero(num_vars: usize) -> Self {
        Self(vec![0; num_vars])
    }

    /// The exponent of the single variable `x_{i+1}`.
    pub fn unit(num_vars: usize, i: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[i] = 1;
        Self(e)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        debug_assert_eq!(self.0.len(), other.0.len());
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn increment(&self, i: usize) -> Exponent {
        let mut e = self.0.clone();
        e[i] += 1;
        Exponent(e)
    }

    /// `self - e_i`, or `None` when the `i`-th entry is zero.
    pub fn decrement(&self, i: usize) -> Option<Exponent> {
        if self.0[i] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[i] -= 1;
        Some(Exponent(e))
    }

    /// Every exponent of total degree `degree` in `num_vars` variables, in
    /// canonical (lexicographically descending) order: `x^d` first.
    pub fn all_of_degree(num_vars: usize, degree: u32) -> Vec<Exponent> {
        fn fill(prefix: &mut Vec<u32>, remaining_vars: usize, degree: u32, out: &mut Vec<Exponent>) {
            if remaining_vars == 1 {
                prefix.push(degree);
                out.push(Exponent(prefix.clone()));
                prefix.pop();
                return;
            }
            for first in (0..=degree).rev() {
                prefix.push(first);
                fill(prefix, remaining_vars - 1, degree - first, out);
                prefix.pop();
            }
        }
        assert!(num_vars >= 1, "at least one variable is required");
        let mut out = Vec::new();
        fill(&mut Vec::with_capacity(num_vars), num_vars, degree, &mut out);
        out
    }

    /// Writes the monomial as `x1*x2^3` (empty string for the constant monomial).
    pub fn fmt_monomial(&self, symbol: &str) -> String {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| match e {
                1 => format!("{symbol}{}", i + 1),
                _ => format!("{symbol}{}^{e}", i + 1),
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `num_vars` variables over the rationals, in canonical
/// form: no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    num_vars: usize,
    terms: BTreeMap<Exponent, BigRational>,
}

impl Polynomial {
    pub fn zero(num_vars: usize) -> Self {
        Self {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: BigRational) -> Self {
        Self::monomial(Exponent::zero(num_vars), c)
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, BigRational::one())
    }

    /// The variable `x_{i+1}` (zero-based index).
    pub fn var(num_vars: usize, i: usize) -> Self {
        Self::monomial(Exponent::unit(num_vars, i), BigRational::one())
    }

    pub fn monomial(exponent: Exponent, c: BigRational) -> Self {
        let num_vars = exponent.num_vars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponent, c);
        }
        Self { num_vars, terms }
    }

    /// Builds a polynomial from terms, merging repeated exponents.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, BigRational)>,
    {
        let mut p = Self::zero(num_vars);
        for (e, c) in terms {
            if e.num_vars() != num_vars {
                return Err(Error::VariableCountMismatch {
                    expected: num_vars,
                    found: e.num_vars(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// A linear form `sum_j coeffs[j] * x_{j+1}`.
    pub fn linear_form(coeffs: &[BigRational]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (j, c) in coeffs.iter().enumerate() {
            p.add_term(Exponent::unit(n, j), c.clone());
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` stands for the degree of the zero polynomial
    /// (minus infinity), which orders below every real degree.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Exponent::degree).max()
    }

    /// Lowest degree of a nonzero term, `None` for zero.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Exponent::degree).min()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponent) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&Exponent::zero(self.num_vars))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Exponent::is_zero)
    }

    fn check_vars(&self, other: &Polynomial) -> Result<()> {
        if self.num_vars == other.num_vars {
            Ok(())
        } else {
            Err(Error::VariableCountMismatch {
                expected: self.num_vars,
                found: other.num_vars,
            })
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_vars(other)?;
        Ok(self.mul_truncated(other, None))
    }

    /// Product keeping only terms of degree at most `max_degree` (all terms
    /// when `None`).
    pub fn mul_truncated(&self, other: &Polynomial, max_degree: Option<u32>) -> Polynomial {
        debug_assert_eq!(self.num_vars, other.num_vars);
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(self.num_vars);
        }
        IntPoly::from_poly(self)
            .mul(&IntPoly::from_poly(other), max_degree)
            .to_poly()
    }

    /// Builds a polynomial from a map already free of zero coefficients.
    pub(crate) fn from_normalized(num_vars: usize, terms: BTreeMap<Exponent, BigRational>) -> Self {
        debug_assert!(terms.keys().all(|e| e.num_vars() == num_vars));
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        Self { num_vars, terms }
    }

    pub fn scale(&self, s: &BigRational) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero(self.num_vars);
        }
        Polynomial {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::one(self.num_vars);
        for _ in 0..k {
            out = out.mul_truncated(self, None);
        }
        out
    }

    /// Sum of the terms of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        Polynomial {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops every term of degree above `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Polynomial {
        Polynomial {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() <= max_degree)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Formal partial derivative with respect to `x_{i+1}` (zero-based).
    pub fn partial_derivative(&self, i: usize) -> Result<Polynomial> {
        if i >= self.num_vars {
            return Err(Error::VariableIndexOutOfRange {
                index: i,
                num_vars: self.num_vars,
            });
        }
        let mut out = Polynomial::zero(self.num_vars);
        for (e, c) in &self.terms {
            let power = e.entries()[i];
            if let Some(lower) = e.decrement(i) {
                out.add_term(lower, c * BigRational::from_integer(power.into()));
            }
        }
        Ok(out)
    }

    /// Substitutes `x_{i+1} := subst[i]`.
    pub fn substitute(&self, subst: &[Polynomial]) -> Result<Polynomial> {
        self.substitute_truncated(subst, None)
    }

    /// Substitution keeping only terms of degree at most `max_degree`.
    pub fn substitute_truncated(&self, subst: &[Polynomial], max_degree: Option<u32>) -> Result<Polynomial> {
        if subst.len() != self.num_vars {
            return Err(Error::VariableCountMismatch {
                expected: self.num_vars,
                found: subst.len(),
            });
        }
        let target_vars = subst[0].num_vars;
        if let Some(bad) = subst.iter().find(|p| p.num_vars != target_vars) {
            return Err(Error::VariableCountMismatch {
                expected: target_vars,
                found: bad.num_vars,
            });
        }

        let mut table = MonomialTable::new(target_vars, subst);
        Ok(self.substitute_cached(max_degree, &mut table))
    }

    fn substitute_cached(&self, max_degree: Option<u32>, table: &mut MonomialTable) -> Polynomial {
        for e in self.terms.keys() {
            table.ensure(e, max_degree);
        }
        let parts: Vec<(&IntPoly, &BigRational)> = self.terms.iter().map(|(e, c)| (&table.products[e], c)).collect();
        IntPoly::combine(table.target_vars, &parts)
    }

    /// `p(F)`: substitutes the components of `map` for the variables.
    pub fn compose(&self, map: &PolyMap) -> Result<Polynomial> {
        self.substitute(map.components())
    }

    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.num_vars {
            return Err(Error::VariableCountMismatch {
                expected: self.num_vars,
                found: point.len(),
            });
        }
        Ok(self.terms.iter().fold(BigRational::zero(), |acc, (e, c)| {
            let mono = e
                .entries()
                .iter()
                .zip(point)
                .fold(BigRational::one(), |m, (&k, v)| m * num_traits::pow(v.clone(), k as usize));
            acc + c * mono
        }))
    }

    /// Splits into homogeneous components keyed by degree.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, Polynomial> {
        let mut out: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry(e.degree())
                .or_insert_with(|| Polynomial::zero(self.num_vars))
                .terms
                .insert(e.clone(), c.clone());
        }
        out
    }

    /// Canonical text with variables named `{symbol}1 .. {symbol}n`,
    /// e.g. `x1 - 1/2 x1*x2^2`.
    pub fn to_text(&self, symbol: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = e.fmt_monomial(symbol);
            if mono.is_empty() {
                out.push_str(&magnitude.to_string());
            } else if magnitude.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{magnitude} {mono}"));
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text("x"))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;

            /// Panics on a variable-count mismatch; use the `checked_*` form
            /// when the operands come from untrusted input.
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("polynomial variable counts differ")
            }
        }

        impl std::ops::$trait<Polynomial> for Polynomial {
            type Output = Polynomial;

            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

/// A polynomial map `x -> (u_1(x), ..., u_n(x))` fixing the origin.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolyMap {
    components: Vec<Polynomial>,
}

/// Memo of `subst^m` for monomials `m`, built as `subst^(m - e_i) * subst_i`
/// with `i` the last variable of `m`, and shared by every polynomial
/// substituted into the same map.
struct MonomialTable {
    target_vars: usize,
    subst: Vec<IntPoly>,
    products: HashMap<Exponent, IntPoly>,
}

impl MonomialTable {
    fn new(target_vars: usize, subst: &[Polynomial]) -> Self {
        let mut products = HashMap::new();
        products.insert(Exponent::zero(subst.len()), IntPoly::one(target_vars));
        Self {
            target_vars,
            subst: subst.iter().map(IntPoly::from_poly).collect(),
            products,
        }
    }

    fn ensure(&mut self, e: &Exponent, max_degree: Option<u32>) {
        let last = |m: &Exponent| m.entries().iter().rposition(|&k| k > 0).expect("nonzero exponent");
        let mut chain = Vec::new();
        let mut cur = e.clone();
        while !self.products.contains_key(&cur) {
            let lower = cur.decrement(last(&cur)).expect("positive entry");
            chain.push(cur);
            cur = lower;
        }
        for m in chain.into_iter().rev() {
            let i = last(&m);
            let lower = m.decrement(i).expect("positive entry");
            let p = self.products[&lower].mul(&self.subst[i], max_degree);
            self.products.insert(m, p);
        }
    }
}

impl PolyMap {
    pub fn new(components: Vec<Polynomial>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::NoVariables);
        }
        for p in &components {
            if p.num_vars() != n {
                return Err(Error::ComponentCountMismatch {
                    components: n,
                    num_vars: p.num_vars(),
                });
            }
        }
        for (i, p) in components.iter().enumerate() {
            let c = p.constant_term();
            if !c.is_zero() {
                return Err(Error::NonzeroConstantTerm { component: i, constant: c });
            }
        }
        Ok(Self { components })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            components: (0..n).map(|i| Polynomial::var(n, i)).collect(),
        }
    }

    /// The linear map `x -> L x`.
    pub fn from_linear(l: &RationalMatrix) -> Result<Self> {
        if !l.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "linear map needs a square matrix, got {}x{}",
                l.rows(),
                l.cols()
            )));
        }
        Ok(Self {
            components: (0..l.rows()).map(|i| Polynomial::linear_form(l.row(i))).collect(),
        })
    }

    pub fn num_vars(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn into_components(self) -> Vec<Polynomial> {
        self.components
    }

    /// Maximum component degree; `None` when every component is zero.
    pub fn degree(&self) -> Option<u32> {
        self.components.iter().filter_map(Polynomial::degree).max()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.num_vars())
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    /// Matrix of linear coefficients: entry `(i, j)` is the coefficient of
    /// `x_{j+1}` in `u_{i+1}`.
    pub fn linear_part(&self) -> RationalMatrix {
        let n = self.num_vars();
        let mut m = RationalMatrix::zeros(n, n);
        for (i, p) in self.components.iter().enumerate() {
            for j in 0..n {
                m.set(i, j, p.coeff(&Exponent::unit(n, j)));
            }
        }
        m
    }

    /// Componentwise homogeneous part of degree `d >= 1`.
    pub fn homogeneous_part(&self, d: u32) -> PolyMap {
        assert!(d >= 1, "degree-0 parts are excluded from maps");
        PolyMap {
            components: self.components.iter().map(|p| p.homogeneous_part(d)).collect(),
        }
    }

    /// `self ∘ inner`, i.e. `x -> self(inner(x))`.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap> {
        if inner.num_vars() != self.num_vars() {
            return Err(Error::VariableCountMismatch {
                expected: self.num_vars(),
                found: inner.num_vars(),
            });
        }
        Ok(PolyMap {
            components: {
                let mut table = MonomialTable::new(inner.num_vars(), inner.components());
                self.components
                    .iter()
                    .map(|p| p.substitute_cached(None, &mut table))
                    .collect()
            },
        })
    }

    pub fn checked_add(&self, other: &PolyMap) -> Result<PolyMap> {
        if other.num_vars() != self.num_vars() {
            return Err(Error::VariableCountMismatch {
                expected: self.num_vars(),
                found: other.num_vars(),
            });
        }
        Ok(PolyMap {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, s: &BigRational) -> PolyMap {
        PolyMap {
            components: self.components.iter().map(|p| p.scale(s)).collect(),
        }
    }

    /// Matrix of partial derivatives `d u_i / d x_j`.
    pub fn jacobian_matrix(&self) -> Vec<Vec<Polynomial>> {
        let n = self.num_vars();
        self.components
            .iter()
            .map(|p| {
                (0..n)
                    .map(|j| p.partial_derivative(j).expect("index below num_vars"))
                    .collect()
            })
            .collect()
    }

    /// Canonical text, one `lhs<i> = expr` line per component.
    pub fn to_text(&self, lhs: &str, var: &str) -> String {
        self.components
            .iter()
            .enumerate()
            .map(|(i, p)| format!("{lhs}{} = {}\n", i + 1, p.to_text(var)))
            .collect()
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}
