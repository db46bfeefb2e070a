//! Families of polynomial automorphisms with known inverses.
//!
//! * tame programs: compositions of invertible linear maps and elementary
//!   shears `x_i -> x_i + p(other variables)`;
//! * rank-one cubic maps `x -> x - c (ell . x)^3` with `ell . c = 0`;
//! * plane pairs with a linear second component.
//!
//! All randomness is driven by a single `u64` seed through ChaCha8.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::inverter::verify_inverse;
use crate::jacobi::require_unit_jacobian;
use crate::matrix::RationalMatrix;
use crate::poly::{Exponent, PolyMap, Polynomial};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TameStep {
    /// `x_target -> x_target + shift`, where `shift` omits `x_target`.
    Elementary { target: usize, shift: Polynomial },
    /// `x -> L x` for an invertible `L`.
    Linear(RationalMatrix),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TameProgram {
    pub num_vars: usize,
    /// Applied in order: the first step acts first.
    pub steps: Vec<TameStep>,
    pub seed: Option<u64>,
}

/// A map together with its exact inverse and Jacobian constant.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KnownInverse {
    pub map: PolyMap,
    pub inverse: PolyMap,
    pub jacobian_constant: BigRational,
}

fn step_maps(n: usize, index: usize, step: &TameStep) -> Result<(PolyMap, PolyMap, BigRational)> {
    let invalid = |reason: String| Error::InvalidStep { step: index, reason };
    match step {
        TameStep::Elementary { target, shift } => {
            if *target >= n {
                return Err(invalid(format!("target x{} outside {n} variables", target + 1)));
            }
            if shift.num_vars() != n {
                return Err(invalid(format!("shift has {} variables, expected {n}", shift.num_vars())));
            }
            if shift.terms().any(|(e, _)| e.entries()[*target] > 0) {
                return Err(invalid(format!("shift mentions its own target x{}", target + 1)));
            }
            if !shift.constant_term().is_zero() {
                return Err(invalid("shift has a constant term".into()));
            }
            let mut forward: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(n, i)).collect();
            let mut backward = forward.clone();
            forward[*target] = &forward[*target] + shift;
            backward[*target] = &backward[*target] - shift;
            Ok((PolyMap::new(forward)?, PolyMap::new(backward)?, BigRational::one()))
        }
        TameStep::Linear(l) => {
            if l.rows() != n || l.cols() != n {
                return Err(invalid(format!("matrix is {}x{}, expected {n}x{n}", l.rows(), l.cols())));
            }
            let det = l.determinant()?;
            if det.is_zero() {
                return Err(invalid("singular matrix".into()));
            }
            Ok((PolyMap::from_linear(l)?, PolyMap::from_linear(&l.inverse()?)?, det))
        }
    }
}

/// Composes the steps into `F` and their inverses, in reverse order, into `G`.
pub fn realize_tame(program: &TameProgram) -> Result<KnownInverse> {
    let n = program.num_vars;
    let mut map = PolyMap::identity(n);
    let mut inverse = PolyMap::identity(n);
    let mut jacobian_constant = BigRational::one();
    for (k, step) in program.steps.iter().enumerate() {
        let (forward, backward, det) = step_maps(n, k, step)?;
        map = forward.compose(&map)?;
        inverse = inverse.compose(&backward)?;
        jacobian_constant *= det;
    }
    Ok(KnownInverse {
        map,
        inverse,
        jacobian_constant,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LinearKind {
    /// Integer matrices with determinant 1.
    Unimodular,
    /// Integer matrices with any nonzero determinant.
    General,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TameParams {
    pub num_vars: usize,
    pub max_steps: usize,
    pub max_step_degree: u32,
    /// Coefficients are drawn from `[-coeff_bound, coeff_bound]`.
    pub coeff_bound: i64,
    /// Steps that would push `deg F` or `deg G` above this are resampled.
    pub max_degree: Option<u32>,
    pub linear: LinearKind,
}

impl TameParams {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            max_steps: 4,
            max_step_degree: 3,
            coeff_bound: 5,
            max_degree: None,
            linear: LinearKind::Unimodular,
        }
    }
}

fn nonzero_int(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    let bound = bound.max(1);
    loop {
        let v = rng.random_range(-bound..=bound);
        if v != 0 {
            return v;
        }
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// A random integer matrix with determinant 1 (`Unimodular`) or any
/// nonzero determinant (`General`).
pub fn random_linear(rng: &mut ChaCha8Rng, n: usize, kind: LinearKind, bound: i64) -> RationalMatrix {
    match kind {
        LinearKind::Unimodular => {
            let mut m = RationalMatrix::identity(n);
            if n == 1 {
                return m;
            }
            for _ in 0..2 * n {
                let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
                if a == b {
                    continue;
                }
                let k = int(nonzero_int(rng, 2));
                // row a += k * row b
                for c in 0..n {
                    let v = m.get(a, c) + &k * m.get(b, c);
                    m.set(a, c, v);
                }
            }
            m
        }
        LinearKind::General => loop {
            let rows: Vec<Vec<BigRational>> = (0..n)
                .map(|_| (0..n).map(|_| int(rng.random_range(-bound..=bound))).collect())
                .collect();
            let m = RationalMatrix::from_rows(rows).expect("square");
            if !m.determinant().expect("square").is_zero() {
                return m;
            }
        },
    }
}

/// A random polynomial in the variables other than `target`, with terms
/// of degree `1..=max_degree` and at least one term of the top degree.
pub fn random_shift(rng: &mut ChaCha8Rng, n: usize, target: usize, max_degree: u32, bound: i64) -> Polynomial {
    assert!(n >= 2, "shears need a second variable");
    let others: Vec<usize> = (0..n).filter(|&i| i != target).collect();
    let terms = rng.random_range(1..=3usize);
    let mut out = Vec::new();
    for t in 0..terms {
        let degree = if t == 0 { max_degree } else { rng.random_range(1..=max_degree) };
        let mut e = vec![0u32; n];
        for _ in 0..degree {
            e[others[rng.random_range(0..others.len())]] += 1;
        }
        out.push((Exponent::new(e), int(nonzero_int(rng, bound))));
    }
    Polynomial::from_terms(n, out).expect("exponent length n")
}

impl TameProgram {
    /// Samples a program; with `max_degree` set, any step that would push
    /// `deg F` or `deg G` over the bound is redrawn (and dropped after a
    /// few failed redraws).
    pub fn random(params: &TameParams, seed: u64) -> Self {
        let n = params.num_vars;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let step_count = rng.random_range(1..=params.max_steps.max(1));
        let mut steps = Vec::with_capacity(step_count);
        let mut current = KnownInverse {
            map: PolyMap::identity(n),
            inverse: PolyMap::identity(n),
            jacobian_constant: BigRational::one(),
        };
        for k in 0..step_count {
            for _attempt in 0..12 {
                let step = if n == 1 || rng.random_bool(0.3) {
                    TameStep::Linear(random_linear(&mut rng, n, params.linear, params.coeff_bound))
                } else {
                    let target = rng.random_range(0..n);
                    let degree = rng.random_range(1..=params.max_step_degree.max(1));
                    TameStep::Elementary {
                        target,
                        shift: random_shift(&mut rng, n, target, degree, params.coeff_bound),
                    }
                };
                let (forward, backward, det) = step_maps(n, k, &step).expect("sampled steps are valid");
                let map = forward.compose(&current.map).expect("same size");
                let inverse = current.inverse.compose(&backward).expect("same size");
                let within = params
                    .max_degree
                    .is_none_or(|max| map.degree() <= Some(max) && inverse.degree() <= Some(max));
                if within {
                    current = KnownInverse {
                        map,
                        inverse,
                        jacobian_constant: &current.jacobian_constant * det,
                    };
                    steps.push(step);
                    break;
                }
            }
        }
        Self {
            num_vars: n,
            steps,
            seed: Some(seed),
        }
    }
}

/// `realize_tame(TameProgram::random(params, seed))`.
pub fn random_tame(params: &TameParams, seed: u64) -> Result<KnownInverse> {
    realize_tame(&TameProgram::random(params, seed))
}

/// A plane pair of degree at most two: `(unimodular L) ∘ (x_t + a s + b s^2)`
/// where `s` is the other variable and `b != 0`, optionally preceded by a
/// second unimodular map. Both the pair and its inverse are quadratic.
pub fn random_quadratic_pair(seed: u64) -> KnownInverse {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = rng.random_range(0..2usize);
    let other = 1 - target;
    let mut e1 = vec![0u32; 2];
    e1[other] = 1;
    let mut e2 = vec![0u32; 2];
    e2[other] = 2;
    let shift = Polynomial::from_terms(
        2,
        [
            (Exponent::new(e1), int(rng.random_range(-5..=5))),
            (Exponent::new(e2), int(nonzero_int(&mut rng, 5))),
        ],
    )
    .expect("two variables");
    let mut steps = Vec::new();
    if rng.random_bool(0.5) {
        steps.push(TameStep::Linear(random_linear(&mut rng, 2, LinearKind::Unimodular, 5)));
    }
    steps.push(TameStep::Elementary { target, shift });
    steps.push(TameStep::Linear(random_linear(&mut rng, 2, LinearKind::Unimodular, 5)));
    realize_tame(&TameProgram {
        num_vars: 2,
        steps,
        seed: Some(seed),
    })
    .expect("valid steps")
}

/// `u = x - c (ell . x)^3`, inverted by `x = u + c (ell . u)^3` when
/// `ell . c = 0`. The inverse is certified before returning.
pub fn gen_bcw_rank_one(ell: &[BigRational], direction: &[BigRational]) -> Result<KnownInverse> {
    let n = ell.len();
    if n == 0 {
        return Err(Error::NoVariables);
    }
    if direction.len() != n {
        return Err(Error::VariableCountMismatch {
            expected: n,
            found: direction.len(),
        });
    }
    let inner: BigRational = ell.iter().zip(direction).map(|(a, b)| a * b).sum();
    if !inner.is_zero() {
        return Err(Error::OrthogonalityViolated(inner));
    }
    let cube = Polynomial::linear_form(ell).pow(3);
    let build = |sign: i64| -> Result<PolyMap> {
        PolyMap::new(
            (0..n)
                .map(|i| &Polynomial::var(n, i) + &cube.scale(&(&direction[i] * int(sign))))
                .collect(),
        )
    };
    let map = build(-1)?;
    let inverse = build(1)?;
    if !verify_inverse(&map, &inverse) {
        return Err(Error::InternalInconsistency(format!("{inverse} does not invert {map}")));
    }
    Ok(KnownInverse {
        map,
        inverse,
        jacobian_constant: BigRational::one(),
    })
}

/// A rank-one cubic map in `n >= 2` variables with random integer `ell` and
/// a nonzero rational direction orthogonal to it.
pub fn random_bcw(n: usize, seed: u64) -> Result<KnownInverse> {
    if n < 2 {
        return Err(Error::UnexpectedShape {
            expected: "at least two variables",
            detail: format!("n = {n}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let ell: Vec<BigRational> = (0..n).map(|_| int(rng.random_range(-3..=3))).collect();
        let Some(pivot) = ell.iter().position(|v| !v.is_zero()) else { continue };
        let mut c: Vec<BigRational> = (0..n).map(|_| int(rng.random_range(-3..=3))).collect();
        c[pivot] = BigRational::zero();
        let partial: BigRational = ell.iter().zip(&c).map(|(a, b)| a * b).sum();
        c[pivot] = -partial / &ell[pivot];
        if c.iter().all(Zero::is_zero) {
            continue;
        }
        return gen_bcw_rank_one(&ell, &c);
    }
}

/// Validates a plane pair `(f, g)` with linear `g` and constant Jacobian.
pub fn gen_section42(f: &Polynomial, g: &Polynomial) -> Result<PolyMap> {
    if g.degree().is_some_and(|d| d > 1) {
        return Err(Error::UnexpectedShape {
            expected: "a linear second component",
            detail: format!("g = {g}"),
        });
    }
    let map = PolyMap::new(vec![f.clone(), g.clone()])?;
    require_unit_jacobian(&map)?;
    Ok(map)
}

/// A random pair `f = x / b01 + psi(g)`, `g = b10 x + b01 y` with `psi` of
/// degree `k`, which has Jacobian exactly 1.
pub fn random_section42(k: u32, seed: u64) -> PolyMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b10 = int(rng.random_range(-3..=3));
    let b01 = int(nonzero_int(&mut rng, 3));
    let g = Polynomial::linear_form(&[b10.clone(), b01.clone()]);
    let mut f = Polynomial::var(2, 0).scale(&(BigRational::one() / &b01));
    for j in 1..=k {
        let c = if j == k {
            int(nonzero_int(&mut rng, 4))
        } else {
            int(rng.random_range(-4..=4))
        };
        let scale = BigRational::new(c.to_integer(), BigInt::from(rng.random_range(1..=3)));
        f = &f + &g.pow(j).scale(&scale);
    }
    gen_section42(&f, &g).expect("constructed with Jacobian 1")
}
