//! Integer-numerator form of a polynomial, used for the inner loops of
//! multiplication and substitution so that rational normalization happens
//! once per output coefficient instead of once per partial product.

use std::collections::{hash_map, BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::{Exponent, Polynomial};

/// `sum_e (terms[e] / den) x^e`; the numerators are not reduced against `den`.
#[derive(Clone, Debug)]
pub(crate) struct IntPoly {
    num_vars: usize,
    den: BigInt,
    terms: Vec<(Exponent, BigInt)>,
}

const PACKED_VARS: usize = 8;
const PACKED_MAX: u32 = 255;

fn pack(e: &Exponent) -> u64 {
    e.entries().iter().fold(0u64, |acc, &k| (acc << 8) | u64::from(k))
}

fn unpack(mut key: u64, num_vars: usize) -> Exponent {
    let mut entries = vec![0u32; num_vars];
    for slot in entries.iter_mut().rev() {
        *slot = (key & 0xff) as u32;
        key >>= 8;
    }
    Exponent::new(entries)
}

impl IntPoly {
    pub fn one(num_vars: usize) -> Self {
        Self {
            num_vars,
            den: BigInt::one(),
            terms: vec![(Exponent::zero(num_vars), BigInt::one())],
        }
    }

    pub fn from_poly(p: &Polynomial) -> Self {
        let den = p.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let terms = p
            .terms()
            .map(|(e, c)| (e.clone(), c.numer() * (&den / c.denom())))
            .collect();
        Self {
            num_vars: p.num_vars(),
            den,
            terms,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn max_degree(&self) -> u32 {
        self.terms.iter().map(|(e, _)| e.degree()).max().unwrap_or(0)
    }

    /// Product keeping terms of degree at most `max_degree`.
    pub fn mul(&self, other: &IntPoly, max_degree: Option<u32>) -> IntPoly {
        let den = &self.den * &other.den;
        if self.is_zero() || other.is_zero() {
            return Self {
                num_vars: self.num_vars,
                den,
                terms: Vec::new(),
            };
        }
        let packed = self.num_vars <= PACKED_VARS && self.max_degree() + other.max_degree() <= PACKED_MAX;
        let a: Vec<(&Exponent, u32, &BigInt)> = self.terms.iter().map(|(e, c)| (e, e.degree(), c)).collect();
        let b: Vec<(&Exponent, u32, &BigInt)> = other.terms.iter().map(|(e, c)| (e, e.degree(), c)).collect();
        let keep = |da: u32, db: u32| max_degree.is_none_or(|max| da + db <= max);

        let terms = if packed {
            // one byte per variable: adding packed keys adds exponents
            let pb: Vec<(u64, u32, &BigInt)> = b.iter().map(|(e, d, c)| (pack(e), *d, *c)).collect();
            let mut products: Vec<(u64, BigInt)> = Vec::with_capacity(a.len() * b.len());
            for (ea, da, ca) in &a {
                let ka = pack(ea);
                for (kb, db, cb) in &pb {
                    if keep(*da, *db) {
                        products.push((ka + kb, *ca * *cb));
                    }
                }
            }
            merge_sorted(products, |k| unpack(k, self.num_vars))
        } else {
            let mut acc: HashMap<Exponent, BigInt> = HashMap::new();
            for (ea, da, ca) in &a {
                for (eb, db, cb) in &b {
                    if keep(*da, *db) {
                        accumulate(&mut acc, ea.add(eb), *ca * *cb);
                    }
                }
            }
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
        };
        Self {
            num_vars: self.num_vars,
            den,
            terms,
        }
    }

    pub fn to_poly(&self) -> Polynomial {
        let terms: BTreeMap<Exponent, BigRational> = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), ratio(c.clone(), &self.den)))
            .collect();
        Polynomial::from_normalized(self.num_vars, terms)
    }

    /// `sum_k c_k p_k` with a single normalization per output coefficient.
    pub fn combine(num_vars: usize, parts: &[(&IntPoly, &BigRational)]) -> Polynomial {
        let den = parts
            .iter()
            .fold(BigInt::one(), |acc, (p, c)| acc.lcm(&(&p.den * c.denom())));
        let mut acc: HashMap<&Exponent, BigInt> = HashMap::new();
        for (p, c) in parts {
            let factor = c.numer() * (&den / (&p.den * c.denom()));
            for (e, v) in &p.terms {
                let x = &factor * v;
                match acc.entry(e) {
                    hash_map::Entry::Occupied(mut o) => *o.get_mut() += x,
                    hash_map::Entry::Vacant(slot) => {
                        slot.insert(x);
                    }
                }
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e.clone(), ratio(c, &den)))
            .collect();
        Polynomial::from_normalized(num_vars, terms)
    }
}

fn ratio(numer: BigInt, den: &BigInt) -> BigRational {
    if den.is_one() {
        BigRational::from_integer(numer)
    } else {
        BigRational::new(numer, den.clone())
    }
}

fn accumulate(acc: &mut HashMap<Exponent, BigInt>, e: Exponent, c: BigInt) {
    match acc.entry(e) {
        hash_map::Entry::Occupied(mut o) => *o.get_mut() += c,
        hash_map::Entry::Vacant(v) => {
            v.insert(c);
        }
    }
}

fn merge_sorted(mut products: Vec<(u64, BigInt)>, key: impl Fn(u64) -> Exponent) -> Vec<(Exponent, BigInt)> {
    products.sort_unstable_by_key(|p| p.0);
    let mut out = Vec::new();
    let mut it = products.into_iter().peekable();
    while let Some((k, mut c)) = it.next() {
        while let Some((_, more)) = it.next_if(|(k2, _)| *k2 == k) {
            c += more;
        }
        if !c.is_zero() {
            out.push((key(k), c));
        }
    }
    out
}
