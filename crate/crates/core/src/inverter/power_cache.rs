use std::collections::HashMap;

use crate::poly::{Exponent, PolyMap, Polynomial};

/// Memoized homogeneous parts `[F^a]_d` of monomial powers of a map.
///
/// `F` has no constant term, so `F^a` starts in degree `|a|`; the recursion
/// peels one factor `F_t` off `F^a` and convolves homogeneous parts.
pub(crate) struct PowerCache {
    num_vars: usize,
    /// `parts[t][e]` is the degree-`e` part of `F_t`.
    parts: Vec<Vec<Polynomial>>,
    memo: HashMap<(Exponent, u32), Polynomial>,
}

impl PowerCache {
    pub fn new(map: &PolyMap) -> Self {
        let n = map.num_vars();
        let parts = map
            .components()
            .iter()
            .map(|p| {
                let top = p.degree().unwrap_or(0);
                (0..=top).map(|e| p.homogeneous_part(e)).collect()
            })
            .collect();
        Self {
            num_vars: n,
            parts,
            memo: HashMap::new(),
        }
    }

    /// Fills the memo for `[F^a]_d`; call before [`PowerCache::get`].
    pub fn ensure(&mut self, a: &Exponent, d: u32) {
        if self.memo.contains_key(&(a.clone(), d)) {
            return;
        }
        let value = self.compute(a, d);
        self.memo.insert((a.clone(), d), value);
    }

    fn compute(&mut self, a: &Exponent, d: u32) -> Polynomial {
        let total = a.degree();
        if total == 0 {
            return if d == 0 {
                Polynomial::one(self.num_vars)
            } else {
                Polynomial::zero(self.num_vars)
            };
        }
        if d < total {
            return Polynomial::zero(self.num_vars);
        }
        let t = a.entries().iter().position(|&e| e > 0).expect("nonzero exponent");
        let rest = a.decrement(t).expect("positive entry");
        let mut acc = Polynomial::zero(self.num_vars);
        let top = self.parts[t].len() as u32;
        for e in 1..top {
            if d < e || d - e < total - 1 {
                break;
            }
            if self.parts[t][e as usize].is_zero() {
                continue;
            }
            self.ensure(&rest, d - e);
            let lower = &self.memo[&(rest.clone(), d - e)];
            if lower.is_zero() {
                continue;
            }
            acc = &acc + &(&self.parts[t][e as usize] * lower);
        }
        acc
    }

    pub fn get(&self, a: &Exponent, d: u32) -> &Polynomial {
        &self.memo[&(a.clone(), d)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::map;

    #[test]
    fn matches_direct_expansion() {
        let f = map("u1 = x1 + x2^2 - x1*x2\nu2 = 2 x2 + x1^3");
        let mut cache = PowerCache::new(&f);
        for a in [vec![2, 0], vec![1, 1], vec![0, 3], vec![2, 1]] {
            let a = Exponent::new(a);
            let full = f.component(0).pow(a.entries()[0]) * f.component(1).pow(a.entries()[1]);
            for d in 0..=9 {
                cache.ensure(&a, d);
                assert_eq!(cache.get(&a, d), &full.homogeneous_part(d), "a={a:?} d={d}");
            }
        }
    }
}
