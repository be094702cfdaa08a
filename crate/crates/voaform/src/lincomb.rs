//! Formal linear combinations with exact scalar coefficients.
//!
//! `LinComb<K, S>` is a finitely supported map from basis keys to scalars,
//! the workhorse state for normal-ordering reductions: applying a mode to
//! a combination fans out over monomials and the results are re-collected
//! here, dropping exact zeros.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::rat::Rat;

/// Finitely supported `K -> S` with zero coefficients pruned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinComb<K: Ord + Clone, S = Rat> {
    terms: BTreeMap<K, S>,
}

impl<K, S> LinComb<K, S>
where
    K: Ord + Clone,
    S: Clone + Zero + PartialEq,
{
    pub fn zero() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }

    pub fn single(k: K, s: S) -> Self {
        let mut t = LinComb::zero();
        t.add_term(k, s);
        t
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

    pub fn iter(&self) -> impl Iterator<Item = (&K, &S)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    /// Coefficient of `k` (zero when absent).
    pub fn coeff(&self, k: &K) -> S {
        self.terms.get(k).cloned().unwrap_or_else(S::zero)
    }

    /// Add `s * k`, dropping the entry if it cancels to zero.
    pub fn add_term(&mut self, k: K, s: S) {
        if s.is_zero() {
            return;
        }
        let entry = self.terms.entry(k);
        match entry {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(s);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let cur = o.get().clone();
                let sum = add_scalars(cur, s);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, other: &Self, scale: &S)
    where
        S: core::ops::Mul<Output = S>,
    {
        if scale.is_zero() {
            return;
        }
        for (k, s) in other.terms.iter() {
            self.add_term(k.clone(), s.clone() * scale.clone());
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, s) in other.terms.iter() {
            self.add_term(k.clone(), s.clone());
        }
    }

    pub fn scale(mut self, s: &S) -> Self
    where
        S: core::ops::Mul<Output = S>,
    {
        if s.is_zero() {
            return LinComb::zero();
        }
        for v in self.terms.values_mut() {
            *v = v.clone() * s.clone();
        }
        self
    }

    pub fn neg(self) -> Self
    where
        S: core::ops::Neg<Output = S>,
    {
        let mut t = BTreeMap::new();
        for (k, s) in self.terms {
            t.insert(k, -s);
        }
        LinComb { terms: t }
    }

    /// Rebuild through a term-level map; useful for involutions that act
    /// on keys and signs at once.
    pub fn transform<F: Fn(&K, &S) -> (K, S)>(&self, f: F) -> Self {
        let mut out = LinComb::zero();
        for (k, s) in self.terms.iter() {
            let (k2, s2) = f(k, s);
            out.add_term(k2, s2);
        }
        out
    }

    pub fn into_terms(self) -> Vec<(K, S)> {
        self.terms.into_iter().collect()
    }
}

// `Zero::zero` requires `Add`; sidestep the bound with a local helper so
// scalar types only need `Zero + PartialEq + Clone` plus the ops they use.
fn add_scalars<S: Zero>(a: S, b: S) -> S {
    a + b
}
