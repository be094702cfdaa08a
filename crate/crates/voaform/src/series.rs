//! Finite windows of formal Laurent series with vector coefficients.
//!
//! A truncated field `sum_p v_p z^p` is stored as a map from the exponent
//! `p` (a rational: twisted sectors and coset modules produce non-integer
//! powers) to the graded-vector coefficient `v_p`. All identity checks in
//! the crate reduce to comparing two such windows exactly.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::lincomb::LinComb;
use crate::rat::{is_integer, neg_one_pow, Rat};

/// Truncation of a vector-valued formal Laurent series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldTrunc<K: Ord + Clone, S: Clone + Zero + PartialEq = Rat> {
    terms: BTreeMap<Rat, LinComb<K, S>>,
}

impl<K, S> FieldTrunc<K, S>
where
    K: Ord + Clone,
    S: Clone + Zero + PartialEq + core::ops::Mul<Output = S>,
{
    pub fn new() -> Self {
        FieldTrunc {
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Add `scale * vec` at power `p`.
    pub fn add_at(&mut self, p: Rat, vec: &LinComb<K, S>, scale: &S) {
        if vec.is_zero() || scale.is_zero() {
            return;
        }
        let slot = self.terms.entry(p.clone()).or_insert_with(LinComb::zero);
        slot.add_scaled(vec, scale);
        if slot.is_zero() {
            self.terms.remove(&p);
        }
    }

    /// Coefficient at power `p` (zero when absent).
    pub fn at(&self, p: &Rat) -> LinComb<K, S> {
        self.terms.get(p).cloned().unwrap_or_else(LinComb::zero)
    }

    pub fn powers(&self) -> Vec<Rat> {
        self.terms.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Rat, &LinComb<K, S>)> {
        self.terms.iter()
    }

    /// Substitute `z -> -z`: the coefficient at `z^p` picks up `(-1)^p`.
    /// Requires every power to be an integer.
    pub fn substitute_neg_z(&self) -> Self
    where
        S: From<Rat>,
    {
        let mut out = FieldTrunc::new();
        for (p, vec) in self.terms.iter() {
            assert!(is_integer(p), "z -> -z substitution needs integer powers");
            let sign: S = neg_one_pow(p).into();
            out.add_at(p.clone(), vec, &sign);
        }
        out
    }

    /// Substitute `z -> z^{-1}`: power `p` moves to `-p`.
    pub fn invert_z(&self) -> Self {
        let mut out = FieldTrunc::new();
        for (p, vec) in self.terms.iter() {
            out.terms.insert(-p.clone(), vec.clone());
        }
        out
    }

    /// Shift every power by `dp` (multiplication by `z^dp`).
    pub fn shift(&self, dp: &Rat) -> Self {
        let mut out = FieldTrunc::new();
        for (p, vec) in self.terms.iter() {
            out.terms.insert(p + dp, vec.clone());
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = FieldTrunc::new();
        for (p, vec) in self.terms.iter() {
            out.add_at(p.clone(), vec, s);
        }
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (p, vec) in other.terms.iter() {
            let slot = self.terms.entry(p.clone()).or_insert_with(LinComb::zero);
            slot.add_assign(vec);
            if slot.is_zero() {
                self.terms.remove(p);
            }
        }
    }

    /// Drop coefficients whose keys fail a predicate (weight pruning).
    pub fn retain_keys<F: Fn(&K) -> bool>(&mut self, keep: F) {
        let mut pruned = BTreeMap::new();
        for (p, vec) in core::mem::take(&mut self.terms) {
            let mut filtered = LinComb::zero();
            for (k, s) in vec.iter() {
                if keep(k) {
                    filtered.add_term(k.clone(), s.clone());
                }
            }
            if !filtered.is_zero() {
                pruned.insert(p, filtered);
            }
        }
        self.terms = pruned;
    }
}

impl<K, S> Default for FieldTrunc<K, S>
where
    K: Ord + Clone,
    S: Clone + Zero + PartialEq + core::ops::Mul<Output = S>,
{
    fn default() -> Self {
        Self::new()
    }
}

/// Scalar Laurent window: exponent -> scalar, zeros pruned. Both sides of
/// a pairing-valued identity are collected here and compared for equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarSeries<S: Clone + Zero + PartialEq = Rat> {
    terms: BTreeMap<Rat, S>,
}

impl<S: Clone + Zero + PartialEq> ScalarSeries<S> {
    pub fn new() -> Self {
        ScalarSeries {
            terms: BTreeMap::new(),
        }
    }

    pub fn add_at(&mut self, p: Rat, s: S) {
        if s.is_zero() {
            return;
        }
        match self.terms.entry(p.clone()) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(s);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + s;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn at(&self, p: &Rat) -> S {
        self.terms.get(p).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Rat, &S)> {
        self.terms.iter()
    }
}

impl<S: Clone + Zero + PartialEq> Default for ScalarSeries<S> {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    #[test]
    fn substitution_signs() {
        let mut f: FieldTrunc<u32> = FieldTrunc::new();
        f.add_at(int(2), &LinComb::single(0, int(1)), &int(1));
        f.add_at(int(-1), &LinComb::single(1, int(1)), &int(1));
        let g = f.substitute_neg_z();
        assert_eq!(g.at(&int(2)).coeff(&0), int(1));
        assert_eq!(g.at(&int(-1)).coeff(&1), int(-1));
        let h = f.invert_z();
        assert_eq!(h.at(&int(1)).coeff(&1), int(1));
    }

    #[test]
    fn scalar_series_cancels() {
        let mut s: ScalarSeries = ScalarSeries::new();
        s.add_at(rat(1, 2), int(3));
        s.add_at(rat(1, 2), int(-3));
        assert!(s.is_zero());
    }
}
