//! Virasoro highest-weight modules: Verma modules V(c,h) and the vacuum
//! quotient at h = 0, with exact normal-ordering reduction, the
//! contravariant (Shapovalov-type) form, discrete-series formulas, the
//! unitarity classifier, and the exponential conjugation identities.
//!
//! The commutation relation is
//! `[L(m), L(n)] = (m-n) L(m+n) + (1/12)(m^3-m) delta_{m+n,0} C`
//! with the central element acting by the rational `c`. Basis monomials
//! are `L(-n_1)...L(-n_k) v` with `n_1 >= ... >= n_k >= 1` (>= 2 in the
//! vacuum module, where any word ending in `L(-1)` kills the vacuum).

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::enumerate::partitions_desc;
use crate::lincomb::LinComb;
use crate::matrix::{psd_check, SymMatrix};
use crate::rat::{as_i64, factorial, int, is_integer, neg_one_pow, Rat};
use crate::scan::{LevelRecord, ScanOutcome};
use crate::series::FieldTrunc;

/// Central charge and highest weight defining the module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViraParams {
    pub c: Rat,
    pub h: Rat,
}

/// `L(-n_1)...L(-n_k) v` with parts non-increasing; the empty monomial is
/// the highest-weight vector itself.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ViraMonomial {
    parts: Vec<u64>,
}

impl ViraMonomial {
    pub fn new(parts: Vec<u64>) -> Self {
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]) && parts.iter().all(|&p| p >= 1),
            "monomial parts must be non-increasing and positive"
        );
        ViraMonomial { parts }
    }

    pub fn unit() -> Self {
        ViraMonomial { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn degree(&self) -> u64 {
        self.parts.iter().sum()
    }
}

/// Vector in the module: finite rational combination of monomials.
pub type ViraVec = LinComb<ViraMonomial, Rat>;

/// A Verma module V(c,h), or its vacuum quotient when `vacuum` is set
/// (which additionally requires h = 0 and kills every monomial with a
/// part equal to 1).
#[derive(Clone, Debug)]
pub struct ViraModule {
    pub params: ViraParams,
    pub vacuum: bool,
}

impl ViraModule {
    pub fn verma(c: Rat, h: Rat) -> Self {
        ViraModule {
            params: ViraParams { c, h },
            vacuum: false,
        }
    }

    pub fn vacuum_module(c: Rat) -> Self {
        ViraModule {
            params: ViraParams { c, h: Rat::zero() },
            vacuum: true,
        }
    }

    /// The highest-weight / vacuum vector as a one-term combination.
    pub fn ground(&self) -> ViraVec {
        LinComb::single(ViraMonomial::unit(), Rat::one())
    }

    /// Canonical monomial as a vector, applying the vacuum quotient rule.
    fn monomial_vec(&self, parts: Vec<u64>) -> ViraVec {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        if self.vacuum && parts.last() == Some(&1) {
            return LinComb::zero();
        }
        LinComb::single(ViraMonomial { parts }, Rat::one())
    }

    /// Apply `L(n)` to a straightened vector, returning a straightened
    /// vector. Creation, annihilation, and `L(0)` are all handled by one
    /// recursion on the leading factor.
    pub fn apply_mode(&self, n: i64, v: &ViraVec) -> ViraVec {
        let mut out = ViraVec::zero();
        for (mono, coeff) in v.iter() {
            out.add_scaled(&self.apply_mode_mono(n, mono.parts()), coeff);
        }
        out
    }

    fn apply_mode_mono(&self, n: i64, parts: &[u64]) -> ViraVec {
        if parts.is_empty() {
            return if n > 0 {
                ViraVec::zero()
            } else if n == 0 {
                let mut out = ViraVec::zero();
                out.add_term(ViraMonomial::unit(), self.params.h.clone());
                out
            } else {
                self.monomial_vec(vec![(-n) as u64])
            };
        }
        let p1 = parts[0];
        let rest = &parts[1..];
        if n < 0 && (-n) as u64 >= p1 {
            // Prepending keeps the word canonical.
            let mut new_parts = Vec::with_capacity(parts.len() + 1);
            new_parts.push((-n) as u64);
            new_parts.extend_from_slice(parts);
            return self.monomial_vec(new_parts);
        }
        // L(n) L(-p1) = L(-p1) L(n) + (n + p1) L(n - p1)
        //             + delta_{n, p1} (n^3 - n)/12 * c.
        let commuted = self.apply_mode_mono(n, rest);
        let mut out = self.apply_mode(-(p1 as i64), &commuted);
        let scale = Rat::from_integer(BigInt::from(n + p1 as i64));
        if !scale.is_zero() {
            out.add_scaled(&self.apply_mode_mono(n - p1 as i64, rest), &scale);
        }
        if n > 0 && n as u64 == p1 {
            let cubes = Rat::from_integer(BigInt::from(n * n * n - n));
            let central = cubes / int(12) * &self.params.c;
            out.add_scaled(&self.monomial_vec(rest.to_vec()), &central);
        }
        out
    }

    /// Apply a word of modes, rightmost acting first: `word = [m1, m2, ...]`
    /// computes `L(m1) L(m2) ... v`.
    pub fn apply_word(&self, word: &[i64], v: &ViraVec) -> ViraVec {
        let mut cur = v.clone();
        for &n in word.iter().rev() {
            cur = self.apply_mode(n, &cur);
        }
        cur
    }

    /// Normal-order a word applied to the ground vector.
    pub fn reduce(&self, word: &[i64]) -> ViraVec {
        self.apply_word(word, &self.ground())
    }

    /// Contravariant form with `(v, v) = 1` and adjoint `L(n)* = L(-n)`:
    /// factors of the left argument are moved across one at a time.
    pub fn pair(&self, u: &ViraVec, w: &ViraVec) -> Rat {
        let mut total = Rat::zero();
        for (mono, coeff) in u.iter() {
            total += coeff * &self.pair_mono(mono.parts(), w);
        }
        total
    }

    fn pair_mono(&self, parts: &[u64], w: &ViraVec) -> Rat {
        match parts.split_first() {
            None => w.coeff(&ViraMonomial::unit()),
            Some((&p1, rest)) => self.pair_mono(rest, &self.apply_mode(p1 as i64, w)),
        }
    }

    /// Ordered basis of the degree-`level` piece: partitions in descending
    /// lexicographic order (parts >= 2 in the vacuum module).
    pub fn basis(&self, level: u64) -> Vec<ViraMonomial> {
        let min_part = if self.vacuum { 2 } else { 1 };
        partitions_desc(level, min_part)
            .into_iter()
            .map(|parts| ViraMonomial { parts })
            .collect()
    }

    /// Gram matrix of the contravariant form on the level basis.
    pub fn gram_level(&self, level: u64) -> SymMatrix {
        let basis = self.basis(level);
        let vecs: Vec<ViraVec> = basis
            .iter()
            .map(|m| LinComb::single(m.clone(), Rat::one()))
            .collect();
        SymMatrix::from_pairing(basis.len(), |i, j| self.pair(&vecs[i], &vecs[j]))
    }

    /// Exact definiteness of every level 1..=max_level.
    pub fn unitarity_scan(&self, max_level: u64) -> ScanOutcome {
        let levels = (1..=max_level)
            .map(|n| {
                let g = self.gram_level(n);
                LevelRecord {
                    level: int(n as i64),
                    dim: g.n(),
                    det: g.det(),
                    report: psd_check(&g),
                }
            })
            .collect();
        ScanOutcome { levels }
    }

    /// `L(0)`-eigenvalue of a nonzero vector, or None if it is not an
    /// eigenvector (computed through apply_mode, not read off the grading).
    pub fn weight_of(&self, v: &ViraVec) -> Option<Rat> {
        let (mono, coeff) = v.iter().next()?;
        let image = self.apply_mode(0, v);
        let lambda = image.coeff(mono) / coeff;
        let expected = v.clone().scale(&lambda);
        if expected == image {
            Some(lambda)
        } else {
            None
        }
    }

    /// Verify the two exponential conjugation identities
    ///   (-z^2)^{L(0)}  e^{z L(1)}  (-z^2)^{-L(0)} = e^{-z^{-1} L(1)}
    ///   (-z^2)^{-L(0)} e^{z L(-1)} (-z^2)^{L(0)}  = e^{-z^{-1} L(-1)}
    /// on every basis vector of degree <= max_level, expanding the
    /// exponentials through the given order. The grading enters only
    /// through computed `L(0)` eigenvalues, whose differences must be
    /// integers; both sides are compared coefficientwise.
    pub fn conjugation_identity_check(&self, max_level: u64, order: u32) -> bool {
        for level in 0..=max_level {
            for mono in self.basis(level) {
                let u = LinComb::single(mono, Rat::one());
                if !self.conjugation_on_vector(&u, 1, order) {
                    return false;
                }
                if !self.conjugation_on_vector(&u, -1, order) {
                    return false;
                }
            }
        }
        true
    }

    /// One identity on one vector; `mode` is +1 or -1 and selects which
    /// exponential is conjugated. For mode = +1 the sandwich multiplies the
    /// degree-shifted term by (-z^2)^d (d = weight difference); for
    /// mode = -1 by (-z^2)^{-d}.
    fn conjugation_on_vector(&self, u: &ViraVec, mode: i64, order: u32) -> bool {
        let wt_u = match self.weight_of(u) {
            Some(w) => w,
            None => return false,
        };
        let mut lhs: FieldTrunc<ViraMonomial> = FieldTrunc::new();
        let mut rhs: FieldTrunc<ViraMonomial> = FieldTrunc::new();
        let mut cur = u.clone();
        for k in 0..=order {
            if cur.is_zero() {
                break;
            }
            let inv_fact = Rat::one() / factorial(k);
            // Right-hand side: e^{-z^{-1} L(mode)} term k.
            let rhs_coeff = neg_one_pow(&int(k as i64)) * &inv_fact;
            rhs.add_at(int(-(k as i64)), &cur, &rhs_coeff);
            // Left-hand side: sandwich of the z^k/k! L(mode)^k term.
            let wt_k = match self.weight_of(&cur) {
                Some(w) => w,
                None => return false,
            };
            let d = &wt_k - &wt_u;
            if !is_integer(&d) {
                return false;
            }
            let sandwich_pow = if mode > 0 { &d + &d } else { -(&d + &d) };
            let zpow = int(k as i64) + sandwich_pow;
            let lhs_coeff = neg_one_pow(&d) * &inv_fact;
            lhs.add_at(zpow, &cur, &lhs_coeff);
            cur = self.apply_mode(mode, &cur);
        }
        lhs == rhs
    }
}

/// Discrete-series central charge `c_m = 1 - 6/(m(m+1))`, m >= 2.
pub fn discrete_c(m: u64) -> Rat {
    assert!(m >= 2, "discrete series requires m >= 2");
    Rat::one() - int(6) / int((m * (m + 1)) as i64)
}

/// Unchecked evaluation of `h^m_{r,s} = ((r(m+1) - s m)^2 - 1)/(4 m (m+1))`.
/// Exposed separately because the (r,s) -> (m-r, m+1-s) symmetry of the
/// numerator is meaningful outside the canonical index range.
pub fn discrete_h_raw(m: u64, r: i64, s: i64) -> Rat {
    assert!(m >= 2);
    let num = r * (m as i64 + 1) - s * m as i64;
    int(num * num - 1) / int(4 * (m * (m + 1)) as i64)
}

/// Discrete-series weight with the canonical range 1 <= s <= r <= m-1.
pub fn discrete_h(m: u64, r: u64, s: u64) -> Rat {
    assert!(
        m >= 2 && 1 <= s && s <= r && r <= m - 1,
        "discrete series weight needs 1 <= s <= r <= m-1"
    );
    discrete_h_raw(m, r as i64, s as i64)
}

/// Exact membership in the discrete series: returns (m, r, s) with
/// c = c_m, h = h^m_{r,s} if one exists. Solves m(m+1) = 6/(1-c) over the
/// integers via an exact square root, then enumerates the finite (r,s) box.
pub fn discrete_series_point(c: &Rat, h: &Rat) -> Option<(u64, u64, u64)> {
    if *c >= Rat::one() {
        return None;
    }
    let t = int(6) / (Rat::one() - c);
    if !t.is_integer() || !t.is_positive() {
        return None;
    }
    // m^2 + m - t = 0 => m = (sqrt(1 + 4t) - 1)/2.
    let disc: BigInt = BigInt::one() + BigInt::from(4) * t.to_integer();
    let root = disc.sqrt();
    if &root * &root != disc {
        return None;
    }
    let m_int: BigInt = (root - BigInt::one()) / BigInt::from(2);
    let m = match as_i64(&Rat::from_integer(m_int)) {
        Some(v) if v >= 2 => v as u64,
        _ => return None,
    };
    if discrete_c(m) != *c {
        return None;
    }
    for r in 1..=(m - 1) {
        for s in 1..=r {
            if discrete_h(m, r, s) == *h {
                return Some((m, r, s));
            }
        }
    }
    None
}

/// Closed-form unitarity prediction for the irreducible module L(c,h).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassifyVerdict {
    PredictUnitary,
    PredictNonUnitary,
}

pub fn classify(c: &Rat, h: &Rat) -> ClassifyVerdict {
    if *c >= Rat::one() && !h.is_negative() {
        return ClassifyVerdict::PredictUnitary;
    }
    if discrete_series_point(c, h).is_some() {
        return ClassifyVerdict::PredictUnitary;
    }
    ClassifyVerdict::PredictNonUnitary
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Verdict;
    use crate::rat::rat;

    fn generic_verma() -> ViraModule {
        ViraModule::verma(rat(17, 5), rat(3, 7))
    }

    #[test]
    fn reduce_single_brackets() {
        // Hand oracles from one application of the commutation relation:
        // L1 L-1 v = [L1, L-1] v = 2 L0 v = 2h v;
        // L2 L-2 v = (4 L0 + c/2) v; L1 v = 0.
        let m = generic_verma();
        let mut expect = ViraVec::zero();
        expect.add_term(ViraMonomial::unit(), rat(6, 7));
        assert_eq!(m.reduce(&[1, -1]), expect);

        let mut expect2 = ViraVec::zero();
        expect2.add_term(ViraMonomial::unit(), rat(4, 1) * rat(3, 7) + rat(17, 10));
        assert_eq!(m.reduce(&[2, -2]), expect2);

        assert!(m.reduce(&[1]).is_zero());
        assert!(m.reduce(&[5]).is_zero());
    }

    #[test]
    fn straightening_reinserts_commutator_terms() {
        // L(-2) L(-3) v must re-sort: equals L(-3)L(-2)v - [L(-3),L(-2)]v
        // = [3,2] + (-(-3+2)) L(-5) v = [3,2] + ... direct bracket:
        // [L(-2), L(-3)] = (-2 - (-3)) L(-5) = L(-5),
        // so L(-2)L(-3)v = L(-3)L(-2)v + L(-5)v.
        let m = generic_verma();
        let got = m.reduce(&[-2, -3]);
        let mut expect = ViraVec::zero();
        expect.add_term(ViraMonomial::new(vec![3, 2]), int(1));
        expect.add_term(ViraMonomial::new(vec![5]), int(1));
        assert_eq!(got, expect);
    }

    #[test]
    fn level_one_and_two_gram_match_closed_form() {
        // [[2h]] at level 1 and [[4h + c/2, 6h], [6h, 8h^2 + 4h]] at
        // level 2 in the basis (L(-2)v, L(-1)^2 v), from hand reduction.
        for (c, h) in [(rat(17, 5), rat(3, 7)), (rat(1, 2), rat(1, 16)), (int(1), int(1))] {
            let m = ViraModule::verma(c.clone(), h.clone());
            let g1 = m.gram_level(1);
            assert_eq!(*g1.at(0, 0), int(2) * &h);
            let g2 = m.gram_level(2);
            assert_eq!(m.basis(2)[0].parts(), &[2]);
            assert_eq!(*g2.at(0, 0), int(4) * &h + &c / int(2));
            assert_eq!(*g2.at(0, 1), int(6) * &h);
            assert_eq!(*g2.at(1, 1), int(8) * &h * &h + int(4) * &h);
        }
    }

    #[test]
    fn boundary_degeneracy_at_c_half_h_sixteenth() {
        // Frozen: the (1/2, 1/16) level-2 Gram is [[1/2,3/8],[3/8,9/32]]
        // with determinant exactly 0 and a one-dimensional radical.
        let m = ViraModule::verma(rat(1, 2), rat(1, 16));
        let g = m.gram_level(2);
        assert_eq!(*g.at(0, 0), rat(1, 2));
        assert_eq!(*g.at(0, 1), rat(3, 8));
        assert_eq!(*g.at(1, 1), rat(9, 32));
        assert_eq!(g.det(), int(0));
        let report = psd_check(&g);
        assert_eq!(report.verdict, Verdict::PositiveSemidefinite);
        assert_eq!(report.radical_dim, 1);
    }

    #[test]
    fn vacuum_module_kills_part_one() {
        let m = ViraModule::vacuum_module(rat(1, 2));
        assert!(m.apply_mode(-1, &m.ground()).is_zero());
        assert_eq!(m.basis(1).len(), 0);
        assert_eq!(m.basis(2).len(), 1);
        assert_eq!(m.basis(4).len(), 2); // [4], [2,2]
        // L(1) L(-3) 1 = 4 L(-2) 1 (the (n + p) L(n - p) term alone).
        let got = m.apply_mode(1, &m.monomial_vec(vec![3]));
        let mut expect = ViraVec::zero();
        expect.add_term(ViraMonomial::new(vec![2]), int(4));
        assert_eq!(got, expect);
    }

    #[test]
    fn discrete_series_formulas() {
        assert_eq!(discrete_c(2), int(0));
        assert_eq!(discrete_c(3), rat(1, 2));
        assert_eq!(discrete_c(4), rat(7, 10));
        for m in 2..=6 {
            assert_eq!(discrete_h(m, 1, 1), int(0));
        }
        assert_eq!(discrete_h(3, 2, 1), rat(1, 2));
        assert_eq!(discrete_h(3, 2, 2), rat(1, 16));
    }

    #[test]
    fn discrete_h_numerator_symmetry() {
        // (r(m+1) - sm)^2 is invariant under (r,s) -> (m-r, m+1-s); the
        // partner indices leave the canonical range, hence the raw form.
        for m in 2u64..=6 {
            for r in 1..=(m - 1) {
                for s in 1..=r {
                    assert_eq!(
                        discrete_h(m, r, s),
                        discrete_h_raw(m, m as i64 - r as i64, m as i64 + 1 - s as i64)
                    );
                }
            }
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            discrete_series_point(&rat(1, 2), &rat(1, 16)),
            Some((3, 2, 2))
        );
        assert_eq!(classify(&rat(1, 2), &rat(1, 16)), ClassifyVerdict::PredictUnitary);
        assert_eq!(classify(&rat(3, 10), &int(0)), ClassifyVerdict::PredictNonUnitary);
        assert_eq!(classify(&int(2), &int(5)), ClassifyVerdict::PredictUnitary);
        assert_eq!(classify(&rat(1, 2), &rat(1, 4)), ClassifyVerdict::PredictNonUnitary);
        assert_eq!(classify(&int(1), &int(-1)), ClassifyVerdict::PredictNonUnitary);
        assert_eq!(classify(&int(0), &int(0)), ClassifyVerdict::PredictUnitary);
    }

    #[test]
    fn graded_orthogonality_up_to_level_six() {
        let m = generic_verma();
        let mut bases: Vec<Vec<ViraVec>> = Vec::new();
        for level in 0..=6u64 {
            bases.push(
                m.basis(level)
                    .into_iter()
                    .map(|mono| LinComb::single(mono, Rat::one()))
                    .collect(),
            );
        }
        for a in 0..bases.len() {
            for b in 0..bases.len() {
                if a == b {
                    continue;
                }
                for u in &bases[a] {
                    for w in &bases[b] {
                        assert_eq!(m.pair(u, w), int(0));
                    }
                }
            }
        }
    }

    #[test]
    fn adjoint_property_through_level_five() {
        // <L(-n)u, w> = <u, L(n)w> computed two independent ways.
        let m = generic_verma();
        for n in 1..=5i64 {
            for lu in 0..=(5 - n as u64) {
                let lw = lu + n as u64;
                if lw > 5 {
                    continue;
                }
                for mu in m.basis(lu) {
                    let u = LinComb::single(mu, Rat::one());
                    let lifted = m.apply_mode(-n, &u);
                    for mw in m.basis(lw) {
                        let w = LinComb::single(mw, Rat::one());
                        let lowered = m.apply_mode(n, &w);
                        assert_eq!(m.pair(&lifted, &w), m.pair(&u, &lowered));
                    }
                }
            }
        }
    }

    #[test]
    fn scan_examples_from_the_classification() {
        // (1/2, 0) and (1, 1) stay PSD; (1/2, 1/4) must be refuted by
        // level 8 since it lies outside {0, 1/16, 1/2} at c = 1/2.
        let ok = ViraModule::verma(rat(1, 2), int(0)).unitarity_scan(6);
        assert!(ok.refuted().is_none());
        // c = 1, h = 1 degenerates (a singular vector enters at level 3)
        // but stays PSD: no refutation, some radical.
        let ok2 = ViraModule::verma(int(1), int(1)).unitarity_scan(6);
        assert!(ok2.refuted().is_none());
        assert!(ok2.radical_total() > 0);
        let bad = ViraModule::verma(rat(1, 2), rat(1, 4)).unitarity_scan(8);
        let refuted = bad.refuted().expect("h = 1/4 is not in the c = 1/2 list");
        let (x, value) = refuted
            .report
            .witness
            .clone()
            .expect("indefinite level must carry a witness");
        assert!(value.is_negative());
        let level = as_i64(&refuted.level).unwrap() as u64;
        let g = ViraModule::verma(rat(1, 2), rat(1, 4)).gram_level(level);
        assert_eq!(g.quadratic_form(&x), value);
    }

    #[test]
    fn classify_agrees_with_scan_on_a_grid() {
        let cs = [int(0), rat(1, 2), rat(7, 10), int(1), rat(3, 2), rat(3, 10)];
        let hs = [int(0), rat(1, 16), rat(1, 4), int(1), rat(-1, 2)];
        let mut checked = 0usize;
        for c in &cs {
            for h in &hs {
                let verdict = classify(c, h);
                let scan = ViraModule::verma(c.clone(), h.clone()).unitarity_scan(6);
                if verdict == ClassifyVerdict::PredictUnitary {
                    assert!(
                        scan.refuted().is_none(),
                        "scan refuted a predicted-unitary point (c={c}, h={h})"
                    );
                }
                if scan.refuted().is_some() {
                    assert_eq!(verdict, ClassifyVerdict::PredictNonUnitary);
                }
                checked += 1;
            }
        }
        assert!(checked >= 20);
    }

    #[test]
    fn conjugation_identities_hold() {
        for module in [
            generic_verma(),
            ViraModule::verma(rat(1, 2), rat(1, 16)),
            ViraModule::vacuum_module(rat(1, 2)),
        ] {
            assert!(module.conjugation_identity_check(3, 3));
        }
    }

    #[test]
    fn weight_of_reads_the_grading() {
        let m = generic_verma();
        let v = m.monomial_vec(vec![3, 1]);
        assert_eq!(m.weight_of(&v), Some(rat(3, 7) + int(4)));
        // A mixed-degree vector is not an L(0) eigenvector.
        let mut mixed = m.monomial_vec(vec![2]);
        mixed.add_assign(&m.monomial_vec(vec![1]));
        assert_eq!(m.weight_of(&mixed), None);
    }
}
