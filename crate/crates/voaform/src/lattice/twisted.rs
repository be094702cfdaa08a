//! The order-two twisted module of a rank-one lattice algebra: oscillators
//! indexed by half-integer modes, the finitely many admissible central
//! characters of the twisted group algebra (Gaussian-rational scalars),
//! the Hermitian contravariant form, the twisted exponential fields, and
//! coefficientwise adjoint and invariance identities.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{EvenLattice, LatticeError, LatticeModule, VLVec};
use crate::enumerate::partitions_desc_odd;
use crate::gauss::GaussRat;
use crate::lincomb::LinComb;
use crate::matrix::{psd_check, SymMatrix};
use crate::rat::{as_i64, int, is_integer, neg_one_pow, pow_i64, rat, Rat};
use crate::scan::{LevelRecord, ScanOutcome};
use crate::series::{FieldTrunc, ScalarSeries};

/// Oscillator monomial of the twisted module: doubled depths, so an entry
/// `j` (odd) stands for the creation mode at `-j/2`. Stored descending.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TwMono {
    factors: Vec<u64>,
}

impl TwMono {
    pub fn unit() -> Self {
        TwMono {
            factors: Vec::new(),
        }
    }

    pub fn new(mut factors: Vec<u64>) -> Self {
        assert!(factors.iter().all(|&j| j % 2 == 1));
        factors.sort_unstable_by(|a, b| b.cmp(a));
        TwMono { factors }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn doubled_degree(&self) -> u64 {
        self.factors.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

pub type TwVec = LinComb<TwMono, GaussRat>;

/// Twisted module of the rank-one lattice with Gram matrix [g], carrying
/// the central character determined by `chi = chi(e_b)`.
#[derive(Clone, Debug)]
pub struct TwistedSector {
    lattice: EvenLattice,
    chi: GaussRat,
}

impl TwistedSector {
    /// The central characters allowed by the twisted group algebra: the
    /// element `e_{2b}` lies in the subgroup that must act trivially, which
    /// forces `chi(e_b)^2 = (-1)^{g/2}`; unitarity forces `|chi| = 1`.
    pub fn admissible_characters(g: i64) -> Vec<GaussRat> {
        assert!(g > 0 && g % 2 == 0);
        if (g / 2) % 2 == 0 {
            vec![GaussRat::from_int(1), GaussRat::from_int(-1)]
        } else {
            vec![GaussRat::i(), GaussRat::i() * GaussRat::from_int(-1)]
        }
    }

    pub fn new(g: i64, chi: GaussRat) -> Result<Self, LatticeError> {
        let lattice = EvenLattice::new(vec![vec![g]])?;
        let target = GaussRat::from_int(if (g / 2) % 2 == 0 { 1 } else { -1 });
        assert!(
            chi.clone() * chi.clone() == target && chi.norm_sqr() == Rat::one(),
            "central character must square to (-1)^(g/2) and be unimodular"
        );
        Ok(TwistedSector { lattice, chi })
    }

    pub fn g(&self) -> i64 {
        self.lattice.gram_int()[0][0]
    }

    pub fn chi(&self) -> &GaussRat {
        &self.chi
    }

    pub fn ground(&self) -> TwVec {
        LinComb::single(TwMono::unit(), GaussRat::from_int(1))
    }

    /// `chi(e_{mb})`, extended from m = 1 through the group law
    /// `e_{mb} e_{nb} = eps(mb, nb) e_{(m+n)b}` with
    /// `eps(mb, nb) = (-1)^{(g/2) m n}`.
    pub fn chi_of_multiple(&self, m: i64) -> GaussRat {
        let mut cur = GaussRat::from_int(1);
        if m >= 0 {
            for t in 0..m {
                cur = cur * self.chi.clone() * GaussRat::from_int(self.eps_multiple(t, 1));
            }
        } else {
            let chi_neg =
                GaussRat::from_int(self.eps_multiple(1, -1)) * self.chi.inv();
            for t in 0..(-m) {
                cur = cur * chi_neg.clone() * GaussRat::from_int(self.eps_multiple(-t, -1));
            }
        }
        cur
    }

    fn eps_multiple(&self, m: i64, n: i64) -> i64 {
        if ((self.g() / 2) * m * n).rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    /// Apply the oscillator mode at `jd/2` (jd odd): creation for jd < 0,
    /// contraction `[b(j/2), b(-j/2)] = (j/2) g` for jd > 0.
    pub fn apply_mode_doubled(&self, jd: i64, v: &TwVec) -> TwVec {
        assert!(jd % 2 != 0, "twisted modes have half-integer depth");
        let mut out = TwVec::zero();
        for (mono, coeff) in v.iter() {
            if jd < 0 {
                let mut factors = mono.factors().to_vec();
                factors.push((-jd) as u64);
                out.add_term(TwMono::new(factors), coeff.clone());
            } else {
                let d = jd as u64;
                let bracket = rat(jd, 2) * int(self.g());
                for (pos, &depth) in mono.factors().iter().enumerate() {
                    if depth != d {
                        continue;
                    }
                    let mut factors = mono.factors().to_vec();
                    factors.remove(pos);
                    out.add_term(TwMono::new(factors), coeff.mul_rat(&bracket));
                }
            }
        }
        out
    }

    /// Hermitian contravariant form: linear in the first slot, conjugate
    /// linear in the second, oscillator adjoints `b(-j/2)* = b(j/2)`,
    /// ground norm 1.
    pub fn pair(&self, u: &TwVec, v: &TwVec) -> GaussRat {
        let mut total = GaussRat::zero();
        for (mono, a) in u.iter() {
            let mut reduced = v.clone();
            for &jd in mono.factors() {
                reduced = self.apply_mode_doubled(jd as i64, &reduced);
            }
            let c = reduced.coeff(&TwMono::unit());
            total = total + a.clone() * c.conj();
        }
        total
    }

    /// Basis of the doubled-degree piece: partitions into odd parts in
    /// descending lexicographic order.
    pub fn basis(&self, doubled: u64) -> Vec<TwMono> {
        partitions_desc_odd(doubled)
            .into_iter()
            .map(TwMono::new)
            .collect()
    }

    /// Gram matrix of a doubled-degree piece; entries are real because the
    /// basis monomials and the oscillator brackets are.
    pub fn gram(&self, doubled: u64) -> SymMatrix {
        let basis = self.basis(doubled);
        let vecs: Vec<TwVec> = basis
            .iter()
            .map(|m| LinComb::single(m.clone(), GaussRat::from_int(1)))
            .collect();
        SymMatrix::from_pairing(basis.len(), |i, j| {
            let p = self.pair(&vecs[i], &vecs[j]);
            assert!(p.is_real(), "twisted Gram entries are real");
            p.re
        })
    }

    /// Exact definiteness of every doubled-degree piece 0..=max_doubled.
    pub fn unitarity_scan(&self, max_doubled: u64) -> ScanOutcome {
        let levels = (0..=max_doubled)
            .map(|jd| {
                let g = self.gram(jd);
                LevelRecord {
                    level: rat(jd as i64, 2),
                    dim: g.n(),
                    det: g.det(),
                    report: psd_check(&g),
                }
            })
            .collect();
        ScanOutcome { levels }
    }

    /// Twisted Virasoro mode
    /// `L(n) = (1/2g) sum_{j in Z+1/2} :b(j) b(n-j): + delta_{n,0}/16`.
    pub fn l_mode(&self, n: i64, v: &TwVec) -> TwVec {
        let nd = 2 * n;
        let gmax = v
            .iter()
            .map(|(m, _)| m.doubled_degree())
            .max()
            .unwrap_or(0) as i64;
        let mut js: alloc::collections::BTreeSet<i64> = alloc::collections::BTreeSet::new();
        let mut m = 1i64;
        while m <= gmax {
            js.insert(m);
            js.insert(nd - m);
            m += 2;
        }
        let mut jd = nd + 1;
        while jd <= -1 {
            if jd % 2 != 0 {
                js.insert(jd);
            }
            jd += 1;
        }
        let mut jd = 1i64;
        while jd <= nd - 1 {
            if jd % 2 != 0 {
                js.insert(jd);
            }
            jd += 1;
        }
        let mut out = TwVec::zero();
        for &j in js.iter() {
            let (lo, hi) = if j <= nd - j { (j, nd - j) } else { (nd - j, j) };
            let term = self.apply_mode_doubled(lo, &self.apply_mode_doubled(hi, v));
            out.add_scaled(&term, &GaussRat::from_int(1));
        }
        let mut out = out.scale(&GaussRat::from_rat(rat(1, 2 * self.g())));
        if n == 0 {
            out.add_scaled(v, &GaussRat::from_rat(rat(1, 16)));
        }
        out
    }

    /// Truncated twisted field of `e^{mb}`:
    /// `2^{-(a,a)} E^-(-a, z) E^+(-a, z) e_a z^{-(a,a)/2}` where `e_a` acts
    /// on the (one-dimensional) character space by `chi(e_{mb})`, the
    /// creation exponential has coefficients `(2/j) m` at `z^{j/2}` and the
    /// annihilation exponential `-(2/j) m` at `z^{-j/2}` (j odd). Terms of
    /// degree > window are dropped.
    pub fn exp_field(&self, m: i64, v: &TwVec, window: &Rat) -> FieldTrunc<TwMono, GaussRat> {
        let norm = m * m * self.g();
        let scalar = self.chi_of_multiple(m).mul_rat(&pow_i64(&int(2), -norm));
        let mut out = FieldTrunc::new();
        for (mono, coeff) in v.iter() {
            let mut acc: FieldTrunc<TwMono, GaussRat> = FieldTrunc::new();
            let single = LinComb::single(mono.clone(), coeff.clone() * scalar.clone());
            acc.add_at(rat(-norm, 2), &single, &GaussRat::from_int(1));
            // Annihilation exponential.
            let mut jd = 1i64;
            while jd <= mono.doubled_degree() as i64 {
                acc = self.fold_exp_mode(&acc, jd, &rat(-2 * m, jd), &rat(-jd, 2), None);
                jd += 2;
            }
            // Creation exponential, weight-pruned.
            let mut jd = 1i64;
            while rat(jd, 2) <= *window {
                acc = self.fold_exp_mode(&acc, -jd, &rat(2 * m, jd), &rat(jd, 2), Some(window));
                jd += 2;
            }
            for (p, vec) in acc.iter() {
                out.add_at(p.clone(), vec, &GaussRat::from_int(1));
            }
        }
        out.retain_keys(|mono| rat(mono.doubled_degree() as i64, 2) <= *window);
        out
    }

    fn fold_exp_mode(
        &self,
        acc: &FieldTrunc<TwMono, GaussRat>,
        jd: i64,
        c: &Rat,
        step: &Rat,
        prune: Option<&Rat>,
    ) -> FieldTrunc<TwMono, GaussRat> {
        let mut out = FieldTrunc::new();
        for (p, vec) in acc.iter() {
            let mut cur = vec.clone();
            let mut coeff = Rat::one();
            let mut power = p.clone();
            let mut t = 0i64;
            loop {
                out.add_at(power.clone(), &cur, &GaussRat::from_rat(coeff.clone()));
                t += 1;
                cur = self.apply_mode_doubled(jd, &cur);
                if let Some(window) = prune {
                    cur = prune_by_degree(cur, window);
                }
                if cur.is_zero() {
                    break;
                }
                coeff = coeff * c / int(t);
                power = &power + step;
            }
        }
        out
    }

    /// Truncated twisted field of a generator-shaped algebra element: a
    /// linear combination of lattice exponentials and single oscillators
    /// `mu(-1) 1`. (The invariance identity only ever needs fields of
    /// `e^{zL(1)} (-z^-2)^{L(0)}` applied to generators, which stay in this
    /// shape.)
    pub fn generator_field(
        &self,
        voa: &LatticeModule,
        x: &VLVec,
        v: &TwVec,
        window: &Rat,
    ) -> FieldTrunc<TwMono, GaussRat> {
        let mut out = FieldTrunc::new();
        for (mono, c) in x.iter() {
            let gauss_c = GaussRat::from_rat(c.clone());
            if mono.osc.is_empty() {
                let m = as_i64(&mono.point[0]).expect("algebra labels are integral");
                let f = self.exp_field(m, v, window);
                for (p, vec) in f.iter() {
                    out.add_at(p.clone(), vec, &gauss_c);
                }
            } else {
                assert!(
                    mono.osc.len() == 1
                        && mono.osc.factors()[0].1 == 1
                        && mono.point.iter().all(|p| p.is_zero()),
                    "twisted fields are built for generator-shaped elements"
                );
                assert_eq!(voa.rank(), 1);
                // Y(b(-1)1, z) = sum over half-integer modes b(jd/2) at
                // z^{-jd/2 - 1}.
                let vdeg = v
                    .iter()
                    .map(|(m, _)| m.doubled_degree())
                    .max()
                    .unwrap_or(0) as i64;
                let mut jd = -1i64;
                // Creation side bounded by the window, annihilation side by
                // the degree of v.
                loop {
                    let raise = rat(-jd, 2);
                    if raise > *window {
                        break;
                    }
                    let term = self.apply_mode_doubled(jd, v);
                    out.add_at(rat(-jd, 2) - int(1), &term, &gauss_c);
                    jd -= 2;
                }
                let mut jd = 1i64;
                while jd <= vdeg {
                    let term = self.apply_mode_doubled(jd, v);
                    out.add_at(rat(-jd, 2) - int(1), &term, &gauss_c);
                    jd += 2;
                }
            }
        }
        out.retain_keys(|mono| rat(mono.doubled_degree() as i64, 2) <= *window);
        out
    }

    /// Adjoint identity of the twisted group algebra on all basis pairs of
    /// doubled degree <= max_doubled:
    /// `(e_a u, v) = (u, (-1)^{(a,a)/2} e_{-a} v)` where `e_{mb}` acts by
    /// `chi(e_{mb})`.
    pub fn group_adjoint_check(&self, m: i64, max_doubled: u64) -> bool {
        let half_norm = (m * m * self.g()) / 2;
        let sign = GaussRat::from_int(if half_norm % 2 == 0 { 1 } else { -1 });
        let lhs_scalar = self.chi_of_multiple(m);
        let rhs_scalar = (sign * self.chi_of_multiple(-m)).conj();
        for jd in 0..=max_doubled {
            for a in self.basis(jd) {
                let u = LinComb::single(a, GaussRat::from_int(1));
                for jd2 in 0..=max_doubled {
                    for b in self.basis(jd2) {
                        let v = LinComb::single(b, GaussRat::from_int(1));
                        let lhs = lhs_scalar.clone() * self.pair(&u, &v);
                        let rhs = rhs_scalar.clone() * self.pair(&u, &v);
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Coefficientwise twisted invariance:
    /// `(Y(e^{zL(1)} (-z^-2)^{L(0)} a, z^-1) u, v) = (u, Y(theta(a), z) v)`
    /// where `a` is a homogeneous element of the untwisted algebra, the
    /// Virasoro operators act on `a` untwisted, and `u`, `v` run over the
    /// twisted module.
    pub fn invariance_check(
        &self,
        voa: &LatticeModule,
        a: &VLVec,
        u: &TwVec,
        v: &TwVec,
        window: &Rat,
    ) -> bool {
        let d = match super::field::vl_homogeneous_weight(voa, a) {
            Some(d) => d,
            None => return false,
        };
        assert!(is_integer(&d), "algebra weights are integral");
        let front = GaussRat::from_rat(neg_one_pow(&d));
        let mut lhs: ScalarSeries<GaussRat> = ScalarSeries::new();
        let mut cur = a.clone();
        let mut k = 0i64;
        let mut kfact = Rat::one();
        while !cur.is_zero() {
            let field = self.generator_field(voa, &cur, u, window).invert_z();
            let shift = int(k) - int(2) * &d;
            for (p, vec) in field.iter() {
                let scalar =
                    self.pair(vec, v) * front.clone().mul_rat(&(Rat::one() / &kfact));
                lhs.add_at(p + &shift, scalar);
            }
            k += 1;
            kfact = kfact * int(k);
            cur = voa.l_mode(1, &cur);
        }
        let mut rhs: ScalarSeries<GaussRat> = ScalarSeries::new();
        let field = self.generator_field(voa, &voa.theta(a), v, window);
        for (p, vec) in field.iter() {
            rhs.add_at(p.clone(), self.pair(u, vec));
        }
        lhs == rhs
    }
}

fn prune_by_degree(v: TwVec, window: &Rat) -> TwVec {
    let mut out = TwVec::zero();
    for (mono, c) in v.iter() {
        if rat(mono.doubled_degree() as i64, 2) <= *window {
            out.add_term(mono.clone(), c.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Verdict;

    fn sector() -> TwistedSector {
        TwistedSector::new(2, GaussRat::i()).unwrap()
    }

    #[test]
    fn admissible_characters_square_correctly() {
        let two = TwistedSector::admissible_characters(2);
        assert_eq!(two.len(), 2);
        for chi in &two {
            assert!(TwistedSector::new(2, chi.clone()).is_ok());
            assert_eq!(chi.clone() * chi.clone(), GaussRat::from_int(-1));
        }
        let four = TwistedSector::admissible_characters(4);
        for chi in &four {
            assert!(TwistedSector::new(4, chi.clone()).is_ok());
            assert_eq!(chi.clone() * chi.clone(), GaussRat::from_int(1));
        }
        // e_{2b} acts trivially, as the group law demands.
        let s = sector();
        assert_eq!(s.chi_of_multiple(2), GaussRat::from_int(1));
        assert_eq!(s.chi_of_multiple(0), GaussRat::from_int(1));
        assert_eq!(s.chi_of_multiple(-2), GaussRat::from_int(1));
        // chi(e_{-b}) = (-1)^{g/2} chi(e_b)^{-1}.
        assert_eq!(
            s.chi_of_multiple(-1),
            GaussRat::from_int(-1) * s.chi().inv()
        );
    }

    #[test]
    fn half_integer_brackets_and_norms() {
        let s = sector();
        let t = s.ground();
        // [b(1/2), b(-1/2)] = (1/2) g = 1 on the ground state.
        let up = s.apply_mode_doubled(-1, &t);
        assert_eq!(s.apply_mode_doubled(1, &up), t);
        assert!(s.apply_mode_doubled(3, &up).is_zero());
        // Frozen diagonal norms in the lattice basis.
        assert_eq!(s.pair(&up, &up), GaussRat::from_int(1));
        let deep = s.apply_mode_doubled(-3, &t);
        assert_eq!(s.pair(&deep, &deep), GaussRat::from_int(3));
        let two = s.apply_mode_doubled(-1, &up);
        assert_eq!(s.pair(&two, &two), GaussRat::from_int(2));
        // Hermitian symmetry with a genuinely complex coefficient.
        let iu = up.clone().scale(&GaussRat::i());
        assert_eq!(s.pair(&iu, &up), GaussRat::i());
        assert_eq!(s.pair(&up, &iu), GaussRat::i() * GaussRat::from_int(-1));
        assert_eq!(s.pair(&iu, &up), s.pair(&up, &iu).conj());
    }

    #[test]
    fn twisted_grams_are_real_definite_and_character_independent() {
        let chis = TwistedSector::admissible_characters(2);
        let s0 = TwistedSector::new(2, chis[0].clone()).unwrap();
        let s1 = TwistedSector::new(2, chis[1].clone()).unwrap();
        for jd in 0..=7u64 {
            let g0 = s0.gram(jd);
            let g1 = s1.gram(jd);
            assert_eq!(g0.rows(), g1.rows());
            assert_eq!(psd_check(&g0).verdict, Verdict::PositiveDefinite);
        }
        let scan = s0.unitarity_scan(7);
        assert!(scan.all_definite());
        assert_eq!(scan.levels.len(), 8);
        // Dimensions are partitions into odd parts.
        let dims: Vec<usize> = scan.levels.iter().map(|l| l.dim).collect();
        assert_eq!(dims, vec![1, 1, 1, 2, 2, 3, 4, 5]);
    }

    #[test]
    fn twisted_virasoro_closes_with_the_shifted_weight()
    {
        let s = sector();
        // L(0) t = 1/16 t; L(0) has eigenvalue deg + 1/16 throughout.
        for jd in 0..=4u64 {
            for mono in s.basis(jd) {
                let v = LinComb::single(mono, GaussRat::from_int(1));
                let wt = GaussRat::from_rat(rat(jd as i64, 2) + rat(1, 16));
                assert_eq!(s.l_mode(0, &v), v.clone().scale(&wt));
            }
        }
        // Virasoro commutators at central charge 1 (the rank).
        for jd in 0..=4u64 {
            for mono in s.basis(jd) {
                let v = LinComb::single(mono, GaussRat::from_int(1));
                for p in -2..=2i64 {
                    for q in -2..=2i64 {
                        let mut lhs = s.l_mode(p, &s.l_mode(q, &v));
                        lhs.add_scaled(&s.l_mode(q, &s.l_mode(p, &v)), &GaussRat::from_int(-1));
                        let mut rhs = s.l_mode(p + q, &v).scale(&GaussRat::from_int(p - q));
                        if p + q == 0 {
                            let central = rat(p * p * p - p, 12);
                            rhs.add_scaled(&v, &GaussRat::from_rat(central));
                        }
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn twisted_exponential_field_leading_terms() {
        let s = sector();
        let t = s.ground();
        let f = s.exp_field(1, &t, &int(2));
        // Leading power -(a,a)/2 = -1 with scalar 2^{-(a,a)} chi = chi/4.
        let lead = f.at(&int(-1));
        assert_eq!(lead, t.clone().scale(&GaussRat::i().mul_rat(&rat(1, 4))));
        // Next power: creation coefficient 2m/1 at z^{1/2}.
        let next = f.at(&rat(-1, 2));
        let expect = s
            .apply_mode_doubled(-1, &t)
            .scale(&GaussRat::i().mul_rat(&rat(1, 2)));
        assert_eq!(next, expect);
        assert!(f.at(&rat(-3, 2)).is_zero());
    }

    #[test]
    fn group_algebra_adjoints_under_both_characters() {
        for chi in TwistedSector::admissible_characters(2) {
            let s = TwistedSector::new(2, chi).unwrap();
            for m in [-2i64, -1, 1, 2] {
                assert!(s.group_adjoint_check(m, 5));
            }
        }
        for chi in TwistedSector::admissible_characters(4) {
            let s = TwistedSector::new(4, chi).unwrap();
            for m in [-1i64, 1] {
                assert!(s.group_adjoint_check(m, 4));
            }
        }
    }

    #[test]
    fn twisted_invariance_of_the_hermitian_form() {
        let voa = LatticeModule::voa(EvenLattice::new(vec![vec![2]]).unwrap());
        for chi in TwistedSector::admissible_characters(2) {
            let s = TwistedSector::new(2, chi).unwrap();
            let window = rat(5, 2);
            let mut gens = vec![voa.apply_basis_mode(0, -1, &voa.ground())];
            gens.push(voa.e_alpha(&[1], &voa.ground()));
            gens.push(voa.e_alpha(&[-1], &voa.ground()));
            let mut basis = Vec::new();
            for jd in 0..=5u64 {
                basis.extend(s.basis(jd));
            }
            for a in &gens {
                for x in &basis {
                    let u = LinComb::single(x.clone(), GaussRat::from_int(1));
                    for y in &basis {
                        let v = LinComb::single(y.clone(), GaussRat::from_int(1));
                        assert!(s.invariance_check(&voa, a, &u, &v, &window));
                    }
                }
            }
        }
    }
}
