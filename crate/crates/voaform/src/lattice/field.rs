//! Truncated vertex operators on lattice modules: the exponential field of
//! a lattice point, the general normal-ordered field of an oscillator-
//! dressed state, and coefficientwise verification of the adjoint and
//! invariance identities of the contravariant form.
//!
//! Every field is computed inside a weight window: coefficients whose
//! graded weight exceeds the window are dropped, and the windowing is
//! chosen so that every retained coefficient is exact.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{LatticeModule, VLMono, VLVec};
use crate::lincomb::LinComb;
use crate::rat::{as_i64, int, is_integer, neg_one_pow, rat, gen_binom, Rat};
use crate::series::{FieldTrunc, ScalarSeries};

impl LatticeModule {
    /// Truncated field of `e^alpha` for a lattice point alpha applied to a
    /// module vector: first `z^alpha` reads the label pairing, then the
    /// group-algebra operator shifts the label with its cocycle sign, then
    /// the annihilation exponential, then the creation exponential.
    pub fn exp_field(&self, alpha: &[i64], w: &VLVec, window: &Rat) -> FieldTrunc<VLMono> {
        assert_eq!(alpha.len(), self.rank());
        let mu: Vec<Rat> = alpha.iter().map(|&a| int(a)).collect();
        let mut out = FieldTrunc::new();
        for (mono, coeff) in w.iter() {
            let zpow = self.lattice().pairing(&mu, &mono.point);
            let single = LinComb::single(mono.clone(), coeff.clone());
            let mut acc = FieldTrunc::new();
            acc.add_at(zpow, &self.e_alpha(alpha, &single), &Rat::one());
            // Annihilation part exp(sum_{m>0} (-1/m) alpha(m) z^-m): degree
            // only drops, so no pruning is sound or needed here.
            for m in 1..=mono.osc.degree() {
                let m = m as i64;
                acc = self.fold_exp_mode(&acc, &mu, m, &rat(-1, m), &int(-m), None);
            }
            // Creation part exp(sum_{m>0} (1/m) alpha(-m) z^m): each factor
            // raises the weight by m, so factors beyond the window cannot
            // contribute and pruning inside the fold is exact.
            let mut m = 1i64;
            while int(m) <= *window {
                acc = self.fold_exp_mode(&acc, &mu, -m, &rat(1, m), &int(m), Some(window));
                m += 1;
            }
            for (p, vec) in acc.iter() {
                out.add_at(p.clone(), vec, &Rat::one());
            }
        }
        out.retain_keys(|mono| self.weight_of(mono) <= *window);
        out
    }

    /// Fold `exp(c * mu(n) * z^step)` into a truncated field. With
    /// `prune = Some(window)` (creation modes), terms above the window are
    /// dropped as they appear, which also terminates the power series.
    fn fold_exp_mode(
        &self,
        acc: &FieldTrunc<VLMono>,
        mu: &[Rat],
        n: i64,
        c: &Rat,
        step: &Rat,
        prune: Option<&Rat>,
    ) -> FieldTrunc<VLMono> {
        let mut out = FieldTrunc::new();
        for (p, vec) in acc.iter() {
            let mut cur = vec.clone();
            let mut coeff = Rat::one();
            let mut power = p.clone();
            let mut t = 0i64;
            loop {
                out.add_at(power.clone(), &cur, &coeff);
                t += 1;
                cur = self.apply_dir_mode(mu, n, &cur);
                if let Some(window) = prune {
                    cur = prune_by_weight(self, cur, window);
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

    /// Truncated field `Y(u, z)` of a homogeneous algebra element `u`
    /// (integral label, oscillator dressing) acting on this module. The
    /// oscillator factors are peeled from the outside: for a leading
    /// `b(-m)`, annihilation-and-zero modes multiply from the right and
    /// creation modes from the left, with binomial weights from the
    /// (m-1)-fold derivative of the generating field.
    pub fn vertex_op(&self, u: &VLMono, w: &VLVec, window: &Rat) -> FieldTrunc<VLMono> {
        if u.osc.is_empty() {
            let alpha: Vec<i64> = u
                .point
                .iter()
                .map(|p| as_i64(p).expect("algebra labels are integral"))
                .collect();
            return self.exp_field(&alpha, w, window);
        }
        let (gen, m) = u.osc.factors()[0];
        let rest = VLMono {
            point: u.point.clone(),
            osc: crate::heisenberg::HeisMonomial::new(u.osc.factors()[1..].to_vec()),
        };
        let m_i = m as i64;
        let sign = neg_one_pow(&int(m_i - 1));
        let mut out = FieldTrunc::new();
        // Annihilation and zero modes of the peeled oscillator.
        let wdeg = w.iter().map(|(mn, _)| mn.osc.degree()).max().unwrap_or(0) as i64;
        for n_prime in 0..=wdeg {
            let lowered = self.apply_basis_mode(gen, n_prime, w);
            if lowered.is_zero() {
                continue;
            }
            let coeff = &sign * gen_binom(n_prime + m_i - 1, (m - 1) as u32);
            if coeff.is_zero() {
                continue;
            }
            let inner = self.vertex_op(&rest, &lowered, window);
            for (p, vec) in inner.iter() {
                out.add_at(p - int(n_prime + m_i), vec, &coeff);
            }
        }
        // Creation modes, bounded by the weight window.
        let inner = self.vertex_op(&rest, w, window);
        for (p, vec) in inner.iter() {
            for (mono, c) in vec.iter() {
                let wt = self.weight_of(mono);
                let mut j = 1i64;
                while &wt + int(j) <= *window {
                    let coeff = &sign * gen_binom(m_i - 1 - j, m as u32 - 1) * c;
                    if !coeff.is_zero() {
                        let raised = self.apply_basis_mode(
                            gen,
                            -j,
                            &LinComb::single(mono.clone(), Rat::one()),
                        );
                        out.add_at(p + int(j - m_i), &raised, &coeff);
                    }
                    j += 1;
                }
            }
        }
        out
    }

    /// Truncated field of a linear combination of algebra elements.
    pub fn vertex_op_vec(&self, u: &VLVec, w: &VLVec, window: &Rat) -> FieldTrunc<VLMono> {
        let mut out = FieldTrunc::new();
        for (mono, c) in u.iter() {
            let f = self.vertex_op(mono, w, window);
            for (p, vec) in f.iter() {
                out.add_at(p.clone(), vec, c);
            }
        }
        out
    }

    /// Label sums and weight bookkeeping of a computed field: every
    /// coefficient of `Y(u, z) w` at `z^p` must have label
    /// `label(u) + label(w)` and weight `wt(u) + wt(w) + p`.
    pub fn field_bookkeeping_ok(
        &self,
        u: &VLMono,
        w: &VLMono,
        field: &FieldTrunc<VLMono>,
    ) -> bool {
        let wu = self.weight_of(u);
        let ww = self.weight_of(w);
        for (p, vec) in field.iter() {
            for (mono, _) in vec.iter() {
                if self.weight_of(mono) != &wu + &ww + p {
                    return false;
                }
                let expect: Vec<Rat> = u
                    .point
                    .iter()
                    .zip(w.point.iter())
                    .map(|(a, b)| a + b)
                    .collect();
                if mono.point != expect {
                    return false;
                }
            }
        }
        true
    }

    /// Adjoint identities of the group algebra and the label grading on
    /// all basis pairs of weight <= max_weight:
    /// `(e_alpha u, v) = (u, (-1)^{(alpha,alpha)/2} e_{-alpha} v)`, and
    /// whenever `(u, v)` is nonzero the two `z^alpha` exponents
    /// `(alpha, label(u))` and `(alpha, label(v))` agree.
    pub fn adjoint_check(&self, alpha: &[i64], max_weight: &Rat) -> bool {
        let neg: Vec<i64> = alpha.iter().map(|a| -a).collect();
        let mu: Vec<Rat> = alpha.iter().map(|&a| int(a)).collect();
        let half_norm = self.lattice().pairing_int(alpha, alpha) / 2;
        let sign = if half_norm % 2 == 0 { int(1) } else { int(-1) };
        let mut basis = Vec::new();
        for w in self.weights_up_to(max_weight) {
            basis.extend(self.basis(&w));
        }
        for a in &basis {
            let u = LinComb::single(a.clone(), Rat::one());
            for b in &basis {
                let v = LinComb::single(b.clone(), Rat::one());
                let lhs = self.pair(&self.e_alpha(alpha, &u), &v);
                let rhs = &sign * self.pair(&u, &self.e_alpha(&neg, &v));
                if lhs != rhs {
                    return false;
                }
                if !self.pair(&u, &v).is_zero()
                    && self.lattice().pairing(&mu, &a.point)
                        != self.lattice().pairing(&mu, &b.point)
                {
                    return false;
                }
            }
        }
        true
    }

    /// Coefficientwise invariance of the contravariant form:
    /// `(Y(e^{zL(1)} (-z^-2)^{L(0)} a, z^-1) w1, w2) = (w1, Y(theta(a), z) w2)`
    /// as truncated scalar series, for a homogeneous algebra element `a`
    /// and module vectors `w1`, `w2` of weight <= window.
    pub fn invariance_check(&self, a: &VLVec, w1: &VLVec, w2: &VLVec, window: &Rat) -> bool {
        let d = match vl_homogeneous_weight(self, a) {
            Some(d) => d,
            None => return false,
        };
        assert!(is_integer(&d), "algebra weights are integral");
        let mut lhs: ScalarSeries = ScalarSeries::new();
        // e^{zL(1)} (-z^-2)^{L(0)} a: the k-th summand is the vector
        // L(1)^k a / k! at z-exponent k - 2d, all weighted by (-1)^d.
        let front = neg_one_pow(&d);
        let mut cur = a.clone();
        let mut k = 0i64;
        let mut kfact = Rat::one();
        while !cur.is_zero() {
            let field = self.vertex_op_vec(&cur, w1, window).invert_z();
            let shift = int(k) - int(2) * &d;
            for (p, vec) in field.iter() {
                let scalar = self.pair(vec, w2) * &front / &kfact;
                lhs.add_at(p + &shift, scalar);
            }
            k += 1;
            kfact = kfact * int(k);
            cur = self.l_mode(1, &cur);
        }
        let mut rhs: ScalarSeries = ScalarSeries::new();
        let field = self.vertex_op_vec(&self.theta(a), w2, window);
        for (p, vec) in field.iter() {
            rhs.add_at(p.clone(), self.pair(w1, vec));
        }
        lhs == rhs
    }
}

fn prune_by_weight(m: &LatticeModule, v: VLVec, window: &Rat) -> VLVec {
    let mut out = VLVec::zero();
    for (mono, c) in v.iter() {
        if m.weight_of(mono) <= *window {
            out.add_term(mono.clone(), c.clone());
        }
    }
    out
}

pub(crate) fn vl_homogeneous_weight(m: &LatticeModule, v: &VLVec) -> Option<Rat> {
    let mut it = v.iter();
    let first = m.weight_of(it.next()?.0);
    for (mono, _) in it {
        if m.weight_of(mono) != first {
            return None;
        }
    }
    Some(first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::HeisMonomial;
    use crate::lattice::{EvenLattice, LatticeModule};
    use alloc::vec;

    fn rank1() -> LatticeModule {
        LatticeModule::voa(EvenLattice::new(vec![vec![2]]).unwrap())
    }

    fn mono_e(coord: i64) -> VLMono {
        VLMono::ground(vec![int(coord)])
    }

    #[test]
    fn exponential_field_on_the_opposite_point() {
        let m = rank1();
        let e_neg = m.e_alpha(&[-1], &m.ground());
        let field = m.exp_field(&[1], &e_neg, &int(4));
        // Leading power z^-2 with the cocycle sign, then the creation tail.
        let lead = field.at(&int(-2));
        assert_eq!(lead, m.ground().scale(&int(-1)));
        let next = field.at(&int(-1));
        assert_eq!(
            next,
            m.apply_basis_mode(0, -1, &m.ground()).scale(&int(-1))
        );
        let z0 = field.at(&int(0));
        let mut expect = VLVec::zero();
        expect.add_term(
            VLMono {
                point: vec![int(0)],
                osc: HeisMonomial::new(vec![(0, 1), (0, 1)]),
            },
            rat(-1, 2),
        );
        expect.add_term(
            VLMono {
                point: vec![int(0)],
                osc: HeisMonomial::new(vec![(0, 2)]),
            },
            rat(-1, 2),
        );
        assert_eq!(z0, expect);
        // No coefficient below the leading pairing power.
        assert!(field.at(&int(-3)).is_zero());
    }

    #[test]
    fn creation_axiom_at_z_zero() {
        let m = rank1();
        let one = m.ground();
        // e^alpha_{(-1)} vacuum = e^alpha.
        let field = m.exp_field(&[1], &one, &int(4));
        assert_eq!(field.at(&int(0)), m.e_alpha(&[1], &one));
        assert!(field.at(&int(-1)).is_zero());
        // Y(u, z) vacuum |_{z=0} = u for dressed states too.
        for w in 1..=3i64 {
            for mono in m.basis(&int(w)) {
                let field = m.vertex_op(&mono, &one, &int(4));
                assert_eq!(
                    field.at(&int(0)),
                    LinComb::single(mono.clone(), Rat::one())
                );
                for p in -3..0i64 {
                    assert!(field.at(&int(p)).is_zero());
                }
            }
        }
    }

    #[test]
    fn oscillator_field_on_a_lattice_point() {
        let m = rank1();
        let e_a = m.e_alpha(&[1], &m.ground());
        let u = VLMono {
            point: vec![int(0)],
            osc: HeisMonomial::new(vec![(0, 1)]),
        };
        let field = m.vertex_op(&u, &e_a, &int(4));
        // b(0) e^a = <b, a> e^a at z^-1; b(-1) e^a at z^0.
        assert_eq!(field.at(&int(-1)), e_a.clone().scale(&int(2)));
        assert_eq!(field.at(&int(0)), m.apply_basis_mode(0, -1, &e_a));
        assert!(field.at(&int(-2)).is_zero());
    }

    #[test]
    fn conformal_field_matches_l_modes() {
        let m = rank1();
        let window = int(4);
        for w in 0..=2i64 {
            for mono in m.basis(&int(w)) {
                let v = LinComb::single(mono, Rat::one());
                let field = m.vertex_op_vec(&m.conformal_vector(), &v, &window);
                for n in -2..=2i64 {
                    assert_eq!(field.at(&int(-n - 2)), m.l_mode(n, &v));
                }
            }
        }
    }

    #[test]
    fn field_bookkeeping_holds_on_samples() {
        let m = rank1();
        let window = int(4);
        let grounds = [mono_e(0), mono_e(1), mono_e(-1)];
        let dressed = VLMono {
            point: vec![int(1)],
            osc: HeisMonomial::new(vec![(0, 1)]),
        };
        let mut us: Vec<VLMono> = grounds.to_vec();
        us.push(dressed);
        for u in &us {
            for w in &us {
                let field = m.vertex_op(u, &LinComb::single(w.clone(), Rat::one()), &window);
                assert!(m.field_bookkeeping_ok(u, w, &field));
            }
        }
    }

    #[test]
    fn adjoint_identities_on_low_weights() {
        let m = rank1();
        for a in [-2i64, -1, 1, 2] {
            assert!(m.adjoint_check(&[a], &int(2)));
        }
        let l2 = EvenLattice::new(vec![vec![2]]).unwrap();
        let odd = LatticeModule::module(l2, vec![rat(1, 2)]).unwrap();
        assert!(odd.adjoint_check(&[1], &rat(9, 4)));
    }

    #[test]
    fn invariance_of_the_form_on_the_algebra() {
        let m = rank1();
        let window = int(3);
        let mut gens = vec![m.apply_basis_mode(0, -1, &m.ground())];
        gens.push(m.e_alpha(&[1], &m.ground()));
        gens.push(m.e_alpha(&[-1], &m.ground()));
        let mut basis = Vec::new();
        for w in 0..=3i64 {
            basis.extend(m.basis(&int(w)));
        }
        for a in &gens {
            for x in &basis {
                let w1 = LinComb::single(x.clone(), Rat::one());
                for y in &basis {
                    let w2 = LinComb::single(y.clone(), Rat::one());
                    assert!(m.invariance_check(a, &w1, &w2, &window));
                }
            }
        }
    }

    #[test]
    fn invariance_of_the_form_on_the_odd_module() {
        let voa = rank1();
        let l2 = EvenLattice::new(vec![vec![2]]).unwrap();
        let odd = LatticeModule::module(l2, vec![rat(1, 2)]).unwrap();
        let window = rat(9, 4);
        let mut gens = vec![voa.apply_basis_mode(0, -1, &voa.ground())];
        gens.push(voa.e_alpha(&[1], &voa.ground()));
        gens.push(voa.e_alpha(&[-1], &voa.ground()));
        let mut basis = Vec::new();
        for w in odd.weights_up_to(&window) {
            basis.extend(odd.basis(&w));
        }
        for a in &gens {
            for x in &basis {
                let w1 = LinComb::single(x.clone(), Rat::one());
                for y in &basis {
                    let w2 = LinComb::single(y.clone(), Rat::one());
                    assert!(odd.invariance_check(a, &w1, &w2, &window));
                }
            }
        }
    }
}
