//! Level-k vacuum modules over an affinized finite-dimensional Lie
//! algebra: `[x(m), y(n)] = [x,y](m+n) + m (x|y) delta_{m+n,0} K`, with K
//! acting by the level. The finite-dimensional input is carried by
//! explicit structure tables (`LieTables`), so the straightening and
//! pairing code is independent of the particular algebra; `LieTables::sl2`
//! provides the rank-one tables with `(e|f) = 1`, `(h|h) = 2`.
//!
//! The contravariant form is induced by the compact involution: the
//! adjoint of `x(-n)` is `-omega0(x)(n)`, which for sl2 sends the mode of
//! `e` to the opposite mode of `f` and fixes the Cartan direction up to
//! sign.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::enumerate::partitions_desc;
use crate::lincomb::LinComb;
use crate::matrix::{psd_check, SymMatrix};
use crate::rat::{int, Rat};
use crate::scan::{LevelRecord, ScanOutcome};

/// Structure constants of a finite-dimensional Lie algebra with a chosen
/// basis, an invariant symmetric form, a compact involution `omega0`, and
/// integral charges (eigenvalues of the distinguished Cartan generator).
#[derive(Clone, Debug)]
pub struct LieTables {
    dim: usize,
    /// `brackets[x][y]` = coordinates of [x, y].
    brackets: Vec<Vec<Vec<(usize, Rat)>>>,
    /// Normalized invariant form on the chosen basis.
    form: Vec<Vec<Rat>>,
    /// Images of basis vectors under the involution.
    omega0: Vec<Vec<(usize, Rat)>>,
    /// `[cartan, x] = charge(x) * x`.
    charges: Vec<i64>,
    cartan: usize,
    dual_coxeter: Rat,
}

impl LieTables {
    /// sl2 with basis f = 0, h = 1, e = 2: `[e,f] = h`, `[h,e] = 2e`,
    /// `[h,f] = -2f`; form `(e|f) = 1`, `(h|h) = 2`; `omega0` swaps `e`
    /// with `-f` and negates `h`; dual Coxeter number 2.
    pub fn sl2() -> Self {
        let f = 0usize;
        let h = 1usize;
        let e = 2usize;
        let mut brackets = vec![vec![Vec::new(); 3]; 3];
        brackets[e][f] = vec![(h, int(1))];
        brackets[f][e] = vec![(h, int(-1))];
        brackets[h][e] = vec![(e, int(2))];
        brackets[e][h] = vec![(e, int(-2))];
        brackets[h][f] = vec![(f, int(-2))];
        brackets[f][h] = vec![(f, int(2))];
        let mut form = vec![vec![Rat::zero(); 3]; 3];
        form[e][f] = int(1);
        form[f][e] = int(1);
        form[h][h] = int(2);
        let mut omega0 = vec![Vec::new(); 3];
        omega0[f] = vec![(e, int(-1))];
        omega0[h] = vec![(h, int(-1))];
        omega0[e] = vec![(f, int(-1))];
        LieTables {
            dim: 3,
            brackets,
            form,
            omega0,
            charges: vec![-2, 0, 2],
            cartan: h,
            dual_coxeter: int(2),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bracket(&self, x: usize, y: usize) -> &[(usize, Rat)] {
        &self.brackets[x][y]
    }

    pub fn form(&self, x: usize, y: usize) -> &Rat {
        &self.form[x][y]
    }

    pub fn omega0(&self, x: usize) -> &[(usize, Rat)] {
        &self.omega0[x]
    }

    pub fn charge(&self, x: usize) -> i64 {
        self.charges[x]
    }

    pub fn dual_coxeter(&self) -> &Rat {
        &self.dual_coxeter
    }

    fn dense(&self, terms: &[(usize, Rat)]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (i, c) in terms {
            out[*i] += c;
        }
        out
    }

    fn bracket_dense(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (x, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (y, cb) in b.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                for (z, c) in self.bracket(x, y) {
                    out[*z] += ca * cb * c;
                }
            }
        }
        out
    }

    fn form_dense(&self, a: &[Rat], b: &[Rat]) -> Rat {
        let mut out = Rat::zero();
        for (x, ca) in a.iter().enumerate() {
            for (y, cb) in b.iter().enumerate() {
                out += ca * cb * self.form(x, y);
            }
        }
        out
    }

    fn unit(&self, x: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        out[x] = Rat::one();
        out
    }

    /// Exhaustive consistency of the tables: antisymmetry, the Jacobi
    /// identity, invariance and symmetry of the form, and that `omega0` is
    /// an involutive automorphism preserving the form; the charge list
    /// must agree with the bracket against the Cartan generator.
    pub fn self_check(&self) -> bool {
        let d = self.dim;
        let units: Vec<Vec<Rat>> = (0..d).map(|x| self.unit(x)).collect();
        for x in 0..d {
            for y in 0..d {
                let xy = self.dense(self.bracket(x, y));
                let yx = self.dense(self.bracket(y, x));
                if (0..d).any(|i| xy[i] != -&yx[i]) {
                    return false;
                }
                if self.form(x, y) != self.form(y, x) {
                    return false;
                }
                for z in 0..d {
                    let a = self.bracket_dense(&xy, &units[z]);
                    let yz = self.dense(self.bracket(y, z));
                    let b = self.bracket_dense(&yz, &units[x]);
                    let zx = self.dense(self.bracket(z, x));
                    let c = self.bracket_dense(&zx, &units[y]);
                    if (0..d).any(|i| !(&a[i] + &b[i] + &c[i]).is_zero()) {
                        return false;
                    }
                    // Invariance ([x,y]|z) = (x|[y,z]).
                    if self.form_dense(&xy, &units[z]) != self.form_dense(&units[x], &yz) {
                        return false;
                    }
                }
            }
        }
        for x in 0..d {
            let wx = self.dense(self.omega0(x));
            let back = {
                let mut out = vec![Rat::zero(); d];
                for (y, c) in wx.iter().enumerate() {
                    for (z, cz) in self.omega0(y) {
                        out[*z] += c * cz;
                    }
                }
                out
            };
            if back != units[x] {
                return false;
            }
            for y in 0..d {
                let wy = self.dense(self.omega0(y));
                let lhs = {
                    let xy = self.dense(self.bracket(x, y));
                    let mut out = vec![Rat::zero(); d];
                    for (z, c) in xy.iter().enumerate() {
                        for (w, cw) in self.omega0(z) {
                            out[*w] += c * cw;
                        }
                    }
                    out
                };
                if lhs != self.bracket_dense(&wx, &wy) {
                    return false;
                }
                if self.form_dense(&wx, &wy) != *self.form(x, y) {
                    return false;
                }
            }
            let hx = self.dense(self.bracket(self.cartan, x));
            let expected: Vec<Rat> = units[x]
                .iter()
                .map(|c| c * int(self.charges[x]))
                .collect();
            if hx != expected {
                return false;
            }
        }
        true
    }
}

/// Product of creation modes applied to the vacuum: factors `(depth, gen)`
/// with depth >= 1, sorted by depth descending then generator ascending.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AffineMonomial {
    factors: Vec<(u64, usize)>,
}

impl AffineMonomial {
    pub fn unit() -> Self {
        AffineMonomial {
            factors: Vec::new(),
        }
    }

    pub fn factors(&self) -> &[(u64, usize)] {
        &self.factors
    }

    pub fn degree(&self) -> u64 {
        self.factors.iter().map(|&(d, _)| d).sum()
    }
}

fn factor_cmp(a: &(u64, usize), b: &(u64, usize)) -> core::cmp::Ordering {
    b.0.cmp(&a.0).then(a.1.cmp(&b.1))
}

pub type AffineVec = LinComb<AffineMonomial, Rat>;

/// Level-k vacuum module: creation monomials over the vacuum, positive and
/// zero modes annihilating it.
#[derive(Clone, Debug)]
pub struct AffineModule {
    pub tables: LieTables,
    pub k: Rat,
}

impl AffineModule {
    pub fn new(tables: LieTables, k: Rat) -> Self {
        assert!(
            k != -tables.dual_coxeter().clone(),
            "the critical level is excluded"
        );
        AffineModule { tables, k }
    }

    pub fn sl2_vacuum(k: Rat) -> Self {
        AffineModule::new(LieTables::sl2(), k)
    }

    pub fn ground(&self) -> AffineVec {
        LinComb::single(AffineMonomial::unit(), Rat::one())
    }

    fn monomial_vec(&self, factors: Vec<(u64, usize)>) -> AffineVec {
        LinComb::single(AffineMonomial { factors }, Rat::one())
    }

    /// Apply `x(n)` for a basis generator x.
    pub fn apply_mode(&self, gen: usize, n: i64, v: &AffineVec) -> AffineVec {
        let mut out = AffineVec::zero();
        for (mono, coeff) in v.iter() {
            out.add_scaled(&self.apply_mode_mono(gen, n, mono.factors()), coeff);
        }
        out
    }

    fn apply_mode_mono(&self, x: usize, n: i64, factors: &[(u64, usize)]) -> AffineVec {
        if factors.is_empty() {
            return if n >= 0 {
                AffineVec::zero()
            } else {
                self.monomial_vec(vec![((-n) as u64, x)])
            };
        }
        let (d1, y) = factors[0];
        if n < 0 && factor_cmp(&((-n) as u64, x), &(d1, y)) != core::cmp::Ordering::Greater {
            let mut joined = Vec::with_capacity(factors.len() + 1);
            joined.push(((-n) as u64, x));
            joined.extend_from_slice(factors);
            return self.monomial_vec(joined);
        }
        let rest = &factors[1..];
        // x(n) y(-d1) = y(-d1) x(n) + [x,y](n - d1) + n (x|y) delta_{n,d1} K.
        let commuted = self.apply_mode_mono(x, n, rest);
        let mut out = self.apply_mode(y, -(d1 as i64), &commuted);
        for (z, c) in self.tables.bracket(x, y) {
            out.add_scaled(&self.apply_mode_mono(*z, n - d1 as i64, rest), c);
        }
        if n > 0 && n as u64 == d1 {
            let central = int(n) * self.tables.form(x, y) * &self.k;
            if !central.is_zero() {
                out.add_scaled(&self.monomial_vec(rest.to_vec()), &central);
            }
        }
        out
    }

    /// Apply a word of modes (gen, n), rightmost acting first.
    pub fn apply_word(&self, word: &[(usize, i64)], v: &AffineVec) -> AffineVec {
        let mut cur = v.clone();
        for &(gen, n) in word.iter().rev() {
            cur = self.apply_mode(gen, n, &cur);
        }
        cur
    }

    /// Apply `(-omega0(x))(n)`, the adjoint of `x(-n)`.
    fn apply_adjoint_mode(&self, gen: usize, n: i64, v: &AffineVec) -> AffineVec {
        let mut out = AffineVec::zero();
        for (z, c) in self.tables.omega0(gen) {
            out.add_scaled(&self.apply_mode(*z, n, v), &(-c));
        }
        out
    }

    /// Contravariant form with `(x(-n))* = -omega0(x)(n)` and unit vacuum
    /// norm, evaluated by peeling the deepest factor of the left argument.
    pub fn pair(&self, u: &AffineVec, w: &AffineVec) -> Rat {
        let mut total = Rat::zero();
        for (mono, coeff) in u.iter() {
            total += coeff * &self.pair_factors(mono.factors(), w);
        }
        total
    }

    fn pair_factors(&self, factors: &[(u64, usize)], w: &AffineVec) -> Rat {
        match factors.split_first() {
            None => w.coeff(&AffineMonomial::unit()),
            Some((&(d, x), rest)) => {
                self.pair_factors(rest, &self.apply_adjoint_mode(x, d as i64, w))
            }
        }
    }

    /// Sum of generator charges over the factors: the eigenvalue of the
    /// zero mode of the Cartan generator.
    pub fn charge(&self, mono: &AffineMonomial) -> i64 {
        mono.factors()
            .iter()
            .map(|&(_, g)| self.tables.charge(g))
            .sum()
    }

    /// Ordered basis of the degree-`level` piece: depths from descending
    /// partitions, generators assigned non-decreasing along runs of equal
    /// depth.
    pub fn basis(&self, level: u64) -> Vec<AffineMonomial> {
        let mut out = Vec::new();
        for partition in partitions_desc(level, 1) {
            let mut choice: Vec<(u64, usize)> = Vec::with_capacity(partition.len());
            self.assign_gens(&partition, 0, &mut choice, &mut out);
        }
        out
    }

    fn assign_gens(
        &self,
        partition: &[u64],
        pos: usize,
        choice: &mut Vec<(u64, usize)>,
        out: &mut Vec<AffineMonomial>,
    ) {
        if pos == partition.len() {
            out.push(AffineMonomial {
                factors: choice.clone(),
            });
            return;
        }
        let min_gen = match choice.last() {
            Some(&(d, g)) if d == partition[pos] => g,
            _ => 0,
        };
        for gen in min_gen..self.tables.dim() {
            choice.push((partition[pos], gen));
            self.assign_gens(partition, pos + 1, choice, out);
            choice.pop();
        }
    }

    pub fn gram(&self, level: u64) -> SymMatrix {
        let basis = self.basis(level);
        let vecs: Vec<AffineVec> = basis
            .iter()
            .map(|m| LinComb::single(m.clone(), Rat::one()))
            .collect();
        SymMatrix::from_pairing(basis.len(), |i, j| self.pair(&vecs[i], &vecs[j]))
    }

    /// Exact definiteness of the graded pieces at levels 1..=max_level.
    pub fn unitarity_scan(&self, max_level: u64) -> ScanOutcome {
        let levels = (1..=max_level)
            .map(|n| {
                let g = self.gram(n);
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
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    const F: usize = 0;
    const H: usize = 1;
    const E: usize = 2;

    #[test]
    fn sl2_tables_are_consistent() {
        assert!(LieTables::sl2().self_check());
    }

    #[test]
    fn single_bracket_reductions() {
        let m = AffineModule::sl2_vacuum(rat(7, 3));
        let one = m.ground();
        let k = rat(7, 3);
        // f(1) e(-1) 1 = (f|e) k 1 and e(1) f(-1) 1 = (e|f) k 1.
        assert_eq!(
            m.apply_word(&[(F, 1), (E, -1)], &one),
            one.clone().scale(&k)
        );
        assert_eq!(
            m.apply_word(&[(E, 1), (F, -1)], &one),
            one.clone().scale(&k)
        );
        // h(1) h(-1) 1 = (h|h) k 1 = 2k.
        assert_eq!(
            m.apply_word(&[(H, 1), (H, -1)], &one),
            one.clone().scale(&(int(2) * &k))
        );
        // h(1) e(-2) 1 = [h,e](-1) 1 = 2 e(-1) 1.
        assert_eq!(
            m.apply_word(&[(H, 1), (E, -2)], &one),
            m.apply_mode(E, -1, &one).scale(&int(2))
        );
        // e(2) e(-2) 1 = 2 (e|e) k 1 = 0, and zero modes kill the vacuum.
        assert!(m.apply_word(&[(E, 2), (E, -2)], &one).is_zero());
        assert!(m.apply_mode(H, 0, &one).is_zero());
    }

    #[test]
    fn straightening_reorders_noncommuting_factors() {
        // e(-1) f(-1) 1 = f(-1) e(-1) 1 + h(-2) 1.
        let m = AffineModule::sl2_vacuum(int(5));
        let lhs = m.apply_word(&[(E, -1), (F, -1)], &m.ground());
        let mut rhs = m.monomial_vec(vec![(1, F), (1, E)]);
        rhs.add_scaled(&m.monomial_vec(vec![(2, H)]), &Rat::one());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn level_one_gram_is_diagonal_in_the_form() {
        let k = rat(7, 3);
        let m = AffineModule::sl2_vacuum(k.clone());
        let g = m.gram(1);
        assert_eq!(g.n(), 3);
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j {
                    if i == 1 {
                        int(2) * &k
                    } else {
                        k.clone()
                    }
                } else {
                    int(0)
                };
                assert_eq!(*g.at(i, j), expected);
            }
        }
    }

    #[test]
    fn repeated_highest_root_norms() {
        // <e(-1)^n 1> = prod_{j=1..n} j (k - j + 1), same for f.
        for k in [int(3), rat(1, 2), rat(-5, 4)] {
            let m = AffineModule::sl2_vacuum(k.clone());
            for gen in [E, F] {
                let mut v = m.ground();
                let mut expected = Rat::one();
                for n in 1..=4i64 {
                    v = m.apply_mode(gen, -1, &v);
                    expected *= int(n) * (&k - int(n - 1));
                    assert_eq!(m.pair(&v, &v), expected);
                }
            }
        }
    }

    #[test]
    fn level_one_half_is_refuted_at_depth_two() {
        let m = AffineModule::sl2_vacuum(rat(1, 2));
        let scan = m.unitarity_scan(3);
        let refuted = scan.refuted().expect("a negative-norm vector exists");
        assert_eq!(refuted.level, int(2));
        let (witness, value) = refuted
            .report
            .witness
            .clone()
            .expect("refutation carries a witness");
        assert_eq!(value, rat(-1, 2));
        // The witness is an exact vector: recompute its squared norm.
        let basis = m.basis(2);
        let mut v = AffineVec::zero();
        for (c, mono) in witness.iter().zip(basis.iter()) {
            v.add_term(mono.clone(), c.clone());
        }
        assert_eq!(m.pair(&v, &v), rat(-1, 2));
        // Both repeated single-mode states hit the same negative norm.
        let ff = m.apply_word(&[(F, -1), (F, -1)], &m.ground());
        let ee = m.apply_word(&[(E, -1), (E, -1)], &m.ground());
        assert_eq!(m.pair(&ff, &ff), rat(-1, 2));
        assert_eq!(m.pair(&ee, &ee), rat(-1, 2));
    }

    #[test]
    fn integrable_levels_are_semidefinite_with_null_states() {
        for k in [1i64, 2] {
            let m = AffineModule::sl2_vacuum(int(k));
            let scan = m.unitarity_scan(3);
            assert!(scan.refuted().is_none());
            assert!(scan.radical_total() > 0);
            // e(-1)^{k+1} 1 is a null state.
            let mut v = m.ground();
            for _ in 0..=(k as usize) {
                v = m.apply_mode(E, -1, &v);
            }
            assert_eq!(m.pair(&v, &v), int(0));
        }
        // A generic positive level stays positive-definite here.
        let generic = AffineModule::sl2_vacuum(int(3));
        assert!(generic.unitarity_scan(3).all_definite());
    }

    #[test]
    fn adjoint_property_of_modes() {
        let m = AffineModule::sl2_vacuum(rat(4, 3));
        for n in 1..=2u64 {
            for lu in n..=3 {
                let upper = m.basis(lu);
                let lower = m.basis(lu - n);
                for a in &upper {
                    for b in &lower {
                        let u = LinComb::single(a.clone(), Rat::one());
                        let w = LinComb::single(b.clone(), Rat::one());
                        for gen in [F, H, E] {
                            // <x(n) u, w> = <u, -omega0(x)(-n) w>.
                            let lhs = m.pair(&m.apply_mode(gen, n as i64, &u), &w);
                            let rhs = m.pair(&u, &m.apply_adjoint_mode(gen, -(n as i64), &w));
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn distinct_charges_are_orthogonal() {
        let m = AffineModule::sl2_vacuum(rat(9, 7));
        for level in 1..=3u64 {
            let basis = m.basis(level);
            for a in &basis {
                for b in &basis {
                    if m.charge(a) != m.charge(b) {
                        let u = LinComb::single(a.clone(), Rat::one());
                        let w = LinComb::single(b.clone(), Rat::one());
                        assert_eq!(m.pair(&u, &w), int(0));
                    }
                }
            }
        }
    }

    #[test]
    fn basis_order_puts_deepest_factors_first() {
        let m = AffineModule::sl2_vacuum(int(1));
        let basis = m.basis(2);
        assert_eq!(basis.len(), 9);
        assert_eq!(basis[0].factors(), &[(2, F)]);
        assert_eq!(basis[2].factors(), &[(2, E)]);
        assert_eq!(basis[3].factors(), &[(1, F), (1, F)]);
        assert_eq!(basis[8].factors(), &[(1, E), (1, E)]);
        let dims: Vec<usize> = (1..=4).map(|n| m.basis(n).len()).collect();
        assert_eq!(dims, vec![3, 9, 22, 51]);
    }
}
