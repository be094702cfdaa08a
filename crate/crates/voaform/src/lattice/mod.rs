//! Positive-definite even lattice vertex algebras and their coset modules:
//! the twisted group algebra (2-cocycle), graded bases indexed by lattice
//! points and oscillator monomials, the contravariant Hermitian form, the
//! quadratic Virasoro modes in the non-orthonormal lattice basis, and the
//! mode-negating involution theta.
//!
//! Oscillators are indexed by the lattice basis itself:
//! `[b_i(m), b_j(n)] = m B_ij delta_{m+n,0}` where B is the Gram matrix,
//! and `b_i(0)` reads the pairing with the lattice label of a term.

pub mod field;
pub mod twisted;

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::heisenberg::{monomial_basis, HeisMonomial};
use crate::lincomb::LinComb;
use crate::matrix::{psd_check, solve, SymMatrix, Verdict};
use crate::rat::{int, rat, Rat};
use crate::scan::{LevelRecord, ScanOutcome};

/// Validation failure for a would-be even lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeError {
    NotSquare,
    NotSymmetric,
    OddDiagonal,
    NotPositiveDefinite,
    RepNotDual,
}

impl core::fmt::Display for LatticeError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let msg = match self {
            LatticeError::NotSquare => "Gram matrix must be square",
            LatticeError::NotSymmetric => "Gram matrix must be symmetric",
            LatticeError::OddDiagonal => "all diagonal entries must be even",
            LatticeError::NotPositiveDefinite => "Gram matrix must be positive definite",
            LatticeError::RepNotDual => {
                "coset representative must pair integrally with the lattice"
            }
        };
        write!(f, "{msg}")
    }
}

/// A positive-definite even lattice given by the Gram matrix of a basis.
#[derive(Clone, Debug)]
pub struct EvenLattice {
    rank: usize,
    gram: Vec<Vec<i64>>,
    inv: Vec<Vec<Rat>>,
}

impl EvenLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let rank = gram.len();
        if rank == 0 || gram.iter().any(|row| row.len() != rank) {
            return Err(LatticeError::NotSquare);
        }
        for i in 0..rank {
            for j in 0..rank {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric);
                }
            }
            if gram[i][i] % 2 != 0 {
                return Err(LatticeError::OddDiagonal);
            }
        }
        let sym = SymMatrix::new(
            gram.iter()
                .map(|row| row.iter().map(|&x| int(x)).collect())
                .collect(),
        );
        if psd_check(&sym).verdict != Verdict::PositiveDefinite {
            return Err(LatticeError::NotPositiveDefinite);
        }
        // Exact inverse, column by column.
        let rows: Vec<Vec<Rat>> = sym.rows().to_vec();
        let mut cols = Vec::with_capacity(rank);
        for j in 0..rank {
            let mut e = vec![Rat::zero(); rank];
            e[j] = Rat::one();
            cols.push(solve(&rows, &e).expect("positive definite matrices are invertible"));
        }
        let inv: Vec<Vec<Rat>> = (0..rank)
            .map(|i| (0..rank).map(|j| cols[j][i].clone()).collect())
            .collect();
        Ok(EvenLattice { rank, gram, inv })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram_int(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn inv_entry(&self, i: usize, j: usize) -> &Rat {
        &self.inv[i][j]
    }

    pub fn pairing_int(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut out = 0i64;
        for i in 0..self.rank {
            for j in 0..self.rank {
                out += a[i] * self.gram[i][j] * b[j];
            }
        }
        out
    }

    pub fn pairing(&self, a: &[Rat], b: &[Rat]) -> Rat {
        let mut out = Rat::zero();
        for i in 0..self.rank {
            for j in 0..self.rank {
                out += &a[i] * int(self.gram[i][j]) * &b[j];
            }
        }
        out
    }

    pub fn norm(&self, a: &[Rat]) -> Rat {
        self.pairing(a, a)
    }

    /// All points of `rep + Z^rank` with norm <= max_norm, sorted
    /// lexicographically. The coordinate box |x_i|^2 <= max_norm*(B^-1)_ii
    /// is exact (Cauchy-Schwarz in the lattice metric), then each candidate
    /// is filtered by its exact norm.
    pub fn coset_points_up_to(&self, rep: &[Rat], max_norm: &Rat) -> Vec<Vec<Rat>> {
        assert_eq!(rep.len(), self.rank);
        if max_norm.is_negative() {
            return Vec::new();
        }
        let mut ranges = Vec::with_capacity(self.rank);
        for i in 0..self.rank {
            // |rep_i + t| <= sqrt(max_norm * (B^-1)_ii); the integer floor
            // square root is widened by one so the box is a superset, and
            // the exact norm filter below trims it back.
            let bound: BigInt = floor_sqrt(&(max_norm * &self.inv[i][i])) + 1;
            let lo = ceil_int(&(-int_big(bound.clone()) - &rep[i]));
            let hi = floor_int(&(int_big(bound) - &rep[i]));
            ranges.push((lo, hi));
        }
        let mut out = Vec::new();
        let mut point = vec![Rat::zero(); self.rank];
        self.enumerate_box(rep, &ranges, 0, &mut point, max_norm, &mut out);
        out.sort_by(|a, b| crate::rat::lex_cmp(a, b));
        out
    }

    fn enumerate_box(
        &self,
        rep: &[Rat],
        ranges: &[(i64, i64)],
        i: usize,
        point: &mut Vec<Rat>,
        max_norm: &Rat,
        out: &mut Vec<Vec<Rat>>,
    ) {
        if i == self.rank {
            if self.norm(point) <= *max_norm {
                out.push(point.clone());
            }
            return;
        }
        let (lo, hi) = ranges[i];
        for x in lo..=hi {
            point[i] = &rep[i] + int(x);
            self.enumerate_box(rep, ranges, i + 1, point, max_norm, out);
        }
    }
}

fn int_big(b: BigInt) -> Rat {
    Rat::from_integer(b)
}

/// floor(sqrt(x)) for x >= 0: integer square root of floor(x).
fn floor_sqrt(x: &Rat) -> BigInt {
    assert!(!x.is_negative());
    x.floor().to_integer().sqrt()
}

fn floor_int(x: &Rat) -> i64 {
    x.floor().to_integer().to_i64().expect("small coordinate")
}

fn ceil_int(x: &Rat) -> i64 {
    x.ceil().to_integer().to_i64().expect("small coordinate")
}

/// Bimultiplicative 2-cocycle with values in {+1, -1}: the exponent of
/// eps(a, b) is `sum_i (B_ii/2) a_i b_i + sum_{i>j} B_ij a_i b_j` mod 2.
/// This choice satisfies the commutator condition
/// `eps(a,b) eps(b,a) = (-1)^{(a,b)}` and fixes the diagonal to
/// `eps(a,a) = (-1)^{(a,a)/2}`, which is exactly what makes `e_a` unitary
/// with adjoint `(-1)^{(a,a)/2} e_{-a}`.
#[derive(Clone, Debug)]
pub struct Cocycle {
    gram: Vec<Vec<i64>>,
}

impl Cocycle {
    pub fn new(lattice: &EvenLattice) -> Self {
        Cocycle {
            gram: lattice.gram_int().to_vec(),
        }
    }

    pub fn eps(&self, a: &[i64], b: &[i64]) -> i64 {
        let r = self.gram.len();
        assert_eq!(a.len(), r);
        assert_eq!(b.len(), r);
        let mut exponent = 0i64;
        for i in 0..r {
            exponent += (self.gram[i][i] / 2) * a[i] * b[i];
            for j in 0..i {
                exponent += self.gram[i][j] * a[i] * b[j];
            }
        }
        if exponent.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }
}

/// One basis term: a lattice label (coordinates of a point of the coset in
/// the lattice basis) dressed with an oscillator monomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct VLMono {
    pub point: Vec<Rat>,
    pub osc: HeisMonomial,
}

impl VLMono {
    pub fn ground(point: Vec<Rat>) -> Self {
        VLMono {
            point,
            osc: HeisMonomial::unit(),
        }
    }
}

pub type VLVec = LinComb<VLMono, Rat>;

/// The lattice vertex algebra (rep = 0) or one of its coset modules
/// (rep a dual-lattice point, stored as the minimal-norm representative
/// with lexicographically greatest coordinates among the minima).
#[derive(Clone, Debug)]
pub struct LatticeModule {
    lattice: EvenLattice,
    cocycle: Cocycle,
    rep: Vec<Rat>,
}

impl LatticeModule {
    pub fn voa(lattice: EvenLattice) -> Self {
        let rep = vec![Rat::zero(); lattice.rank()];
        let cocycle = Cocycle::new(&lattice);
        LatticeModule {
            lattice,
            cocycle,
            rep,
        }
    }

    /// Coset module for `rep + L`; `rep` must pair integrally with the
    /// lattice (dual-lattice condition). The stored representative is
    /// canonicalized to minimal norm.
    pub fn module(lattice: EvenLattice, rep: Vec<Rat>) -> Result<Self, LatticeError> {
        assert_eq!(rep.len(), lattice.rank());
        for i in 0..lattice.rank() {
            let mut p = Rat::zero();
            for j in 0..lattice.rank() {
                p += int(lattice.gram_int()[i][j]) * &rep[j];
            }
            if !crate::rat::is_integer(&p) {
                return Err(LatticeError::RepNotDual);
            }
        }
        let canonical = {
            let bound = lattice.norm(&rep);
            let candidates = lattice.coset_points_up_to(&rep, &bound);
            let min_norm = candidates
                .iter()
                .map(|p| lattice.norm(p))
                .min()
                .expect("the coset is nonempty in its own ball");
            candidates
                .into_iter()
                .filter(|p| lattice.norm(p) == min_norm)
                .max_by(|a, b| crate::rat::lex_cmp(a, b))
                .expect("a minimal-norm representative exists")
        };
        let cocycle = Cocycle::new(&lattice);
        Ok(LatticeModule {
            lattice,
            cocycle,
            rep: canonical,
        })
    }

    pub fn lattice(&self) -> &EvenLattice {
        &self.lattice
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn rep(&self) -> &[Rat] {
        &self.rep
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn ground(&self) -> VLVec {
        LinComb::single(VLMono::ground(self.rep.clone()), Rat::one())
    }

    pub fn weight_of(&self, mono: &VLMono) -> Rat {
        int(mono.osc.degree() as i64) + self.lattice.norm(&mono.point) / int(2)
    }

    /// Apply the oscillator `b_gen(n)` of a lattice basis vector.
    pub fn apply_basis_mode(&self, gen: usize, n: i64, v: &VLVec) -> VLVec {
        assert!(gen < self.rank());
        let mut out = VLVec::zero();
        for (mono, coeff) in v.iter() {
            if n < 0 {
                let mut factors = mono.osc.factors().to_vec();
                factors.push((gen, (-n) as u64));
                out.add_term(
                    VLMono {
                        point: mono.point.clone(),
                        osc: HeisMonomial::new(factors),
                    },
                    coeff.clone(),
                );
            } else if n == 0 {
                let mut eigen = Rat::zero();
                for j in 0..self.rank() {
                    eigen += int(self.lattice.gram_int()[gen][j]) * &mono.point[j];
                }
                if !eigen.is_zero() {
                    out.add_term(mono.clone(), coeff * eigen);
                }
            } else {
                let d = n as u64;
                for (pos, &(g, depth)) in mono.osc.factors().iter().enumerate() {
                    if depth != d {
                        continue;
                    }
                    let bracket = int(n) * int(self.lattice.gram_int()[gen][g]);
                    if bracket.is_zero() {
                        continue;
                    }
                    let mut factors = mono.osc.factors().to_vec();
                    factors.remove(pos);
                    out.add_term(
                        VLMono {
                            point: mono.point.clone(),
                            osc: HeisMonomial::new(factors),
                        },
                        coeff * bracket,
                    );
                }
            }
        }
        out
    }

    /// Apply `mu(n)` for a rational direction mu in lattice coordinates.
    pub fn apply_dir_mode(&self, mu: &[Rat], n: i64, v: &VLVec) -> VLVec {
        let mut out = VLVec::zero();
        for (gen, c) in mu.iter().enumerate() {
            if !c.is_zero() {
                out.add_scaled(&self.apply_basis_mode(gen, n, v), c);
            }
        }
        out
    }

    /// The twisted group-algebra operator `e_alpha` for alpha in L:
    /// multiplies each term by eps(alpha, point - rep) and shifts the
    /// lattice label.
    pub fn e_alpha(&self, alpha: &[i64], v: &VLVec) -> VLVec {
        assert_eq!(alpha.len(), self.rank());
        v.transform(|mono, coeff| {
            let rel = self.point_rel_int(&mono.point);
            let sign = self.cocycle.eps(alpha, &rel);
            let point: Vec<Rat> = mono
                .point
                .iter()
                .zip(alpha.iter())
                .map(|(p, &a)| p + int(a))
                .collect();
            (
                VLMono {
                    point,
                    osc: mono.osc.clone(),
                },
                coeff * int(sign),
            )
        })
    }

    /// Integer coordinates of `point - rep` (every module label differs
    /// from the representative by a lattice vector).
    pub fn point_rel_int(&self, point: &[Rat]) -> Vec<i64> {
        point
            .iter()
            .zip(self.rep.iter())
            .map(|(p, r)| {
                let d = p - r;
                assert!(
                    crate::rat::is_integer(&d),
                    "module labels differ from the representative by lattice vectors"
                );
                crate::rat::as_i64(&d).expect("small coordinate")
            })
            .collect()
    }

    /// The mode-negating involution: k oscillators contribute (-1)^k and
    /// the lattice label is negated.
    pub fn theta(&self, v: &VLVec) -> VLVec {
        v.transform(|mono, coeff| {
            let sign = if mono.osc.len() % 2 == 0 {
                Rat::one()
            } else {
                -Rat::one()
            };
            (
                VLMono {
                    point: mono.point.iter().map(|p| -p).collect(),
                    osc: mono.osc.clone(),
                },
                coeff * sign,
            )
        })
    }

    /// Contravariant form: oscillator adjoints `b_i(-n)* = b_i(n)`,
    /// distinct lattice labels orthogonal, unit ground norms.
    pub fn pair(&self, u: &VLVec, w: &VLVec) -> Rat {
        let mut total = Rat::zero();
        for (mono, coeff) in u.iter() {
            let reduced = self.pair_factors(mono.osc.factors(), w);
            total += coeff * &reduced.coeff(&VLMono::ground(mono.point.clone()));
        }
        total
    }

    fn pair_factors(&self, factors: &[(usize, u64)], w: &VLVec) -> VLVec {
        match factors.split_first() {
            None => w.clone(),
            Some((&(gen, d), rest)) => {
                self.pair_factors(rest, &self.apply_basis_mode(gen, d as i64, w))
            }
        }
    }

    /// Ordered basis of the weight-`weight` piece: lattice points sorted
    /// lexicographically, oscillator monomials of the complementary degree
    /// in composition-major order.
    pub fn basis(&self, weight: &Rat) -> Vec<VLMono> {
        let mut out = Vec::new();
        if weight.is_negative() {
            return out;
        }
        let max_norm = int(2) * weight;
        for point in self.lattice.coset_points_up_to(&self.rep, &max_norm) {
            let deg = weight - self.lattice.norm(&point) / int(2);
            if !crate::rat::is_integer(&deg) {
                continue;
            }
            let deg = crate::rat::as_i64(&deg).expect("small degree");
            if deg < 0 {
                continue;
            }
            for osc in monomial_basis(self.rank(), deg as u64) {
                out.push(VLMono {
                    point: point.clone(),
                    osc,
                });
            }
        }
        out
    }

    pub fn gram(&self, weight: &Rat) -> SymMatrix {
        let basis = self.basis(weight);
        let vecs: Vec<VLVec> = basis
            .iter()
            .map(|m| LinComb::single(m.clone(), Rat::one()))
            .collect();
        SymMatrix::from_pairing(basis.len(), |i, j| self.pair(&vecs[i], &vecs[j]))
    }

    /// All weights <= max that carry at least one basis vector.
    pub fn weights_up_to(&self, max: &Rat) -> Vec<Rat> {
        let mut set: BTreeSet<Rat> = BTreeSet::new();
        let max_norm = int(2) * max;
        for point in self.lattice.coset_points_up_to(&self.rep, &max_norm) {
            let mut w = self.lattice.norm(&point) / int(2);
            while w <= *max {
                set.insert(w.clone());
                w += Rat::one();
            }
        }
        set.into_iter().collect()
    }

    /// Exact definiteness of every nonempty graded piece of weight <= max.
    pub fn unitarity_scan(&self, max_weight: &Rat) -> ScanOutcome {
        let levels = self
            .weights_up_to(max_weight)
            .into_iter()
            .map(|w| {
                let g = self.gram(&w);
                LevelRecord {
                    level: w,
                    dim: g.n(),
                    det: g.det(),
                    report: psd_check(&g),
                }
            })
            .collect();
        ScanOutcome { levels }
    }

    /// Virasoro mode of the lattice conformal vector:
    /// `L(n) = 1/2 sum_{a,b} (B^-1)_ab sum_{j in Z} :b_a(j) b_b(n-j):`.
    pub fn l_mode(&self, n: i64, v: &VLVec) -> VLVec {
        let g = v.iter().map(|(m, _)| m.osc.degree()).max().unwrap_or(0) as i64;
        let mut js: BTreeSet<i64> = BTreeSet::new();
        js.insert(0);
        js.insert(n);
        for m in 1..=g {
            js.insert(m);
            js.insert(n - m);
        }
        if n <= -2 {
            for j in (n + 1)..=(-1) {
                js.insert(j);
            }
        }
        if n >= 2 {
            for j in 1..=(n - 1) {
                js.insert(j);
            }
        }
        let mut out = VLVec::zero();
        for a in 0..self.rank() {
            for b in 0..self.rank() {
                let c = self.lattice.inv_entry(a, b).clone();
                if c.is_zero() {
                    continue;
                }
                for &j in js.iter() {
                    // :b_a(j) b_b(n-j): with the annihilation side first.
                    let (first_gen, first_mode, second_gen, second_mode) = if j >= n - j {
                        (a, j, b, n - j)
                    } else {
                        (b, n - j, a, j)
                    };
                    let term = self.apply_basis_mode(
                        second_gen,
                        second_mode,
                        &self.apply_basis_mode(first_gen, first_mode, v),
                    );
                    out.add_scaled(&term, &c);
                }
            }
        }
        out.scale(&rat(1, 2))
    }

    /// The quadratic conformal vector in lattice coordinates.
    pub fn conformal_vector(&self) -> VLVec {
        let mut out = VLVec::zero();
        for a in 0..self.rank() {
            for b in 0..self.rank() {
                let c = self.lattice.inv_entry(a, b) / int(2);
                if c.is_zero() {
                    continue;
                }
                let osc = HeisMonomial::new(vec![(a, 1), (b, 1)]);
                out.add_term(
                    VLMono {
                        point: self.rep.clone(),
                        osc,
                    },
                    c,
                );
            }
        }
        out
    }
}
