//! Exact symmetric matrices over the rationals: positive-(semi)definiteness
//! with certified witnesses, fraction-free determinants, Kronecker products,
//! and linear solves.
//!
//! Everything here is exact. `psd_check` never claims a verdict it cannot
//! certify: an `Indefinite` verdict carries a rational vector `x` together
//! with the (negative) value `x^T G x`, recomputed against the original
//! matrix before being reported.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rat::Rat;

/// A square rational matrix validated to be symmetric on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymMatrix {
    n: usize,
    rows: Vec<Vec<Rat>>,
}

impl SymMatrix {
    /// Wrap a full square matrix, checking symmetry exactly.
    pub fn new(rows: Vec<Vec<Rat>>) -> Self {
        let n = rows.len();
        for row in rows.iter() {
            assert_eq!(row.len(), n, "matrix must be square");
        }
        for i in 0..n {
            for j in (i + 1)..n {
                assert_eq!(rows[i][j], rows[j][i], "matrix must be symmetric");
            }
        }
        SymMatrix { n, rows }
    }

    /// Build from a pairing on index pairs; the full matrix is computed
    /// and the symmetry of the pairing is checked as a side effect.
    pub fn from_pairing<F: FnMut(usize, usize) -> Rat>(n: usize, mut pair: F) -> Self {
        let rows: Vec<Vec<Rat>> = (0..n).map(|i| (0..n).map(|j| pair(i, j)).collect()).collect();
        SymMatrix::new(rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &Vec<Vec<Rat>> {
        &self.rows
    }

    /// The value `x^T G x`, exactly.
    pub fn quadratic_form(&self, x: &[Rat]) -> Rat {
        assert_eq!(x.len(), self.n);
        let mut total = Rat::zero();
        for i in 0..self.n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.n {
                if x[j].is_zero() {
                    continue;
                }
                total += &x[i] * &self.rows[i][j] * &x[j];
            }
        }
        total
    }

    /// Matrix-vector product `G x`.
    pub fn mul_vec(&self, x: &[Rat]) -> Vec<Rat> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut s = Rat::zero();
                for j in 0..self.n {
                    s += &self.rows[i][j] * &x[j];
                }
                s
            })
            .collect()
    }

    /// Exact determinant via fraction-free elimination.
    pub fn det(&self) -> Rat {
        det_bareiss(&self.rows)
    }

    /// Leading principal submatrix of size `k`.
    pub fn leading_minor(&self, k: usize) -> SymMatrix {
        assert!(k <= self.n);
        let rows = (0..k).map(|i| self.rows[i][..k].to_vec()).collect();
        SymMatrix { n: k, rows }
    }
}

/// Outcome of the exact definiteness test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    PositiveDefinite,
    PositiveSemidefinite,
    Indefinite,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::PositiveDefinite => "positive-definite",
            Verdict::PositiveSemidefinite => "positive-semidefinite",
            Verdict::Indefinite => "indefinite",
        }
    }
}

/// Certified report: on `Indefinite`, `witness` holds a rational vector `x`
/// and the exact negative value `x^T G x`; otherwise `radical_dim` counts
/// independent null directions found (zero iff positive-definite).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsdReport {
    pub verdict: Verdict,
    pub radical_dim: usize,
    pub witness: Option<(Vec<Rat>, Rat)>,
}

/// Decide whether the symmetric matrix is positive-definite,
/// positive-semidefinite, or indefinite, exactly.
///
/// Symmetric Gaussian elimination without pivot search: a congruence
/// `H = E G E^T` is maintained, so row `i` of `E` is the vector whose
/// `G`-square is the current pivot `H[i][i]`. A negative pivot, or a zero
/// pivot with a nonzero residual row, immediately yields a vector with
/// negative `G`-square; a zero pivot with a zero residual row is a radical
/// direction.
pub fn psd_check(g: &SymMatrix) -> PsdReport {
    let n = g.n();
    let mut h: Vec<Vec<Rat>> = g.rows.clone();
    // E starts as the identity; H = E G E^T throughout.
    let mut e: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    let mut radical_dim = 0usize;

    for i in 0..n {
        // Entries left of the pivot were annihilated by earlier steps.
        debug_assert!((0..i).all(|j| h[i][j].is_zero()));
        let pivot = h[i][i].clone();
        if pivot.is_positive() {
            // Zero out column i below the pivot by congruence.
            let factors: Vec<(usize, Rat)> = ((i + 1)..n)
                .filter(|&r| !h[r][i].is_zero())
                .map(|r| (r, &h[r][i] / &pivot))
                .collect();
            for (r, f) in factors.iter() {
                for c in 0..n {
                    let d = f * &h[i][c];
                    h[*r][c] -= d;
                    let d = f * &e[i][c];
                    e[*r][c] -= d;
                }
            }
            for (r, f) in factors.iter() {
                for s in 0..n {
                    let d = f * &h[s][i];
                    h[s][*r] -= d;
                }
            }
            continue;
        }
        if pivot.is_zero() {
            if let Some(j) = ((i + 1)..n).find(|&j| !h[i][j].is_zero()) {
                // 2x2 block [[0, a], [a, b]] is indefinite: with
                // t = -(b+1)/(2a) the vector t*e_i + e_j has square -1.
                let a = h[i][j].clone();
                let b = h[j][j].clone();
                let t = -(&b + Rat::one()) / (Rat::from_integer(2.into()) * &a);
                let x: Vec<Rat> = (0..n).map(|c| &t * &e[i][c] + &e[j][c]).collect();
                let value = g.quadratic_form(&x);
                debug_assert_eq!(value, -Rat::one());
                return PsdReport {
                    verdict: Verdict::Indefinite,
                    radical_dim: 0,
                    witness: Some((x, value)),
                };
            }
            // Zero residual row: a genuine null direction of G.
            radical_dim += 1;
            continue;
        }
        // Negative pivot: row i of E already has negative square.
        let x = e[i].clone();
        let value = g.quadratic_form(&x);
        debug_assert_eq!(value, pivot);
        return PsdReport {
            verdict: Verdict::Indefinite,
            radical_dim: 0,
            witness: Some((x, value)),
        };
    }

    PsdReport {
        verdict: if radical_dim == 0 {
            Verdict::PositiveDefinite
        } else {
            Verdict::PositiveSemidefinite
        },
        radical_dim,
        witness: None,
    }
}

/// Exact determinant of a square rational matrix: denominators are cleared
/// and the integer matrix is reduced by Bareiss' fraction-free algorithm
/// (with row swaps, so zero pivots are handled).
pub fn det_bareiss(rows: &[Vec<Rat>]) -> Rat {
    let n = rows.len();
    if n == 0 {
        return Rat::one();
    }
    for row in rows.iter() {
        assert_eq!(row.len(), n, "determinant needs a square matrix");
    }
    // Common denominator.
    let mut l = BigInt::one();
    for row in rows.iter() {
        for x in row.iter() {
            l = l.lcm(x.denom());
        }
    }
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let scaled = x * Rat::from_integer(l.clone());
                    debug_assert!(scaled.is_integer());
                    scaled.to_integer()
                })
                .collect()
        })
        .collect();

    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..(n - 1) {
        if m[k][k].is_zero() {
            match ((k + 1)..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Rat::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                debug_assert!((&num % &prev).is_zero());
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det_scaled = sign * m[n - 1][n - 1].clone();
    let mut denom = BigInt::one();
    for _ in 0..n {
        denom *= &l;
    }
    Rat::new(det_scaled, denom)
}

/// Kronecker product of symmetric matrices (symmetric again).
pub fn kron(a: &SymMatrix, b: &SymMatrix) -> SymMatrix {
    let (na, nb) = (a.n(), b.n());
    let n = na * nb;
    let mut rows = vec![vec![Rat::zero(); n]; n];
    for i in 0..na {
        for j in 0..na {
            if a.at(i, j).is_zero() {
                continue;
            }
            for k in 0..nb {
                for l in 0..nb {
                    rows[i * nb + k][j * nb + l] = a.at(i, j) * b.at(k, l);
                }
            }
        }
    }
    SymMatrix { n, rows }
}

/// Solve `A x = b` exactly for square nonsingular `A`; `None` if singular.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b.iter())
        .map(|(row, rhs)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for k in 0..n {
        let pivot_row = (k..n).find(|&r| !m[r][k].is_zero())?;
        m.swap(k, pivot_row);
        let inv = Rat::one() / &m[k][k];
        for c in k..=n {
            m[k][c] = &m[k][c] * &inv;
        }
        for r in 0..n {
            if r == k || m[r][k].is_zero() {
                continue;
            }
            let f = m[r][k].clone();
            for c in k..=n {
                let d = &f * &m[k][c];
                m[r][c] -= d;
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}
