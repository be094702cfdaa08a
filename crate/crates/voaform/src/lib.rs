//! Exact-arithmetic graded bases and contravariant Hermitian forms for
//! modules over infinite-dimensional Lie algebras and lattice vertex
//! operator algebras.
//!
//! Everything is computed over arbitrary-precision rationals: Gram
//! matrices of graded pieces, their determinants, positive-(semi)definite
//! verdicts with exact negative witnesses, and coefficientwise checks of
//! operator identities on truncated formal series. No floating point is
//! used anywhere; a verdict of "determinant exactly zero" is meaningful.
//!
//! The crate is `no_std` (with `alloc`) so the algebraic core can be
//! embedded anywhere; IO, file formats and the command-line driver live in
//! the companion `voaform-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod affine;
pub mod combinators;
pub mod enumerate;
pub mod gauss;
pub mod heisenberg;
pub mod lattice;
pub mod virasoro;
pub mod lincomb;
pub mod matrix;
pub mod rat;
pub mod scan;
pub mod series;

pub use gauss::GaussRat;
pub use lincomb::LinComb;
pub use matrix::{kron, psd_check, PsdReport, SymMatrix, Verdict};
pub use rat::{int, rat, Rat};
pub use scan::{LevelRecord, ScanOutcome};
