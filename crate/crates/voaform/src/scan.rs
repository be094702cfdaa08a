//! Level-by-level scan results shared by every module family.
//!
//! A unitarity scan walks the graded pieces of a module up to a cutoff,
//! computes each piece's Gram matrix of the contravariant form, and records
//! the exact determinant and definiteness verdict. One indefinite level
//! refutes unitarity of the whole module; the witness vector is kept so the
//! refutation can be checked independently.

use alloc::vec::Vec;

use crate::matrix::{PsdReport, Verdict};
use crate::rat::Rat;

/// Exact facts about one graded level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelRecord {
    /// Degree above the bottom of the module (half-integral in twisted
    /// sectors, hence a rational).
    pub level: Rat,
    /// Dimension of the graded piece.
    pub dim: usize,
    /// Exact Gram determinant.
    pub det: Rat,
    /// Definiteness verdict with radical dimension / negative witness.
    pub report: PsdReport,
}

/// All levels visited by a scan, in increasing order of degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanOutcome {
    pub levels: Vec<LevelRecord>,
}

impl ScanOutcome {
    /// First level whose Gram matrix is indefinite, if any.
    pub fn refuted(&self) -> Option<&LevelRecord> {
        self.levels
            .iter()
            .find(|r| r.report.verdict == Verdict::Indefinite)
    }

    /// True when every level is positive-definite.
    pub fn all_definite(&self) -> bool {
        self.levels
            .iter()
            .all(|r| r.report.verdict == Verdict::PositiveDefinite)
    }

    /// Total radical dimension across the scanned window.
    pub fn radical_total(&self) -> usize {
        self.levels.iter().map(|r| r.report.radical_dim).sum()
    }

    /// True when no level is indefinite (definite or semidefinite only).
    pub fn consistent_with_unitarity(&self) -> bool {
        self.refuted().is_none()
    }
}
