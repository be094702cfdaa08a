//! Enumeration of integer partitions and compositions.
//!
//! Graded bases of the modules in this crate are indexed by partitions
//! (mode multisets of a single oscillator or Virasoro generator) or by
//! tuples of partitions (several oscillators). The orders fixed here are
//! load-bearing: basis vectors, Gram rows, and Kronecker blocks must all
//! agree on them.

use alloc::vec;
use alloc::vec::Vec;

/// All partitions of `n` into parts `>= min_part`, each written in
/// non-increasing order. The list itself is in descending lexicographic
/// order, so `[n]` comes first and the all-`min_part` partition last.
pub fn partitions_desc(n: u64, min_part: u64) -> Vec<Vec<u64>> {
    assert!(min_part >= 1, "partition parts must be positive");
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    partitions_rec(n, n, min_part, &mut prefix, &mut out);
    out
}

fn partitions_rec(
    remaining: u64,
    max_part: u64,
    min_part: u64,
    prefix: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) {
    if remaining == 0 {
        out.push(prefix.clone());
        return;
    }
    let hi = remaining.min(max_part);
    if hi < min_part {
        return;
    }
    let mut part = hi;
    loop {
        prefix.push(part);
        partitions_rec(remaining - part, part, min_part, prefix, out);
        prefix.pop();
        if part == min_part {
            break;
        }
        part -= 1;
    }
}

/// All partitions of `n` into odd parts, non-increasing, descending lex.
/// Used for twisted sectors where modes live in `1/2 + Z` (a mode `-j/2`
/// with odd `j` contributes `j` to the doubled degree).
pub fn partitions_desc_odd(n: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    partitions_odd_rec(n, n, &mut prefix, &mut out);
    out
}

fn partitions_odd_rec(remaining: u64, max_part: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if remaining == 0 {
        out.push(prefix.clone());
        return;
    }
    let hi = remaining.min(max_part);
    if hi == 0 {
        return;
    }
    let mut part = if hi % 2 == 1 { hi } else { hi - 1 };
    loop {
        prefix.push(part);
        partitions_odd_rec(remaining - part, part, prefix, out);
        prefix.pop();
        if part == 1 {
            break;
        }
        part -= 2;
    }
}

/// All ways to write `n` as an ordered tuple of `parts` non-negative
/// integers. The first coordinate varies slowest and runs from `n` down
/// to `0`, matching the nesting order used when a multi-oscillator basis
/// is assembled factor by factor.
pub fn compositions_desc(n: u64, parts: usize) -> Vec<Vec<u64>> {
    if parts == 0 {
        return if n == 0 { vec![vec![]] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(parts);
    compositions_rec(n, parts, &mut prefix, &mut out);
    out
}

fn compositions_rec(remaining: u64, parts: usize, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if parts == 1 {
        prefix.push(remaining);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    let mut first = remaining;
    loop {
        prefix.push(first);
        compositions_rec(remaining - first, parts - 1, prefix, out);
        prefix.pop();
        if first == 0 {
            break;
        }
        first -= 1;
    }
}

/// Number of partitions of `n` with parts `>= min_part` (for size checks).
pub fn partition_count(n: u64, min_part: u64) -> u64 {
    partitions_desc(n, min_part).len() as u64
}
