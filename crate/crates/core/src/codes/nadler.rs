//! The `[12, 5]` Nadler code in two presentations: the explicit 32-word list
//! and the generator function on five information bits.

use std::collections::HashMap;

use super::{gather, SystematicCode};
use crate::gf2::BitVector;

/// The 32 codewords, one per row, written as four triples.
pub const NADLER_TABLE: [&str; 32] = [
    "011 100 100 100",
    "101 010 010 010",
    "110 001 001 001",
    "100 011 100 100",
    "010 101 010 010",
    "001 110 001 001",
    "100 100 011 100",
    "010 010 101 010",
    "001 001 110 001",
    "100 100 100 011",
    "010 010 010 101",
    "001 001 001 110",
    "111 010 100 001",
    "111 001 010 100",
    "111 100 001 010",
    "010 111 001 100",
    "001 111 100 010",
    "100 111 010 001",
    "100 001 111 010",
    "010 100 111 001",
    "001 010 111 100",
    "001 100 010 111",
    "100 010 001 111",
    "010 001 100 111",
    "011 011 011 011",
    "101 101 101 101",
    "110 110 110 110",
    "000 111 111 111",
    "111 000 111 111",
    "111 111 000 111",
    "111 111 111 000",
    "000 000 000 000",
];

/// Information positions of the table presentation (0-based; 1, 2, 4, 7, 10
/// in 1-based terms).
pub const NADLER_INFO_POSITIONS: [usize; 5] = [0, 1, 3, 6, 9];

/// Coordinate `j` of the generator-function presentation is coordinate
/// `NADLER_SIGMA_TO_TABLE[j]` of the table presentation (0-based).
pub const NADLER_SIGMA_TO_TABLE: [usize; 12] = [0, 1, 3, 6, 9, 4, 7, 10, 11, 8, 5, 2];

/// The Nadler code from its codeword table, systematic at positions
/// 1, 2, 4, 7, 10.
pub fn nadler_code() -> SystematicCode {
    let words: Vec<BitVector> = NADLER_TABLE
        .iter()
        .map(|row| row.replace(' ', "").parse().expect("table rows are bit strings"))
        .collect();
    SystematicCode::from_codewords(12, &words, NADLER_INFO_POSITIONS.to_vec())
        .expect("the table is systematic at the listed positions")
}

/// Generator function of the Nadler code on information bits `x1..x5`.
///
/// `σ11`'s linear part is `x2 + x4 + x5`; with `x1` in place of `x2` the
/// resulting code has minimum distance 4 and is not equivalent to the table.
pub fn nadler_sigma(x: [bool; 5]) -> [bool; 7] {
    let [x1, x2, x3, x4, x5] = x;
    [
        x1 ^ x2 ^ x3 ^ ((x1 ^ x5) & (x3 ^ x4)),
        x1 ^ x2 ^ x4 ^ ((x1 ^ x3) & (x4 ^ x5)),
        x1 ^ x2 ^ x5 ^ ((x1 ^ x4) & (x3 ^ x5)),
        x2 ^ x3 ^ x4 ^ (x1 & x4) ^ (x4 & x5) ^ (x5 & x1),
        x2 ^ x3 ^ x5 ^ (x1 & x3) ^ (x3 & x4) ^ (x4 & x1),
        x2 ^ x4 ^ x5 ^ (x1 & x3) ^ (x3 & x5) ^ (x5 & x1),
        x1 ^ x2 ^ x3 ^ x4 ^ x5 ^ (x3 & x4) ^ (x4 & x5) ^ (x5 & x3),
    ]
}

/// The Nadler code from its generator function, systematic at positions
/// 1..5.
pub fn nadler_code_from_sigma() -> SystematicCode {
    let table = (0u64..32)
        .map(|a| {
            let x: [bool; 5] = std::array::from_fn(|i| (a >> (4 - i)) & 1 == 1);
            BitVector::from_bits(nadler_sigma(x))
        })
        .collect();
    SystematicCode::from_sigma_table(12, (0..5).collect(), table)
        .expect("five information positions and 32 table entries")
}

/// Searches for a coordinate permutation `p` with
/// `{ (x_{p^-1(0)}, …) : x ∈ to } = from` in the sense that coordinate `j`
/// of every word of `from` equals coordinate `p[j]` of a word of `to`.
///
/// Backtracking assigns one coordinate at a time and prunes whenever the
/// multisets of partial projections differ. The first permutation in
/// lexicographic order is returned.
pub fn find_coordinate_permutation(n: usize, from: &[u64], to: &[u64]) -> Option<Vec<usize>> {
    if from.len() != to.len() {
        return None;
    }
    let mut assign = Vec::with_capacity(n);
    let mut used = vec![false; n];
    if search(n, from, to, &mut assign, &mut used) {
        Some(assign)
    } else {
        None
    }
}

fn projection_counts(n: usize, words: &[u64], positions: &[usize]) -> HashMap<u64, usize> {
    let mut m = HashMap::new();
    for &w in words {
        *m.entry(gather(w, n, positions)).or_insert(0) += 1;
    }
    m
}

fn search(n: usize, from: &[u64], to: &[u64], assign: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let j = assign.len();
    if j == n {
        return true;
    }
    let prefix: Vec<usize> = (0..=j).collect();
    let want = projection_counts(n, from, &prefix);
    for c in 0..n {
        if used[c] {
            continue;
        }
        assign.push(c);
        if projection_counts(n, to, assign) == want {
            used[c] = true;
            if search(n, from, to, assign, used) {
                return true;
            }
            used[c] = false;
        }
        assign.pop();
    }
    false
}
