#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wetpaper::codes::{BinaryCode, LinearCode};
use wetpaper::gf2::{BitMatrix, BitVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random `[n, k]` code (full-rank generator by rejection).
pub fn random_code(n: usize, k: usize, rng: &mut ChaCha8Rng) -> LinearCode {
    loop {
        let g = BitMatrix::random(k, n, rng);
        if g.rank() == k {
            return LinearCode::from_generator(g).unwrap();
        }
    }
}

/// The fixed corpus of small linear codes used by several tests: 24 random
/// codes with `n <= 10` and the named families.
pub fn corpus() -> Vec<LinearCode> {
    let mut r = rng(0xC0DE);
    let mut codes = vec![
        LinearCode::hamming(2).unwrap(),
        LinearCode::hamming(3).unwrap(),
        LinearCode::repetition(5).unwrap(),
        LinearCode::even_weight(6).unwrap(),
        LinearCode::full_space(4),
    ];
    for _ in 0..24 {
        let n = r.random_range(3..=10);
        let k = r.random_range(1..n);
        codes.push(random_code(n, k, &mut r));
    }
    codes
}

pub fn word(x: u64, n: usize) -> BitVector {
    BitVector::from_u64(x, n)
}

/// Every codeword by brute force: all `x` with zero syndrome.
pub fn brute_codewords<C: BinaryCode + ?Sized>(code: &C) -> Vec<u64> {
    let n = code.length();
    (0u64..1 << n)
        .filter(|&x| code.syndrome(&word(x, n)).unwrap().is_zero())
        .collect()
}

/// Dual code by brute force: all `y` orthogonal to every generator row.
pub fn brute_dual_words(code: &LinearCode) -> Vec<u64> {
    let n = code.n();
    let rows: Vec<u64> = code.generator().rows().iter().map(|r| r.to_u64()).collect();
    (0u64..1 << n)
        .filter(|&y| rows.iter().all(|&g| (g & y).count_ones() % 2 == 0))
        .collect()
}

pub fn weight_counts(words: &[u64], n: usize) -> Vec<i128> {
    let mut c = vec![0i128; n + 1];
    for w in words {
        c[w.count_ones() as usize] += 1;
    }
    c
}

/// Minimum distance from `x` to the code by scanning all codewords.
pub fn brute_distance(words: &[u64], x: u64) -> u32 {
    words.iter().map(|&c| (c ^ x).count_ones()).min().unwrap()
}

/// Number of `x` with syndrome `m` agreeing with `c` on `wet`.
pub fn brute_solution_count<C: BinaryCode + ?Sized>(code: &C, c: u64, m: u64, wet: &[usize]) -> u64 {
    let n = code.length();
    let mask = wet.iter().fold(0u64, |acc, &i| acc | 1u64 << (n - 1 - i));
    (0u64..1 << n)
        .filter(|&x| (x ^ c) & mask == 0 && code.syndrome_word(x) == m)
        .count() as u64
}

/// All subsets of `0..n` of size `k`, lexicographic.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    wetpaper::combinatorics::Combinations::new(n, k).collect()
}

/// `d_t` by enumerating `t`-tuples of independent codewords.
pub fn brute_hierarchy(code: &LinearCode) -> Vec<usize> {
    let n = code.n();
    let words: Vec<u64> = brute_codewords(code).into_iter().filter(|&w| w != 0).collect();
    (1..=code.k())
        .map(|t| {
            let mut best = usize::MAX;
            for combo in wetpaper::combinatorics::Combinations::new(words.len(), t) {
                let mut basis: Vec<u64> = combo.iter().map(|&i| words[i]).collect();
                if wetpaper::gf2::rank_words(&mut basis.clone()) < t {
                    continue;
                }
                let support = basis.drain(..).fold(0u64, |a, b| a | b);
                best = best.min(support.count_ones() as usize);
            }
            assert!(best <= n);
            best
        })
        .collect()
}
