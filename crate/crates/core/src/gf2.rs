//! Dense linear algebra over GF(2).
//!
//! Vectors are packed into `u64` words with an explicit length; bits past the
//! length are kept at zero so word-level equality, hashing and popcounts are
//! exact. Matrices are stored as a list of row vectors.
//!
//! Indices in this module are 0-based.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{BitXor, BitXorAssign};
use std::str::FromStr;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn word_count(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            len,
            words: vec![u64::MAX; word_count(len)],
        };
        v.clear_tail();
        v
    }

    /// The `i`-th standard basis vector.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % WORD == 0 {
                words.push(0);
            }
            if b {
                words[len / WORD] |= 1 << (len % WORD);
            }
            len += 1;
        }
        Self { len, words }
    }

    /// Builds a vector of length `len <= 64` from an integer whose most
    /// significant of the low `len` bits is coordinate 0.
    ///
    /// With this convention numeric order on the integers coincides with
    /// lexicographic order on the vectors.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= WORD, "from_u64 needs len <= 64, got {len}");
        Self::from_bits((0..len).map(|i| (value >> (len - 1 - i)) & 1 == 1))
    }

    /// Inverse of [`BitVector::from_u64`].
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= WORD, "to_u64 needs len <= 64, got {}", self.len);
        self.iter().fold(0u64, |acc, b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1 << (i % WORD);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Hamming distance. Panics on length mismatch.
    pub fn distance(&self, other: &Self) -> usize {
        assert_eq!(self.len, other.len, "distance between vectors of different length");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "dot product of vectors of different length");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| (self.words[i / WORD] >> (i % WORD)) & 1 == 1)
    }

    /// Positions of the nonzero coordinates, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(wi * WORD + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    /// Projection onto the given coordinates, in the order given.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self::from_bits(indices.iter().map(|&i| self.get(i)))
    }

    /// Concatenation `(self, other)`.
    pub fn concat(&self, other: &Self) -> Self {
        Self::from_bits(self.iter().chain(other.iter()))
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl BitXorAssign<&BitVector> for BitVector {
    fn bitxor_assign(&mut self, rhs: &BitVector) {
        assert_eq!(self.len, rhs.len, "xor of vectors of different length");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor<&BitVector> for &BitVector {
    type Output = BitVector;

    fn bitxor(self, rhs: &BitVector) -> BitVector {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl BitXor for BitVector {
    type Output = BitVector;

    fn bitxor(mut self, rhs: BitVector) -> BitVector {
        self ^= &rhs;
        self
    }
}

impl Ord for BitVector {
    /// Shorter vectors first, then lexicographic with `0 < 1` starting at
    /// coordinate 0.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            for (a, b) in self.words.iter().zip(&other.words) {
                match a.reverse_bits().cmp(&b.reverse_bits()) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    /// Parses a contiguous string of `0`/`1` characters.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        s.chars()
            .enumerate()
            .map(|(i, ch)| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::parse(format!(
                    "invalid bit character {other:?} at position {}",
                    i + 1
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitVector::from_bits)
    }
}

/// A dense matrix over GF(2), stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

/// Reduced row echelon form with the pivot column of each nonzero row.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: BitMatrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            rows: (0..n).map(|i| BitVector::unit(n, i)).collect(),
        }
    }

    pub fn from_rows(rows: Vec<BitVector>, cols: usize) -> Result<Self> {
        for r in &rows {
            Error::check_len("matrix row", cols, r.len())?;
        }
        Ok(Self { cols, rows })
    }

    /// Convenience constructor from `0`/`1` strings; all rows must have the
    /// same length.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.parse::<BitVector>())
            .collect::<Result<Vec<_>>>()?;
        let cols = rows.first().map_or(0, BitVector::len);
        Self::from_rows(rows, cols)
    }

    /// Columns given as vectors of length `rows`.
    pub fn from_columns(columns: &[BitVector], rows: usize) -> Result<Self> {
        for c in columns {
            Error::check_len("matrix column", rows, c.len())?;
        }
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for i in c.support() {
                m.rows[i].set(j, true);
            }
        }
        Ok(m)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value)
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> BitVector {
        BitVector::from_bits(self.rows.iter().map(|r| r.get(j)))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVector::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.support() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// `M·xᵀ`: one inner product per row.
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        Error::check_len("vector", self.cols, x.len())?;
        Ok(BitVector::from_bits(self.rows.iter().map(|r| r.dot(x))))
    }

    /// `y·M`: the sum of the rows selected by `y`.
    pub fn vec_mul(&self, y: &BitVector) -> Result<BitVector> {
        Error::check_len("vector", self.nrows(), y.len())?;
        let mut acc = BitVector::zeros(self.cols);
        for i in y.support() {
            acc ^= &self.rows[i];
        }
        Ok(acc)
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        Error::check_len("matrix product inner dimension", self.cols, other.nrows())?;
        let rows = self
            .rows
            .iter()
            .map(|r| other.vec_mul(r))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            cols: other.cols,
            rows,
        })
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        Error::check_len("stacked matrix columns", self.cols, other.cols)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(Self {
            cols: self.cols,
            rows,
        })
    }

    /// Keeps the columns in `keep` (0-based), emitted in ascending order.
    pub fn column_submatrix(&self, keep: &[usize]) -> Result<BitMatrix> {
        let idx = sorted_distinct(keep, self.cols)?;
        let rows = self.rows.iter().map(|r| r.select(&idx)).collect();
        Ok(Self {
            cols: idx.len(),
            rows,
        })
    }

    /// Reduced row echelon form. Columns are scanned left to right and the
    /// first remaining row with a one in the column becomes the pivot row, so
    /// the result is a deterministic function of the input.
    pub fn echelon(&self) -> Echelon {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.cols {
            if next == rows.len() {
                break;
            }
            let Some(p) = (next..rows.len()).find(|&i| rows[i].get(col)) else {
                continue;
            };
            rows.swap(next, p);
            let pivot = rows[next].clone();
            for (i, r) in rows.iter_mut().enumerate() {
                if i != next && r.get(col) {
                    *r ^= &pivot;
                }
            }
            pivots.push(col);
            next += 1;
        }
        Echelon {
            matrix: Self {
                cols: self.cols,
                rows,
            },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        if self.cols <= WORD {
            let mut words: Vec<u64> = self.rows.iter().map(|r| r.words.first().copied().unwrap_or(0)).collect();
            return rank_words(&mut words);
        }
        self.echelon().rank()
    }

    /// Basis of the right kernel `{x : M·xᵀ = 0}`.
    pub fn kernel_basis(&self) -> Vec<BitVector> {
        solve_constrained(self, &BitVector::zeros(self.nrows()), &BTreeMap::new())
            .expect("dimensions agree by construction")
            .kernel_basis
    }

    /// A matrix with i.i.d. uniform entries drawn from `rng`.
    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let rows = (0..rows)
            .map(|_| {
                let mut v = BitVector {
                    len: cols,
                    words: (0..word_count(cols)).map(|_| rng.random::<u64>()).collect(),
                };
                v.clear_tail();
                v
            })
            .collect();
        Self { cols, rows }
    }

    /// Text form: `"rows cols"` then one `0`/`1` string per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.nrows(), self.cols);
        for r in &self.rows {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.nrows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

impl FromStr for BitMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::parse("matrix text is empty"))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::parse(format!("bad matrix dimension {t:?}")))
            })
            .collect::<Result<_>>()?;
        let [nrows, ncols] = dims[..] else {
            return Err(Error::parse(format!(
                "matrix header must be \"rows cols\", got {header:?}"
            )));
        };
        let rows = lines
            .by_ref()
            .take(nrows)
            .map(str::parse::<BitVector>)
            .collect::<Result<Vec<_>>>()?;
        if rows.len() != nrows {
            return Err(Error::parse(format!(
                "matrix declares {nrows} rows but has {}",
                rows.len()
            )));
        }
        if lines.next().is_some() {
            return Err(Error::parse("trailing lines after matrix rows"));
        }
        BitMatrix::from_rows(rows, ncols)
    }
}

/// Seeded uniform random matrix; the same `(rows, cols, seed)` always gives
/// the same matrix.
pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> BitMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    BitMatrix::random(rows, cols, &mut rng)
}

/// Rank of a matrix whose rows are packed into single words. The slice is
/// used as scratch space.
pub fn rank_words(rows: &mut [u64]) -> usize {
    let mut rank = 0;
    for i in 0..rows.len() {
        let pivot = rows[i];
        if pivot == 0 {
            continue;
        }
        rank += 1;
        let low = pivot & pivot.wrapping_neg();
        for r in rows[i + 1..].iter_mut() {
            if *r & low != 0 {
                *r ^= pivot;
            }
        }
    }
    rank
}

/// Incrementally maintained basis of a subspace of GF(2)^64.
#[derive(Clone, Debug, Default)]
pub struct WordBasis {
    // Indexed by the position of the leading (lowest) bit.
    slots: Vec<(u32, u64)>,
}

impl WordBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    /// Reduces `v` against the basis.
    pub fn reduce(&self, mut v: u64) -> u64 {
        for &(bit, b) in &self.slots {
            if (v >> bit) & 1 == 1 {
                v ^= b;
            }
        }
        v
    }

    /// Adds `v`; returns `false` if it was already in the span.
    pub fn insert(&mut self, v: u64) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        let bit = v.trailing_zeros();
        for slot in &mut self.slots {
            if (slot.1 >> bit) & 1 == 1 {
                slot.1 ^= v;
            }
        }
        self.slots.push((bit, v));
        true
    }
}

/// The affine solution set of a constrained linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub feasible: bool,
    pub particular: Option<BitVector>,
    pub kernel_basis: Vec<BitVector>,
}

impl AffineSolution {
    pub fn dimension(&self) -> usize {
        self.kernel_basis.len()
    }

    /// Number of solutions, `2^dimension` or 0.
    pub fn solution_count(&self) -> BigUint {
        if self.feasible {
            BigUint::from(1u8) << self.kernel_basis.len()
        } else {
            BigUint::from(0u8)
        }
    }

    /// Lists every solution; refuses if there are more than `2^20`.
    pub fn enumerate(&self) -> Result<Vec<BitVector>> {
        let Some(p) = &self.particular else {
            return Ok(Vec::new());
        };
        let d = self.kernel_basis.len();
        if d > 20 {
            return Err(Error::TooLarge(format!("2^{d} solutions")));
        }
        let mut out = Vec::with_capacity(1 << d);
        let mut cur = p.clone();
        out.push(cur.clone());
        // Gray-code walk through the span.
        for i in 1u64..(1 << d) {
            cur ^= &self.kernel_basis[i.trailing_zeros() as usize];
            out.push(cur.clone());
        }
        Ok(out)
    }
}

/// Solves `A·xᵀ = b` subject to `x_i = fixed[i]` (0-based indices).
///
/// Fixed variables are substituted into the right-hand side and the system
/// in the remaining unknowns is row reduced. Kernel basis vectors are zero on
/// every fixed coordinate.
pub fn solve_constrained(
    a: &BitMatrix,
    b: &BitVector,
    fixed: &BTreeMap<usize, bool>,
) -> Result<AffineSolution> {
    Error::check_len("right-hand side", a.nrows(), b.len())?;
    let n = a.ncols();
    if let Some((&i, _)) = fixed.iter().find(|(&i, _)| i >= n) {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }

    let mut fixed_part = BitVector::zeros(n);
    for (&i, &v) in fixed {
        fixed_part.set(i, v);
    }
    let rhs = b ^ &a.mul_vec(&fixed_part)?;

    let free: Vec<usize> = (0..n).filter(|i| !fixed.contains_key(i)).collect();
    let reduced = a.column_submatrix(&free)?;

    // Row reduce [reduced | rhs] by carrying the rhs bit alongside each row.
    let mut rows: Vec<(BitVector, bool)> = reduced
        .rows
        .into_iter()
        .zip(rhs.iter())
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..free.len() {
        if next == rows.len() {
            break;
        }
        let Some(p) = (next..rows.len()).find(|&i| rows[i].0.get(col)) else {
            continue;
        };
        rows.swap(next, p);
        let (pivot, pb) = rows[next].clone();
        for (i, (r, rb)) in rows.iter_mut().enumerate() {
            if i != next && r.get(col) {
                *r ^= &pivot;
                *rb ^= pb;
            }
        }
        pivots.push(col);
        next += 1;
    }
    let feasible = rows[next..].iter().all(|(_, rb)| !rb);

    let mut is_pivot = vec![false; free.len()];
    for &p in &pivots {
        is_pivot[p] = true;
    }

    let kernel_basis = (0..free.len())
        .filter(|&c| !is_pivot[c])
        .map(|c| {
            let mut v = BitVector::zeros(n);
            v.set(free[c], true);
            for (row, &p) in rows.iter().zip(&pivots) {
                if row.0.get(c) {
                    v.set(free[p], true);
                }
            }
            v
        })
        .collect();

    let particular = feasible.then(|| {
        let mut x = fixed_part.clone();
        for (row, &p) in rows.iter().zip(&pivots) {
            if row.1 {
                x.set(free[p], true);
            }
        }
        x
    });

    Ok(AffineSolution {
        feasible,
        particular,
        kernel_basis,
    })
}

pub(crate) fn sorted_distinct(indices: &[usize], len: usize) -> Result<Vec<usize>> {
    let mut idx = indices.to_vec();
    idx.sort_unstable();
    for w in idx.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicateIndex(w[0]));
        }
    }
    if let Some(&last) = idx.last() {
        if last >= len {
            return Err(Error::IndexOutOfRange { index: last, len });
        }
    }
    Ok(idx)
}
